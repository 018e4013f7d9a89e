//! Classification of a unipotent group element into its class label.
//!
//! The element is sent through the Cayley transform into the Lie algebra
//! over the residue field. Kernel dimensions of the powers give the
//! partition; for each form-carrying part the complement space inside
//! ker X^i is lifted deterministically, and the sign-adjusted Gram matrix
//! of the twisted form decides the discriminant bit.

use classical_groups::fqlin;
use classical_groups::ring::is_square_mod;
use classical_groups::{cayley, is_unipotent, GroupDescriptor, Mat, Ring};
use thiserror::Error;

use crate::label::{form_carrying, UnipotentClassLabel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("classification runs over the residue field, got depth {0}")]
    ResidueDepth(u32),
    #[error("element is not in the group")]
    NotInGroup,
    #[error("element is not unipotent")]
    NotUnipotent,
}

/// Label plus the Gram matrices that produced the discriminant bits,
/// keyed by part size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyDetail {
    pub label: UnipotentClassLabel,
    pub grams: Vec<(u32, Vec<Vec<u64>>)>,
}

pub fn classify(
    desc: &GroupDescriptor,
    u: &Mat,
    ring: &Ring,
) -> Result<UnipotentClassLabel, ClassifyError> {
    classify_detailed(desc, u, ring).map(|d| d.label)
}

pub fn classify_detailed(
    desc: &GroupDescriptor,
    u: &Mat,
    ring: &Ring,
) -> Result<ClassifyDetail, ClassifyError> {
    if ring.depth() != 1 {
        return Err(ClassifyError::ResidueDepth(ring.depth()));
    }
    let r = desc.mat_size();
    if u.size() != r || !desc.contains(u, ring) {
        return Err(ClassifyError::NotInGroup);
    }
    if !is_unipotent(u, ring) {
        return Err(ClassifyError::NotUnipotent);
    }
    let q = ring.prime();
    // 1 + u = 2 + nilpotent is invertible since p is odd.
    let x = cayley(u, ring).expect("unipotent Cayley transform");
    let xg = residue_grid(&x, ring);
    let jg: Vec<Vec<u64>> = desc
        .j_rows()
        .iter()
        .map(|row| row.iter().map(|&e| e.rem_euclid(q as i64) as u64).collect())
        .collect();
    assert!(in_lie_algebra(&xg, &jg, q), "Cayley image must satisfy tXJ + JX = 0");

    // Powers X^0 .. X^{r+1} and their kernels.
    let mut pows: Vec<Vec<Vec<u64>>> = vec![identity_grid(r)];
    for _ in 0..=r {
        pows.push(fqlin::mat_mul(pows.last().unwrap(), &xg, q));
    }
    let kernels: Vec<Vec<Vec<u64>>> =
        pows.iter().map(|p| fqlin::kernel_basis(p, q)).collect();
    let kdim: Vec<i64> = kernels.iter().map(|k| k.len() as i64).collect();

    // Multiplicities c_i = 2 dim ker X^i - dim ker X^{i+1} - dim ker X^{i-1}.
    let mut partition: Vec<u32> = Vec::new();
    for i in (1..=r).rev() {
        let c = 2 * kdim[i] - kdim[i + 1] - kdim[i - 1];
        assert!(c >= 0, "kernel dimensions must be concave");
        for _ in 0..c {
            partition.push(i as u32);
        }
    }
    assert_eq!(partition.iter().sum::<u32>() as usize, r, "partition size");

    let mut eps: Vec<(u32, bool)> = Vec::new();
    let mut grams: Vec<(u32, Vec<Vec<u64>>)> = Vec::new();
    for i in 1..=r {
        if !form_carrying(desc.kind(), i as u32) {
            continue;
        }
        let c = (2 * kdim[i] - kdim[i + 1] - kdim[i - 1]) as usize;
        if c == 0 {
            continue;
        }
        // Lift a basis of ker X^i / (ker X^{i-1} + X ker X^{i+1}).
        let mut sub: Vec<Vec<u64>> = kernels[i - 1].clone();
        for v in &kernels[i + 1] {
            sub.push(fqlin::mat_vec(&xg, v, q));
        }
        let (mut span, mut pivots) = fqlin::span_reduce(&sub, q);
        let mut lifted: Vec<Vec<u64>> = Vec::new();
        for v in &kernels[i] {
            let w = fqlin::reduce(v, &span, &pivots, q);
            let Some(nz) = w.iter().position(|&e| e != 0) else { continue };
            let inv = fqlin::inv_mod(w[nz], q);
            let w: Vec<u64> =
                w.iter().map(|&e| (e as u128 * inv as u128 % q as u128) as u64).collect();
            pivots.push(nz);
            span.push(w.clone());
            lifted.push(w);
        }
        assert_eq!(lifted.len(), c, "complement dimension must match multiplicity");

        // Gram of (v, w) -> sign . (X^{i-1} v)^T J w with sign (-1)^((i-1)/2).
        let sign_neg = ((i - 1) / 2) % 2 == 1;
        let images: Vec<Vec<u64>> =
            lifted.iter().map(|v| fqlin::mat_vec(&pows[i - 1], v, q)).collect();
        let jw: Vec<Vec<u64>> = lifted.iter().map(|w| fqlin::mat_vec(&jg, w, q)).collect();
        let gram: Vec<Vec<u64>> = images
            .iter()
            .map(|im| {
                jw.iter()
                    .map(|jv| {
                        let s = im
                            .iter()
                            .zip(jv)
                            .fold(0u128, |acc, (&a, &b)| acc + a as u128 * b as u128)
                            % q as u128;
                        if sign_neg {
                            ((q as u128 - s) % q as u128) as u64
                        } else {
                            s as u64
                        }
                    })
                    .collect()
            })
            .collect();
        let d = fqlin::det(&gram, q);
        assert_ne!(d, 0, "restricted form must be nondegenerate");
        eps.push((i as u32, is_square_mod(d, q)));
        grams.push((i as u32, gram));
    }

    Ok(ClassifyDetail { label: UnipotentClassLabel::new(partition, eps), grams })
}

/// Matrix entries reduced to the residue field as integers mod p.
pub fn residue_grid(m: &Mat, ring: &Ring) -> Vec<Vec<u64>> {
    let n = m.size();
    (0..n)
        .map(|i| (0..n).map(|j| ring.residue(m[(i, j)])).collect())
        .collect()
}

fn identity_grid(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

fn in_lie_algebra(x: &[Vec<u64>], j: &[Vec<u64>], q: u64) -> bool {
    let n = x.len();
    let xt: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|k| x[k][i]).collect()).collect();
    let lhs = fqlin::mat_mul(&xt, j, q);
    let rhs = fqlin::mat_mul(j, x, q);
    (0..n).all(|i| (0..n).all(|k| (lhs[i][k] + rhs[i][k]) % q == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use classical_groups::RingKind;

    #[test]
    fn identity_label() {
        let ring = Ring::new(RingKind::Mixed, 5, 1).unwrap();
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let label = classify(&desc, &Mat::identity(&ring, 2), &ring).unwrap();
        assert_eq!(label.partition(), &[1, 1]);
        assert!(label.eps().is_empty());
        assert!(label.is_identity());
    }

    #[test]
    fn standard_upper_unipotent() {
        // [[1,1],[0,1]] has Gram <-1/2>: square exactly at q = 3 among 3,5,7.
        for (q, sq) in [(3u64, true), (5, false), (7, false)] {
            let ring = Ring::new(RingKind::Mixed, q, 1).unwrap();
            let desc = GroupDescriptor::symplectic(1).unwrap();
            let u = Mat::from_rows(&ring, &[vec![1, 1], vec![0, 1]]);
            let label = classify(&desc, &u, &ring).unwrap();
            assert_eq!(label.partition(), &[2]);
            assert_eq!(label.eps(), &[(2, sq)]);
            assert!(label.is_regular());
        }
    }

    #[test]
    fn rejects_non_unipotent() {
        let ring = Ring::new(RingKind::Mixed, 5, 1).unwrap();
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let g = Mat::from_rows(&ring, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(classify(&desc, &g, &ring), Err(ClassifyError::NotUnipotent));
        let h = Mat::from_rows(&ring, &[vec![1, 0], vec![0, 2]]);
        assert_eq!(classify(&desc, &h, &ring), Err(ClassifyError::NotInGroup));
    }

    #[test]
    fn rejects_deep_ring() {
        let ring = Ring::new(RingKind::Mixed, 5, 2).unwrap();
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let u = Mat::identity(&ring, 2);
        assert_eq!(classify(&desc, &u, &ring), Err(ClassifyError::ResidueDepth(2)));
    }
}
