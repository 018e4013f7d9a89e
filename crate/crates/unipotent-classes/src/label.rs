//! Class labels for unipotent conjugacy classes of Sp(2n) and SO(2n+1).
//!
//! A label is a partition of the matrix size together with one discriminant
//! bit per form-carrying part: even parts for the symplectic groups, odd
//! parts for the odd orthogonal ones. Enumeration applies the multiplicity
//! parity constraints, and for SO(2n+1) additionally keeps only those
//! discriminant assignments whose orthogonal summands are Witt-equivalent
//! to the ambient bilinear form.

use std::fmt;

use classical_groups::ring::is_square_mod;
use classical_groups::{GroupDescriptor, GroupKind, Mat, Ring};

/// Partition plus discriminant bits, ascending by part, for carrying parts
/// of nonzero multiplicity. `true` means the (sign-adjusted) Gram
/// determinant is a square in the residue field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnipotentClassLabel {
    partition: Vec<u32>,
    eps: Vec<(u32, bool)>,
}

impl UnipotentClassLabel {
    pub fn new(partition: Vec<u32>, eps: Vec<(u32, bool)>) -> Self {
        assert!(
            partition.windows(2).all(|w| w[0] >= w[1]) && partition.iter().all(|&x| x > 0),
            "partition must be weakly decreasing and positive"
        );
        assert!(eps.windows(2).all(|w| w[0].0 < w[1].0), "eps slots ascending");
        UnipotentClassLabel { partition, eps }
    }

    pub fn partition(&self) -> &[u32] {
        &self.partition
    }

    pub fn eps(&self) -> &[(u32, bool)] {
        &self.eps
    }

    /// Multiplicity of part i.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.partition.iter().filter(|&&x| x == i).count() as u32
    }

    /// Largest part: the nilpotency degree of the class.
    pub fn largest_part(&self) -> u32 {
        self.partition[0]
    }

    pub fn is_identity(&self) -> bool {
        self.partition.iter().all(|&x| x == 1)
    }

    /// Regular classes consist of a single Jordan block.
    pub fn is_regular(&self) -> bool {
        self.partition.len() == 1
    }
}

impl fmt::Display for UnipotentClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.partition.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))?;
        if !self.eps.is_empty() {
            let slots: Vec<String> = self
                .eps
                .iter()
                .map(|&(i, sq)| format!("{}:{}", i, if sq { "sq" } else { "ns" }))
                .collect();
            write!(f, "[{}]", slots.join(","))?;
        }
        Ok(())
    }
}

/// Whether the twisted form on parts of size i is symmetric (and so carries
/// a discriminant invariant) for the given group kind.
pub fn form_carrying(kind: GroupKind, i: u32) -> bool {
    match kind {
        GroupKind::Symplectic => i % 2 == 0,
        GroupKind::OddOrthogonal => i % 2 == 1,
    }
}

/// All partitions of r, parts weakly decreasing, in descending
/// lexicographic order.
pub fn partitions(r: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, r, &mut Vec::new(), &mut out);
    out
}

/// Multiplicities c_i of each part of a partition, as (part, multiplicity)
/// pairs ascending by part.
fn multiplicities(partition: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &i in partition {
        match out.iter_mut().find(|(p, _)| *p == i) {
            Some((_, c)) => *c += 1,
            None => out.push((i, 1)),
        }
    }
    out.sort();
    out
}

/// Witt invariant of a diagonal form over F_q: (kernel dimension, kernel
/// discriminant is nonsquare). Anisotropic forms over a finite field have
/// dimension at most two, so the pair is determined by dimension parity and
/// the discriminant class.
fn witt_kernel(dim: u32, disc_ns: bool, q: u64) -> (u32, bool) {
    let neg1_ns = !is_square_mod(q - 1, q);
    if dim == 0 {
        return (0, false);
    }
    if dim % 2 == 1 {
        // Strip (dim-1)/2 hyperbolic planes, each of discriminant -1.
        let c = disc_ns ^ (neg1_ns && ((dim - 1) / 2) % 2 == 1);
        return (1, c);
    }
    let c2 = disc_ns ^ (neg1_ns && ((dim - 2) / 2) % 2 == 1);
    if c2 == neg1_ns {
        (0, false)
    } else {
        (2, c2)
    }
}

/// All class labels for the group over F_q. Symplectic labels do not depend
/// on q; odd orthogonal ones do, through the discriminant of -1.
pub fn enumerate_class_labels(desc: &GroupDescriptor, q: u64) -> Vec<UnipotentClassLabel> {
    let r = desc.mat_size() as u32;
    let kind = desc.kind();
    let mut out = Vec::new();
    for partition in partitions(r) {
        let mults = multiplicities(&partition);
        if mults
            .iter()
            .any(|&(i, c)| !form_carrying(kind, i) && c % 2 == 1)
        {
            continue;
        }
        let slots: Vec<(u32, u32)> = mults
            .iter()
            .copied()
            .filter(|&(i, _)| form_carrying(kind, i))
            .collect();
        for bits in 0..(1u32 << slots.len()) {
            let eps: Vec<(u32, bool)> = slots
                .iter()
                .enumerate()
                .map(|(s, &(i, _))| (i, bits >> s & 1 == 1))
                .collect();
            if kind == GroupKind::OddOrthogonal {
                // The carrying summands diag(1,...,1,d_i) of dimension c_i
                // must add up to the Witt class of the ambient form, whose
                // anisotropic kernel is the one-dimensional square form.
                let dim: u32 = slots.iter().map(|&(_, c)| c).sum();
                let disc_ns = eps.iter().filter(|&&(_, sq)| !sq).count() % 2 == 1;
                if witt_kernel(dim, disc_ns, q) != (1, false) {
                    continue;
                }
            }
            out.push(UnipotentClassLabel::new(partition.clone(), eps));
        }
    }
    out.sort();
    out
}

/// Nilpotent Jordan matrix of the partition: a superdiagonal of ones inside
/// each block, blocks in partition order.
pub fn jordan_matrix(partition: &[u32], ring: &Ring) -> Mat {
    assert!(
        partition.windows(2).all(|w| w[0] >= w[1]) && partition.iter().all(|&x| x > 0),
        "partition must be weakly decreasing and positive"
    );
    let r: u32 = partition.iter().sum();
    let mut m = Mat::zero(ring, r as usize);
    let mut offset = 0usize;
    for &block in partition {
        for s in 0..block as usize - 1 {
            m[(offset + s, offset + s + 1)] = ring.one();
        }
        offset += block as usize;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use classical_groups::RingKind;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(2).len(), 2);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(4)[0], vec![4]);
    }

    #[test]
    fn witt_kernel_cases() {
        // Hyperbolic plane <1,-1> is split; <1,1> over F_3 is anisotropic.
        assert_eq!(witt_kernel(2, !is_square_mod(2, 3), 3), (0, false));
        assert_eq!(witt_kernel(2, false, 3), (2, false));
        // <1,1,1> over F_5 reduces to <1>.
        assert_eq!(witt_kernel(3, false, 5), (1, false));
    }

    #[test]
    fn jordan_matrix_shape() {
        let ring = Ring::new(RingKind::Mixed, 3, 1).unwrap();
        let j = jordan_matrix(&[2, 2], &ring);
        assert_eq!(ring.residue(j[(0, 1)]), 1);
        assert_eq!(ring.residue(j[(2, 3)]), 1);
        assert_eq!(ring.residue(j[(1, 2)]), 0);
        assert!(j.mul(&j, &ring).entries().iter().all(|&e| ring.is_zero(e)));
    }
}
