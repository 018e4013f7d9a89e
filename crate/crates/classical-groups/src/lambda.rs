//! Coset classes of the Iwahori subgroup under diagonal uniformizer shifts.
//!
//! For a multi-index lambda, y1 and y2 in the Iwahori subgroup I are
//! equivalent when (y1 a)^{-1} (y2 a) is integral and invertible, where
//! a = diag(pi^lambda). Equivalence classes are left cosets of
//! H = I cap a K a^{-1}, and each class is identified by a canonical
//! Hermite-form key of the column lattice of y a (scaled integral), so the
//! classes can be enumerated by BFS over the coset graph without touching
//! every group element.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

use crate::group::GroupDescriptor;
use crate::mat::Mat;
use crate::ring::{Ring, RingError, Rv};

/// Integer exponent vector for a = diag(pi^{lambda_1}, ..., pi^{lambda_r}).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: Vec<i64>,
}

#[derive(Debug, Error)]
pub enum LambdaError {
    #[error("multi-index length {got} does not match matrix size {want}")]
    BadLength { got: usize, want: usize },
    #[error("multi-index must satisfy lambda_(r+1-i) = -lambda_i for this group")]
    NotAntisymmetric,
    #[error("coset budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("class count {count} is not a power of q = {q}")]
    NotAPower { count: BigUint, q: u64 },
    #[error("length exponent differs between primes: {l1} at p={p1}, {l2} at p={p2}")]
    PrimeDependent { l1: u32, p1: u64, l2: u32, p2: u64 },
    #[error("column lattice not full rank at working precision")]
    DegenerateLattice,
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl MultiIndex {
    /// Validates the shape required by the group: the reversed vector must
    /// be the negation (so a = diag(pi^lambda) conjugates the group to
    /// itself). The middle entry of an odd-size index is forced to zero.
    pub fn new(desc: &GroupDescriptor, entries: Vec<i64>) -> Result<Self, LambdaError> {
        let r = desc.mat_size();
        if entries.len() != r {
            return Err(LambdaError::BadLength { got: entries.len(), want: r });
        }
        for i in 0..r {
            if entries[i] != -entries[r - 1 - i] {
                return Err(LambdaError::NotAntisymmetric);
            }
        }
        Ok(MultiIndex { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn sup_norm(&self) -> i64 {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// BFS working depth: 1 + 2 * max |lambda_i|.
    pub fn working_depth(&self) -> u32 {
        1 + 2 * self.sup_norm() as u32
    }

    /// All valid multi-indices with sup-norm at most `bound`, sorted.
    pub fn all_bounded(desc: &GroupDescriptor, bound: i64) -> Vec<MultiIndex> {
        let r = desc.mat_size();
        let half = r / 2;
        let mut out = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == half {
                let mut entries = prefix.clone();
                if r % 2 == 1 {
                    entries.push(0);
                }
                for i in (0..half).rev() {
                    entries.push(-prefix[i]);
                }
                out.push(MultiIndex { entries });
                continue;
            }
            for v in -bound..=bound {
                let mut next = prefix.clone();
                next.push(v);
                stack.push(next);
            }
        }
        out.sort();
        out
    }
}

/// Conjugation exponents n_{kl} = lambda_l - lambda_k: conjugating by
/// a = diag(pi^lambda) scales the (k, l) entry by pi^{n_kl}.
pub fn conj_exponents(lambda: &MultiIndex) -> Vec<Vec<i64>> {
    let l = lambda.entries();
    l.iter()
        .map(|&lk| l.iter().map(|&ll| ll - lk).collect())
        .collect()
}

/// The diagonal shift a = diag(pi^{lambda_i}) over the fraction field,
/// stored as exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiDiagonal {
    pub exponents: Vec<i64>,
}

pub fn a_lambda(lambda: &MultiIndex) -> PiDiagonal {
    PiDiagonal { exponents: lambda.entries().to_vec() }
}

/// Canonical key of the column lattice of y * diag(pi^{mx + lambda_j}),
/// computed at precision depth(y) + 2 * mx.
pub type CosetKey = Vec<(u32, Vec<Rv>)>;

/// One equivalence class set: representatives discovered by BFS over the
/// coset graph, in discovery order, with their keys.
#[derive(Debug, Clone)]
pub struct LambdaClassSet {
    pub lambda: MultiIndex,
    /// Depth the representatives are stored at (1 + 2 max|lambda|).
    pub depth: u32,
    pub reps: Vec<Mat>,
    pub keys: Vec<CosetKey>,
}

impl LambdaClassSet {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

/// Hermite-form canonicalization of a column lattice over the truncated
/// ring. Two generating matrices related by right multiplication by an
/// invertible integral matrix produce identical keys (up to precision).
fn hnf_key(cols: &mut Vec<Vec<Rv>>, ring: &Ring) -> Result<CosetKey, LambdaError> {
    let r = cols[0].len();
    let prec = ring.depth();
    let mut out: Vec<Vec<Rv>> = Vec::with_capacity(r);
    let mut pivs: Vec<u32> = Vec::with_capacity(r);
    for row in 0..r {
        let mut piv_idx = None;
        let mut piv_val = prec;
        for (ci, c) in cols.iter().enumerate() {
            let v = ring.val(c[row]);
            if v < piv_val {
                piv_val = v;
                piv_idx = Some(ci);
            }
        }
        let piv_idx = piv_idx.ok_or(LambdaError::DegenerateLattice)?;
        let mut c = cols.remove(piv_idx);
        let unit = ring.unshift(c[row], piv_val);
        let uinv = ring.inv(unit).expect("leading digit is a unit");
        for x in c.iter_mut() {
            *x = ring.mul(*x, uinv);
        }
        for other in cols.iter_mut() {
            let f = ring.unshift(other[row], piv_val);
            for i in 0..r {
                let delta = ring.mul(f, c[i]);
                other[i] = ring.sub(other[i], delta);
            }
        }
        out.push(c);
        pivs.push(piv_val);
    }
    // Back-reduce: the entry of column j at pivot row i (i > j) is reduced
    // modulo pi^{pivs[i]}.
    for j in 0..r {
        for i in j + 1..r {
            let a = out[j][i];
            let f = ring.unshift(ring.sub(a, ring.low_digits(a, pivs[i])), pivs[i]);
            if !ring.is_zero(f) {
                for t in 0..r {
                    let delta = ring.mul(f, out[i][t]);
                    out[j][t] = ring.sub(out[j][t], delta);
                }
            }
        }
    }
    Ok(pivs.into_iter().zip(out).collect())
}

/// The coset key of y for the given lambda. `ring` is the ring y lives in
/// (depth N = working depth); the key is computed at depth N + 2 max|lambda|.
pub fn coset_key(
    y: &Mat,
    lambda: &MultiIndex,
    ring: &Ring,
) -> Result<CosetKey, LambdaError> {
    let r = y.size();
    let mx = lambda.sup_norm();
    let prec = ring.depth() + 2 * mx as u32;
    let big = ring.at_depth(prec)?;
    let mut cols: Vec<Vec<Rv>> = Vec::with_capacity(r);
    for j in 0..r {
        let shift = (mx + lambda.entries()[j]) as u32;
        let col: Vec<Rv> = (0..r)
            .map(|i| big.shift(ring.lift_flat(y[(i, j)], &big), shift))
            .collect();
        cols.push(col);
    }
    hnf_key(&mut cols, &big)
}

/// BFS over the coset graph from the identity, using the Iwahori generator
/// set. Returns representatives in discovery order.
pub fn lambda_class_representatives(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    ring_kind: crate::ring::RingKind,
    p: u64,
    budget: usize,
) -> Result<LambdaClassSet, LambdaError> {
    let n = lambda.working_depth();
    let ring = Ring::new(ring_kind, p, n)?;
    // Validate precision up front so HNF never overflows.
    let _ = ring.at_depth(n + 2 * lambda.sup_norm() as u32)?;
    let gens = desc.iwahori_generators(&ring);
    let start = Mat::identity(&ring, desc.mat_size());
    let mut seen: HashMap<CosetKey, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut keys = Vec::new();
    let mut queue = VecDeque::new();
    let k0 = coset_key(&start, lambda, &ring)?;
    seen.insert(k0.clone(), 0);
    reps.push(start.clone());
    keys.push(k0);
    queue.push_back(start);
    while let Some(y) = queue.pop_front() {
        for g in &gens {
            let z = y.mul(g, &ring);
            let key = coset_key(&z, lambda, &ring)?;
            if !seen.contains_key(&key) {
                if reps.len() >= budget {
                    return Err(LambdaError::BudgetExceeded(budget));
                }
                seen.insert(key.clone(), reps.len());
                reps.push(z.clone());
                keys.push(key);
                queue.push_back(z);
            }
        }
    }
    Ok(LambdaClassSet { lambda: lambda.clone(), depth: n, reps, keys })
}

/// Class count as an exact power of q, verified to be a q-power and to have
/// a prime-independent exponent (recomputed at `second_prime`).
pub fn lambda_length(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    ring_kind: crate::ring::RingKind,
    p: u64,
    second_prime: u64,
    budget: usize,
) -> Result<(BigUint, u32), LambdaError> {
    let l1 = power_exponent(desc, lambda, ring_kind, p, budget)?;
    let l2 = power_exponent(desc, lambda, ring_kind, second_prime, budget)?;
    if l1 != l2 {
        return Err(LambdaError::PrimeDependent { l1, p1: p, l2, p2: second_prime });
    }
    Ok((BigUint::from(p).pow(l1), l1))
}

fn power_exponent(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    ring_kind: crate::ring::RingKind,
    p: u64,
    budget: usize,
) -> Result<u32, LambdaError> {
    let set = lambda_class_representatives(desc, lambda, ring_kind, p, budget)?;
    let mut count = BigUint::from(set.count());
    let q = BigUint::from(p);
    let mut l = 0u32;
    while (&count % &q).is_zero() {
        count /= &q;
        l += 1;
    }
    if !count.is_one() {
        return Err(LambdaError::NotAPower { count: BigUint::from(set.count()), q: p });
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingKind;

    #[test]
    fn multi_index_validation() {
        let sp2 = GroupDescriptor::symplectic(1).unwrap();
        assert!(MultiIndex::new(&sp2, vec![1, -1]).is_ok());
        assert!(MultiIndex::new(&sp2, vec![1, 1]).is_err());
        assert!(MultiIndex::new(&sp2, vec![1]).is_err());
        let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
        assert!(MultiIndex::new(&so3, vec![1, 0, -1]).is_ok());
        assert!(MultiIndex::new(&so3, vec![1, 1, -1]).is_err());
    }

    #[test]
    fn conj_exponent_matrix() {
        let sp2 = GroupDescriptor::symplectic(1).unwrap();
        let lam = MultiIndex::new(&sp2, vec![1, -1]).unwrap();
        assert_eq!(conj_exponents(&lam), vec![vec![0, -2], vec![2, 0]]);
    }

    #[test]
    fn bounded_enumeration_counts() {
        let sp2 = GroupDescriptor::symplectic(1).unwrap();
        let all = MultiIndex::all_bounded(&sp2, 2);
        assert_eq!(all.len(), 5); // lambda_1 in {-2..2}
        let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
        assert_eq!(MultiIndex::all_bounded(&so3, 1).len(), 3);
    }

    #[test]
    fn zero_lambda_single_class() {
        let sp2 = GroupDescriptor::symplectic(1).unwrap();
        let lam = MultiIndex::new(&sp2, vec![0, 0]).unwrap();
        let set =
            lambda_class_representatives(&sp2, &lam, RingKind::Mixed, 3, 10_000).unwrap();
        assert_eq!(set.count(), 1);
    }
}
