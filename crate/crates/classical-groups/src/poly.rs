//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Used to express the adjoint representation symbolically: entries of Ad(g)
//! are polynomials in the matrix entries of g. The variable set is fixed as
//! the r*r entries of a group element, indexed row-major.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::{Ring, Rv};

/// Exponent vector over the matrix-entry variables, row-major.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    /// Number of variables (r*r for an r x r group).
    pub nvars: usize,
    /// Monomial -> coefficient; zero coefficients are never stored.
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, BigRational::from(BigInt::from(c)))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut m = vec![0; nvars];
        m[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let entry = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                let entry = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
                *entry += c;
                if entry.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Evaluate over a truncated ring, substituting ring elements for the
    /// variables. Denominators must be units mod p.
    pub fn eval(&self, ring: &Ring, point: &[Rv]) -> Rv {
        assert_eq!(point.len(), self.nvars);
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut term = rational_in_ring(ring, c);
            for (idx, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = ring.mul(term, ring.pow(point[idx], e as u64));
                }
            }
            acc = ring.add(acc, term);
        }
        acc
    }

    /// Exact rational evaluation, for cross-checks.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[idx];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }
}

/// Image of an exact rational in O/pi^k; the denominator must be coprime
/// to p. In the equal-characteristic ring the rational maps through F_p.
pub fn rational_in_ring(ring: &Ring, c: &BigRational) -> Rv {
    let p = BigInt::from(ring.prime());
    let modulus: BigInt = match ring.kind() {
        crate::ring::RingKind::Mixed => p.pow(ring.depth()),
        crate::ring::RingKind::Equal => p,
    };
    let num = c.numer().clone() % &modulus;
    let den = c.denom().clone() % &modulus;
    let num_u = ((num + &modulus) % &modulus).try_into().unwrap_or(0u64);
    let den_u: u64 = ((den + &modulus) % &modulus).try_into().unwrap_or(0u64);
    let num_r = ring.from_u64(num_u);
    let den_r = ring.from_u64(den_u);
    let dinv = ring
        .inv(den_r)
        .expect("rational coefficient with denominator divisible by p");
    ring.mul(num_r, dinv)
}

/// A square matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    pub n: usize,
    pub e: Vec<Poly>,
}

impl PolyMat {
    pub fn from_fn(n: usize, nvars: usize, f: impl Fn(usize, usize) -> Poly) -> Self {
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let p = f(i, j);
                assert_eq!(p.nvars, nvars);
                e.push(p);
            }
        }
        PolyMat { n, e }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.e[i * self.n + j]
    }

    /// Evaluate every entry at a ring point.
    pub fn eval(&self, ring: &Ring, point: &[Rv]) -> crate::mat::Mat {
        let mut out = crate::mat::Mat::zero(ring, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self.entry(i, j).eval(ring, point);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingKind;

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y)); // x^2 - y^2
        let ring = Ring::new(RingKind::Mixed, 7, 1).unwrap();
        let v = p.eval(&ring, &[ring.from_u64(3), ring.from_u64(2)]);
        assert_eq!(v, ring.from_u64(5));
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn rational_coefficients_reduce_mod_p() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let p = Poly::constant(1, half);
        let ring = Ring::new(RingKind::Mixed, 5, 2).unwrap();
        // 1/2 = 13 mod 25
        assert_eq!(p.eval(&ring, &[ring.zero()]), ring.from_u64(13));
    }
}
