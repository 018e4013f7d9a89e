//! Truncated local-ring arithmetic: Z/p^k and F_p[t]/(t^k).
//!
//! Both rings are quotients O/pi^k of a complete discrete valuation ring with
//! odd residue characteristic p; `pi` is p itself in the mixed-characteristic
//! case and t in the equal-characteristic case. Elements are small `Copy`
//! values and all arithmetic goes through a [`Ring`] context that carries the
//! prime, the truncation depth and the ring kind, so code written against the
//! context runs unchanged over either ring.

use thiserror::Error;

/// Hard cap on truncation depth; big enough for every shifted working
/// modulus used by the volume and coset machinery.
pub const MAX_DEPTH: usize = 24;

/// Which completion the ring truncates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// Z/p^k, the mixed-characteristic truncation of the p-adic integers.
    Mixed,
    /// F_p[t]/(t^k), the equal-characteristic truncation of F_p[[t]].
    Equal,
}

/// A ring element. `Int` is a representative in [0, p^k); `Poly` stores the
/// coefficients of 1, t, ..., t^(k-1), zero-padded to `MAX_DEPTH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rv {
    Int(u64),
    Poly([u16; MAX_DEPTH]),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("prime must be odd, got {0}")]
    EvenPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("depth {k} out of range 1..={max}", max = MAX_DEPTH)]
    BadDepth { k: u32 },
    #[error("p^k overflows the word size (p = {p}, k = {k})")]
    ModulusOverflow { p: u64, k: u32 },
    #[error("residue coefficient does not fit (p = {0})")]
    PrimeTooLarge(u64),
}

/// Arithmetic context for O/pi^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ring {
    kind: RingKind,
    p: u64,
    k: u32,
    /// p^k for the mixed ring; p for the equal ring (the coefficient modulus).
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new(kind: RingKind, p: u64, k: u32) -> Result<Self, RingError> {
        if p % 2 == 0 {
            return Err(RingError::EvenPrime(p));
        }
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if k == 0 || k as usize > MAX_DEPTH {
            return Err(RingError::BadDepth { k });
        }
        let modulus = match kind {
            RingKind::Mixed => {
                let mut m: u64 = 1;
                for _ in 0..k {
                    m = m.checked_mul(p).ok_or(RingError::ModulusOverflow { p, k })?;
                }
                m
            }
            RingKind::Equal => {
                if p > u16::MAX as u64 {
                    return Err(RingError::PrimeTooLarge(p));
                }
                p
            }
        };
        Ok(Ring { kind, p, k, modulus })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.k
    }

    /// The same ring truncated at depth `k` instead.
    pub fn at_depth(&self, k: u32) -> Result<Self, RingError> {
        Ring::new(self.kind, self.p, k)
    }

    /// p^k as a u64 (mixed ring only).
    pub fn int_modulus(&self) -> u64 {
        debug_assert_eq!(self.kind, RingKind::Mixed);
        self.modulus
    }

    pub fn zero(&self) -> Rv {
        match self.kind {
            RingKind::Mixed => Rv::Int(0),
            RingKind::Equal => Rv::Poly([0; MAX_DEPTH]),
        }
    }

    pub fn one(&self) -> Rv {
        self.from_u64(1)
    }

    /// The uniformizer pi (p or t).
    pub fn uniformizer(&self) -> Rv {
        match self.kind {
            RingKind::Mixed => Rv::Int(if self.k == 1 { 0 } else { self.p }),
            RingKind::Equal => {
                let mut c = [0u16; MAX_DEPTH];
                if self.k > 1 {
                    c[1] = 1;
                }
                Rv::Poly(c)
            }
        }
    }

    /// Image of the integer n. In the equal-characteristic ring this is the
    /// constant n mod p, matching the canonical map Z -> F_p[t]/(t^k).
    pub fn from_u64(&self, n: u64) -> Rv {
        match self.kind {
            RingKind::Mixed => Rv::Int(n % self.modulus),
            RingKind::Equal => {
                let mut c = [0u16; MAX_DEPTH];
                c[0] = (n % self.p) as u16;
                Rv::Poly(c)
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Rv {
        if n >= 0 {
            self.from_u64(n as u64)
        } else {
            self.neg(self.from_u64(n.unsigned_abs()))
        }
    }

    fn coeffs(&self, x: Rv) -> [u16; MAX_DEPTH] {
        match x {
            Rv::Poly(c) => c,
            Rv::Int(_) => panic!("equal-characteristic value expected"),
        }
    }

    fn int(&self, x: Rv) -> u64 {
        match x {
            Rv::Int(v) => v,
            Rv::Poly(_) => panic!("mixed-characteristic value expected"),
        }
    }

    pub fn is_zero(&self, x: Rv) -> bool {
        x == self.zero()
    }

    pub fn add(&self, x: Rv, y: Rv) -> Rv {
        match self.kind {
            RingKind::Mixed => {
                let (a, b) = (self.int(x), self.int(y));
                Rv::Int(((a as u128 + b as u128) % self.modulus as u128) as u64)
            }
            RingKind::Equal => {
                let (a, b) = (self.coeffs(x), self.coeffs(y));
                let mut c = [0u16; MAX_DEPTH];
                for i in 0..self.k as usize {
                    c[i] = ((a[i] as u64 + b[i] as u64) % self.p) as u16;
                }
                Rv::Poly(c)
            }
        }
    }

    pub fn neg(&self, x: Rv) -> Rv {
        match self.kind {
            RingKind::Mixed => {
                let a = self.int(x);
                Rv::Int(if a == 0 { 0 } else { self.modulus - a })
            }
            RingKind::Equal => {
                let a = self.coeffs(x);
                let mut c = [0u16; MAX_DEPTH];
                for i in 0..self.k as usize {
                    c[i] = ((self.p - a[i] as u64) % self.p) as u16;
                }
                Rv::Poly(c)
            }
        }
    }

    pub fn sub(&self, x: Rv, y: Rv) -> Rv {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Rv, y: Rv) -> Rv {
        match self.kind {
            RingKind::Mixed => {
                let (a, b) = (self.int(x), self.int(y));
                Rv::Int(((a as u128 * b as u128) % self.modulus as u128) as u64)
            }
            RingKind::Equal => {
                let (a, b) = (self.coeffs(x), self.coeffs(y));
                let mut c = [0u16; MAX_DEPTH];
                for i in 0..self.k as usize {
                    let mut acc: u64 = 0;
                    for j in 0..=i {
                        acc += a[j] as u64 * b[i - j] as u64;
                    }
                    c[i] = (acc % self.p) as u16;
                }
                Rv::Poly(c)
            }
        }
    }

    /// pi-adic valuation in 0..k; returns k when x = 0 in the truncation.
    pub fn val(&self, x: Rv) -> u32 {
        match self.kind {
            RingKind::Mixed => {
                let mut a = self.int(x);
                if a == 0 {
                    return self.k;
                }
                let mut v = 0;
                while a % self.p == 0 {
                    a /= self.p;
                    v += 1;
                }
                v
            }
            RingKind::Equal => {
                let c = self.coeffs(x);
                for i in 0..self.k as usize {
                    if c[i] != 0 {
                        return i as u32;
                    }
                }
                self.k
            }
        }
    }

    pub fn is_unit(&self, x: Rv) -> bool {
        self.val(x) == 0
    }

    /// Leading unit digit: the residue of x / pi^val(x); 0 when x = 0.
    pub fn leading_digit(&self, x: Rv) -> u64 {
        let v = self.val(x);
        if v == self.k {
            return 0;
        }
        match self.kind {
            RingKind::Mixed => {
                let mut a = self.int(x);
                for _ in 0..v {
                    a /= self.p;
                }
                a % self.p
            }
            RingKind::Equal => self.coeffs(x)[v as usize] as u64,
        }
    }

    /// The residue x mod pi as an element of F_p.
    pub fn residue(&self, x: Rv) -> u64 {
        match self.kind {
            RingKind::Mixed => self.int(x) % self.p,
            RingKind::Equal => self.coeffs(x)[0] as u64,
        }
    }

    /// x * pi^j (truncated).
    pub fn shift(&self, x: Rv, j: u32) -> Rv {
        match self.kind {
            RingKind::Mixed => {
                let mut y = x;
                for _ in 0..j {
                    y = self.mul(y, Rv::Int(self.p % self.modulus));
                }
                y
            }
            RingKind::Equal => {
                let a = self.coeffs(x);
                let mut c = [0u16; MAX_DEPTH];
                for i in 0..self.k as usize {
                    if i >= j as usize {
                        c[i] = a[i - j as usize];
                    }
                }
                Rv::Poly(c)
            }
        }
    }

    /// The remainder of x modulo pi^j: digits at positions >= j zeroed.
    pub fn low_digits(&self, x: Rv, j: u32) -> Rv {
        if j >= self.k {
            return x;
        }
        match self.kind {
            RingKind::Mixed => {
                let m = self.p.pow(j);
                Rv::Int(self.int(x) % m)
            }
            RingKind::Equal => {
                let a = self.coeffs(x);
                let mut c = [0u16; MAX_DEPTH];
                c[..j as usize].copy_from_slice(&a[..j as usize]);
                Rv::Poly(c)
            }
        }
    }

    /// Exact division by pi^j; caller must ensure val(x) >= j.
    pub fn unshift(&self, x: Rv, j: u32) -> Rv {
        debug_assert!(self.val(x) >= j);
        match self.kind {
            RingKind::Mixed => {
                let mut a = self.int(x);
                for _ in 0..j {
                    a /= self.p;
                }
                Rv::Int(a)
            }
            RingKind::Equal => {
                let a = self.coeffs(x);
                let mut c = [0u16; MAX_DEPTH];
                for i in 0..self.k as usize {
                    if i + (j as usize) < self.k as usize {
                        c[i] = a[i + j as usize];
                    }
                }
                Rv::Poly(c)
            }
        }
    }

    /// Multiplicative inverse of a unit; `None` when x is not a unit.
    pub fn inv(&self, x: Rv) -> Option<Rv> {
        if !self.is_unit(x) {
            return None;
        }
        match self.kind {
            RingKind::Mixed => Some(Rv::Int(inv_mod(self.int(x), self.modulus))),
            RingKind::Equal => {
                // Power-series inversion digit by digit.
                let a = self.coeffs(x);
                let c0 = inv_mod(a[0] as u64, self.p);
                let mut b = [0u16; MAX_DEPTH];
                b[0] = c0 as u16;
                for i in 1..self.k as usize {
                    let mut acc: u64 = 0;
                    for j in 1..=i {
                        acc += a[j] as u64 * b[i - j] as u64;
                    }
                    b[i] = (c0 * (self.p - acc % self.p) % self.p) as u16;
                }
                Some(Rv::Poly(b))
            }
        }
    }

    pub fn pow(&self, x: Rv, mut e: u64) -> Rv {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduce x from this ring to the depth-k' truncation (k' <= k).
    pub fn project(&self, x: Rv, target: &Ring) -> Rv {
        debug_assert_eq!(self.kind, target.kind);
        debug_assert!(target.k <= self.k);
        match self.kind {
            RingKind::Mixed => Rv::Int(self.int(x) % target.modulus),
            RingKind::Equal => {
                let a = self.coeffs(x);
                let mut c = [0u16; MAX_DEPTH];
                c[..target.k as usize].copy_from_slice(&a[..target.k as usize]);
                Rv::Poly(c)
            }
        }
    }

    /// Lift x to a deeper truncation of the same ring, choosing the
    /// representative with zero upper digits.
    pub fn lift_flat(&self, x: Rv, target: &Ring) -> Rv {
        debug_assert_eq!(self.kind, target.kind);
        debug_assert!(target.k >= self.k);
        x
    }

    /// All elements of the ring, in a fixed lexicographic digit order
    /// (least significant digit varies fastest).
    pub fn all_elements(&self) -> Vec<Rv> {
        let total = (0..self.k).fold(1u64, |acc, _| acc * self.p);
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            out.push(self.element_from_index(idx));
        }
        out
    }

    /// The element whose base-p digit vector is the base-p expansion of idx.
    pub fn element_from_index(&self, idx: u64) -> Rv {
        match self.kind {
            RingKind::Mixed => Rv::Int(idx % self.modulus),
            RingKind::Equal => {
                let mut c = [0u16; MAX_DEPTH];
                let mut rest = idx;
                for d in c.iter_mut().take(self.k as usize) {
                    *d = (rest % self.p) as u16;
                    rest /= self.p;
                }
                Rv::Poly(c)
            }
        }
    }

    /// Inverse of `element_from_index` on canonical representatives.
    pub fn index_of(&self, x: Rv) -> u64 {
        match self.kind {
            RingKind::Mixed => self.int(x),
            RingKind::Equal => {
                let c = self.coeffs(x);
                let mut idx = 0u64;
                for i in (0..self.k as usize).rev() {
                    idx = idx * self.p + c[i] as u64;
                }
                idx
            }
        }
    }

    /// A generator of the unit group when it is cyclic (the mixed ring), or a
    /// small generating set of units otherwise (the equal ring).
    pub fn unit_generators(&self) -> Vec<Rv> {
        match self.kind {
            RingKind::Mixed => vec![Rv::Int(primitive_root_mod_pk(self.p, self.k))],
            RingKind::Equal => {
                let g = primitive_root_mod_p(self.p);
                let mut out = vec![self.from_u64(g)];
                for j in 1..self.k {
                    let one_plus = self.add(self.one(), self.shift(self.one(), j));
                    out.push(one_plus);
                }
                out
            }
        }
    }

    /// Short human-readable form of x, chiefly for diagnostics.
    pub fn display(&self, x: Rv) -> String {
        match x {
            Rv::Int(v) => v.to_string(),
            Rv::Poly(c) => {
                let parts: Vec<String> = (0..self.k as usize)
                    .filter(|&i| c[i] != 0)
                    .map(|i| match i {
                        0 => c[i].to_string(),
                        1 if c[i] == 1 => "t".to_string(),
                        1 => format!("{}t", c[i]),
                        _ if c[i] == 1 => format!("t^{i}"),
                        _ => format!("{}t^{i}", c[i]),
                    })
                    .collect();
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+")
                }
            }
        }
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    // Extended Euclid; a must be invertible mod m.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not invertible");
    (old_s.rem_euclid(m as i128)) as u64
}

fn primitive_root_mod_p(p: u64) -> u64 {
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut n = phi;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, phi / f, p) != 1))
        .expect("primitive root exists for every odd prime")
}

/// A generator of (Z/p^k)^*, p odd.
pub fn primitive_root_mod_pk(p: u64, k: u32) -> u64 {
    let g = primitive_root_mod_p(p);
    if k == 1 {
        return g;
    }
    if pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Legendre symbol test: is x a nonzero square mod p?
pub fn is_square_mod(x: u64, p: u64) -> bool {
    debug_assert!(x % p != 0);
    pow_mod(x % p, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_basics() {
        let r = Ring::new(RingKind::Mixed, 3, 3).unwrap();
        assert_eq!(r.int_modulus(), 27);
        let x = r.from_u64(12);
        assert_eq!(r.val(x), 1);
        assert_eq!(r.leading_digit(x), 1); // 12 = 3 * 4, 4 mod 3 = 1
        assert_eq!(r.mul(x, r.from_u64(5)), r.from_u64(60 % 27));
        let u = r.from_u64(5);
        assert_eq!(r.mul(u, r.inv(u).unwrap()), r.one());
        assert_eq!(r.inv(x), None);
    }

    #[test]
    fn equal_basics() {
        let r = Ring::new(RingKind::Equal, 3, 3).unwrap();
        let t = r.uniformizer();
        let x = r.add(r.one(), t); // 1 + t
        let y = r.mul(x, x); // 1 + 2t + t^2
        assert_eq!(r.residue(y), 1);
        assert_eq!(r.val(r.sub(y, r.one())), 1);
        assert_eq!(r.mul(x, r.inv(x).unwrap()), r.one());
        assert_eq!(r.val(r.shift(r.one(), 2)), 2);
        // Integer constants land in the prime subfield.
        assert_eq!(r.from_u64(4), r.one());
    }

    #[test]
    fn primitive_roots() {
        for p in [3u64, 5, 7, 11, 13, 17] {
            for k in 1..=3u32 {
                let g = primitive_root_mod_pk(p, k);
                let m = p.pow(k);
                let order_target = m / p * (p - 1); // phi(p^k)
                let mut x = g % m;
                let mut order = 1;
                while x != 1 {
                    x = x * g % m;
                    order += 1;
                }
                assert_eq!(order, order_target, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn element_indexing_roundtrip() {
        for kind in [RingKind::Mixed, RingKind::Equal] {
            let r = Ring::new(kind, 3, 2).unwrap();
            let all = r.all_elements();
            assert_eq!(all.len(), 9);
            for (i, x) in all.iter().enumerate() {
                assert_eq!(r.index_of(*x), i as u64);
            }
        }
    }
}
