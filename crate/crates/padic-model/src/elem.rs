//! Finite-precision elements of the valued ring and the scalar carriers the
//! evaluator computes with.
//!
//! A valued element is either exact (a rational with denominator prime to p,
//! or a polynomial over F_p) or truncated: order known exactly with a window
//! of unit digits, or exhausted (every digit seen so far is zero, so only a
//! lower bound on the order is known). Truncated elements carry a blame mask
//! naming the ambient factors whose limited precision produced them; the
//! volume engine refines the blamed factor when an atom cannot resolve.
//!
//! Value-sort quantities are intervals over Z with +inf and -inf endpoints;
//! +inf dominates addition (inf + x = inf), and negation swaps infinities,
//! which keeps interval addition monotone. Residue quantities are either an
//! exact element of F_p or unknown with a blame mask.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::model::ModelKind;

/// An integer extended with both infinities; the value sort's completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VB {
    NegInf,
    Fin(i64),
    PosInf,
}

impl VB {
    /// Saturating addition where +inf dominates: inf + x = inf for every x,
    /// including -inf. Monotone in each argument under that convention.
    pub fn add(self, other: VB) -> VB {
        match (self, other) {
            (VB::PosInf, _) | (_, VB::PosInf) => VB::PosInf,
            (VB::NegInf, _) | (_, VB::NegInf) => VB::NegInf,
            (VB::Fin(a), VB::Fin(b)) => VB::Fin(a.saturating_add(b)),
        }
    }

    pub fn neg(self) -> VB {
        match self {
            VB::PosInf => VB::NegInf,
            VB::NegInf => VB::PosInf,
            VB::Fin(a) => VB::Fin(a.saturating_neg()),
        }
    }
}

/// Three-valued truth with a blame mask on the unknown branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriVal {
    True,
    False,
    Unknown(u32),
}

impl TriVal {
    pub fn not(self) -> TriVal {
        match self {
            TriVal::True => TriVal::False,
            TriVal::False => TriVal::True,
            TriVal::Unknown(m) => TriVal::Unknown(m),
        }
    }
}

/// Public three-valued truth, blame stripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl From<TriVal> for TriBool {
    fn from(t: TriVal) -> TriBool {
        match t {
            TriVal::True => TriBool::True,
            TriVal::False => TriBool::False,
            TriVal::Unknown(_) => TriBool::Unknown,
        }
    }
}

/// A closed interval of possible values of a value-sort term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValInterval {
    pub lo: VB,
    pub hi: VB,
    pub mask: u32,
}

impl ValInterval {
    pub fn point(v: VB) -> ValInterval {
        ValInterval { lo: v, hi: v, mask: 0 }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &ValInterval) -> ValInterval {
        ValInterval {
            lo: self.lo.add(other.lo),
            hi: self.hi.add(other.hi),
            mask: self.mask | other.mask,
        }
    }

    pub fn neg(&self) -> ValInterval {
        ValInterval { lo: self.hi.neg(), hi: self.lo.neg(), mask: self.mask }
    }

    pub fn leq(&self, other: &ValInterval) -> TriVal {
        if self.hi <= other.lo {
            TriVal::True
        } else if self.lo > other.hi {
            TriVal::False
        } else {
            TriVal::Unknown(self.mask | other.mask)
        }
    }

    pub fn eq(&self, other: &ValInterval) -> TriVal {
        if self.is_point() && other.is_point() && self.lo == other.lo {
            TriVal::True
        } else if self.hi < other.lo || other.hi < self.lo {
            TriVal::False
        } else {
            TriVal::Unknown(self.mask | other.mask)
        }
    }

    /// Congruence mod n; any infinite value falls outside every congruence
    /// class, so a resolved infinity is False rather than Unknown.
    pub fn cong(&self, other: &ValInterval, n: u64) -> TriVal {
        match (self.is_point(), other.is_point()) {
            (true, true) => match (self.lo, other.lo) {
                (VB::Fin(a), VB::Fin(b)) => {
                    let n = n as i64;
                    if (a - b).rem_euclid(n) == 0 {
                        TriVal::True
                    } else {
                        TriVal::False
                    }
                }
                _ => TriVal::False,
            },
            _ => TriVal::Unknown(self.mask | other.mask),
        }
    }
}

/// A residue-field scalar: exact in F_p, or unknown with blame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResValue {
    Exact(u64),
    Unknown(u32),
}

/// An exact valued element: infinite-precision arithmetic is available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactElem {
    /// Mixed characteristic: a rational with denominator prime to p.
    Rat(BigRational),
    /// Equal characteristic: coefficients over F_p, trailing zeros trimmed;
    /// the empty vector is zero.
    Pol(Vec<u64>),
}

/// A truncated valued element. With digits present the order is exactly `v`
/// and the unit part is known to relative precision digits.len() (leading
/// digit nonzero); with digits empty the element is exhausted: every digit
/// below position `v` is zero and only ord >= v is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trunc {
    pub v: i64,
    pub digits: Vec<u64>,
    pub mask: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Elem {
    Exact(ExactElem),
    Trunc(Trunc),
}

/// Arithmetic context: the residue characteristic and the ring kind. Depth is
/// not needed here; precision travels with each element.
#[derive(Debug, Clone, Copy)]
pub struct Arith {
    pub p: u64,
    pub kind: ModelKind,
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    classical_groups::fqlin::inv_mod(a % p, p)
}

/// v_p of a nonzero big integer together with the remaining unit.
fn split_valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    let p = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = u.div_rem(&p);
        if r.is_zero() {
            u = q;
            v += 1;
        } else {
            return (v, u);
        }
    }
}

impl Arith {
    pub fn exact_zero(&self) -> Elem {
        match self.kind {
            ModelKind::MixedChar => Elem::Exact(ExactElem::Rat(BigRational::zero())),
            ModelKind::EqualChar => Elem::Exact(ExactElem::Pol(Vec::new())),
        }
    }

    /// Embed an integer constant. In equal characteristic the integers map
    /// onto the constant polynomials through F_p.
    pub fn exact_int(&self, n: &BigInt) -> Elem {
        match self.kind {
            ModelKind::MixedChar => Elem::Exact(ExactElem::Rat(BigRational::from(n.clone()))),
            ModelKind::EqualChar => {
                let r = n.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits");
                Elem::Exact(ExactElem::Pol(if r == 0 { Vec::new() } else { vec![r] }))
            }
        }
    }

    /// Embed a rational constant; the caller has already checked that the
    /// denominator is prime to p.
    pub fn exact_rat(&self, r: &BigRational) -> Elem {
        match self.kind {
            ModelKind::MixedChar => Elem::Exact(ExactElem::Rat(r.clone())),
            ModelKind::EqualChar => {
                let p = BigInt::from(self.p);
                let num = r.numer().mod_floor(&p).to_u64().expect("residue fits");
                let den = r.denom().mod_floor(&p).to_u64().expect("residue fits");
                let c = num * inv_mod_p(den, self.p) % self.p;
                Elem::Exact(ExactElem::Pol(if c == 0 { Vec::new() } else { vec![c] }))
            }
        }
    }

    /// Embed a point of O/pi^k as its exact canonical lift: the integer
    /// 0 <= code < p^k in mixed characteristic, the polynomial with the
    /// base-p digits of the code as coefficients in equal characteristic.
    pub fn point(&self, code: u64) -> Elem {
        match self.kind {
            ModelKind::MixedChar => Elem::Exact(ExactElem::Rat(BigRational::from(BigInt::from(code)))),
            ModelKind::EqualChar => {
                let mut c = code;
                let mut coeffs = Vec::new();
                while c > 0 {
                    coeffs.push(c % self.p);
                    c /= self.p;
                }
                Elem::Exact(ExactElem::Pol(coeffs))
            }
        }
    }

    /// Embed a cell coordinate known modulo pi^level, blamed on the ambient
    /// factors in `mask`.
    pub fn cell(&self, code: u64, level: u32, mask: u32) -> Elem {
        let mut digits = Vec::with_capacity(level as usize);
        let mut c = code;
        for _ in 0..level {
            digits.push(c % self.p);
            c /= self.p;
        }
        match digits.iter().position(|&d| d != 0) {
            Some(t) => Elem::Trunc(Trunc { v: t as i64, digits: digits.split_off(t), mask }),
            None => Elem::Trunc(Trunc { v: level as i64, digits: Vec::new(), mask }),
        }
    }

    fn is_exact_zero(e: &Elem) -> bool {
        match e {
            Elem::Exact(ExactElem::Rat(r)) => r.is_zero(),
            Elem::Exact(ExactElem::Pol(c)) => c.is_empty(),
            Elem::Trunc(_) => false,
        }
    }

    /// Absolute position below which all further digits are known: +inf for
    /// exact elements, v + len for units, v for exhausted elements.
    fn horizon(e: &Elem) -> VB {
        match e {
            Elem::Exact(_) => VB::PosInf,
            Elem::Trunc(t) => VB::Fin(t.v + t.digits.len() as i64),
        }
    }

    /// First position that may hold a nonzero digit (exact zero: +inf).
    fn support_start(&self, e: &Elem) -> VB {
        match e {
            Elem::Exact(ExactElem::Rat(r)) => {
                if r.is_zero() {
                    VB::PosInf
                } else {
                    VB::Fin(split_valuation(r.numer(), self.p).0)
                }
            }
            Elem::Exact(ExactElem::Pol(c)) => match c.iter().position(|&d| d != 0) {
                Some(i) => VB::Fin(i as i64),
                None => VB::PosInf,
            },
            Elem::Trunc(t) => VB::Fin(t.v),
        }
    }

    fn mask(e: &Elem) -> u32 {
        match e {
            Elem::Exact(_) => 0,
            Elem::Trunc(t) => t.mask,
        }
    }

    /// Digits of e at positions start..start+len; the caller keeps len within
    /// the element's horizon. Positions below the support are zero.
    pub(crate) fn window(&self, e: &Elem, start: i64, len: usize) -> Vec<u64> {
        let mut out = vec![0u64; len];
        match e {
            Elem::Exact(ExactElem::Rat(r)) => {
                if r.is_zero() {
                    return out;
                }
                debug_assert!(start >= 0, "valued terms stay integral");
                let h = start as u32 + len as u32;
                let modulus = BigInt::from(self.p).pow(h);
                let den = r.denom().mod_floor(&modulus);
                let den_inv = den.modinv(&modulus).expect("denominator prime to p");
                let code = (r.numer().mod_floor(&modulus) * den_inv).mod_floor(&modulus);
                let mut c: BigUint = code.to_biguint().expect("normalized residue");
                let p = BigUint::from(self.p);
                for i in 0..(start as usize + len) {
                    let (q, rem) = c.div_rem(&p);
                    if i >= start as usize {
                        out[i - start as usize] = rem.to_u64().expect("digit fits");
                    }
                    c = q;
                }
            }
            Elem::Exact(ExactElem::Pol(coeffs)) => {
                for (i, slot) in out.iter_mut().enumerate() {
                    let pos = start + i as i64;
                    if pos >= 0 && (pos as usize) < coeffs.len() {
                        *slot = coeffs[pos as usize];
                    }
                }
            }
            Elem::Trunc(t) => {
                for (i, slot) in out.iter_mut().enumerate() {
                    let pos = start + i as i64;
                    if pos >= t.v {
                        let idx = (pos - t.v) as usize;
                        debug_assert!(idx < t.digits.len(), "window exceeds horizon");
                        *slot = t.digits[idx];
                    }
                }
            }
        }
        out
    }

    fn digits_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        match self.kind {
            ModelKind::MixedChar => {
                let mut out = Vec::with_capacity(a.len());
                let mut carry = 0u64;
                for (&x, &y) in a.iter().zip(b) {
                    let s = x + y + carry;
                    out.push(s % self.p);
                    carry = s / self.p;
                }
                out
            }
            ModelKind::EqualChar => a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect(),
        }
    }

    fn digits_neg(&self, a: &[u64]) -> Vec<u64> {
        match self.kind {
            ModelKind::MixedChar => {
                // p-complement: subtract from zero with borrow.
                let mut out = Vec::with_capacity(a.len());
                let mut borrow = 0u64;
                for &x in a {
                    let need = x + borrow;
                    if need == 0 {
                        out.push(0);
                        borrow = 0;
                    } else {
                        out.push(self.p - need);
                        borrow = 1;
                    }
                }
                out
            }
            ModelKind::EqualChar => a.iter().map(|&x| (self.p - x) % self.p).collect(),
        }
    }

    fn digits_mul(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let mut out = vec![0u64; len];
        match self.kind {
            ModelKind::MixedChar => {
                let mut carry = 0u128;
                for i in 0..len {
                    let mut acc = carry;
                    for j in 0..=i {
                        if j < a.len() && i - j < b.len() {
                            acc += a[j] as u128 * b[i - j] as u128;
                        }
                    }
                    out[i] = (acc % self.p as u128) as u64;
                    carry = acc / self.p as u128;
                }
            }
            ModelKind::EqualChar => {
                for i in 0..len {
                    let mut acc = 0u128;
                    for j in 0..=i {
                        if j < a.len() && i - j < b.len() {
                            acc += a[j] as u128 * b[i - j] as u128;
                        }
                    }
                    out[i] = (acc % self.p as u128) as u64;
                }
            }
        }
        out
    }

    /// Normalize a digit window starting at `start` with horizon start+len
    /// into an element: strip leading zeros, exhausted when all zero.
    fn from_window(&self, start: i64, digits: Vec<u64>, mask: u32) -> Elem {
        match digits.iter().position(|&d| d != 0) {
            Some(t) => {
                let mut digits = digits;
                Elem::Trunc(Trunc { v: start + t as i64, digits: digits.split_off(t), mask })
            }
            None => Elem::Trunc(Trunc { v: start + digits.len() as i64, digits: Vec::new(), mask }),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        if Self::is_exact_zero(a) {
            return b.clone();
        }
        if Self::is_exact_zero(b) {
            return a.clone();
        }
        if let (Elem::Exact(x), Elem::Exact(y)) = (a, b) {
            return Elem::Exact(match (x, y) {
                (ExactElem::Rat(r), ExactElem::Rat(s)) => ExactElem::Rat(r + s),
                (ExactElem::Pol(c), ExactElem::Pol(d)) => {
                    let n = c.len().max(d.len());
                    let mut out: Vec<u64> = (0..n)
                        .map(|i| {
                            (c.get(i).copied().unwrap_or(0) + d.get(i).copied().unwrap_or(0))
                                % self.p
                        })
                        .collect();
                    while out.last() == Some(&0) {
                        out.pop();
                    }
                    ExactElem::Pol(out)
                }
                _ => unreachable!("both operands share the model kind"),
            });
        }
        let VB::Fin(h) = Self::horizon(a).min(Self::horizon(b)) else {
            unreachable!("one operand is truncated")
        };
        let start = match self.support_start(a).min(self.support_start(b)) {
            VB::Fin(s) => s.min(h),
            _ => h,
        };
        let len = (h - start) as usize;
        let wa = self.window(a, start, len);
        let wb = self.window(b, start, len);
        let sum = self.digits_add(&wa, &wb);
        self.from_window(start, sum, Self::mask(a) | Self::mask(b))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Exact(ExactElem::Rat(r)) => Elem::Exact(ExactElem::Rat(-r)),
            Elem::Exact(ExactElem::Pol(c)) => {
                Elem::Exact(ExactElem::Pol(c.iter().map(|&x| (self.p - x) % self.p).collect()))
            }
            Elem::Trunc(t) => {
                Elem::Trunc(Trunc { v: t.v, digits: self.digits_neg(&t.digits), mask: t.mask })
            }
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if Self::is_exact_zero(a) || Self::is_exact_zero(b) {
            // Exact zero absorbs even unresolved precision: 0 * x = 0.
            return self.exact_zero();
        }
        if let (Elem::Exact(x), Elem::Exact(y)) = (a, b) {
            return Elem::Exact(match (x, y) {
                (ExactElem::Rat(r), ExactElem::Rat(s)) => ExactElem::Rat(r * s),
                (ExactElem::Pol(c), ExactElem::Pol(d)) => {
                    let mut out = vec![0u64; c.len() + d.len() - 1];
                    for (i, &ci) in c.iter().enumerate() {
                        for (j, &dj) in d.iter().enumerate() {
                            out[i + j] = (out[i + j] + ci * dj) % self.p;
                        }
                    }
                    while out.last() == Some(&0) {
                        out.pop();
                    }
                    ExactElem::Pol(out)
                }
                _ => unreachable!("both operands share the model kind"),
            });
        }
        let mask = Self::mask(a) | Self::mask(b);
        let exhausted =
            |e: &Elem| matches!(e, Elem::Trunc(t) if t.digits.is_empty());
        if exhausted(a) || exhausted(b) {
            let lo = |e: &Elem| match self.support_start(e) {
                VB::Fin(s) => s,
                VB::PosInf | VB::NegInf => unreachable!("exact zeros handled above"),
            };
            return Elem::Trunc(Trunc { v: lo(a) + lo(b), digits: Vec::new(), mask });
        }
        // Both operands have exact order and at least one unit digit.
        let (va, pa) = self.unit_shape(a);
        let (vb, pb) = self.unit_shape(b);
        let len = pa.min(pb);
        let ua = self.window(a, va, len);
        let ub = self.window(b, vb, len);
        let prod = self.digits_mul(&ua, &ub, len);
        debug_assert_ne!(prod[0], 0, "product of units is a unit");
        Elem::Trunc(Trunc { v: va + vb, digits: prod, mask })
    }

    /// (order, relative digit precision) of a non-exhausted, nonzero element.
    /// Exact elements get a generous precision: callers cap by the partner.
    fn unit_shape(&self, e: &Elem) -> (i64, usize) {
        match e {
            Elem::Exact(_) => match self.support_start(e) {
                VB::Fin(v) => (v, usize::MAX),
                VB::PosInf | VB::NegInf => unreachable!("nonzero by caller"),
            },
            Elem::Trunc(t) => (t.v, t.digits.len()),
        }
    }

    pub fn ord(&self, e: &Elem) -> ValInterval {
        let mask = Self::mask(e);
        match self.support_start(e) {
            VB::PosInf => ValInterval { lo: VB::PosInf, hi: VB::PosInf, mask },
            VB::Fin(v) => match e {
                Elem::Trunc(t) if t.digits.is_empty() => {
                    ValInterval { lo: VB::Fin(v), hi: VB::PosInf, mask }
                }
                _ => ValInterval { lo: VB::Fin(v), hi: VB::Fin(v), mask },
            },
            VB::NegInf => unreachable!("ring elements have nonnegative order"),
        }
    }

    pub fn ac(&self, e: &Elem) -> ResValue {
        match e {
            Elem::Exact(ExactElem::Rat(r)) => {
                if r.is_zero() {
                    return ResValue::Exact(0);
                }
                let (_, unit) = split_valuation(r.numer(), self.p);
                let p = BigInt::from(self.p);
                let num = unit.mod_floor(&p).to_u64().expect("residue fits");
                let den = r.denom().mod_floor(&p).to_u64().expect("residue fits");
                ResValue::Exact(num * inv_mod_p(den, self.p) % self.p)
            }
            Elem::Exact(ExactElem::Pol(c)) => {
                ResValue::Exact(c.iter().find(|&&d| d != 0).copied().unwrap_or(0))
            }
            Elem::Trunc(t) => {
                if t.digits.is_empty() {
                    ResValue::Unknown(t.mask)
                } else {
                    ResValue::Exact(t.digits[0])
                }
            }
        }
    }

    pub fn res_add(&self, a: ResValue, b: ResValue) -> ResValue {
        match (a, b) {
            (ResValue::Exact(x), ResValue::Exact(y)) => ResValue::Exact((x + y) % self.p),
            (ResValue::Unknown(m), ResValue::Exact(_))
            | (ResValue::Exact(_), ResValue::Unknown(m)) => ResValue::Unknown(m),
            (ResValue::Unknown(m), ResValue::Unknown(n)) => ResValue::Unknown(m | n),
        }
    }

    pub fn res_mul(&self, a: ResValue, b: ResValue) -> ResValue {
        match (a, b) {
            (ResValue::Exact(x), ResValue::Exact(y)) => ResValue::Exact(x * y % self.p),
            (ResValue::Exact(0), ResValue::Unknown(_))
            | (ResValue::Unknown(_), ResValue::Exact(0)) => ResValue::Exact(0),
            (ResValue::Unknown(m), ResValue::Exact(_))
            | (ResValue::Exact(_), ResValue::Unknown(m)) => ResValue::Unknown(m),
            (ResValue::Unknown(m), ResValue::Unknown(n)) => ResValue::Unknown(m | n),
        }
    }

    pub fn res_neg(&self, a: ResValue) -> ResValue {
        match a {
            ResValue::Exact(x) => ResValue::Exact((self.p - x) % self.p),
            unknown => unknown,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelKind::{EqualChar, MixedChar};

    fn mixed() -> Arith {
        Arith { p: 3, kind: MixedChar }
    }

    fn equal() -> Arith {
        Arith { p: 3, kind: EqualChar }
    }

    fn ord_point(a: &Arith, e: &Elem) -> VB {
        let i = a.ord(e);
        assert_eq!(i.lo, i.hi, "expected a resolved order");
        i.lo
    }

    #[test]
    fn exact_points_have_exact_order_and_leading_digit() {
        for arith in [mixed(), equal()] {
            let e = arith.point(6); // 2*3
            assert_eq!(ord_point(&arith, &e), VB::Fin(1));
            assert_eq!(arith.ac(&e), ResValue::Exact(2));
            let z = arith.point(0);
            assert_eq!(ord_point(&arith, &z), VB::PosInf);
            assert_eq!(arith.ac(&z), ResValue::Exact(0));
        }
    }

    #[test]
    fn cell_embedding_splits_unit_and_exhausted() {
        let arith = mixed();
        let unit = arith.cell(6, 2, 0b10);
        assert_eq!(ord_point(&arith, &unit), VB::Fin(1));
        assert_eq!(arith.ac(&unit), ResValue::Exact(2));
        let zero = arith.cell(0, 2, 0b10);
        assert_eq!(arith.ord(&zero), ValInterval { lo: VB::Fin(2), hi: VB::PosInf, mask: 0b10 });
        assert_eq!(arith.ac(&zero), ResValue::Unknown(0b10));
    }

    #[test]
    fn mixed_addition_carries_and_cancels() {
        let arith = mixed();
        // 2 + 1 = 3: the carry pushes the order up.
        let s = arith.add(&arith.cell(2, 3, 1), &arith.cell(1, 3, 2));
        assert_eq!(ord_point(&arith, &s), VB::Fin(1));
        assert_eq!(arith.ac(&s), ResValue::Exact(1));
        match s {
            Elem::Trunc(t) => assert_eq!(t.mask, 3),
            _ => panic!("sum of cells is truncated"),
        }
        // Cancellation below the horizon leaves an exhausted element.
        let d = arith.sub(&arith.cell(4, 2, 1), &arith.cell(4, 2, 1));
        assert_eq!(arith.ord(&d), ValInterval { lo: VB::Fin(2), hi: VB::PosInf, mask: 1 });
    }

    #[test]
    fn equal_char_addition_has_no_carries() {
        let arith = equal();
        // (2 + 2t) + (1 + t): coefficientwise mod 3 -> 3 + 3t = 0, exhausted.
        let s = arith.add(&arith.cell(8, 2, 1), &arith.cell(4, 2, 1));
        assert_eq!(arith.ord(&s), ValInterval { lo: VB::Fin(2), hi: VB::PosInf, mask: 1 });
        // Same digits in mixed characteristic carry: 8 + 4 = 12 = 110_3.
        let m = mixed().add(&mixed().cell(8, 2, 1), &mixed().cell(4, 2, 1));
        assert_eq!(ord_point(&mixed(), &m), VB::Fin(1));
    }

    #[test]
    fn multiplication_adds_orders_and_keeps_min_precision() {
        let arith = mixed();
        let a = arith.cell(6, 2, 1); // ord 1, one digit known
        let b = arith.point(3); // exact, ord 1
        let prod = arith.mul(&a, &b);
        match &prod {
            Elem::Trunc(t) => {
                assert_eq!(t.v, 2);
                assert_eq!(t.digits, vec![2]);
            }
            _ => panic!("mixing exact with truncated truncates"),
        }
        let z = arith.mul(&a, &arith.exact_zero());
        assert_eq!(z, arith.exact_zero());
    }

    #[test]
    fn exhausted_factors_poison_the_order() {
        let arith = mixed();
        let e = arith.cell(0, 2, 1); // ord >= 2
        let u = arith.cell(1, 2, 2); // unit
        match arith.mul(&e, &u) {
            Elem::Trunc(t) => {
                assert!(t.digits.is_empty());
                assert_eq!(t.v, 2);
                assert_eq!(t.mask, 3);
            }
            _ => panic!("product with exhausted factor is exhausted"),
        }
    }

    #[test]
    fn rational_windows_follow_the_padic_expansion() {
        let arith = mixed();
        let half = arith.exact_rat(&BigRational::new(BigInt::from(1), BigInt::from(2)));
        // 1/2 = 2 + 3 + 9 + 27 + ... in Z_3: digits 2,1,1,1,...
        let w = arith.window(&half, 0, 4);
        assert_eq!(w, vec![2, 1, 1, 1]);
        let mixed_sum = arith.add(&half, &arith.cell(1, 3, 1));
        // 1/2 + 1 = 3/2: ord 0 digits 0+... => 2+1=3 carries: 0,2,1.
        match mixed_sum {
            Elem::Trunc(t) => {
                assert_eq!(t.v, 1);
                assert_eq!(t.digits, vec![2, 1]);
            }
            _ => panic!("sum with a cell is truncated"),
        }
    }

    #[test]
    fn interval_relations_resolve_only_when_forced() {
        let a = ValInterval::point(VB::Fin(2));
        let b = ValInterval { lo: VB::Fin(1), hi: VB::PosInf, mask: 4 };
        assert_eq!(a.leq(&b), TriVal::Unknown(4));
        assert_eq!(ValInterval::point(VB::Fin(0)).leq(&b), TriVal::True);
        assert_eq!(b.leq(&ValInterval::point(VB::Fin(0))), TriVal::False);
        assert_eq!(
            ValInterval::point(VB::PosInf).eq(&ValInterval::point(VB::PosInf)),
            TriVal::True
        );
        assert_eq!(a.cong(&ValInterval::point(VB::Fin(0)), 2), TriVal::True);
        assert_eq!(ValInterval::point(VB::PosInf).cong(&ValInterval::point(VB::Fin(0)), 2), TriVal::False);
    }

    #[test]
    fn infinity_dominates_value_addition() {
        assert_eq!(VB::PosInf.add(VB::NegInf), VB::PosInf);
        assert_eq!(VB::NegInf.add(VB::Fin(5)), VB::NegInf);
        assert_eq!(VB::Fin(2).add(VB::Fin(3)), VB::Fin(5));
        assert_eq!(VB::PosInf.neg(), VB::NegInf);
    }
}
