//! Reference evaluator for finite-precision valued-field models.
//!
//! This crate re-derives the model semantics from scratch so that tests can
//! cross-check the interval-based engine against an implementation that
//! shares no code with it. A valued point is its canonical lift: a rational
//! number in the mixed-characteristic reading, a polynomial over F_p in the
//! equal-characteristic one. Term arithmetic is exact in Q or F_p[t],
//! equality of valued terms is congruence of lifts at the working depth k,
//! and quantifiers enumerate their whole (finite) range: residue variables
//! over F_p, valued variables over all p^k residue codes, value variables
//! over [-B, B]. Every formula therefore resolves to a plain bool.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use pas_lang::{Formula, FormulaRef, Sort, TermNode, TermRef, Var};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// Lifts are rational numbers; the ring is Z/p^k.
    Mixed,
    /// Lifts are polynomials over F_p; the ring is F_p[t]/(t^k).
    Equal,
}

#[derive(Debug, Clone)]
pub struct OracleModel {
    pub p: u64,
    pub k: u32,
    /// Value-sort quantifiers range over [-value_bound, value_bound].
    pub value_bound: i64,
    pub kind: OracleKind,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("free variable `{0}` has no assigned code")]
    Unassigned(String),
    #[error("free variable `{0}` is not of the valued sort")]
    NotValued(String),
    #[error("code {code} out of range for p^k = {room}")]
    CodeRange { code: u64, room: u64 },
    #[error("rational constant denominator vanishes in the residue field")]
    BadDenominator,
}

/// Canonical lift of a valued element.
#[derive(Debug, Clone)]
enum Lift {
    Rat(BigRational),
    /// Coefficients of t^0, t^1, ...; all < p, trailing zeros trimmed.
    Pol(Vec<u64>),
}

/// A value-sort number: the integers extended by both infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Num {
    NegInf,
    Fin(i64),
    PosInf,
}

#[derive(Debug, Clone)]
enum Val {
    Lift(Lift),
    Res(u64),
    Num(Num),
}

impl OracleModel {
    fn room(&self) -> u64 {
        self.p.checked_pow(self.k).expect("p^k fits u64")
    }

    fn lift_of_code(&self, code: u64) -> Lift {
        match self.kind {
            OracleKind::Mixed => Lift::Rat(BigRational::from(BigInt::from(code))),
            OracleKind::Equal => {
                let mut digits = Vec::new();
                let mut c = code;
                while c > 0 {
                    digits.push(c % self.p);
                    c /= self.p;
                }
                Lift::Pol(digits)
            }
        }
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pol_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + y) % p;
    }
    trim(out)
}

fn pol_neg(a: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|&c| (p - c) % p).collect()
}

fn pol_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Multiplicative inverse mod a prime, by Fermat.
fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Exponent of p in a nonzero integer.
fn p_exponent(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    e
}

fn residue_of_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64")
}

struct Eval<'a> {
    m: &'a OracleModel,
    env: Vec<(String, Val)>,
}

impl Eval<'_> {
    fn lookup(&self, name: &str) -> Option<&Val> {
        self.env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn ord_of(&self, lift: &Lift) -> Num {
        match lift {
            Lift::Rat(r) => {
                if r.is_zero() {
                    Num::PosInf
                } else {
                    Num::Fin(p_exponent(r.numer(), self.m.p) - p_exponent(r.denom(), self.m.p))
                }
            }
            Lift::Pol(c) => match c.iter().position(|&d| d != 0) {
                Some(i) => Num::Fin(i as i64),
                None => Num::PosInf,
            },
        }
    }

    fn ac_of(&self, lift: &Lift) -> u64 {
        let p = self.m.p;
        match lift {
            Lift::Rat(r) => {
                if r.is_zero() {
                    return 0;
                }
                let vn = p_exponent(r.numer(), p);
                let vd = p_exponent(r.denom(), p);
                let shift = BigInt::from(p).pow(vn.max(vd) as u32);
                let (num, den) = if vn >= vd {
                    (r.numer() * BigInt::from(p).pow(vd as u32), r.denom() * &shift / BigInt::from(p).pow(vd as u32))
                } else {
                    (r.numer() * &shift / BigInt::from(p).pow(vn as u32), r.denom() * BigInt::from(p).pow(vn as u32))
                };
                // num/den is now the unit part r * p^(-ord): both prime to p.
                let n = residue_of_int(&(num / BigInt::from(p).pow(vn as u32) * BigInt::from(p).pow(vn as u32)), p);
                let _ = n;
                let unit_num = residue_of_int(&num, p);
                let unit_den = residue_of_int(&den, p);
                unit_num * inv_mod(unit_den, p) % p
            }
            Lift::Pol(c) => c.iter().find(|&&d| d != 0).copied().unwrap_or(0),
        }
    }

    fn term(&mut self, t: &TermRef) -> Result<Val, OracleError> {
        let p = self.m.p;
        Ok(match t.node() {
            TermNode::Int(n) => match t.sort() {
                Sort::Valued => Val::Lift(match self.m.kind {
                    OracleKind::Mixed => Lift::Rat(BigRational::from(n.clone())),
                    OracleKind::Equal => Lift::Pol(trim(vec![residue_of_int(n, p)])),
                }),
                Sort::Residue => Val::Res(residue_of_int(n, p)),
                Sort::Value => Val::Num(Num::Fin(n.to_i64().expect("value constant fits i64"))),
            },
            TermNode::Rat(r) => Val::Lift(match self.m.kind {
                OracleKind::Mixed => Lift::Rat(r.clone()),
                OracleKind::Equal => {
                    let den = residue_of_int(r.denom(), p);
                    if den == 0 {
                        return Err(OracleError::BadDenominator);
                    }
                    let num = residue_of_int(r.numer(), p);
                    Lift::Pol(trim(vec![num * inv_mod(den, p) % p]))
                }
            }),
            TermNode::Var(v) => match self.lookup(&v.name) {
                Some(val) => val.clone(),
                None => return Err(OracleError::Unassigned(v.name.clone())),
            },
            TermNode::Add(a, b) => {
                let x = self.term(a)?;
                let y = self.term(b)?;
                match (x, y) {
                    (Val::Lift(Lift::Rat(r)), Val::Lift(Lift::Rat(s))) => {
                        Val::Lift(Lift::Rat(r + s))
                    }
                    (Val::Lift(Lift::Pol(c)), Val::Lift(Lift::Pol(d))) => {
                        Val::Lift(Lift::Pol(pol_add(&c, &d, p)))
                    }
                    (Val::Res(a), Val::Res(b)) => Val::Res((a + b) % p),
                    // Addition is dominated by +inf, as in the engine's
                    // saturating value arithmetic.
                    (Val::Num(a), Val::Num(b)) => Val::Num(match (a, b) {
                        (Num::PosInf, _) | (_, Num::PosInf) => Num::PosInf,
                        (Num::NegInf, _) | (_, Num::NegInf) => Num::NegInf,
                        (Num::Fin(x), Num::Fin(y)) => Num::Fin(x + y),
                    }),
                    _ => unreachable!("operands share the term's sort"),
                }
            }
            TermNode::Mul(a, b) => {
                let x = self.term(a)?;
                let y = self.term(b)?;
                match (x, y) {
                    (Val::Lift(Lift::Rat(r)), Val::Lift(Lift::Rat(s))) => {
                        Val::Lift(Lift::Rat(r * s))
                    }
                    (Val::Lift(Lift::Pol(c)), Val::Lift(Lift::Pol(d))) => {
                        Val::Lift(Lift::Pol(pol_mul(&c, &d, p)))
                    }
                    (Val::Res(a), Val::Res(b)) => Val::Res(a * b % p),
                    _ => unreachable!("value-sort multiplication is rejected at construction"),
                }
            }
            TermNode::Neg(a) => match self.term(a)? {
                Val::Lift(Lift::Rat(r)) => Val::Lift(Lift::Rat(-r)),
                Val::Lift(Lift::Pol(c)) => Val::Lift(Lift::Pol(pol_neg(&c, p))),
                Val::Res(a) => Val::Res((p - a) % p),
                Val::Num(n) => Val::Num(match n {
                    Num::PosInf => Num::NegInf,
                    Num::NegInf => Num::PosInf,
                    Num::Fin(x) => Num::Fin(-x),
                }),
            },
            TermNode::Ord(a) => match self.term(a)? {
                Val::Lift(l) => Val::Num(self.ord_of(&l)),
                _ => unreachable!("ord takes a valued argument"),
            },
            TermNode::Ac(a) => match self.term(a)? {
                Val::Lift(l) => Val::Res(self.ac_of(&l)),
                _ => unreachable!("ac takes a valued argument"),
            },
            TermNode::Inf => Val::Num(Num::PosInf),
        })
    }

    /// Congruence of lifts at the working depth: ord(a - b) >= k.
    fn lifts_congruent(&mut self, a: &TermRef, b: &TermRef) -> Result<bool, OracleError> {
        let x = self.term(a)?;
        let y = self.term(b)?;
        let diff = match (x, y) {
            (Val::Lift(Lift::Rat(r)), Val::Lift(Lift::Rat(s))) => Lift::Rat(r - s),
            (Val::Lift(Lift::Pol(c)), Val::Lift(Lift::Pol(d))) => {
                Lift::Pol(pol_add(&c, &pol_neg(&d, self.m.p), self.m.p))
            }
            _ => unreachable!("operands share the valued sort"),
        };
        Ok(match self.ord_of(&diff) {
            Num::PosInf => true,
            Num::Fin(v) => v >= self.m.k as i64,
            Num::NegInf => unreachable!("ord of a lift is never -inf"),
        })
    }

    fn equal(&mut self, a: &TermRef, b: &TermRef) -> Result<bool, OracleError> {
        Ok(match a.sort() {
            Sort::Valued => self.lifts_congruent(a, b)?,
            Sort::Residue => {
                let (x, y) = (self.term(a)?, self.term(b)?);
                match (x, y) {
                    (Val::Res(u), Val::Res(v)) => u == v,
                    _ => unreachable!("operands share the residue sort"),
                }
            }
            Sort::Value => {
                let (x, y) = (self.term(a)?, self.term(b)?);
                match (x, y) {
                    (Val::Num(u), Val::Num(v)) => u == v,
                    _ => unreachable!("operands share the value sort"),
                }
            }
        })
    }

    fn num(&mut self, t: &TermRef) -> Result<Num, OracleError> {
        match self.term(t)? {
            Val::Num(n) => Ok(n),
            _ => unreachable!("value-sorted term"),
        }
    }

    fn formula(&mut self, f: &FormulaRef) -> Result<bool, OracleError> {
        Ok(match f.as_ref() {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(a, b) => self.equal(a, b)?,
            Formula::Neq(a, b) => !self.equal(a, b)?,
            Formula::Leq(a, b) => {
                let (x, y) = (self.num(a)?, self.num(b)?);
                match (x, y) {
                    (Num::NegInf, _) | (_, Num::PosInf) => true,
                    (Num::PosInf, _) | (_, Num::NegInf) => false,
                    (Num::Fin(u), Num::Fin(v)) => u <= v,
                }
            }
            Formula::CongMod(n, a, b) => {
                let (x, y) = (self.num(a)?, self.num(b)?);
                match (x, y) {
                    (Num::Fin(u), Num::Fin(v)) => {
                        (i128::from(u) - i128::from(v)).rem_euclid(i128::from(*n)) == 0
                    }
                    // An infinite order never satisfies a congruence.
                    _ => false,
                }
            }
            Formula::And(a, b) => self.formula(a)? && self.formula(b)?,
            Formula::Or(a, b) => self.formula(a)? || self.formula(b)?,
            Formula::Not(a) => !self.formula(a)?,
            Formula::Forall(v, body) => !self.search(v, body, false)?,
            Formula::Exists(v, body) => self.search(v, body, true)?,
        })
    }

    /// Scan the range of `v` for a witness making `body` equal `target`.
    /// Exists(v, body) holds iff search(true); Forall(v, body) holds iff
    /// !search(false).
    fn search(&mut self, v: &Var, body: &FormulaRef, target: bool) -> Result<bool, OracleError> {
        let candidates: Vec<Val> = match v.sort {
            Sort::Residue => (0..self.m.p).map(Val::Res).collect(),
            Sort::Value => (-self.m.value_bound..=self.m.value_bound)
                .map(|n| Val::Num(Num::Fin(n)))
                .collect(),
            Sort::Valued => {
                (0..self.m.room()).map(|c| Val::Lift(self.m.lift_of_code(c))).collect()
            }
        };
        for val in candidates {
            self.env.push((v.name.clone(), val));
            let hit = self.formula(body)? == target;
            self.env.pop();
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Evaluate `f` at the point whose free (valued) variables carry the given
/// residue codes mod p^k. Every free variable must be assigned; extra names
/// in `point` are ignored.
pub fn eval_at_codes(
    m: &OracleModel,
    f: &FormulaRef,
    point: &BTreeMap<String, u64>,
) -> Result<bool, OracleError> {
    let room = m.room();
    let mut env = Vec::new();
    for var in pas_lang::free_vars(f) {
        if var.sort != Sort::Valued {
            return Err(OracleError::NotValued(var.name));
        }
        let Some(&code) = point.get(&var.name) else {
            return Err(OracleError::Unassigned(var.name));
        };
        if code >= room {
            return Err(OracleError::CodeRange { code, room });
        }
        env.push((var.name, Val::Lift(m.lift_of_code(code))));
    }
    Eval { m, env }.formula(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pas_lang::parse_formula;

    fn mixed(p: u64, k: u32) -> OracleModel {
        OracleModel { p, k, value_bound: k as i64, kind: OracleKind::Mixed }
    }

    fn equal(p: u64, k: u32) -> OracleModel {
        OracleModel { p, k, value_bound: k as i64, kind: OracleKind::Equal }
    }

    fn at(m: &OracleModel, src: &str, codes: &[(&str, u64)]) -> bool {
        let f = parse_formula(src).unwrap();
        let point = codes.iter().map(|&(n, c)| (n.to_string(), c)).collect();
        eval_at_codes(m, &f, &point).unwrap()
    }

    #[test]
    fn order_and_angular_component_of_mixed_lifts() {
        let m = mixed(3, 2);
        assert!(at(&m, "ord(x) = 1", &[("x", 6)]));
        assert!(at(&m, "ac(x) = 2", &[("x", 6)]));
        assert!(at(&m, "ord(x) = inf", &[("x", 0)]));
        assert!(at(&m, "ac(x) = 0", &[("x", 0)]));
        // 1/2 is a unit whose residue is the inverse of 2 mod 3.
        assert!(at(&m, "ac(x * x - 1/2 + 1/2) = 1", &[("x", 1)]));
        assert!(at(&m, "ord(x - 1/2) = 1", &[("x", 5)]));
    }

    #[test]
    fn lift_arithmetic_sees_past_the_depth() {
        // 1 + 2 = 3 is congruent to 0 at depth 1 but its order is exactly 1.
        let m = mixed(3, 1);
        assert!(at(&m, "x + y = 0", &[("x", 1), ("y", 2)]));
        assert!(!at(&m, "ord(x + y) = inf", &[("x", 1), ("y", 2)]));
        assert!(at(&m, "ord(x + y) = 1", &[("x", 1), ("y", 2)]));
    }

    #[test]
    fn equal_characteristic_lifts_are_polynomials() {
        let m = equal(3, 2);
        // code 4 = 1 + t; its square is 1 + 2t + t^2 = code 7 mod t^2.
        assert!(at(&m, "x * x = y", &[("x", 4), ("y", 7)]));
        assert!(at(&m, "ord(x * x - y) = 2", &[("x", 4), ("y", 7)]));
        // The integer constant 3 is zero in F_3[t]: 3 = 0 exactly.
        assert!(at(&m, "ord(x - 3) = inf", &[("x", 0)]));
        assert!(!at(&equal(5, 2), "ord(x - 3) = inf", &[("x", 0)]));
    }

    #[test]
    fn quantifiers_enumerate_their_full_sorts() {
        let m = mixed(5, 1);
        // 4 is a square mod 5, 2 is not.
        assert!(at(&m, "exists s:r (s * s = ac(x))", &[("x", 4)]));
        assert!(!at(&m, "exists s:r (s * s = ac(x) /\\ s != 0)", &[("x", 2)]));
        // Every residue has an additive inverse.
        assert!(at(&m, "forall s:r (exists w:r (s + w = 0))", &[]));
        // ord(x) = h + h has a witness in [-B, B] exactly for even orders.
        let m = mixed(3, 3);
        assert!(at(&m, "exists h:z (ord(x) = h + h)", &[("x", 9)]));
        assert!(!at(&m, "exists h:z (ord(x) = h + h)", &[("x", 3)]));
        assert!(!at(&m, "exists h:z (ord(x) = h + h)", &[("x", 0)]));
    }

    #[test]
    fn congruences_reject_infinite_orders() {
        let m = mixed(3, 2);
        assert!(at(&m, "cong(2; ord(x), 0)", &[("x", 1)]));
        assert!(!at(&m, "cong(2; ord(x), 0)", &[("x", 3)]));
        assert!(!at(&m, "cong(2; ord(x), 0)", &[("x", 0)]));
        assert!(!at(&m, "cong(1; ord(x), 0)", &[("x", 0)]));
    }

    #[test]
    fn assignments_are_validated() {
        let m = mixed(3, 1);
        let f = parse_formula("ord(x) = 0").unwrap();
        let empty = BTreeMap::new();
        assert_eq!(
            eval_at_codes(&m, &f, &empty).unwrap_err(),
            OracleError::Unassigned("x".into())
        );
        let big = [("x".to_string(), 3u64)].into_iter().collect();
        assert_eq!(
            eval_at_codes(&m, &f, &big).unwrap_err(),
            OracleError::CodeRange { code: 3, room: 3 }
        );
    }
}
