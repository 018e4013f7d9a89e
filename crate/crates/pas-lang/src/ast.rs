//! Three-sorted terms and formulas: valued field, residue field, value.
//!
//! Terms are reference-counted so that large built formulas (adjoint
//! characteristic coefficients, conjugation entries) share subterms as a
//! DAG instead of expanding to trees. Every node carries its sort;
//! constructors reject ill-sorted combinations, so a constructed AST is
//! well-sorted by construction.

use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Valued,
    Residue,
    Value,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Valued => "valued",
            Sort::Residue => "residue",
            Sort::Value => "value",
        })
    }
}

impl Sort {
    /// Grammar suffix for this sort (`:v`, `:r`, `:z`).
    pub fn suffix(self) -> &'static str {
        match self {
            Sort::Valued => "v",
            Sort::Residue => "r",
            Sort::Value => "z",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var { name: name.into(), sort }
    }

    pub fn valued(name: impl Into<String>) -> Self {
        Var::new(name, Sort::Valued)
    }

    pub fn residue(name: impl Into<String>) -> Self {
        Var::new(name, Sort::Residue)
    }

    pub fn value(name: impl Into<String>) -> Self {
        Var::new(name, Sort::Value)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SortViolation {
    #[error("operands of `{op}` have different sorts ({left} vs {right})")]
    MixedOperands { op: &'static str, left: Sort, right: Sort },
    #[error("multiplication is not available in the value sort")]
    ValueMultiplication,
    #[error("`{op}` expects a valued-field argument, got {found}")]
    ValuedArgument { op: &'static str, found: Sort },
    #[error("`<=` compares value-sort terms, got {found}")]
    LeqSort { found: Sort },
    #[error("congruence compares value-sort terms, got {found}")]
    CongSort { found: Sort },
    #[error("congruence modulus must be at least 1")]
    CongModulus,
    #[error("rational constants live in the valued sort")]
    RationalSort,
}

pub type TermRef = Rc<Term>;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Term {
    node: TermNode,
    sort: Sort,
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum TermNode {
    Int(BigInt),
    Rat(BigRational),
    Var(Var),
    Add(TermRef, TermRef),
    Mul(TermRef, TermRef),
    Neg(TermRef),
    Ord(TermRef),
    Ac(TermRef),
    Inf,
}

impl Term {
    pub fn node(&self) -> &TermNode {
        &self.node
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    /// Negative constants are stored as Neg of the absolute value, so that
    /// every term prints and reparses to the identical tree.
    pub fn int(n: impl Into<BigInt>, sort: Sort) -> TermRef {
        let n = n.into();
        if n.sign() == num_bigint::Sign::Minus {
            Term::neg(Term::int(-n, sort))
        } else {
            Rc::new(Term { node: TermNode::Int(n), sort })
        }
    }

    /// Rationals with denominator 1 collapse to integer constants; negatives
    /// are stored as Neg of the absolute value, as for int.
    pub fn rat(r: BigRational) -> TermRef {
        if r.is_integer() {
            Term::int(r.to_integer(), Sort::Valued)
        } else if r < BigRational::zero() {
            Term::neg(Term::rat(-r))
        } else {
            Rc::new(Term { node: TermNode::Rat(r), sort: Sort::Valued })
        }
    }

    pub fn var(v: Var) -> TermRef {
        let sort = v.sort;
        Rc::new(Term { node: TermNode::Var(v), sort })
    }

    pub fn add(a: TermRef, b: TermRef) -> Result<TermRef, SortViolation> {
        if a.sort != b.sort {
            return Err(SortViolation::MixedOperands { op: "+", left: a.sort, right: b.sort });
        }
        let sort = a.sort;
        Ok(Rc::new(Term { node: TermNode::Add(a, b), sort }))
    }

    pub fn mul(a: TermRef, b: TermRef) -> Result<TermRef, SortViolation> {
        if a.sort != b.sort {
            return Err(SortViolation::MixedOperands { op: "*", left: a.sort, right: b.sort });
        }
        if a.sort == Sort::Value {
            return Err(SortViolation::ValueMultiplication);
        }
        let sort = a.sort;
        Ok(Rc::new(Term { node: TermNode::Mul(a, b), sort }))
    }

    pub fn neg(a: TermRef) -> TermRef {
        let sort = a.sort;
        Rc::new(Term { node: TermNode::Neg(a), sort })
    }

    pub fn ord(a: TermRef) -> Result<TermRef, SortViolation> {
        if a.sort != Sort::Valued {
            return Err(SortViolation::ValuedArgument { op: "ord", found: a.sort });
        }
        Ok(Rc::new(Term { node: TermNode::Ord(a), sort: Sort::Value }))
    }

    pub fn ac(a: TermRef) -> Result<TermRef, SortViolation> {
        if a.sort != Sort::Valued {
            return Err(SortViolation::ValuedArgument { op: "ac", found: a.sort });
        }
        Ok(Rc::new(Term { node: TermNode::Ac(a), sort: Sort::Residue }))
    }

    pub fn inf() -> TermRef {
        Rc::new(Term { node: TermNode::Inf, sort: Sort::Value })
    }
}

pub type FormulaRef = Rc<Formula>;

#[derive(Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Eq(TermRef, TermRef),
    Neq(TermRef, TermRef),
    Leq(TermRef, TermRef),
    CongMod(u64, TermRef, TermRef),
    And(FormulaRef, FormulaRef),
    Or(FormulaRef, FormulaRef),
    Not(FormulaRef),
    Forall(Var, FormulaRef),
    Exists(Var, FormulaRef),
}

impl Formula {
    pub fn eq(a: TermRef, b: TermRef) -> Result<FormulaRef, SortViolation> {
        if a.sort() != b.sort() {
            return Err(SortViolation::MixedOperands {
                op: "=",
                left: a.sort(),
                right: b.sort(),
            });
        }
        Ok(Rc::new(Formula::Eq(a, b)))
    }

    pub fn neq(a: TermRef, b: TermRef) -> Result<FormulaRef, SortViolation> {
        if a.sort() != b.sort() {
            return Err(SortViolation::MixedOperands {
                op: "!=",
                left: a.sort(),
                right: b.sort(),
            });
        }
        Ok(Rc::new(Formula::Neq(a, b)))
    }

    pub fn leq(a: TermRef, b: TermRef) -> Result<FormulaRef, SortViolation> {
        for t in [&a, &b] {
            if t.sort() != Sort::Value {
                return Err(SortViolation::LeqSort { found: t.sort() });
            }
        }
        Ok(Rc::new(Formula::Leq(a, b)))
    }

    pub fn cong_mod(n: u64, a: TermRef, b: TermRef) -> Result<FormulaRef, SortViolation> {
        if n < 1 {
            return Err(SortViolation::CongModulus);
        }
        for t in [&a, &b] {
            if t.sort() != Sort::Value {
                return Err(SortViolation::CongSort { found: t.sort() });
            }
        }
        Ok(Rc::new(Formula::CongMod(n, a, b)))
    }

    pub fn and(a: FormulaRef, b: FormulaRef) -> FormulaRef {
        Rc::new(Formula::And(a, b))
    }

    pub fn or(a: FormulaRef, b: FormulaRef) -> FormulaRef {
        Rc::new(Formula::Or(a, b))
    }

    pub fn not(a: FormulaRef) -> FormulaRef {
        Rc::new(Formula::Not(a))
    }

    pub fn forall(v: Var, f: FormulaRef) -> FormulaRef {
        Rc::new(Formula::Forall(v, f))
    }

    pub fn exists(v: Var, f: FormulaRef) -> FormulaRef {
        Rc::new(Formula::Exists(v, f))
    }

    pub fn lit(b: bool) -> FormulaRef {
        Rc::new(if b { Formula::True } else { Formula::False })
    }

    /// Left-fold a conjunction; empty input gives True.
    pub fn and_all(parts: impl IntoIterator<Item = FormulaRef>) -> FormulaRef {
        let mut iter = parts.into_iter();
        let Some(first) = iter.next() else { return Formula::lit(true) };
        iter.fold(first, Formula::and)
    }

    /// Left-fold a disjunction; empty input gives False.
    pub fn or_all(parts: impl IntoIterator<Item = FormulaRef>) -> FormulaRef {
        let mut iter = parts.into_iter();
        let Some(first) = iter.next() else { return Formula::lit(false) };
        iter.fold(first, Formula::or)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_are_enforced() {
        let x = Term::var(Var::valued("x"));
        let m = Term::var(Var::value("m"));
        assert_eq!(
            Term::add(x.clone(), m.clone()).unwrap_err(),
            SortViolation::MixedOperands { op: "+", left: Sort::Valued, right: Sort::Value }
        );
        assert_eq!(
            Term::mul(m.clone(), m.clone()).unwrap_err(),
            SortViolation::ValueMultiplication
        );
        assert!(Term::add(m.clone(), m.clone()).is_ok());
        assert!(Term::ord(m).is_err());
        assert_eq!(Term::ord(x.clone()).unwrap().sort(), Sort::Value);
        assert_eq!(Term::ac(x).unwrap().sort(), Sort::Residue);
    }

    #[test]
    fn formula_constructors_check_sorts() {
        let x = Term::var(Var::valued("x"));
        let u = Term::var(Var::residue("u"));
        assert!(Formula::eq(x.clone(), u.clone()).is_err());
        assert!(Formula::leq(Term::ord(x.clone()).unwrap(), Term::inf()).is_ok());
        assert!(Formula::leq(x.clone(), Term::inf()).is_err());
        assert!(Formula::cong_mod(0, Term::inf(), Term::inf()).is_err());
        assert!(Formula::eq(u.clone(), Term::int(0, Sort::Residue)).is_ok());
    }
}
