//! Printers: readable infix text, canonical prefix text, and a linearized
//! DAG listing.
//!
//! `to_text` emits the surface syntax with minimal parentheses; parsing the
//! result reproduces the identical AST, provided every shadowing binder in
//! the input reuses a name at the same sort (the parser scopes by name, so a
//! formula that uses one name at two sorts in nested scopes cannot survive
//! the trip; the builders in this crate never do that). Non-valued variables
//! always print their sort suffix; valued ones print bare, matching the
//! parser default.
//!
//! `canonical_text` is a fully parenthesized prefix form that spells out
//! every sort, so equal ASTs and only equal ASTs print equally. It expands
//! shared subterms, so it takes a node budget: built formulas can be small
//! DAGs with enormous tree expansions.
//!
//! `dag_text` serializes the formula as a list of numbered nodes, memoizing
//! shared subterms by reference identity. Its size is proportional to the
//! stored formula, which makes it the right preimage for cache digests.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;

use thiserror::Error;

use crate::ast::{Formula, FormulaRef, Sort, Term, TermNode, TermRef, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula exceeds the canonical printing budget of {budget} nodes")]
pub struct FormulaTooLarge {
    pub budget: usize,
}

/// Infix rendering; `parse_formula(&to_text(f))` rebuilds `f` exactly.
///
/// Two formulas the infix surface cannot distinguish are out of scope:
/// equations whose sides are built from integer constants alone carry no
/// sort marker, so a residue- or value-sorted one reparses as valued, and
/// shadowing binders that reuse a name at a different sort reparse at the
/// inner sort. The builder modules never produce either shape.
pub fn to_text(f: &Formula) -> String {
    let mut out = String::new();
    fmt_formula(f, 1, &mut out);
    out
}

/// Infix rendering of a term.
pub fn term_to_text(t: &Term) -> String {
    let mut out = String::new();
    fmt_term(t, 1, &mut out);
    out
}

// Formula precedence: Or 1, And 2, Not and quantifiers 3, atoms 4.
fn fmt_formula(f: &Formula, min_prec: u8, out: &mut String) {
    let prec = match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Not(..) | Formula::Forall(..) | Formula::Exists(..) => 3,
        _ => 4,
    };
    if prec < min_prec {
        out.push('(');
        fmt_formula(f, 1, out);
        out.push(')');
        return;
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Eq(a, b) => {
            fmt_term(a, 1, out);
            out.push_str(" = ");
            fmt_term(b, 1, out);
        }
        Formula::Neq(a, b) => {
            fmt_term(a, 1, out);
            out.push_str(" != ");
            fmt_term(b, 1, out);
        }
        Formula::Leq(a, b) => {
            fmt_term(a, 1, out);
            out.push_str(" <= ");
            fmt_term(b, 1, out);
        }
        Formula::CongMod(n, a, b) => {
            let _ = write!(out, "cong({n}; ");
            fmt_term(a, 1, out);
            out.push_str(", ");
            fmt_term(b, 1, out);
            out.push(')');
        }
        Formula::And(a, b) => {
            fmt_formula(a, 2, out);
            out.push_str(" /\\ ");
            fmt_formula(b, 3, out);
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 1, out);
            out.push_str(" \\/ ");
            fmt_formula(b, 2, out);
        }
        Formula::Not(a) => {
            out.push('!');
            fmt_formula(a, 3, out);
        }
        Formula::Forall(v, body) => {
            out.push_str("forall ");
            fmt_binder(v, out);
            out.push_str(" (");
            fmt_formula(body, 1, out);
            out.push(')');
        }
        Formula::Exists(v, body) => {
            out.push_str("exists ");
            fmt_binder(v, out);
            out.push_str(" (");
            fmt_formula(body, 1, out);
            out.push(')');
        }
    }
}

fn fmt_binder(v: &Var, out: &mut String) {
    out.push_str(&v.name);
    if v.sort != Sort::Valued {
        out.push(':');
        out.push_str(v.sort.suffix());
    }
}

// Term precedence: Add 1, Mul 2, prefix and atoms 3.
fn fmt_term(t: &Term, min_prec: u8, out: &mut String) {
    let prec = match t.node() {
        TermNode::Add(..) => 1,
        TermNode::Mul(..) => 2,
        _ => 3,
    };
    if prec < min_prec {
        out.push('(');
        fmt_term(t, 1, out);
        out.push(')');
        return;
    }
    match t.node() {
        TermNode::Int(n) => {
            let _ = write!(out, "{n}");
        }
        TermNode::Rat(r) => {
            let _ = write!(out, "{}/{}", r.numer(), r.denom());
        }
        TermNode::Var(v) => fmt_binder(v, out),
        TermNode::Add(a, b) => {
            fmt_term(a, 1, out);
            // Print Add(a, Neg(b)) the way the parser builds it: a - b.
            if let TermNode::Neg(inner) = b.node() {
                out.push_str(" - ");
                fmt_term(inner, 2, out);
            } else {
                out.push_str(" + ");
                fmt_term(b, 2, out);
            }
        }
        TermNode::Mul(a, b) => {
            fmt_term(a, 2, out);
            out.push_str(" * ");
            fmt_term(b, 3, out);
        }
        TermNode::Neg(a) => {
            out.push('-');
            fmt_term(a, 3, out);
        }
        TermNode::Ord(a) => {
            out.push_str("ord(");
            fmt_term(a, 1, out);
            out.push(')');
        }
        TermNode::Ac(a) => {
            out.push_str("ac(");
            fmt_term(a, 1, out);
            out.push(')');
        }
        TermNode::Inf => out.push_str("inf"),
    }
}

/// Fully parenthesized prefix form with explicit sorts everywhere, expanding
/// shared subterms. Fails once more than `budget` nodes have been printed.
pub fn canonical_text(f: &Formula, budget: usize) -> Result<String, FormulaTooLarge> {
    let mut out = String::new();
    let mut left = budget;
    canon_formula(f, &mut left, budget, &mut out)?;
    Ok(out)
}

fn spend(left: &mut usize, budget: usize) -> Result<(), FormulaTooLarge> {
    if *left == 0 {
        return Err(FormulaTooLarge { budget });
    }
    *left -= 1;
    Ok(())
}

fn canon_formula(
    f: &Formula,
    left: &mut usize,
    budget: usize,
    out: &mut String,
) -> Result<(), FormulaTooLarge> {
    spend(left, budget)?;
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Eq(a, b) | Formula::Neq(a, b) | Formula::Leq(a, b) => {
            let op = match f {
                Formula::Eq(..) => "eq",
                Formula::Neq(..) => "neq",
                _ => "leq",
            };
            let _ = write!(out, "({op} ");
            canon_term(a, left, budget, out)?;
            out.push(' ');
            canon_term(b, left, budget, out)?;
            out.push(')');
        }
        Formula::CongMod(n, a, b) => {
            let _ = write!(out, "(cong {n} ");
            canon_term(a, left, budget, out)?;
            out.push(' ');
            canon_term(b, left, budget, out)?;
            out.push(')');
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let op = if matches!(f, Formula::And(..)) { "and" } else { "or" };
            let _ = write!(out, "({op} ");
            canon_formula(a, left, budget, out)?;
            out.push(' ');
            canon_formula(b, left, budget, out)?;
            out.push(')');
        }
        Formula::Not(a) => {
            out.push_str("(not ");
            canon_formula(a, left, budget, out)?;
            out.push(')');
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let op = if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" };
            let _ = write!(out, "({op} (var {} {}) ", v.name, v.sort.suffix());
            canon_formula(body, left, budget, out)?;
            out.push(')');
        }
    }
    Ok(())
}

fn canon_term(
    t: &Term,
    left: &mut usize,
    budget: usize,
    out: &mut String,
) -> Result<(), FormulaTooLarge> {
    spend(left, budget)?;
    match t.node() {
        TermNode::Int(n) => {
            let _ = write!(out, "(int {n} {})", t.sort().suffix());
        }
        TermNode::Rat(r) => {
            let _ = write!(out, "(rat {} {})", r.numer(), r.denom());
        }
        TermNode::Var(v) => {
            let _ = write!(out, "(var {} {})", v.name, v.sort.suffix());
        }
        TermNode::Add(a, b) | TermNode::Mul(a, b) => {
            let op = if matches!(t.node(), TermNode::Add(..)) { "add" } else { "mul" };
            let _ = write!(out, "({op} ");
            canon_term(a, left, budget, out)?;
            out.push(' ');
            canon_term(b, left, budget, out)?;
            out.push(')');
        }
        TermNode::Neg(a) | TermNode::Ord(a) | TermNode::Ac(a) => {
            let op = match t.node() {
                TermNode::Neg(..) => "neg",
                TermNode::Ord(..) => "ord",
                _ => "ac",
            };
            let _ = write!(out, "({op} ");
            canon_term(a, left, budget, out)?;
            out.push(')');
        }
        TermNode::Inf => out.push_str("inf"),
    }
    Ok(())
}

/// Linear listing of the formula DAG: one line per distinct node, shared
/// subterms emitted once and referenced by index. Size is proportional to
/// the stored graph, not its tree expansion. Construction order determines
/// sharing, so two equal formulas built differently may serialize
/// differently; a digest over this text is still deterministic for any
/// fixed construction path.
pub fn dag_text(f: &FormulaRef) -> String {
    let mut ser = DagSerializer::default();
    let root = ser.formula(f);
    let _ = writeln!(ser.out, "root f{root}");
    ser.out
}

#[derive(Default)]
struct DagSerializer {
    terms: HashMap<*const Term, usize>,
    formulas: HashMap<*const Formula, usize>,
    out: String,
}

impl DagSerializer {
    fn term(&mut self, t: &TermRef) -> usize {
        let key = Rc::as_ptr(t);
        if let Some(&id) = self.terms.get(&key) {
            return id;
        }
        let line = match t.node() {
            TermNode::Int(n) => format!("int {n} {}", t.sort().suffix()),
            TermNode::Rat(r) => format!("rat {} {}", r.numer(), r.denom()),
            TermNode::Var(v) => format!("var {} {}", v.name, v.sort.suffix()),
            TermNode::Add(a, b) => {
                let (ia, ib) = (self.term(a), self.term(b));
                format!("add t{ia} t{ib}")
            }
            TermNode::Mul(a, b) => {
                let (ia, ib) = (self.term(a), self.term(b));
                format!("mul t{ia} t{ib}")
            }
            TermNode::Neg(a) => format!("neg t{}", self.term(a)),
            TermNode::Ord(a) => format!("ord t{}", self.term(a)),
            TermNode::Ac(a) => format!("ac t{}", self.term(a)),
            TermNode::Inf => "inf".to_string(),
        };
        let id = self.terms.len();
        self.terms.insert(key, id);
        let _ = writeln!(self.out, "t{id} = {line}");
        id
    }

    fn formula(&mut self, f: &FormulaRef) -> usize {
        let key = Rc::as_ptr(f);
        if let Some(&id) = self.formulas.get(&key) {
            return id;
        }
        let line = match f.as_ref() {
            Formula::True => "true".to_string(),
            Formula::False => "false".to_string(),
            Formula::Eq(a, b) => {
                let (ia, ib) = (self.term(a), self.term(b));
                format!("eq t{ia} t{ib}")
            }
            Formula::Neq(a, b) => {
                let (ia, ib) = (self.term(a), self.term(b));
                format!("neq t{ia} t{ib}")
            }
            Formula::Leq(a, b) => {
                let (ia, ib) = (self.term(a), self.term(b));
                format!("leq t{ia} t{ib}")
            }
            Formula::CongMod(n, a, b) => {
                let (ia, ib) = (self.term(a), self.term(b));
                format!("cong {n} t{ia} t{ib}")
            }
            Formula::And(a, b) => {
                let (ia, ib) = (self.formula(a), self.formula(b));
                format!("and f{ia} f{ib}")
            }
            Formula::Or(a, b) => {
                let (ia, ib) = (self.formula(a), self.formula(b));
                format!("or f{ia} f{ib}")
            }
            Formula::Not(a) => format!("not f{}", self.formula(a)),
            Formula::Forall(v, body) => {
                format!("forall {} {} f{}", v.name, v.sort.suffix(), self.formula(body))
            }
            Formula::Exists(v, body) => {
                format!("exists {} {} f{}", v.name, v.sort.suffix(), self.formula(body))
            }
        };
        let id = self.formulas.len();
        self.formulas.insert(key, id);
        let _ = writeln!(self.out, "f{id} = {line}");
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn roundtrip(src: &str) -> String {
        let f = parse_formula(src).unwrap();
        let text = to_text(&f);
        let again = parse_formula(&text).unwrap();
        assert_eq!(f, again, "reparse of {text:?} changed the tree");
        text
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(roundtrip("x = 1 /\\ (y = 2 \\/ z = 3)"), "x = 1 /\\ (y = 2 \\/ z = 3)");
        assert_eq!(roundtrip("!(x = 1 /\\ y = 2)"), "!(x = 1 /\\ y = 2)");
        assert_eq!(roundtrip("x - (y + 1) * z = 0"), "x - (y + 1) * z = 0");
        assert_eq!(roundtrip("ord(x) >= 0"), "0 <= ord(x)");
    }

    #[test]
    fn sort_suffixes_survive() {
        assert_eq!(
            roundtrip("exists w:r (w = ac(x) /\\ cong(2; ord(x), m:z))"),
            "exists w:r (w:r = ac(x) /\\ cong(2; ord(x), m:z))"
        );
    }

    #[test]
    fn canonical_text_spells_sorts_and_respects_budget() {
        let f = parse_formula("ord(x) >= 0").unwrap();
        assert_eq!(canonical_text(&f, 100).unwrap(), "(leq (int 0 z) (ord (var x v)))");
        assert_eq!(canonical_text(&f, 3), Err(FormulaTooLarge { budget: 3 }));
    }

    #[test]
    fn dag_listing_shares_nodes() {
        use crate::ast::{Formula, Sort, Term, Var};
        let x = Term::var(Var::valued("x"));
        let sq = Term::mul(x.clone(), x.clone()).unwrap();
        let f = Formula::eq(sq, Term::int(1, Sort::Valued)).unwrap();
        let text = dag_text(&f);
        // One var line, referenced twice.
        assert_eq!(text.matches("var x v").count(), 1);
        assert!(text.contains("mul t0 t0"));
        assert!(text.trim_end().ends_with("root f0"));
    }
}
