//! Free-variable computation and capture-avoiding substitution.
//!
//! Substitution maps variable names to replacement terms and rewrites free
//! occurrences only. A replacement must have the sort of the occurrence it
//! replaces. Binders whose variable would capture a free variable of a
//! replacement are renamed to a fresh name first. Untouched subtrees are
//! returned as the original reference, so shared subterms stay shared.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::ast::{Formula, FormulaRef, Sort, Term, TermNode, TermRef, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error(
        "cannot substitute a term of sort {replacement} for variable '{}' of sort {}",
        var.name,
        var.sort
    )]
    SortMismatch { var: Var, replacement: Sort },
}

/// Free variables of a formula, sorted by name then sort, each listed once.
pub fn free_vars(f: &Formula) -> Vec<Var> {
    let mut bound: Vec<String> = Vec::new();
    let mut out: BTreeSet<Var> = BTreeSet::new();
    walk_formula(f, &mut bound, &mut out);
    out.into_iter().collect()
}

/// Free variables of a term, sorted by name then sort.
pub fn free_term_vars(t: &Term) -> Vec<Var> {
    let mut out = BTreeSet::new();
    walk_term(t, &[], &mut out);
    out.into_iter().collect()
}

fn walk_formula(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Eq(a, b) | Formula::Neq(a, b) | Formula::Leq(a, b)
        | Formula::CongMod(_, a, b) => {
            walk_term(a, bound, out);
            walk_term(b, bound, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            walk_formula(a, bound, out);
            walk_formula(b, bound, out);
        }
        Formula::Not(a) => walk_formula(a, bound, out),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            bound.push(v.name.clone());
            walk_formula(body, bound, out);
            bound.pop();
        }
    }
}

fn walk_term(t: &Term, bound: &[String], out: &mut BTreeSet<Var>) {
    match t.node() {
        TermNode::Var(v) => {
            if !bound.contains(&v.name) {
                out.insert(v.clone());
            }
        }
        TermNode::Add(a, b) | TermNode::Mul(a, b) => {
            walk_term(a, bound, out);
            walk_term(b, bound, out);
        }
        TermNode::Neg(a) | TermNode::Ord(a) | TermNode::Ac(a) => walk_term(a, bound, out),
        TermNode::Int(_) | TermNode::Rat(_) | TermNode::Inf => {}
    }
}

/// Every variable name occurring anywhere in the formula, bound or free.
fn all_names(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Eq(a, b) | Formula::Neq(a, b) | Formula::Leq(a, b)
        | Formula::CongMod(_, a, b) => {
            all_term_names(a, out);
            all_term_names(b, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            all_names(a, out);
            all_names(b, out);
        }
        Formula::Not(a) => all_names(a, out),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            out.insert(v.name.clone());
            all_names(body, out);
        }
    }
}

fn all_term_names(t: &Term, out: &mut BTreeSet<String>) {
    match t.node() {
        TermNode::Var(v) => {
            out.insert(v.name.clone());
        }
        TermNode::Add(a, b) | TermNode::Mul(a, b) => {
            all_term_names(a, out);
            all_term_names(b, out);
        }
        TermNode::Neg(a) | TermNode::Ord(a) | TermNode::Ac(a) => all_term_names(a, out),
        TermNode::Int(_) | TermNode::Rat(_) | TermNode::Inf => {}
    }
}

/// Replace free occurrences of the mapped names by the mapped terms.
pub fn substitute(
    f: &FormulaRef,
    map: &BTreeMap<String, TermRef>,
) -> Result<FormulaRef, SubstError> {
    if map.is_empty() {
        return Ok(f.clone());
    }
    let mut memo = HashMap::new();
    subst_formula(f, map, &mut memo)
}

type TermMemo = HashMap<*const Term, TermRef>;

fn subst_formula(
    f: &FormulaRef,
    map: &BTreeMap<String, TermRef>,
    memo: &mut TermMemo,
) -> Result<FormulaRef, SubstError> {
    let rebuilt = match f.as_ref() {
        Formula::True | Formula::False => return Ok(f.clone()),
        Formula::Eq(a, b) => {
            let (ra, rb) = (subst_term(a, map, memo)?, subst_term(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                return Ok(f.clone());
            }
            Formula::eq(ra, rb).expect("substitution preserves sorts")
        }
        Formula::Neq(a, b) => {
            let (ra, rb) = (subst_term(a, map, memo)?, subst_term(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                return Ok(f.clone());
            }
            Formula::neq(ra, rb).expect("substitution preserves sorts")
        }
        Formula::Leq(a, b) => {
            let (ra, rb) = (subst_term(a, map, memo)?, subst_term(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                return Ok(f.clone());
            }
            Formula::leq(ra, rb).expect("substitution preserves sorts")
        }
        Formula::CongMod(n, a, b) => {
            let (ra, rb) = (subst_term(a, map, memo)?, subst_term(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                return Ok(f.clone());
            }
            Formula::cong_mod(*n, ra, rb).expect("substitution preserves sorts")
        }
        Formula::And(a, b) => {
            let (ra, rb) = (subst_formula(a, map, memo)?, subst_formula(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                return Ok(f.clone());
            }
            Formula::and(ra, rb)
        }
        Formula::Or(a, b) => {
            let (ra, rb) = (subst_formula(a, map, memo)?, subst_formula(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                return Ok(f.clone());
            }
            Formula::or(ra, rb)
        }
        Formula::Not(a) => {
            let ra = subst_formula(a, map, memo)?;
            if Rc::ptr_eq(&ra, a) {
                return Ok(f.clone());
            }
            Formula::not(ra)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let is_forall = matches!(f.as_ref(), Formula::Forall(..));
            let mut active = map.clone();
            active.remove(&v.name);
            if active.is_empty() {
                return Ok(f.clone());
            }
            // Rename the binder when a replacement would be captured.
            let captured = active
                .values()
                .any(|t| free_term_vars(t).iter().any(|fv| fv.name == v.name));
            let (var, body) = if captured {
                let mut avoid: BTreeSet<String> = BTreeSet::new();
                all_names(body, &mut avoid);
                for t in active.values() {
                    all_term_names(t, &mut avoid);
                }
                avoid.extend(active.keys().cloned());
                let fresh = fresh_name(&v.name, &avoid);
                let fresh_var = Var::new(fresh.clone(), v.sort);
                let mut rename = BTreeMap::new();
                rename.insert(v.name.clone(), Term::var(fresh_var.clone()));
                let renamed = subst_formula(body, &rename, &mut HashMap::new())?;
                (fresh_var, renamed)
            } else {
                (v.clone(), body.clone())
            };
            // The active map changed, so shared-term rewrites cannot be
            // reused across this binder.
            let inner = subst_formula(&body, &active, &mut HashMap::new())?;
            if !captured && Rc::ptr_eq(&inner, &body) {
                return Ok(f.clone());
            }
            if is_forall {
                Formula::forall(var, inner)
            } else {
                Formula::exists(var, inner)
            }
        }
    };
    Ok(rebuilt)
}

fn subst_term(
    t: &TermRef,
    map: &BTreeMap<String, TermRef>,
    memo: &mut TermMemo,
) -> Result<TermRef, SubstError> {
    let key = Rc::as_ptr(t);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let rebuilt = match t.node() {
        TermNode::Var(v) => match map.get(&v.name) {
            Some(repl) => {
                if repl.sort() != v.sort {
                    return Err(SubstError::SortMismatch {
                        var: v.clone(),
                        replacement: repl.sort(),
                    });
                }
                repl.clone()
            }
            None => t.clone(),
        },
        TermNode::Int(_) | TermNode::Rat(_) | TermNode::Inf => t.clone(),
        TermNode::Add(a, b) => {
            let (ra, rb) = (subst_term(a, map, memo)?, subst_term(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                t.clone()
            } else {
                Term::add(ra, rb).expect("substitution preserves sorts")
            }
        }
        TermNode::Mul(a, b) => {
            let (ra, rb) = (subst_term(a, map, memo)?, subst_term(b, map, memo)?);
            if Rc::ptr_eq(&ra, a) && Rc::ptr_eq(&rb, b) {
                t.clone()
            } else {
                Term::mul(ra, rb).expect("substitution preserves sorts")
            }
        }
        TermNode::Neg(a) => {
            let ra = subst_term(a, map, memo)?;
            if Rc::ptr_eq(&ra, a) {
                t.clone()
            } else {
                Term::neg(ra)
            }
        }
        TermNode::Ord(a) => {
            let ra = subst_term(a, map, memo)?;
            if Rc::ptr_eq(&ra, a) {
                t.clone()
            } else {
                Term::ord(ra).expect("substitution preserves sorts")
            }
        }
        TermNode::Ac(a) => {
            let ra = subst_term(a, map, memo)?;
            if Rc::ptr_eq(&ra, a) {
                t.clone()
            } else {
                Term::ac(ra).expect("substitution preserves sorts")
            }
        }
    };
    memo.insert(key, rebuilt.clone());
    Ok(rebuilt)
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    for i in 1.. {
        let candidate = format!("{base}_{i}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!("some suffix is always free")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_term};
    use crate::printer::to_text;

    fn subst_one(f: &str, name: &str, term: &str) -> String {
        let f = parse_formula(f).unwrap();
        let mut map = BTreeMap::new();
        map.insert(name.to_string(), parse_term(term).unwrap());
        to_text(&substitute(&f, &map).unwrap())
    }

    #[test]
    fn free_vars_are_sorted_and_skip_bound() {
        let f = parse_formula("forall x (x = y /\\ ac(z) = w:r)").unwrap();
        let vs = free_vars(&f);
        let names: Vec<_> = vs.iter().map(|v| (v.name.as_str(), v.sort)).collect();
        assert_eq!(
            names,
            vec![("w", Sort::Residue), ("y", Sort::Valued), ("z", Sort::Valued)]
        );
    }

    #[test]
    fn substitution_respects_shadowing() {
        assert_eq!(
            subst_one("x = 1 /\\ forall x (x = 2)", "x", "y + 1"),
            "y + 1 = 1 /\\ forall x (x = 2)"
        );
    }

    #[test]
    fn capture_is_avoided_by_renaming() {
        assert_eq!(
            subst_one("forall x (x = y)", "y", "x + 1"),
            "forall x_1 (x_1 = x + 1)"
        );
    }

    #[test]
    fn replacement_sorts_are_checked() {
        let f = parse_formula("w:r = ac(x)").unwrap();
        let mut map = BTreeMap::new();
        map.insert("w".to_string(), parse_term("x + 1").unwrap());
        let err = substitute(&f, &map).unwrap_err();
        assert!(matches!(err, SubstError::SortMismatch { .. }));
    }

    #[test]
    fn untouched_subtrees_keep_their_identity() {
        let f = parse_formula("forall x (x = 0) /\\ y = 1").unwrap();
        let Formula::And(left, _) = f.as_ref() else { panic!() };
        let mut map = BTreeMap::new();
        map.insert("y".to_string(), parse_term("2").unwrap());
        let g = substitute(&f, &map).unwrap();
        let Formula::And(new_left, _) = g.as_ref() else { panic!() };
        assert!(Rc::ptr_eq(left, new_left));
    }
}
