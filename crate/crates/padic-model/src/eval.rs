//! Three-valued formula evaluation by bounded enumeration.
//!
//! Atoms evaluate over the element carriers of `elem`; And/Or/Not follow
//! Kleene semantics. Quantifiers enumerate their sort's domain: residue
//! variables range over F_p, valued variables over all p^k canonical lifts
//! (each an exact element, so atoms on quantified points always resolve),
//! value variables over the integers in [-B, B].
//!
//! Two optimizations keep built conjugation formulas tractable without
//! changing any answer. First, an existential residue variable pinned by a
//! conjunct of its body (an equation linear in the variable, or a guarded
//! two-branch capture of a leading digit) is bound directly instead of
//! enumerated; when the pinning conjunct is unsatisfiable for every value the
//! quantifier is false outright. Second, subformulas whose free variables are
//! all residue-sorted evaluate to a two-valued result that depends only on
//! those residues, so quantified subformulas of that shape are memoized
//! across points and cells.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use pas_lang::{Formula, FormulaRef, Sort, Term, TermNode, TermRef, Var};
use thiserror::Error;

use crate::elem::{Arith, Elem, ResValue, TriBool, TriVal, ValInterval, VB};
use crate::model::ModelSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("free variable {0} has no assigned value")]
    UnassignedVar(String),
    #[error("variable {name} is assigned a value of the wrong sort")]
    AssignmentSort { name: String },
    #[error("rational constant {0} has denominator divisible by p")]
    BadDenominator(String),
    #[error("value constant {n} exceeds the search bound {bound}")]
    ValueConstantOutOfRange { n: i64, bound: i64 },
}

/// A caller-assigned value for one free variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointValue {
    /// A valued point mod pi^k, embedded as its exact canonical lift.
    Code(u64),
    /// An exact rational element (mixed characteristic reading).
    Rational(num_rational::BigRational),
    /// A truncated valued element: order offset and known unit digits;
    /// an empty digit vector means exhausted (only ord >= v is known).
    Truncated { v: i64, digits: Vec<u64> },
    /// A residue-field element.
    Residue(u64),
    /// A finite value-sort integer.
    Value(i64),
    /// The value +inf (the order of zero).
    ValueInf,
}

/// Public form of a valued evaluation result: the order bound, the known
/// unit digits and whether the element is exhausted at its horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedElement {
    pub valuation: VB,
    pub digits: Vec<u64>,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermOutcome {
    Valued(TruncatedElement),
    Residue(ResValue),
    Value(ValInterval),
}

#[derive(Debug, Clone)]
pub(crate) enum Binding {
    Valued(Elem),
    Residue(ResValue),
    Value(ValInterval),
}

/// Internal evaluation interrupt: a pin probe touched a variable that is not
/// bound yet. Ordinary evaluation never sees it once inputs are validated.
struct Unbound(String);

struct NodeInfo {
    /// Sorted names of the free residue variables when every free variable
    /// of the node is residue-sorted and the node contains a quantifier.
    memo_vars: Option<Rc<Vec<String>>>,
}

pub(crate) struct Env<'a> {
    base: &'a HashMap<String, Binding>,
    stack: Vec<(String, Binding)>,
}

impl<'a> Env<'a> {
    fn lookup(&self, name: &str) -> Option<&Binding> {
        self.stack
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b)
            .or_else(|| self.base.get(name))
    }
}

pub(crate) struct Evaluator {
    arith: Arith,
    depth: u32,
    point_count: u64,
    value_bound: i64,
    root: FormulaRef,
    info: HashMap<*const Formula, NodeInfo>,
    memo: RefCell<HashMap<(*const Formula, Vec<u64>), bool>>,
    term_cache: RefCell<HashMap<*const Term, Elem>>,
}

/// Collect the free variables of every node reachable from `f`.
fn free_var_table(f: &FormulaRef, out: &mut HashMap<*const Formula, Vec<Var>>) {
    let key = Rc::as_ptr(f);
    if out.contains_key(&key) {
        return;
    }
    for child in subformulas(f) {
        free_var_table(child, out);
    }
    out.insert(key, pas_lang::free_vars(f));
}

fn subformulas(f: &FormulaRef) -> Vec<&FormulaRef> {
    match f.as_ref() {
        Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
        _ => Vec::new(),
    }
}

fn has_quantifier(f: &FormulaRef, seen: &mut HashMap<*const Formula, bool>) -> bool {
    let key = Rc::as_ptr(f);
    if let Some(&v) = seen.get(&key) {
        return v;
    }
    let v = matches!(f.as_ref(), Formula::Forall(..) | Formula::Exists(..))
        || subformulas(f).into_iter().any(|c| has_quantifier(c, seen));
    seen.insert(key, v);
    v
}

/// Validate every constant in the formula against the model: rational
/// denominators prime to p, value-sort integers within the search bound.
fn validate_terms(f: &FormulaRef, m: &ModelSpec) -> Result<(), EvalError> {
    fn walk_term(t: &TermRef, m: &ModelSpec) -> Result<(), EvalError> {
        match t.node() {
            TermNode::Rat(r) => {
                if r.denom().mod_floor(&BigInt::from(m.prime())).is_zero() {
                    return Err(EvalError::BadDenominator(r.to_string()));
                }
            }
            TermNode::Int(n) => {
                if t.sort() == Sort::Value {
                    let bound = m.value_bound();
                    let n = n.to_i64().unwrap_or(i64::MAX);
                    if n.abs() > bound {
                        return Err(EvalError::ValueConstantOutOfRange { n, bound });
                    }
                }
            }
            TermNode::Add(a, b) | TermNode::Mul(a, b) => {
                walk_term(a, m)?;
                walk_term(b, m)?;
            }
            TermNode::Neg(a) | TermNode::Ord(a) | TermNode::Ac(a) => walk_term(a, m)?,
            TermNode::Var(_) | TermNode::Inf => {}
        }
        Ok(())
    }
    fn walk(f: &FormulaRef, m: &ModelSpec) -> Result<(), EvalError> {
        match f.as_ref() {
            Formula::Eq(a, b) | Formula::Neq(a, b) | Formula::Leq(a, b)
            | Formula::CongMod(_, a, b) => {
                walk_term(a, m)?;
                walk_term(b, m)
            }
            Formula::True | Formula::False => Ok(()),
            _ => subformulas(f).into_iter().try_for_each(|c| walk(c, m)),
        }
    }
    walk(f, m)
}

impl Evaluator {
    pub(crate) fn new(m: &ModelSpec, f: &FormulaRef) -> Result<Evaluator, EvalError> {
        validate_terms(f, m)?;
        let mut free = HashMap::new();
        free_var_table(f, &mut free);
        let mut quant = HashMap::new();
        let mut info = HashMap::new();
        let mut stack = vec![f.clone()];
        while let Some(node) = stack.pop() {
            let key = Rc::as_ptr(&node);
            if info.contains_key(&key) {
                continue;
            }
            let vars = &free[&key];
            let memo_vars = if vars.iter().all(|v| v.sort == Sort::Residue)
                && has_quantifier(&node, &mut quant)
            {
                let mut names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
                names.sort();
                names.dedup();
                Some(Rc::new(names))
            } else {
                None
            };
            info.insert(key, NodeInfo { memo_vars });
            for child in subformulas(&node) {
                stack.push(child.clone());
            }
        }
        Ok(Evaluator {
            arith: Arith { p: m.prime(), kind: m.kind() },
            depth: m.depth(),
            point_count: m.point_count(),
            value_bound: m.value_bound(),
            root: f.clone(),
            info,
            memo: RefCell::new(HashMap::new()),
            term_cache: RefCell::new(HashMap::new()),
        })
    }

    /// Evaluate the root formula under the given base bindings.
    pub(crate) fn eval(&self, base: &HashMap<String, Binding>) -> Result<TriVal, EvalError> {
        self.term_cache.borrow_mut().clear();
        let mut env = Env { base, stack: Vec::new() };
        let root = self.root.clone();
        self.formula(&root, &mut env).map_err(|Unbound(name)| EvalError::UnassignedVar(name))
    }

    /// Evaluate an arbitrary term under the given base bindings.
    pub(crate) fn eval_term_with(
        &self,
        t: &TermRef,
        base: &HashMap<String, Binding>,
    ) -> Result<TermOutcome, EvalError> {
        self.term_cache.borrow_mut().clear();
        let mut env = Env { base, stack: Vec::new() };
        let out = match t.sort() {
            Sort::Valued => self.valued(t, &mut env).map(|e| {
                let exhausted = matches!(&e, Elem::Trunc(tr) if tr.digits.is_empty());
                let interval = self.arith.ord(&e);
                let digits = match interval.lo {
                    VB::Fin(v) if !exhausted => self.arith.window(&e, v, self.depth as usize),
                    _ => Vec::new(),
                };
                TermOutcome::Valued(TruncatedElement { valuation: interval.lo, digits, exhausted })
            }),
            Sort::Residue => self.residue(t, &mut env).map(TermOutcome::Residue),
            Sort::Value => self.value(t, &mut env).map(TermOutcome::Value),
        };
        out.map_err(|Unbound(name)| EvalError::UnassignedVar(name))
    }

    fn formula(&self, f: &FormulaRef, env: &mut Env) -> Result<TriVal, Unbound> {
        let memo_vars = self.info.get(&Rc::as_ptr(f)).and_then(|i| i.memo_vars.clone());
        let memo_key = memo_vars.and_then(|names| {
            let mut key = Vec::with_capacity(names.len());
            for name in names.iter() {
                match env.lookup(name) {
                    Some(Binding::Residue(ResValue::Exact(v))) => key.push(*v),
                    _ => return None,
                }
            }
            Some((Rc::as_ptr(f), key))
        });
        if let Some(key) = &memo_key {
            if let Some(&hit) = self.memo.borrow().get(key) {
                return Ok(if hit { TriVal::True } else { TriVal::False });
            }
        }
        let result = self.formula_uncached(f, env)?;
        if let Some(key) = memo_key {
            match result {
                TriVal::True => {
                    self.memo.borrow_mut().insert(key, true);
                }
                TriVal::False => {
                    self.memo.borrow_mut().insert(key, false);
                }
                // Residue-closed nodes always resolve; not storing is safe.
                TriVal::Unknown(_) => debug_assert!(false, "residue-closed node left unknown"),
            }
        }
        Ok(result)
    }

    fn formula_uncached(&self, f: &FormulaRef, env: &mut Env) -> Result<TriVal, Unbound> {
        match f.as_ref() {
            Formula::True => Ok(TriVal::True),
            Formula::False => Ok(TriVal::False),
            Formula::Eq(a, b) => self.atom_eq(a, b, env),
            Formula::Neq(a, b) => Ok(self.atom_eq(a, b, env)?.not()),
            Formula::Leq(a, b) => {
                let x = self.value(a, env)?;
                let y = self.value(b, env)?;
                Ok(x.leq(&y))
            }
            Formula::CongMod(n, a, b) => {
                let x = self.value(a, env)?;
                let y = self.value(b, env)?;
                Ok(x.cong(&y, *n))
            }
            Formula::And(a, b) => {
                // Scan every conjunct: a definite False decides the node even
                // past an Unknown, and the masks of all unknowns merge.
                let mut mask = 0u32;
                let mut unknown = false;
                for part in [a, b] {
                    match self.formula(part, env)? {
                        TriVal::False => return Ok(TriVal::False),
                        TriVal::Unknown(m) => {
                            unknown = true;
                            mask |= m;
                        }
                        TriVal::True => {}
                    }
                }
                Ok(if unknown { TriVal::Unknown(mask) } else { TriVal::True })
            }
            Formula::Or(a, b) => {
                let mut mask = 0u32;
                let mut unknown = false;
                for part in [a, b] {
                    match self.formula(part, env)? {
                        TriVal::True => return Ok(TriVal::True),
                        TriVal::Unknown(m) => {
                            unknown = true;
                            mask |= m;
                        }
                        TriVal::False => {}
                    }
                }
                Ok(if unknown { TriVal::Unknown(mask) } else { TriVal::False })
            }
            Formula::Not(a) => Ok(self.formula(a, env)?.not()),
            Formula::Exists(var, body) => self.quantifier(var, body, env, true),
            Formula::Forall(var, body) => self.quantifier(var, body, env, false),
        }
    }

    fn quantifier(
        &self,
        var: &Var,
        body: &FormulaRef,
        env: &mut Env,
        existential: bool,
    ) -> Result<TriVal, Unbound> {
        if existential && var.sort == Sort::Residue {
            match self.try_pin(var, body, env)? {
                Pin::Value(c) => {
                    env.stack.push((var.name.clone(), Binding::Residue(ResValue::Exact(c))));
                    let out = self.formula(body, env);
                    env.stack.pop();
                    return out;
                }
                Pin::Impossible => return Ok(TriVal::False),
                Pin::None => {}
            }
        }
        let mut decisive_hit = false;
        let mut mask = 0u32;
        let mut unknown = false;
        let mut visit = |this: &Self, binding: Binding, env: &mut Env| -> Result<bool, Unbound> {
            env.stack.push((var.name.clone(), binding));
            let res = this.formula(body, env);
            env.stack.pop();
            match res? {
                TriVal::True if existential => {
                    decisive_hit = true;
                    Ok(true)
                }
                TriVal::False if !existential => {
                    decisive_hit = true;
                    Ok(true)
                }
                TriVal::Unknown(m) => {
                    unknown = true;
                    mask |= m;
                    Ok(false)
                }
                _ => Ok(false),
            }
        };
        match var.sort {
            Sort::Residue => {
                for c in 0..self.arith.p {
                    if visit(self, Binding::Residue(ResValue::Exact(c)), env)? {
                        break;
                    }
                }
            }
            Sort::Valued => {
                for code in 0..self.point_count {
                    // Rebinding a valued variable invalidates cached terms.
                    self.term_cache.borrow_mut().clear();
                    if visit(self, Binding::Valued(self.arith.point(code)), env)? {
                        break;
                    }
                }
                self.term_cache.borrow_mut().clear();
            }
            Sort::Value => {
                for n in -self.value_bound..=self.value_bound {
                    if visit(self, Binding::Value(ValInterval::point(VB::Fin(n))), env)? {
                        break;
                    }
                }
            }
        }
        Ok(if decisive_hit {
            if existential {
                TriVal::True
            } else {
                TriVal::False
            }
        } else if unknown {
            TriVal::Unknown(mask)
        } else if existential {
            TriVal::False
        } else {
            TriVal::True
        })
    }

    fn atom_eq(&self, a: &TermRef, b: &TermRef, env: &mut Env) -> Result<TriVal, Unbound> {
        match a.sort() {
            Sort::Valued => {
                let x = self.valued(a, env)?;
                let y = self.valued(b, env)?;
                let diff = self.arith.sub(&x, &y);
                let interval = self.arith.ord(&diff);
                // Equality in O/pi^k is congruence at the working depth.
                let k = VB::Fin(self.depth as i64);
                Ok(if interval.lo >= k {
                    TriVal::True
                } else if interval.hi < k {
                    TriVal::False
                } else {
                    TriVal::Unknown(interval.mask)
                })
            }
            Sort::Residue => {
                let x = self.residue(a, env)?;
                let y = self.residue(b, env)?;
                Ok(match (x, y) {
                    (ResValue::Exact(u), ResValue::Exact(v)) => {
                        if u == v {
                            TriVal::True
                        } else {
                            TriVal::False
                        }
                    }
                    (ResValue::Unknown(m), ResValue::Exact(_))
                    | (ResValue::Exact(_), ResValue::Unknown(m)) => TriVal::Unknown(m),
                    (ResValue::Unknown(m), ResValue::Unknown(n)) => TriVal::Unknown(m | n),
                })
            }
            Sort::Value => {
                let x = self.value(a, env)?;
                let y = self.value(b, env)?;
                Ok(x.eq(&y))
            }
        }
    }

    fn valued(&self, t: &TermRef, env: &mut Env) -> Result<Elem, Unbound> {
        let key = Rc::as_ptr(t);
        let cacheable = matches!(t.node(), TermNode::Add(..) | TermNode::Mul(..) | TermNode::Neg(..));
        if cacheable {
            if let Some(hit) = self.term_cache.borrow().get(&key) {
                return Ok(hit.clone());
            }
        }
        let out = match t.node() {
            TermNode::Int(n) => self.arith.exact_int(n),
            TermNode::Rat(r) => self.arith.exact_rat(r),
            TermNode::Var(v) => match env.lookup(&v.name) {
                Some(Binding::Valued(e)) => e.clone(),
                Some(_) => unreachable!("sort-checked variable binding"),
                None => return Err(Unbound(v.name.clone())),
            },
            TermNode::Add(a, b) => {
                let x = self.valued(a, env)?;
                let y = self.valued(b, env)?;
                self.arith.add(&x, &y)
            }
            TermNode::Mul(a, b) => {
                let x = self.valued(a, env)?;
                let y = self.valued(b, env)?;
                self.arith.mul(&x, &y)
            }
            TermNode::Neg(a) => {
                let x = self.valued(a, env)?;
                self.arith.neg(&x)
            }
            TermNode::Ord(_) | TermNode::Ac(_) | TermNode::Inf => {
                unreachable!("not valued-sorted")
            }
        };
        if cacheable {
            self.term_cache.borrow_mut().insert(key, out.clone());
        }
        Ok(out)
    }

    fn residue(&self, t: &TermRef, env: &mut Env) -> Result<ResValue, Unbound> {
        Ok(match t.node() {
            TermNode::Int(n) => {
                let p = BigInt::from(self.arith.p);
                ResValue::Exact(n.mod_floor(&p).to_u64().expect("residue fits"))
            }
            TermNode::Var(v) => match env.lookup(&v.name) {
                Some(Binding::Residue(r)) => *r,
                Some(_) => unreachable!("sort-checked variable binding"),
                None => return Err(Unbound(v.name.clone())),
            },
            TermNode::Add(a, b) => {
                let x = self.residue(a, env)?;
                let y = self.residue(b, env)?;
                self.arith.res_add(x, y)
            }
            TermNode::Mul(a, b) => {
                let x = self.residue(a, env)?;
                let y = self.residue(b, env)?;
                self.arith.res_mul(x, y)
            }
            TermNode::Neg(a) => {
                let x = self.residue(a, env)?;
                self.arith.res_neg(x)
            }
            TermNode::Ac(a) => {
                let x = self.valued(a, env)?;
                self.arith.ac(&x)
            }
            TermNode::Rat(_) | TermNode::Ord(_) | TermNode::Inf => {
                unreachable!("not residue-sorted")
            }
        })
    }

    fn value(&self, t: &TermRef, env: &mut Env) -> Result<ValInterval, Unbound> {
        Ok(match t.node() {
            TermNode::Int(n) => {
                ValInterval::point(VB::Fin(n.to_i64().expect("validated value constant")))
            }
            TermNode::Inf => ValInterval::point(VB::PosInf),
            TermNode::Var(v) => match env.lookup(&v.name) {
                Some(Binding::Value(i)) => *i,
                Some(_) => unreachable!("sort-checked variable binding"),
                None => return Err(Unbound(v.name.clone())),
            },
            TermNode::Add(a, b) => {
                let x = self.value(a, env)?;
                let y = self.value(b, env)?;
                x.add(&y)
            }
            TermNode::Neg(a) => self.value(a, env)?.neg(),
            TermNode::Ord(a) => {
                let x = self.valued(a, env)?;
                self.arith.ord(&x)
            }
            TermNode::Rat(_) | TermNode::Mul(..) | TermNode::Ac(_) => {
                unreachable!("not value-sorted")
            }
        })
    }

    /// Search the And-spine of `body` (looking through inner quantifiers that
    /// do not shadow `var`) for a conjunct that pins `var` to a single value.
    fn try_pin(&self, var: &Var, body: &FormulaRef, env: &mut Env) -> Result<Pin, Unbound> {
        let mut conjuncts = Vec::new();
        collect_spine(body, &var.name, &mut conjuncts);
        for conjunct in conjuncts {
            match self.pin_from_conjunct(var, conjunct, env) {
                Pin::None => continue,
                decided => return Ok(decided),
            }
        }
        Ok(Pin::None)
    }

    fn pin_from_conjunct(&self, var: &Var, conjunct: &FormulaRef, env: &mut Env) -> Pin {
        match conjunct.as_ref() {
            Formula::Eq(a, b) if a.sort() == Sort::Residue => {
                self.pin_linear(var, a, b, env)
            }
            Formula::Or(left, right) => {
                let Some((guard_l, al, bl)) = guarded_capture(left, &var.name) else {
                    return Pin::None;
                };
                let Some((guard_r, ar, br)) = guarded_capture(right, &var.name) else {
                    return Pin::None;
                };
                let gl = match self.formula(guard_l, env) {
                    Ok(v) => v,
                    Err(_) => return Pin::None,
                };
                let gr = match self.formula(guard_r, env) {
                    Ok(v) => v,
                    Err(_) => return Pin::None,
                };
                match (gl, gr) {
                    (TriVal::True, TriVal::False) => self.pin_linear(var, al, bl, env),
                    (TriVal::False, TriVal::True) => self.pin_linear(var, ar, br, env),
                    (TriVal::False, TriVal::False) => Pin::Impossible,
                    _ => Pin::None,
                }
            }
            _ => Pin::None,
        }
    }

    /// Solve Eq(a, b) for `var` when both sides are at most linear in it.
    /// Evaluating at var = 0 and var = 1 recovers the coefficients exactly.
    fn pin_linear(&self, var: &Var, a: &TermRef, b: &TermRef, env: &mut Env) -> Pin {
        if res_degree(a, &var.name) > 1 || res_degree(b, &var.name) > 1 {
            return Pin::None;
        }
        if res_degree(a, &var.name) == 0 && res_degree(b, &var.name) == 0 {
            return Pin::None;
        }
        let probe = |value: u64, t: &TermRef, env: &mut Env| -> Option<u64> {
            env.stack.push((var.name.clone(), Binding::Residue(ResValue::Exact(value))));
            let out = self.residue(t, env);
            env.stack.pop();
            match out {
                Ok(ResValue::Exact(v)) => Some(v),
                _ => None,
            }
        };
        let p = self.arith.p;
        let (Some(a0), Some(a1), Some(b0), Some(b1)) = (
            probe(0, a, env),
            probe(1, a, env),
            probe(0, b, env),
            probe(1, b, env),
        ) else {
            return Pin::None;
        };
        // (a0 + ca*var) = (b0 + cb*var) with ca = a1-a0, cb = b1-b0.
        let ca = (a1 + p - a0) % p;
        let cb = (b1 + p - b0) % p;
        let c = (ca + p - cb) % p;
        let rhs = (b0 + p - a0) % p;
        if c != 0 {
            Pin::Value(rhs * classical_groups::fqlin::inv_mod(c, p) % p)
        } else if rhs == 0 {
            // Tautology in var; does not pin.
            Pin::None
        } else {
            Pin::Impossible
        }
    }
}

enum Pin {
    Value(u64),
    Impossible,
    None,
}

/// Flatten the And-spine of a body, descending through quantifiers whose
/// binder does not shadow the variable being pinned.
fn collect_spine<'f>(f: &'f FormulaRef, var: &str, out: &mut Vec<&'f FormulaRef>) {
    match f.as_ref() {
        Formula::And(a, b) => {
            collect_spine(a, var, out);
            collect_spine(b, var, out);
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) if v.name != var => {
            collect_spine(body, var, out);
        }
        _ => out.push(f),
    }
}

/// Match And(guard, Eq(var, t)) (either equation side), returning the guard
/// and the equation sides. The guard must not mention the variable.
fn guarded_capture<'f>(
    f: &'f FormulaRef,
    var: &str,
) -> Option<(&'f FormulaRef, &'f TermRef, &'f TermRef)> {
    let Formula::And(guard, eqn) = f.as_ref() else { return None };
    let Formula::Eq(a, b) = eqn.as_ref() else { return None };
    if a.sort() != Sort::Residue {
        return None;
    }
    if pas_lang::free_vars(guard).iter().any(|v| v.name == var) {
        return None;
    }
    Some((guard, a, b))
}

/// Syntactic degree of a residue term in one variable; valued subterms under
/// ac never contain residue variables, so they contribute degree zero.
fn res_degree(t: &TermRef, var: &str) -> u32 {
    match t.node() {
        TermNode::Var(v) => u32::from(v.name == var),
        TermNode::Int(_) | TermNode::Rat(_) | TermNode::Ac(_) | TermNode::Inf => 0,
        TermNode::Add(a, b) => res_degree(a, var).max(res_degree(b, var)),
        TermNode::Mul(a, b) => res_degree(a, var).saturating_add(res_degree(b, var)),
        TermNode::Neg(a) | TermNode::Ord(a) => res_degree(a, var),
    }
}

pub(crate) fn bindings_from_point(
    m: &ModelSpec,
    point: &BTreeMap<String, PointValue>,
) -> Result<HashMap<String, Binding>, EvalError> {
    let arith = Arith { p: m.prime(), kind: m.kind() };
    let mut base = HashMap::new();
    for (name, value) in point {
        let binding = match value {
            PointValue::Code(code) => Binding::Valued(arith.point(*code)),
            PointValue::Rational(r) => {
                if r.denom().mod_floor(&BigInt::from(m.prime())).is_zero() {
                    return Err(EvalError::BadDenominator(r.to_string()));
                }
                Binding::Valued(arith.exact_rat(r))
            }
            PointValue::Truncated { v, digits } => {
                if digits.first() == Some(&0) {
                    return Err(EvalError::AssignmentSort { name: name.clone() });
                }
                Binding::Valued(Elem::Trunc(crate::elem::Trunc {
                    v: *v,
                    digits: digits.clone(),
                    mask: 0,
                }))
            }
            PointValue::Residue(r) => Binding::Residue(ResValue::Exact(r % m.prime())),
            PointValue::Value(n) => Binding::Value(ValInterval::point(VB::Fin(*n))),
            PointValue::ValueInf => Binding::Value(ValInterval::point(VB::PosInf)),
        };
        base.insert(name.clone(), binding);
    }
    Ok(base)
}

/// Check that every free variable of the formula is assigned with the
/// matching sort.
fn check_coverage(
    f: &FormulaRef,
    base: &HashMap<String, Binding>,
) -> Result<(), EvalError> {
    for var in pas_lang::free_vars(f) {
        match (base.get(&var.name), var.sort) {
            (Some(Binding::Valued(_)), Sort::Valued)
            | (Some(Binding::Residue(_)), Sort::Residue)
            | (Some(Binding::Value(_)), Sort::Value) => {}
            (Some(_), _) => return Err(EvalError::AssignmentSort { name: var.name }),
            (None, _) => return Err(EvalError::UnassignedVar(var.name)),
        }
    }
    Ok(())
}

/// Evaluate a formula at a point, three-valued.
pub fn eval_formula(
    m: &ModelSpec,
    f: &FormulaRef,
    point: &BTreeMap<String, PointValue>,
) -> Result<TriBool, EvalError> {
    let base = bindings_from_point(m, point)?;
    check_coverage(f, &base)?;
    let evaluator = Evaluator::new(m, f)?;
    evaluator.eval(&base).map(TriBool::from)
}

/// Evaluate a term at a point.
pub fn eval_term(
    m: &ModelSpec,
    t: &TermRef,
    point: &BTreeMap<String, PointValue>,
) -> Result<TermOutcome, EvalError> {
    let base = bindings_from_point(m, point)?;
    for var in pas_lang::free_term_vars(t) {
        match (base.get(&var.name), var.sort) {
            (Some(Binding::Valued(_)), Sort::Valued)
            | (Some(Binding::Residue(_)), Sort::Residue)
            | (Some(Binding::Value(_)), Sort::Value) => {}
            (Some(_), _) => return Err(EvalError::AssignmentSort { name: var.name }),
            (None, _) => return Err(EvalError::UnassignedVar(var.name)),
        }
    }
    // Term validation mirrors the formula walk for bare terms.
    validate_bare_term(t, m)?;
    let evaluator = Evaluator::new(m, &pas_lang::Formula::lit(true))?;
    evaluator.eval_term_with(t, &base)
}

fn validate_bare_term(t: &TermRef, m: &ModelSpec) -> Result<(), EvalError> {
    match t.node() {
        TermNode::Rat(r) => {
            if r.denom().mod_floor(&BigInt::from(m.prime())).is_zero() {
                return Err(EvalError::BadDenominator(r.to_string()));
            }
            Ok(())
        }
        TermNode::Int(n) => {
            if t.sort() == Sort::Value {
                let bound = m.value_bound();
                let n = n.to_i64().unwrap_or(i64::MAX);
                if n.abs() > bound {
                    return Err(EvalError::ValueConstantOutOfRange { n, bound });
                }
            }
            Ok(())
        }
        TermNode::Add(a, b) | TermNode::Mul(a, b) => {
            validate_bare_term(a, m)?;
            validate_bare_term(b, m)
        }
        TermNode::Neg(a) | TermNode::Ord(a) | TermNode::Ac(a) => validate_bare_term(a, m),
        TermNode::Var(_) | TermNode::Inf => Ok(()),
    }
}
