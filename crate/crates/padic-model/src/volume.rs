//! Exact volumes of definable sets by bounded cell enumeration.
//!
//! The measure of a formula over an ambient space at depth k is the number
//! of level-k ambient cells satisfying it, divided by p^(k·d) for the
//! declared dimension d. Cells refine only while some atom is undecided,
//! and a cell that resolves True at level j counts its lifts in closed form
//! through the smooth-factor Hensel structure, so trees stay shallow.
//! Stability is certified by re-running one level deeper: equal values with
//! no unknown residue means the value has converged.
//!
//! Before walking, equality atoms whose two sides differ by a defining
//! equation of an ambient factor (or by the zero polynomial) are replaced
//! by their truth value: every ambient cell satisfies its factor's
//! equations at every refinement level, so such atoms cannot influence the
//! walk, and removing them lets membership-style formulas resolve at the
//! residue level instead of forcing full-depth refinement.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use classical_groups::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use pas_lang::{Formula, FormulaRef, Sort, TermNode, TermRef};
use thiserror::Error;

use crate::ambient::{AmbientError, AmbientSpace, SeededAmbient};
use crate::cache::{CacheHandle, CacheRecord, CACHE_VERSION};
use crate::elem::{Arith, TriVal};
use crate::eval::{Binding, EvalError, Evaluator};
use crate::model::{ModelError, ModelSpec};

pub(crate) const SEED_BUDGET: usize = 10_000_000;
const CELL_BUDGET: u64 = 20_000_000;
const POLY_TERM_LIMIT: usize = 4096;

#[derive(Debug, Error)]
pub enum VolumeError {
    #[error("formula mentions {0}, which is not an ambient coordinate")]
    UnknownCoordinate(String),
    #[error("free residue variable {0}: volumes are taken over valued coordinates only")]
    FreeResidueVar(String),
    #[error("free value variable {0}: volumes are taken over valued coordinates only")]
    FreeValueVar(String),
    #[error("cell budget exceeded")]
    Budget,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Ambient(#[from] AmbientError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Escalation and normalization controls.
pub struct VolumeOptions<'a> {
    /// Maximum number of depth-escalation steps past the base depth.
    pub cap: u32,
    /// Dimension used for normalization; defaults to the ambient dimension.
    pub declared_dim: Option<usize>,
    pub cache: Option<&'a CacheHandle>,
}

impl Default for VolumeOptions<'_> {
    fn default() -> Self {
        VolumeOptions { cap: 8, declared_dim: None, cache: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeResult {
    pub value: BigRational,
    pub depth_used: u32,
    /// True when two consecutive depths agree exactly with nothing unknown.
    pub stable: bool,
    pub unknown_fraction: BigRational,
}

/// Raw counts of level-k cells at one evaluation depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeCounts {
    pub true_count: BigInt,
    pub unknown_count: BigInt,
}

/// Volume with a stability certificate obtained by depth escalation.
pub fn count_and_volume(
    m: &ModelSpec,
    f: &FormulaRef,
    space: &AmbientSpace,
    opts: &VolumeOptions,
) -> Result<VolumeResult, VolumeError> {
    validate_free_vars(f, space)?;
    let rewritten = rewrite_with_ambient(f, space);
    let d = opts.declared_dim.unwrap_or(space.dim());
    let mut model = m.clone();
    let mut current = depth_counts_inner(&model, f, &rewritten, space, opts.cache)?;
    for _ in 0..opts.cap {
        let Ok(next_model) = model.deepen() else { break };
        let next = depth_counts_inner(&next_model, f, &rewritten, space, opts.cache)?;
        let v0 = measure(&current.true_count, &model, d);
        let v1 = measure(&next.true_count, &next_model, d);
        if v0 == v1 && current.unknown_count.is_zero() && next.unknown_count.is_zero() {
            return Ok(VolumeResult {
                value: v0,
                depth_used: model.depth(),
                stable: true,
                unknown_fraction: BigRational::zero(),
            });
        }
        model = next_model;
        current = next;
    }
    Ok(VolumeResult {
        value: measure(&current.true_count, &model, d),
        depth_used: model.depth(),
        stable: false,
        unknown_fraction: measure(&current.unknown_count, &model, d),
    })
}

/// Counts at the model's own depth, without escalation.
pub fn counts_at_depth(
    m: &ModelSpec,
    f: &FormulaRef,
    space: &AmbientSpace,
) -> Result<VolumeCounts, VolumeError> {
    validate_free_vars(f, space)?;
    let rewritten = rewrite_with_ambient(f, space);
    depth_counts_inner(m, f, &rewritten, space, None)
}

fn measure(count: &BigInt, m: &ModelSpec, d: usize) -> BigRational {
    let denom = BigInt::from(m.prime()).pow(m.depth() * d as u32);
    BigRational::new(count.clone(), denom)
}

fn depth_counts_inner(
    m: &ModelSpec,
    original: &FormulaRef,
    rewritten: &FormulaRef,
    space: &AmbientSpace,
    cache: Option<&CacheHandle>,
) -> Result<VolumeCounts, VolumeError> {
    let key = cache.map(|_| volume_key(original, m, space));
    if let (Some(cache), Some(key)) = (cache, &key) {
        if let Some(record) = cache.lookup(key) {
            let parse = |s: &str| s.parse::<BigInt>().ok();
            if let (Some(t), Some(u)) = (parse(&record.true_count), parse(&record.unknown_count))
            {
                return Ok(VolumeCounts { true_count: t, unknown_count: u });
            }
        }
    }
    let seeded = space.seed(m, SEED_BUDGET)?;
    let evaluator = Evaluator::new(m, rewritten)?;
    let counts = walk(m, space, &seeded, &evaluator)?;
    if let (Some(cache), Some(key)) = (cache, &key) {
        let record = CacheRecord {
            true_count: counts.true_count.to_string(),
            unknown_count: counts.unknown_count.to_string(),
            version: CACHE_VERSION,
        };
        let _ = cache.store(key, &record);
    }
    Ok(counts)
}

fn volume_key(f: &FormulaRef, m: &ModelSpec, space: &AmbientSpace) -> String {
    format!(
        "v1|{}|p={}|kind={}|B={}|ambient={}|k={}",
        pas_lang::dag_text(f),
        m.prime(),
        m.kind().label(),
        m.value_bound(),
        space.id(),
        m.depth(),
    )
}

pub(crate) fn validate_free_vars(f: &FormulaRef, space: &AmbientSpace) -> Result<(), VolumeError> {
    let coord_set: HashSet<&str> = space.coords().iter().map(|s| s.as_str()).collect();
    for v in pas_lang::free_vars(f) {
        match v.sort {
            Sort::Valued => {
                if !coord_set.contains(v.name.as_str()) {
                    return Err(VolumeError::UnknownCoordinate(v.name));
                }
            }
            Sort::Residue => return Err(VolumeError::FreeResidueVar(v.name)),
            Sort::Value => return Err(VolumeError::FreeValueVar(v.name)),
        }
    }
    Ok(())
}

pub(crate) struct Cell {
    pub(crate) levels: Vec<u32>,
    pub(crate) codes: Vec<u64>,
}

/// Lex odometer over the cartesian product of factor seed lists.
struct SeedProduct<'a> {
    seeded: &'a SeededAmbient<'a>,
    indices: Vec<usize>,
    done: bool,
}

impl<'a> SeedProduct<'a> {
    fn new(seeded: &'a SeededAmbient<'a>) -> SeedProduct<'a> {
        let n = seeded.space().factor_count();
        let empty = (0..n).any(|i| seeded.seeds(i).is_empty());
        SeedProduct { seeded, indices: vec![0; n], done: empty }
    }

    fn next_cell(&mut self) -> Option<Cell> {
        if self.done {
            return None;
        }
        let space = self.seeded.space();
        let mut codes = Vec::with_capacity(space.coords().len());
        for (fidx, &si) in self.indices.iter().enumerate() {
            codes.extend_from_slice(&self.seeded.seeds(fidx)[si]);
        }
        let cell = Cell { levels: vec![1; self.indices.len()], codes };
        // Advance, last factor fastest.
        self.done = true;
        for fidx in (0..self.indices.len()).rev() {
            if self.indices[fidx] + 1 < self.seeded.seeds(fidx).len() {
                self.indices[fidx] += 1;
                self.done = false;
                break;
            }
            self.indices[fidx] = 0;
        }
        Some(cell)
    }
}

fn walk(
    m: &ModelSpec,
    space: &AmbientSpace,
    seeded: &SeededAmbient,
    evaluator: &Evaluator,
) -> Result<VolumeCounts, VolumeError> {
    let p = m.prime();
    let k = m.depth();
    let arith = Arith { p, kind: m.kind() };
    let nf = space.factor_count();
    let mut product = SeedProduct::new(seeded);
    let mut stack: Vec<Cell> = Vec::new();
    let mut visits: u64 = 0;
    let mut true_count = BigInt::zero();
    let mut unknown_count = BigInt::zero();
    let mut base: HashMap<String, Binding> = HashMap::new();
    loop {
        let cell = match stack.pop() {
            Some(c) => c,
            None => match product.next_cell() {
                Some(c) => c,
                None => break,
            },
        };
        visits += 1;
        if visits > CELL_BUDGET {
            return Err(VolumeError::Budget);
        }
        for fidx in 0..nf {
            let range = space.factor_range(fidx);
            let level = cell.levels[fidx];
            for (ci, name) in space.factor_coords(fidx).iter().enumerate() {
                let elem = arith.cell(cell.codes[range.start + ci], level, 1 << fidx);
                base.insert(name.clone(), Binding::Valued(elem));
            }
        }
        match evaluator.eval(&base)? {
            TriVal::True => match pick_refinement(space, seeded, &cell, None, k) {
                Some(fidx) => push_children(seeded, space, &cell, fidx, &mut stack),
                None => true_count += lift_count(space, seeded, &cell, k, p),
            },
            TriVal::False => {}
            TriVal::Unknown(mask) => match pick_refinement(space, seeded, &cell, Some(mask), k) {
                Some(fidx) => push_children(seeded, space, &cell, fidx, &mut stack),
                None => unknown_count += lift_count(space, seeded, &cell, k, p),
            },
        }
    }
    Ok(VolumeCounts { true_count, unknown_count })
}

/// The factor to refine next: for True cells only singular factors need
/// full depth before counting; for Unknown cells also every factor blamed
/// by the mask. Lowest level first, then lowest index.
pub(crate) fn pick_refinement(
    space: &AmbientSpace,
    seeded: &SeededAmbient,
    cell: &Cell,
    mask: Option<u32>,
    k: u32,
) -> Option<usize> {
    let mut best: Option<(u32, usize)> = None;
    for fidx in 0..space.factor_count() {
        let level = cell.levels[fidx];
        if level >= k {
            continue;
        }
        let blamed = mask.is_some_and(|m| m & (1 << fidx) != 0);
        if !blamed && seeded.smooth(fidx) {
            continue;
        }
        if best.is_none_or(|(bl, bi)| (level, fidx) < (bl, bi)) {
            best = Some((level, fidx));
        }
    }
    best.map(|(_, fidx)| fidx)
}

fn push_children(
    seeded: &SeededAmbient,
    space: &AmbientSpace,
    cell: &Cell,
    fidx: usize,
    stack: &mut Vec<Cell>,
) {
    let range = space.factor_range(fidx);
    let children = seeded.refine(fidx, &cell.codes[range.clone()], cell.levels[fidx]);
    for child in children {
        let mut codes = cell.codes.clone();
        codes[range.clone()].copy_from_slice(&child);
        let mut levels = cell.levels.clone();
        levels[fidx] += 1;
        stack.push(Cell { levels, codes });
    }
}

/// Number of level-k cells below this cell: smooth factors lift p^dim per
/// level, singular factors have already been refined to full depth.
fn lift_count(
    space: &AmbientSpace,
    seeded: &SeededAmbient,
    cell: &Cell,
    k: u32,
    p: u64,
) -> BigInt {
    let mut exponent: u32 = 0;
    for fidx in 0..space.factor_count() {
        if seeded.smooth(fidx) {
            exponent += space.factor_dim(fidx) as u32 * (k - cell.levels[fidx]);
        } else {
            debug_assert_eq!(cell.levels[fidx], k, "singular factor counted below full depth");
        }
    }
    BigInt::from(p).pow(exponent)
}

/// Replace equality atoms implied by the ambient factor equations (or by
/// polynomial identity) with their truth value.
pub(crate) fn rewrite_with_ambient(f: &FormulaRef, space: &AmbientSpace) -> FormulaRef {
    let tables = EquationTables::new(space);
    let mut bound = HashSet::new();
    rewrite(f, &tables, &mut bound)
}

struct EquationTables<'a> {
    space: &'a AmbientSpace,
    coord_index: HashMap<String, usize>,
}

impl<'a> EquationTables<'a> {
    fn new(space: &'a AmbientSpace) -> EquationTables<'a> {
        let coord_index = space
            .coords()
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        EquationTables { space, coord_index }
    }

    /// True when `a = b` holds on every ambient cell at every depth.
    fn atom_implied(&self, a: &TermRef, b: &TermRef, bound: &HashSet<String>) -> bool {
        if a.sort() != Sort::Valued {
            return false;
        }
        for t in [a, b] {
            if pas_lang::free_term_vars(t).iter().any(|v| bound.contains(&v.name)) {
                return false;
            }
        }
        let nvars = self.space.coords().len();
        let Some(pa) = term_to_poly(a, &self.coord_index, nvars) else { return false };
        let Some(pb) = term_to_poly(b, &self.coord_index, nvars) else { return false };
        let diff = pa.sub(&pb);
        if diff.is_zero() {
            return true;
        }
        // The difference must live on a single factor's coordinates and be
        // proportional to one of that factor's defining equations.
        let support: HashSet<usize> = diff
            .terms
            .keys()
            .flat_map(|mono| {
                mono.iter().enumerate().filter(|(_, &e)| e > 0).map(|(v, _)| v)
            })
            .collect();
        for fidx in 0..self.space.factor_count() {
            let range = self.space.factor_range(fidx);
            if !support.iter().all(|&v| range.contains(&v)) {
                continue;
            }
            let local = localize(&diff, range.start, range.len());
            for eqn in self.space.factor_equations(fidx) {
                if proportional(&local, eqn) {
                    return true;
                }
            }
        }
        false
    }
}

fn rewrite(
    f: &FormulaRef,
    tables: &EquationTables,
    bound: &mut HashSet<String>,
) -> FormulaRef {
    match f.as_ref() {
        Formula::Eq(a, b) if tables.atom_implied(a, b, bound) => Rc::new(Formula::True),
        Formula::Neq(a, b) if tables.atom_implied(a, b, bound) => Rc::new(Formula::False),
        Formula::And(l, r) => {
            Rc::new(Formula::And(rewrite(l, tables, bound), rewrite(r, tables, bound)))
        }
        Formula::Or(l, r) => {
            Rc::new(Formula::Or(rewrite(l, tables, bound), rewrite(r, tables, bound)))
        }
        Formula::Not(inner) => Rc::new(Formula::Not(rewrite(inner, tables, bound))),
        Formula::Forall(v, body) => {
            let fresh = bound.insert(v.name.clone());
            let body = rewrite(body, tables, bound);
            if fresh {
                bound.remove(&v.name);
            }
            Rc::new(Formula::Forall(v.clone(), body))
        }
        Formula::Exists(v, body) => {
            let fresh = bound.insert(v.name.clone());
            let body = rewrite(body, tables, bound);
            if fresh {
                bound.remove(&v.name);
            }
            Rc::new(Formula::Exists(v.clone(), body))
        }
        _ => f.clone(),
    }
}

/// The term as a polynomial in the ambient coordinates, or None when it
/// contains non-polynomial operations, foreign variables, or grows past
/// the term limit.
fn term_to_poly(
    t: &TermRef,
    coord_index: &HashMap<String, usize>,
    nvars: usize,
) -> Option<Poly> {
    let poly = match t.node() {
        TermNode::Int(n) => Poly::constant(nvars, BigRational::from_integer(n.clone())),
        TermNode::Rat(r) => Poly::constant(nvars, r.clone()),
        TermNode::Var(v) => Poly::var(nvars, *coord_index.get(&v.name)?),
        TermNode::Add(a, b) => term_to_poly(a, coord_index, nvars)?
            .add(&term_to_poly(b, coord_index, nvars)?),
        TermNode::Mul(a, b) => term_to_poly(a, coord_index, nvars)?
            .mul(&term_to_poly(b, coord_index, nvars)?),
        TermNode::Neg(a) => term_to_poly(a, coord_index, nvars)?.neg(),
        TermNode::Ord(_) | TermNode::Ac(_) | TermNode::Inf => return None,
    };
    if poly.terms.len() > POLY_TERM_LIMIT {
        return None;
    }
    Some(poly)
}

/// Restrict a polynomial supported on one factor's coordinate range to
/// that factor's local variables.
fn localize(poly: &Poly, start: usize, len: usize) -> Poly {
    let mut out = Poly::zero(len);
    for (mono, coeff) in &poly.terms {
        let local: Vec<u32> = mono[start..start + len].to_vec();
        out.terms.insert(local, coeff.clone());
    }
    out
}

fn proportional(a: &Poly, b: &Poly) -> bool {
    if a.terms.len() != b.terms.len() || a.is_zero() {
        return false;
    }
    let (first_mono, first_coeff) = a.terms.iter().next().expect("nonzero");
    let Some(b_coeff) = b.terms.get(first_mono) else { return false };
    if b_coeff.is_zero() {
        return false;
    }
    let ratio = first_coeff / b_coeff;
    if ratio.is_zero() {
        return false;
    }
    *a == b.scale(&ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientFactor;
    use crate::model::ModelKind;
    use classical_groups::GroupDescriptor;
    use num_traits::One;
    use pas_lang::{parse_formula, Formula, Sort, Term, Var};

    fn model(p: u64, k: u32) -> ModelSpec {
        ModelSpec::new(p, k, ModelKind::MixedChar).unwrap()
    }

    fn free_x() -> AmbientSpace {
        AmbientSpace::new(vec![AmbientFactor::FreeVar("x".into())]).unwrap()
    }

    #[test]
    fn order_at_least_j_has_volume_p_to_minus_j() {
        let f = parse_formula("2 <= ord(x)").unwrap();
        let m = model(5, 3);
        let r = count_and_volume(&m, &f, &free_x(), &VolumeOptions::default()).unwrap();
        assert!(r.stable);
        assert_eq!(r.value, BigRational::new(BigInt::one(), BigInt::from(25)));
        assert_eq!(r.depth_used, 3);
    }

    #[test]
    fn exact_equality_with_a_point_never_stabilizes() {
        let f = parse_formula("x = 0").unwrap();
        let m = model(3, 1);
        let opts = VolumeOptions { cap: 3, ..Default::default() };
        let r = count_and_volume(&m, &f, &free_x(), &opts).unwrap();
        assert!(!r.stable);
        // At the final depth k the satisfying set is the congruence class
        // 0 mod p^k, whose measure keeps shrinking.
        assert_eq!(r.value, BigRational::new(BigInt::one(), BigInt::from(81)));
        assert_eq!(r.depth_used, 4);
    }

    #[test]
    fn membership_atoms_are_absorbed_by_the_group_factor() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let space = AmbientSpace::new(vec![AmbientFactor::Group {
            desc,
            base: "g".into(),
        }])
        .unwrap();
        let f = pas_lang::groups::build_membership_formula(&desc, "g");
        let rewritten = rewrite_with_ambient(&f, &space);
        // Every equality atom disappears; only order conditions remain.
        fn has_eq(f: &FormulaRef) -> bool {
            match f.as_ref() {
                Formula::Eq(a, _) => a.sort() == Sort::Valued,
                Formula::And(l, r) | Formula::Or(l, r) => has_eq(l) || has_eq(r),
                Formula::Not(inner)
                | Formula::Forall(_, inner)
                | Formula::Exists(_, inner) => has_eq(inner),
                _ => false,
            }
        }
        assert!(has_eq(&f));
        assert!(!has_eq(&rewritten));
    }

    #[test]
    fn group_membership_volume_is_one_minus_q_to_minus_two() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let space = AmbientSpace::new(vec![AmbientFactor::Group {
            desc,
            base: "g".into(),
        }])
        .unwrap();
        let f = pas_lang::groups::build_membership_formula(&desc, "g");
        for p in [5u64, 7] {
            let m = model(p, 2);
            let r = count_and_volume(&m, &f, &space, &VolumeOptions::default()).unwrap();
            assert!(r.stable);
            let q = BigRational::from_integer(BigInt::from(p));
            let expected = BigRational::one() - (BigRational::one() / (&q * &q));
            assert_eq!(r.value, expected);
        }
    }

    #[test]
    fn free_residue_variables_are_rejected() {
        // The parser gives free variables the valued sort, so build the
        // formula directly to get a free residue variable.
        let x = Term::var(Var::valued("x"));
        let w = Term::var(Var::new("w", Sort::Residue));
        let f = Formula::eq(Term::ac(x).unwrap(), w).unwrap();
        let err = count_and_volume(&model(3, 1), &f, &free_x(), &VolumeOptions::default())
            .unwrap_err();
        assert!(matches!(err, VolumeError::FreeResidueVar(_)));
    }
}
