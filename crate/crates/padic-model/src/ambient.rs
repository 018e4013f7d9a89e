//! Product ambient spaces over the valuation ring.
//!
//! A volume computation runs over an ordered product of factors: free
//! coordinates, classical groups embedded by their matrix entries, or
//! explicit polynomial varieties. Each factor knows how to seed its
//! residue cells and how to refine a cell one digit deeper: by Hensel
//! lifting when the defining equations are smooth at every seed, and by
//! filtered digit enumeration otherwise.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::Range;
use std::rc::Rc;

use classical_groups::{fqlin, poly_det, GroupDescriptor, GroupKind, Poly, PolyMat, Ring, RingKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::model::ModelSpec;

/// One factor of an ambient product space.
#[derive(Debug, Clone)]
pub enum AmbientFactor {
    /// A single unconstrained coordinate ranging over the valuation ring.
    FreeVar(String),
    /// The matrix entries of a classical group; coordinates are named
    /// `{base}{i}{j}` row-major with 1-based indices.
    Group { desc: GroupDescriptor, base: String },
    /// Named coordinates cut out by polynomial equations, with a declared
    /// dimension used for volume normalization.
    Variety { vars: Vec<String>, polys: Vec<Poly>, dim: usize },
}

#[derive(Debug, Error)]
pub enum AmbientError {
    #[error("ambient spaces support at most 32 factors, got {0}")]
    TooManyFactors(usize),
    #[error("duplicate ambient coordinate {0}")]
    DuplicateCoordinate(String),
    #[error("variety polynomial over {got} variables, factor has {expected}")]
    VarietyShape { expected: usize, got: usize },
    #[error("variety dimension {dim} exceeds coordinate count {nvars}")]
    VarietyDim { dim: usize, nvars: usize },
    #[error("factor seed enumeration exceeded budget of {budget}")]
    SeedBudget { budget: usize },
}

#[derive(Debug)]
struct FactorData {
    factor: AmbientFactor,
    vars: Vec<String>,
    offset: usize,
    polys: Vec<Poly>,
    jacobian: Vec<Vec<Poly>>,
    dim: usize,
}

/// An ordered product of factors with named valued-sort coordinates.
#[derive(Debug)]
pub struct AmbientSpace {
    factors: Vec<FactorData>,
    coords: Vec<String>,
}

impl AmbientSpace {
    pub fn new(factors: Vec<AmbientFactor>) -> Result<AmbientSpace, AmbientError> {
        if factors.len() > 32 {
            return Err(AmbientError::TooManyFactors(factors.len()));
        }
        let mut data = Vec::with_capacity(factors.len());
        let mut coords = Vec::new();
        let mut seen = BTreeSet::new();
        for factor in factors {
            let offset = coords.len();
            let (vars, polys, dim) = match &factor {
                AmbientFactor::FreeVar(name) => (vec![name.clone()], Vec::new(), 1),
                AmbientFactor::Group { desc, base } => {
                    let r = desc.mat_size();
                    let mut vars = Vec::with_capacity(r * r);
                    for i in 1..=r {
                        for j in 1..=r {
                            vars.push(format!("{base}{i}{j}"));
                        }
                    }
                    (vars, group_equations(desc), desc.dim())
                }
                AmbientFactor::Variety { vars, polys, dim } => {
                    for p in polys {
                        if p.nvars != vars.len() {
                            return Err(AmbientError::VarietyShape {
                                expected: vars.len(),
                                got: p.nvars,
                            });
                        }
                    }
                    if *dim > vars.len() {
                        return Err(AmbientError::VarietyDim { dim: *dim, nvars: vars.len() });
                    }
                    (vars.clone(), polys.clone(), *dim)
                }
            };
            for v in &vars {
                if !seen.insert(v.clone()) {
                    return Err(AmbientError::DuplicateCoordinate(v.clone()));
                }
            }
            coords.extend(vars.iter().cloned());
            let jacobian = polys
                .iter()
                .map(|p| (0..p.nvars).map(|v| poly_partial(p, v)).collect())
                .collect();
            data.push(FactorData { factor, vars, offset, polys, jacobian, dim });
        }
        Ok(AmbientSpace { factors: data, coords })
    }

    /// All coordinate names in factor order.
    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    /// Sum of the declared factor dimensions.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).sum()
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_dim(&self, idx: usize) -> usize {
        self.factors[idx].dim
    }

    pub fn factor_coords(&self, idx: usize) -> &[String] {
        &self.factors[idx].vars
    }

    /// Index range of this factor's coordinates within `coords()`.
    pub fn factor_range(&self, idx: usize) -> Range<usize> {
        let f = &self.factors[idx];
        f.offset..f.offset + f.vars.len()
    }

    /// Defining equations of the factor in its local variables.
    pub fn factor_equations(&self, idx: usize) -> &[Poly] {
        &self.factors[idx].polys
    }

    /// Stable identity string for cache keys.
    pub fn id(&self) -> String {
        let mut out = String::new();
        for (i, f) in self.factors.iter().enumerate() {
            if i > 0 {
                out.push('|');
            }
            match &f.factor {
                AmbientFactor::FreeVar(name) => {
                    let _ = write!(out, "free:{name}");
                }
                AmbientFactor::Group { desc, base } => {
                    let _ = write!(out, "group:{}:{base}", desc.name());
                }
                AmbientFactor::Variety { vars, polys, dim } => {
                    let _ = write!(out, "variety:{}:dim={dim}", vars.join(","));
                    for p in polys {
                        let _ = write!(out, ":{}", poly_text(p));
                    }
                }
            }
        }
        out
    }

    /// Compute level-1 seed cells and the smoothness certificate for every
    /// factor of this space in the given model.
    pub fn seed(&self, m: &ModelSpec, budget: usize) -> Result<SeededAmbient<'_>, AmbientError> {
        let p = m.prime();
        let res_ring = Ring::new(RingKind::Mixed, p, 1).expect("depth-1 ring");
        let mut seeds = Vec::with_capacity(self.factors.len());
        let mut smooth = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            let list = match &f.factor {
                AmbientFactor::FreeVar(_) => (0..p).map(|c| vec![c]).collect::<Vec<_>>(),
                AmbientFactor::Group { desc, .. } => {
                    let mats = desc
                        .enumerate_finite_group(&res_ring, budget)
                        .map_err(|_| AmbientError::SeedBudget { budget })?;
                    let mut list: Vec<Vec<u64>> = mats
                        .iter()
                        .map(|g| g.entries().iter().map(|&e| res_ring.residue(e)).collect())
                        .collect();
                    list.sort();
                    list
                }
                AmbientFactor::Variety { vars, polys, .. } => {
                    let total = p.checked_pow(vars.len() as u32).unwrap_or(u64::MAX);
                    if total > budget as u64 {
                        return Err(AmbientError::SeedBudget { budget });
                    }
                    let mut list = Vec::new();
                    for idx in 0..total {
                        let mut codes = Vec::with_capacity(vars.len());
                        let mut rest = idx;
                        for _ in 0..vars.len() {
                            codes.push(rest % p);
                            rest /= p;
                        }
                        let point: Vec<_> =
                            codes.iter().map(|&c| res_ring.from_u64(c)).collect();
                        if polys.iter().all(|q| res_ring.is_zero(q.eval(&res_ring, &point))) {
                            list.push(codes);
                        }
                    }
                    list.sort();
                    list
                }
            };
            let expected_rank = f.vars.len() - f.dim;
            let is_smooth = f.polys.is_empty()
                || list.iter().all(|codes| {
                    let jac = jacobian_rows(f, &res_ring, codes);
                    fqlin::rank(&jac, p) == expected_rank
                });
            seeds.push(list);
            smooth.push(is_smooth);
        }
        Ok(SeededAmbient {
            space: self,
            model: m.clone(),
            res_ring,
            seeds,
            smooth,
            jac_cache: RefCell::new(HashMap::new()),
        })
    }
}

struct JacInfo {
    rows: Vec<Vec<u64>>,
    kernel: Vec<Vec<u64>>,
}

/// An ambient space seeded for one model: residue cells, smoothness flags,
/// and the one-digit refinement step.
pub struct SeededAmbient<'a> {
    space: &'a AmbientSpace,
    model: ModelSpec,
    res_ring: Ring,
    seeds: Vec<Vec<Vec<u64>>>,
    smooth: Vec<bool>,
    jac_cache: RefCell<HashMap<(usize, Vec<u64>), Rc<JacInfo>>>,
}

impl SeededAmbient<'_> {
    pub fn space(&self) -> &AmbientSpace {
        self.space
    }

    /// Level-1 cells of factor `idx`, lexicographically sorted coordinate
    /// code tuples.
    pub fn seeds(&self, idx: usize) -> &[Vec<u64>] {
        &self.seeds[idx]
    }

    /// Whether the factor's equations are smooth at every seed, so cells
    /// refine by Hensel lifting with exactly `p^dim` children each.
    pub fn smooth(&self, idx: usize) -> bool {
        self.smooth[idx]
    }

    /// Children of a level-`level` cell of factor `idx` at level + 1.
    pub fn refine(&self, idx: usize, codes: &[u64], level: u32) -> Vec<Vec<u64>> {
        let f = &self.space.factors[idx];
        let p = self.model.prime();
        let step = p.pow(level);
        if f.polys.is_empty() {
            return digit_extensions(codes, p, step);
        }
        if self.smooth[idx] {
            self.hensel_children(idx, codes, level)
        } else {
            let deeper = self.model.ring_at(level + 1);
            digit_extensions(codes, p, step)
                .into_iter()
                .filter(|child| {
                    let point: Vec<_> =
                        child.iter().map(|&c| deeper.element_from_index(c)).collect();
                    f.polys.iter().all(|q| deeper.is_zero(q.eval(&deeper, &point)))
                })
                .collect()
        }
    }

    fn hensel_children(&self, idx: usize, codes: &[u64], level: u32) -> Vec<Vec<u64>> {
        let f = &self.space.factors[idx];
        let p = self.model.prime();
        let step = p.pow(level);
        let residues: Vec<u64> = codes.iter().map(|&c| c % p).collect();
        let info = self.jac_info(idx, &residues);

        // Error digit: the level-th base-p digit of each equation value at
        // the canonical lift, zero in all lower digits by the cell invariant.
        let deeper = self.model.ring_at(level + 1);
        let point: Vec<_> = codes.iter().map(|&c| deeper.element_from_index(c)).collect();
        let rhs: Vec<u64> = f
            .polys
            .iter()
            .map(|q| {
                let v = deeper.index_of(q.eval(&deeper, &point));
                debug_assert_eq!(v % step, 0, "cell must satisfy equations at its level");
                let err = (v / step) % p;
                (p - err) % p
            })
            .collect();

        let t0 = fqlin::solve(&info.rows, &rhs, p);
        if fqlin::mat_vec(&info.rows, &t0, p) != rhs {
            return Vec::new();
        }
        let mut children = Vec::new();
        let kdim = info.kernel.len();
        let total = p.pow(kdim as u32);
        for sel in 0..total {
            let mut t = t0.clone();
            let mut rest = sel;
            for basis_vec in &info.kernel {
                let c = rest % p;
                rest /= p;
                if c != 0 {
                    for (tw, bw) in t.iter_mut().zip(basis_vec) {
                        *tw = (*tw + c * bw) % p;
                    }
                }
            }
            let child: Vec<u64> = codes.iter().zip(&t).map(|(&c, &tw)| c + step * tw).collect();
            children.push(child);
        }
        children.sort();
        children
    }

    fn jac_info(&self, idx: usize, residues: &[u64]) -> Rc<JacInfo> {
        let key = (idx, residues.to_vec());
        if let Some(info) = self.jac_cache.borrow().get(&key) {
            return info.clone();
        }
        let f = &self.space.factors[idx];
        let rows = jacobian_rows(f, &self.res_ring, residues);
        let kernel = fqlin::kernel_basis(&rows, self.model.prime());
        let info = Rc::new(JacInfo { rows, kernel });
        self.jac_cache.borrow_mut().insert(key, info.clone());
        info
    }
}

/// All `p^n` one-digit extensions of a cell, child codes in lex order.
fn digit_extensions(codes: &[u64], p: u64, step: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = p.pow(codes.len() as u32);
    for idx in 0..total {
        let mut child = codes.to_vec();
        let mut rest = idx;
        for c in child.iter_mut() {
            *c += step * (rest % p);
            rest /= p;
        }
        out.push(child);
    }
    out.sort();
    out
}

/// Jacobian of the factor equations mod p at residue coordinates; the
/// matrix is constant along every lift tree over that residue cell.
fn jacobian_rows(f: &FactorData, res_ring: &Ring, residues: &[u64]) -> Vec<Vec<u64>> {
    let point: Vec<_> = residues.iter().map(|&c| res_ring.from_u64(c)).collect();
    f.jacobian
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| res_ring.residue(q.eval(res_ring, &point)))
                .collect()
        })
        .collect()
}

/// Defining equations of the group as polynomials in the r^2 row-major
/// matrix entries: the entries of gᵀJg - J, plus det(g) - 1 for the
/// orthogonal case where the bilinear form alone cuts out both components.
fn group_equations(desc: &GroupDescriptor) -> Vec<Poly> {
    let r = desc.mat_size();
    let nvars = r * r;
    let jrows = desc.j_rows();
    let var = |i: usize, j: usize| Poly::var(nvars, i * r + j);
    let mut polys = Vec::new();
    for a in 0..r {
        for b in 0..r {
            // Entry (a, b) of gᵀJg: sum over i, j of g[i][a] J[i][j] g[j][b].
            let mut acc = Poly::from_int(nvars, -jrows[a][b]);
            for i in 0..r {
                for j in 0..r {
                    if jrows[i][j] == 0 {
                        continue;
                    }
                    let term = var(i, a).mul(&var(j, b)).scale(&BigRational::from_integer(
                        BigInt::from(jrows[i][j]),
                    ));
                    acc = acc.add(&term);
                }
            }
            if !acc.is_zero() {
                polys.push(acc);
            }
        }
    }
    if desc.kind() == GroupKind::OddOrthogonal {
        let g = PolyMat::from_fn(r, nvars, |i, j| var(i, j));
        polys.push(poly_det(&g).sub(&Poly::from_int(nvars, 1)));
    }
    polys
}

/// Formal partial derivative of a polynomial with respect to one variable.
fn poly_partial(q: &Poly, var: usize) -> Poly {
    let mut out = Poly::zero(q.nvars);
    for (mono, coeff) in &q.terms {
        let e = mono[var];
        if e == 0 {
            continue;
        }
        let mut m2 = mono.clone();
        m2[var] = e - 1;
        let c = coeff * BigRational::from_integer(BigInt::from(e));
        let entry = out.terms.entry(m2).or_insert_with(BigRational::zero);
        *entry += c;
    }
    out.terms.retain(|_, c| !c.is_zero());
    out
}

fn poly_text(q: &Poly) -> String {
    if q.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mono, coeff)) in q.terms.iter().enumerate() {
        if i > 0 {
            out.push('+');
        }
        let _ = write!(out, "{coeff}");
        for (v, &e) in mono.iter().enumerate() {
            if e > 0 {
                let _ = write!(out, "*x{v}^{e}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelKind;

    fn model(p: u64, k: u32) -> ModelSpec {
        ModelSpec::new(p, k, ModelKind::MixedChar).unwrap()
    }

    #[test]
    fn group_factor_names_and_dimensions() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let space = AmbientSpace::new(vec![
            AmbientFactor::Group { desc, base: "g".into() },
            AmbientFactor::FreeVar("x".into()),
        ])
        .unwrap();
        assert_eq!(space.coords(), &["g11", "g12", "g21", "g22", "x"]);
        assert_eq!(space.dim(), 4);
        assert_eq!(space.factor_dim(0), 3);
        assert_eq!(space.factor_range(1), 4..5);
    }

    #[test]
    fn group_seeds_match_the_finite_group_order() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let space =
            AmbientSpace::new(vec![AmbientFactor::Group { desc, base: "g".into() }]).unwrap();
        let m = model(5, 2);
        let seeded = space.seed(&m, 100_000).unwrap();
        // |SL2(F_5)| = 120, and the group variety is smooth.
        assert_eq!(seeded.seeds(0).len(), 120);
        assert!(seeded.smooth(0));
        // Hensel refinement of the identity cell gives exactly p^dim children,
        // all satisfying the equations one digit deeper.
        let id_codes = vec![1, 0, 0, 1];
        let children = seeded.refine(0, &id_codes, 1);
        assert_eq!(children.len(), 125);
        let ring = m.ring_at(2);
        let polys = group_equations(&desc);
        for child in &children {
            let point: Vec<_> = child.iter().map(|&c| ring.element_from_index(c)).collect();
            assert!(polys.iter().all(|q| ring.is_zero(q.eval(&ring, &point))));
        }
    }

    #[test]
    fn singular_varieties_are_detected_and_refined_by_filtering() {
        // x^2 = 0 is singular at its unique residue seed x = 0.
        let sq = Poly::var(1, 0).mul(&Poly::var(1, 0));
        let space = AmbientSpace::new(vec![AmbientFactor::Variety {
            vars: vec!["x".into()],
            polys: vec![sq],
            dim: 0,
        }])
        .unwrap();
        let m = model(3, 4);
        let seeded = space.seed(&m, 1000).unwrap();
        assert_eq!(seeded.seeds(0), &[vec![0]]);
        assert!(!seeded.smooth(0));
        // x^2 = 0 mod 9 holds on all of 3Z/9; mod 27 it needs x = 0 mod 9.
        let level2: Vec<_> = seeded.refine(0, &[0], 1);
        assert_eq!(level2, vec![vec![0], vec![3], vec![6]]);
        assert_eq!(seeded.refine(0, &[0], 2), vec![vec![0], vec![9], vec![18]]);
        assert!(seeded.refine(0, &[3], 2).is_empty());
    }

    #[test]
    fn odd_orthogonal_equations_exclude_the_determinant_minus_one_component() {
        let desc = GroupDescriptor::odd_orthogonal(1).unwrap();
        let space =
            AmbientSpace::new(vec![AmbientFactor::Group { desc, base: "h".into() }]).unwrap();
        let m = model(3, 2);
        let seeded = space.seed(&m, 100_000).unwrap();
        // |SO3(F_3)| = 24; the full orthogonal group has 48 points.
        assert_eq!(seeded.seeds(0).len(), 24);
        assert!(seeded.smooth(0));
        assert_eq!(space.factor_dim(0), 3);
    }

    #[test]
    fn duplicate_coordinates_are_rejected() {
        let err = AmbientSpace::new(vec![
            AmbientFactor::FreeVar("x".into()),
            AmbientFactor::FreeVar("x".into()),
        ])
        .unwrap_err();
        assert!(matches!(err, AmbientError::DuplicateCoordinate(_)));
    }
}
