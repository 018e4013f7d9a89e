//! Builders that express matrix-group conditions as formulas.
//!
//! A group element is a matrix of valued variables named `{base}{i}{j}`
//! with 1-based indices, so `g23` is row 2, column 3. The builders assemble,
//! for a split classical group: integrality and the defining bilinear-form
//! equations (membership in the integral points), the Iwahori condition
//! (integral with subdiagonal entries of positive order), regularity (a
//! distinguished coefficient of the characteristic polynomial of the
//! adjoint action does not vanish), and residual unipotence (the matrix is
//! unipotent after reduction). Terms are built as shared DAGs: the adjoint
//! coefficients would be astronomically large as trees.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

use classical_groups::group::{GroupDescriptor, GroupKind};
use classical_groups::lambda::{conj_exponents, MultiIndex};
use classical_groups::poly::Poly;
use thiserror::Error;

use crate::ast::{Formula, FormulaRef, Sort, Term, TermNode, TermRef};
use crate::subst::substitute;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("matrix size {size} exceeds the single-digit naming scheme")]
    MatrixTooLarge { size: usize },
    #[error("class label does not belong to this group: {reason}")]
    BadLabel { reason: String },
    #[error("constraint formula mentions unexpected free variable '{name}'")]
    AlphaFreeVar { name: String },
    #[error("representative matrix is not invertible at this precision")]
    SingularRepresentative,
}

/// The r x r matrix of valued/residue variables `{base}{i}{j}`, 1-based.
pub fn matrix_vars(base: &str, r: usize, sort: Sort) -> Vec<Vec<TermRef>> {
    assert!(r <= 9, "matrix variable names use single digits");
    (1..=r)
        .map(|i| {
            (1..=r)
                .map(|j| Term::var(crate::ast::Var::new(format!("{base}{i}{j}"), sort)))
                .collect()
        })
        .collect()
}

/// Flat row-major list of the same variables, matching the variable
/// indexing of adjoint-representation polynomials.
pub fn matrix_vars_flat(base: &str, r: usize, sort: Sort) -> Vec<TermRef> {
    matrix_vars(base, r, sort).into_iter().flatten().collect()
}

fn is_const(t: &TermRef, k: i64) -> bool {
    match t.node() {
        TermNode::Int(n) => *n == BigInt::from(k),
        TermNode::Neg(inner) => {
            k < 0 && matches!(inner.node(), TermNode::Int(n) if *n == BigInt::from(-k))
        }
        _ => false,
    }
}

/// Sum with unit simplification; operands must share a sort.
pub fn tadd(a: TermRef, b: TermRef) -> TermRef {
    if is_const(&a, 0) {
        return b;
    }
    if is_const(&b, 0) {
        return a;
    }
    Term::add(a, b).expect("builder operands share a sort")
}

/// Product with unit and zero simplification; operands must share a
/// non-value sort.
pub fn tmul(a: TermRef, b: TermRef) -> TermRef {
    if is_const(&a, 0) || is_const(&b, 1) {
        return a;
    }
    if is_const(&b, 0) || is_const(&a, 1) {
        return b;
    }
    if is_const(&a, -1) {
        return tneg(b);
    }
    if is_const(&b, -1) {
        return tneg(a);
    }
    Term::mul(a, b).expect("builder operands share a non-value sort")
}

pub fn tneg(a: TermRef) -> TermRef {
    if is_const(&a, 0) {
        return a;
    }
    if let TermNode::Neg(inner) = a.node() {
        return inner.clone();
    }
    Term::neg(a)
}

pub fn tsub(a: TermRef, b: TermRef) -> TermRef {
    tadd(a, tneg(b))
}

pub fn tmat_identity(r: usize, sort: Sort) -> Vec<Vec<TermRef>> {
    (0..r)
        .map(|i| (0..r).map(|j| Term::int(i64::from(i == j), sort)).collect())
        .collect()
}

pub fn tmat_add(a: &[Vec<TermRef>], b: &[Vec<TermRef>]) -> Vec<Vec<TermRef>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| tadd(x.clone(), y.clone())).collect())
        .collect()
}

pub fn tmat_sub(a: &[Vec<TermRef>], b: &[Vec<TermRef>]) -> Vec<Vec<TermRef>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| tsub(x.clone(), y.clone())).collect())
        .collect()
}

pub fn tmat_mul(a: &[Vec<TermRef>], b: &[Vec<TermRef>]) -> Vec<Vec<TermRef>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let sort = a[0][0].sort();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Term::int(0, sort);
                    for t in 0..k {
                        acc = tadd(acc, tmul(a[i][t].clone(), b[t][j].clone()));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn tmat_vec(a: &[Vec<TermRef>], v: &[TermRef]) -> Vec<TermRef> {
    let sort = v[0].sort();
    a.iter()
        .map(|row| {
            let mut acc = Term::int(0, sort);
            for (x, y) in row.iter().zip(v) {
                acc = tadd(acc, tmul(x.clone(), y.clone()));
            }
            acc
        })
        .collect()
}

pub fn tmat_pow(m: &[Vec<TermRef>], e: u32) -> Vec<Vec<TermRef>> {
    let r = m.len();
    let sort = m[0][0].sort();
    let mut acc = tmat_identity(r, sort);
    for _ in 0..e {
        acc = tmat_mul(&acc, m);
    }
    acc
}

fn tmat_minor(m: &[Vec<TermRef>], skip_row: usize, skip_col: usize) -> Vec<Vec<TermRef>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, t)| t.clone())
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion along the first row; fine for the
/// small fixed sizes used here.
pub fn tdet(m: &[Vec<TermRef>]) -> TermRef {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let sort = m[0][0].sort();
    let mut acc = Term::int(0, sort);
    for j in 0..n {
        let cof = tmul(m[0][j].clone(), tdet(&tmat_minor(m, 0, j)));
        acc = if j % 2 == 0 { tadd(acc, cof) } else { tsub(acc, cof) };
    }
    acc
}

/// Adjugate (transposed cofactor matrix): adj(A) A = det(A) I.
pub fn tmat_adjugate(m: &[Vec<TermRef>]) -> Vec<Vec<TermRef>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![Term::int(1, m[0][0].sort())]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // Entry (i, j) is the cofactor of (j, i).
                    let d = tdet(&tmat_minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        tneg(d)
                    }
                })
                .collect()
        })
        .collect()
}

/// Translate a polynomial in matrix entries to a term over the given
/// flat variable list, memoizing monomials so repeated ones share nodes.
pub struct PolyTerms {
    vars: Vec<TermRef>,
    memo: HashMap<Vec<u32>, TermRef>,
}

impl PolyTerms {
    pub fn new(vars: Vec<TermRef>) -> Self {
        PolyTerms { vars, memo: HashMap::new() }
    }

    fn monomial(&mut self, exps: &[u32]) -> TermRef {
        if let Some(hit) = self.memo.get(exps) {
            return hit.clone();
        }
        let sort = self.vars[0].sort();
        let mut acc = Term::int(1, sort);
        for (idx, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                acc = tmul(acc, self.vars[idx].clone());
            }
        }
        self.memo.insert(exps.to_vec(), acc.clone());
        acc
    }

    pub fn term(&mut self, p: &Poly) -> TermRef {
        assert_eq!(p.nvars, self.vars.len());
        let sort = self.vars[0].sort();
        let mut acc = Term::int(0, sort);
        for (exps, coeff) in &p.terms {
            let mono = self.monomial(exps);
            let piece = if coeff.is_one() { mono } else { tmul(Term::rat(coeff.clone()), mono) };
            acc = tadd(acc, piece);
        }
        acc
    }
}

/// Coefficients of det(tI - M) in descending powers (index 0 is the leading
/// 1, index n the constant term), computed division-free by iterating over
/// leading principal submatrices. Division-free matters: the terms are
/// evaluated over rings where most integers are not invertible.
pub fn char_poly_descending(m: &[Vec<TermRef>]) -> Vec<TermRef> {
    let n = m.len();
    assert!(n >= 1);
    let sort = m[0][0].sort();
    let one = Term::int(1, sort);
    let zero = Term::int(0, sort);
    let mut p = vec![one.clone(), tneg(m[0][0].clone())];
    for r in 1..n {
        // q[0] = 1, q[1] = -a, q[d] = -(R M^(d-2) S) with M the leading
        // r x r block, R the new row, S the new column, a the new corner.
        let mut q = Vec::with_capacity(r + 2);
        q.push(one.clone());
        q.push(tneg(m[r][r].clone()));
        let mut v: Vec<TermRef> = (0..r).map(|i| m[i][r].clone()).collect();
        for d in 2..=(r + 1) {
            let mut dot = zero.clone();
            for j in 0..r {
                dot = tadd(dot, tmul(m[r][j].clone(), v[j].clone()));
            }
            q.push(tneg(dot));
            if d < r + 1 {
                let mut nv = Vec::with_capacity(r);
                for i in 0..r {
                    let mut acc = zero.clone();
                    for j in 0..r {
                        acc = tadd(acc, tmul(m[i][j].clone(), v[j].clone()));
                    }
                    nv.push(acc);
                }
                v = nv;
            }
        }
        // Toeplitz step: new[i] = sum_j q[i-j] old[j].
        let mut np = Vec::with_capacity(r + 2);
        for i in 0..=(r + 1) {
            let mut acc = zero.clone();
            for (j, pj) in p.iter().enumerate().take(r.min(i) + 1) {
                let d = i - j;
                if d < q.len() {
                    acc = tadd(acc, tmul(q[d].clone(), pj.clone()));
                }
            }
            np.push(acc);
        }
        p = np;
    }
    p
}

fn ord_at_least(t: &TermRef, bound: i64) -> FormulaRef {
    let ord = Term::ord(t.clone()).expect("ord of a valued term");
    Formula::leq(Term::int(bound, Sort::Value), ord).expect("value-sort comparison")
}

/// Integral points of the group: every entry integral, the defining form
/// preserved, and for the odd orthogonal group determinant one (the form
/// alone also admits determinant -1).
pub fn build_membership_formula(desc: &GroupDescriptor, base: &str) -> FormulaRef {
    let r = desc.mat_size();
    let g = matrix_vars(base, r, Sort::Valued);
    let j = desc.j_rows();
    let mut parts = Vec::new();
    for row in &g {
        for entry in row {
            parts.push(ord_at_least(entry, 0));
        }
    }
    for k in 0..r {
        for e in 0..r {
            let mut lhs = Term::int(0, Sort::Valued);
            for s in 0..r {
                for t in 0..r {
                    if j[s][t] != 0 {
                        let prod = tmul(g[s][k].clone(), g[t][e].clone());
                        let signed = if j[s][t] == 1 { prod } else { tneg(prod) };
                        lhs = tadd(lhs, signed);
                    }
                }
            }
            let rhs = Term::int(j[k][e], Sort::Valued);
            parts.push(Formula::eq(lhs, rhs).expect("valued equation"));
        }
    }
    if desc.kind() == GroupKind::OddOrthogonal {
        parts.push(
            Formula::eq(tdet(&g), Term::int(1, Sort::Valued)).expect("valued equation"),
        );
    }
    Formula::and_all(parts)
}

/// Membership plus positive order below the diagonal.
pub fn build_iwahori_formula(desc: &GroupDescriptor, base: &str) -> FormulaRef {
    let r = desc.mat_size();
    let g = matrix_vars(base, r, Sort::Valued);
    let mut parts = vec![build_membership_formula(desc, base)];
    for i in 0..r {
        for j in 0..i {
            parts.push(ord_at_least(&g[i][j], 1));
        }
    }
    Formula::and_all(parts)
}

/// The distinguished coefficient in det((t+1)I - Ad(g)) = sum_j D_j t^j:
/// index the rank of the group. Built from the descending coefficients of
/// det(sI - Ad(g)) by the binomial shift s = t + 1.
pub fn build_adjoint_coefficient(desc: &GroupDescriptor, base: &str) -> TermRef {
    let rep = desc.adjoint_rep();
    let dim = rep.ad.n;
    let l = desc.rank();
    let mut pt = PolyTerms::new(matrix_vars_flat(base, desc.mat_size(), Sort::Valued));
    let ad: Vec<Vec<TermRef>> =
        (0..dim).map(|i| (0..dim).map(|j| pt.term(rep.ad.entry(i, j))).collect()).collect();
    let c = char_poly_descending(&ad);
    let mut acc = Term::int(0, Sort::Valued);
    for (k, ck) in c.iter().enumerate() {
        let b = binomial(dim - k, l);
        if !b.is_zero() {
            acc = tadd(acc, tmul(Term::int(b, Sort::Valued), ck.clone()));
        }
    }
    acc
}

fn binomial(m: usize, k: usize) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

/// Regularity: the distinguished adjoint coefficient does not vanish.
pub fn build_regular_formula(desc: &GroupDescriptor, base: &str) -> FormulaRef {
    let d = build_adjoint_coefficient(desc, base);
    Formula::neq(d, Term::int(0, Sort::Valued)).expect("valued inequation")
}

/// Capture the residue of a valued term after shifting its order by n:
/// either the order is exactly -n and w is the angular component, or the
/// order is at least 1-n and w is zero. The unit branch comes first; the
/// evaluator's witness search relies on this fixed shape.
pub fn res_shift_eq(w: &TermRef, x: &TermRef, n: i64) -> FormulaRef {
    let ord = Term::ord(x.clone()).expect("ord of a valued term");
    let unit = Formula::and(
        Formula::eq(ord.clone(), Term::int(-n, Sort::Value)).expect("value equation"),
        Formula::eq(w.clone(), Term::ac(x.clone()).expect("ac of a valued term"))
            .expect("residue equation"),
    );
    let zero = Formula::and(
        Formula::leq(Term::int(1 - n, Sort::Value), ord).expect("value comparison"),
        Formula::eq(w.clone(), Term::int(0, Sort::Residue)).expect("residue equation"),
    );
    Formula::or(unit, zero)
}

/// Wrap a formula in Exists binders for the given variable terms, first
/// variable outermost. The terms must be variables.
pub fn exists_all(vars: &[TermRef], body: FormulaRef) -> FormulaRef {
    vars.iter().rev().fold(body, |acc, v| {
        let TermNode::Var(var) = v.node() else { panic!("binder over a non-variable term") };
        Formula::exists(var.clone(), acc)
    })
}

/// Wrap a formula in Forall binders, first variable outermost.
pub fn forall_all(vars: &[TermRef], body: FormulaRef) -> FormulaRef {
    vars.iter().rev().fold(body, |acc, v| {
        let TermNode::Var(var) = v.node() else { panic!("binder over a non-variable term") };
        Formula::forall(var.clone(), acc)
    })
}

/// The reduction of the matrix is unipotent: capturing residues w of the
/// entries, (w - 1)^r vanishes.
pub fn build_residue_unipotent_formula(desc: &GroupDescriptor, base: &str) -> FormulaRef {
    assert_ne!(base, "w", "base would collide with the residue capture variables");
    let r = desc.mat_size();
    let g = matrix_vars(base, r, Sort::Valued);
    let w = matrix_vars("w", r, Sort::Residue);
    let mut parts = Vec::new();
    for i in 0..r {
        for j in 0..r {
            parts.push(res_shift_eq(&w[i][j], &g[i][j], 0));
        }
    }
    let n = tmat_sub(&w, &tmat_identity(r, Sort::Residue));
    let nr = tmat_pow(&n, r as u32);
    let zero = Term::int(0, Sort::Residue);
    for row in &nr {
        for entry in row {
            parts.push(Formula::eq(entry.clone(), zero.clone()).expect("residue equation"));
        }
    }
    let wflat: Vec<TermRef> = w.into_iter().flatten().collect();
    exists_all(&wflat, Formula::and_all(parts))
}

/// Conjunction: integral group point, regular, residually unipotent.
pub fn build_regular_unipotent_formula(desc: &GroupDescriptor, base: &str) -> FormulaRef {
    Formula::and_all([
        build_membership_formula(desc, base),
        build_regular_formula(desc, base),
        build_residue_unipotent_formula(desc, base),
    ])
}

/// Points of the Iwahori subgroup fixed under shifting by the cocharacter:
/// y integral Iwahori and diag(pi^lambda)^-1 y diag(pi^lambda) Iwahori as
/// well. Entry (k, e) of the conjugate is pi^(lambda_e - lambda_k) y_ke, so
/// the extra conditions are order bounds.
pub fn build_lambda_stabilizer_formula(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    base: &str,
) -> FormulaRef {
    let r = desc.mat_size();
    let g = matrix_vars(base, r, Sort::Valued);
    let n = conj_exponents(lambda);
    let mut parts = vec![build_iwahori_formula(desc, base)];
    for k in 0..r {
        for e in 0..r {
            let threshold = i64::from(k > e);
            parts.push(ord_at_least(&g[k][e], threshold - n[k][e]));
        }
    }
    Formula::and_all(parts)
}

/// Case split on the leading residue digit of x: the formula with the hole
/// variable replaced by ac(x) when x is a unit, and by zero when x is
/// divisible by the uniformizer.
pub fn build_res_lowering(
    phi: &FormulaRef,
    hole: &str,
    x: &TermRef,
) -> Result<FormulaRef, crate::subst::SubstError> {
    let ord = Term::ord(x.clone()).expect("ord of a valued term");
    let mut unit_map = std::collections::BTreeMap::new();
    unit_map.insert(hole.to_string(), Term::ac(x.clone()).expect("ac of a valued term"));
    let mut zero_map = std::collections::BTreeMap::new();
    zero_map.insert(hole.to_string(), Term::int(0, Sort::Residue));
    let unit_branch = Formula::and(
        Formula::eq(ord.clone(), Term::int(0, Sort::Value)).expect("value equation"),
        substitute(phi, &unit_map)?,
    );
    let zero_branch = Formula::and(
        Formula::leq(Term::int(1, Sort::Value), ord).expect("value comparison"),
        substitute(phi, &zero_map)?,
    );
    Ok(Formula::or(unit_branch, zero_branch))
}
