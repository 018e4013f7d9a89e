//! Builders for the conjugation sets paired with a residue conjugacy class.
//!
//! The ambient space is a product of two copies of the group: a matrix gamma
//! of valued variables `g{i}{j}` and a matrix y of valued variables
//! `y{i}{j}`. Group membership of both factors is the ambient model's job
//! and is not repeated in the formula. The formula itself asserts:
//!
//! * y lies in the Iwahori subgroup (order bounds on its entries);
//! * the entries of P = adj(y) gamma y, shifted by the cocharacter
//!   exponents, remain integral;
//! * a caller-supplied constraint on gamma alone;
//! * there exist residues w capturing the shifted entries of P, whose
//!   matrix lies in a prescribed unipotent conjugacy class of the residue
//!   group.
//!
//! The class membership predicate follows the parametrization of unipotent
//! classes by a partition with square-class bits: w is carried to a
//! nilpotent Y1 = (1-w) adj(1+w), Y1 must have the partition's Jordan type,
//! and for each form-carrying part size i the induced form on the slot
//! space ker(Y1^i) / (ker(Y1^(i-1)) + Y1 ker(Y1^(i+1))) must have the
//! prescribed discriminant class, witnessed by spanning vectors and a
//! square root z of the signed Gram determinant (or its absence).

use classical_groups::group::{GroupDescriptor, GroupKind};
use classical_groups::lambda::{conj_exponents, MultiIndex};
use unipotent_classes::{form_carrying, UnipotentClassLabel};

use crate::ast::{Formula, FormulaRef, Sort, Term, TermRef, Var};
use crate::groups::{
    exists_all, forall_all, matrix_vars, res_shift_eq, tadd, tdet, tmat_add, tmat_adjugate,
    tmat_identity, tmat_mul, tmat_pow, tmat_sub, tmat_vec, tmul, tneg, BuildError,
};
use crate::subst::free_vars;

/// Check that a constraint formula only mentions the gamma matrix entries.
pub fn validate_gamma_constraint(
    desc: &GroupDescriptor,
    alpha: &FormulaRef,
    base: &str,
) -> Result<(), BuildError> {
    let r = desc.mat_size();
    let allowed: Vec<String> = (1..=r)
        .flat_map(|i| (1..=r).map(move |j| format!("{base}{i}{j}")))
        .collect();
    for v in free_vars(alpha) {
        if v.sort != Sort::Valued || !allowed.contains(&v.name) {
            return Err(BuildError::AlphaFreeVar { name: v.name });
        }
    }
    Ok(())
}

fn validate_label(desc: &GroupDescriptor, label: &UnipotentClassLabel) -> Result<(), BuildError> {
    let r = desc.mat_size();
    let total: u32 = label.partition().iter().sum();
    if total as usize != r {
        return Err(BuildError::BadLabel {
            reason: format!("partition sums to {total}, group matrices have size {r}"),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for &part in label.partition() {
        if !seen.insert(part) {
            continue;
        }
        let mult = label.multiplicity(part);
        let needs_even = match desc.kind() {
            GroupKind::Symplectic => part % 2 == 1,
            GroupKind::OddOrthogonal => part % 2 == 0,
        };
        if needs_even && mult % 2 == 1 {
            return Err(BuildError::BadLabel {
                reason: format!("part {part} must have even multiplicity"),
            });
        }
    }
    let expected: Vec<u32> = seen
        .iter()
        .copied()
        .filter(|&i| form_carrying(desc.kind(), i) && label.multiplicity(i) > 0)
        .collect();
    let got: Vec<u32> = label.eps().iter().map(|&(i, _)| i).collect();
    if expected != got {
        return Err(BuildError::BadLabel {
            reason: format!("square-class data on parts {got:?}, expected on {expected:?}"),
        });
    }
    Ok(())
}

fn jordan_pattern(partition: &[u32]) -> Vec<Vec<i64>> {
    let r: u32 = partition.iter().sum();
    let r = r as usize;
    let mut out = vec![vec![0i64; r]; r];
    let mut offset = 0usize;
    for &part in partition {
        for s in 0..(part as usize - 1) {
            out[offset + s][offset + s + 1] = 1;
        }
        offset += part as usize;
    }
    out
}

fn const_matrix(rows: &[Vec<i64>], sort: Sort) -> Vec<Vec<TermRef>> {
    rows.iter().map(|row| row.iter().map(|&v| Term::int(v, sort)).collect()).collect()
}

fn entries_equal(a: &[Vec<TermRef>], b: &[Vec<TermRef>]) -> Vec<FormulaRef> {
    let mut out = Vec::new();
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            out.push(Formula::eq(x.clone(), y.clone()).expect("matching sorts"));
        }
    }
    out
}

/// The formula `A v = 0` for a matrix of terms and a vector of terms.
fn kernel_condition(a: &[Vec<TermRef>], v: &[TermRef]) -> FormulaRef {
    let zero = Term::int(0, v[0].sort());
    Formula::and_all(
        tmat_vec(a, v)
            .into_iter()
            .map(|entry| Formula::eq(entry, zero.clone()).expect("residue equation")),
    )
}

fn vector_vars(prefix: &str, count: usize, sort: Sort) -> Vec<TermRef> {
    (1..=count).map(|t| Term::var(Var::new(format!("{prefix}{t}"), sort))).collect()
}

/// Membership of the residue matrix `{base}{i}{j}` in the unipotent class
/// described by the label. Free variables: the r*r residue entries.
pub fn build_class_residue_formula(
    desc: &GroupDescriptor,
    label: &UnipotentClassLabel,
    base: &str,
) -> Result<FormulaRef, BuildError> {
    validate_label(desc, label)?;
    let r = desc.mat_size();
    if r > 9 {
        return Err(BuildError::MatrixTooLarge { size: r });
    }
    let w = matrix_vars(base, r, Sort::Residue);
    let ident = tmat_identity(r, Sort::Residue);
    let zero = Term::int(0, Sort::Residue);
    let mut parts = Vec::new();

    // Unipotence guard: (w - 1)^r = 0.
    let nil = tmat_sub(&w, &ident);
    for row in &tmat_pow(&nil, r as u32) {
        for entry in row {
            parts.push(Formula::eq(entry.clone(), zero.clone()).expect("residue equation"));
        }
    }

    // The nilpotent side of the Cayley map, cleared of denominators:
    // Y1 = (1 - w) adj(1 + w).
    let y1 = tmat_mul(&tmat_sub(&ident, &w), &tmat_adjugate(&tmat_add(&ident, &w)));

    // Jordan type: an invertible m with m Y1 = J m.
    let m = matrix_vars("m", r, Sort::Residue);
    let jpat = const_matrix(&jordan_pattern(label.partition()), Sort::Residue);
    let mut jordan_parts =
        vec![Formula::neq(tdet(&m), zero.clone()).expect("residue inequation")];
    jordan_parts.extend(entries_equal(&tmat_mul(&m, &y1), &tmat_mul(&jpat, &m)));
    let mflat: Vec<TermRef> = m.into_iter().flatten().collect();
    parts.push(exists_all(&mflat, Formula::and_all(jordan_parts)));

    // One slot condition per form-carrying part.
    for &(i, square) in label.eps() {
        let c = label.multiplicity(i) as usize;
        parts.push(slot_condition(desc, &y1, i, c, square));
    }
    Ok(Formula::and_all(parts))
}

/// The discriminant condition on the slot space of part size i, with c
/// independent spanning vectors.
fn slot_condition(
    desc: &GroupDescriptor,
    y1: &[Vec<TermRef>],
    i: u32,
    c: usize,
    square: bool,
) -> FormulaRef {
    let r = desc.mat_size();
    let zero = Term::int(0, Sort::Residue);
    let pow_im1 = tmat_pow(y1, i - 1);
    let pow_i = tmat_mul(&pow_im1, y1);
    let pow_ip1 = tmat_mul(&pow_i, y1);
    let v: Vec<Vec<TermRef>> =
        (1..=c).map(|j| vector_vars(&format!("v{j}_"), r, Sort::Residue)).collect();

    let mut body = Vec::new();
    for vj in &v {
        body.push(kernel_condition(&pow_i, vj));
    }

    // Spanning: every u in ker(Y1^i) decomposes as v' + Y1 v'' + sum a_j v_j
    // with v' in ker(Y1^(i-1)) and v'' in ker(Y1^(i+1)).
    let u = vector_vars("u", r, Sort::Residue);
    let a = vector_vars("a", c, Sort::Residue);
    let vp = vector_vars("vp", r, Sort::Residue);
    let vq = vector_vars("vq", r, Sort::Residue);
    let y1vq = tmat_vec(y1, &vq);
    let mut decomp = Vec::new();
    for t in 0..r {
        let mut sum = tadd(vp[t].clone(), y1vq[t].clone());
        for (j, aj) in a.iter().enumerate() {
            sum = tadd(sum, tmul(aj.clone(), v[j][t].clone()));
        }
        decomp.push(Formula::eq(sum, u[t].clone()).expect("residue equation"));
    }
    let mut witness_parts = vec![kernel_condition(&pow_im1, &vp), kernel_condition(&pow_ip1, &vq)];
    witness_parts.extend(decomp);
    let mut witness_vars = a.clone();
    witness_vars.extend(vp.clone());
    witness_vars.extend(vq.clone());
    let witness = exists_all(&witness_vars, Formula::and_all(witness_parts));
    body.push(forall_all(
        &u,
        Formula::or(Formula::not(kernel_condition(&pow_i, &u)), witness),
    ));

    // Linear independence of the spanning vectors.
    let b = vector_vars("b", c, Sort::Residue);
    let mut combo_zero = Vec::new();
    for t in 0..r {
        let mut sum = zero.clone();
        for (j, bj) in b.iter().enumerate() {
            sum = tadd(sum, tmul(bj.clone(), v[j][t].clone()));
        }
        combo_zero.push(Formula::eq(sum, zero.clone()).expect("residue equation"));
    }
    let all_b_zero = Formula::and_all(
        b.iter().map(|bj| Formula::eq(bj.clone(), zero.clone()).expect("residue equation")),
    );
    body.push(forall_all(
        &b,
        Formula::or(Formula::not(Formula::and_all(combo_zero)), all_b_zero),
    ));

    // Signed Gram determinant: entry (s, t) is
    // (-1)^floor((i-1)/2) (Y1^(i-1) v_s)' J v_t.
    let jconst = const_matrix(&desc.j_rows(), Sort::Residue);
    let sign_neg = ((i - 1) / 2) % 2 == 1;
    let images: Vec<Vec<TermRef>> = v.iter().map(|vj| tmat_vec(&pow_im1, vj)).collect();
    let jv: Vec<Vec<TermRef>> = v.iter().map(|vj| tmat_vec(&jconst, vj)).collect();
    let gram: Vec<Vec<TermRef>> = (0..c)
        .map(|s| {
            (0..c)
                .map(|t| {
                    let mut dot = zero.clone();
                    for idx in 0..r {
                        dot = tadd(dot, tmul(images[s][idx].clone(), jv[t][idx].clone()));
                    }
                    if sign_neg {
                        tneg(dot)
                    } else {
                        dot
                    }
                })
                .collect()
        })
        .collect();
    let z = Term::var(Var::residue("z"));
    let square_witness = Formula::exists(
        Var::residue("z"),
        Formula::and(
            Formula::eq(tmul(z.clone(), z.clone()), tdet(&gram)).expect("residue equation"),
            Formula::neq(z, zero).expect("residue inequation"),
        ),
    );
    body.push(if square { square_witness } else { Formula::not(square_witness) });

    let vflat: Vec<TermRef> = v.into_iter().flatten().collect();
    exists_all(&vflat, Formula::and_all(body))
}

/// Conjuncts shared by both set builders, the conjugate matrix
/// P = adj(y) gamma y, and the shift exponents.
type LambdaParts = (Vec<FormulaRef>, Vec<Vec<TermRef>>, Vec<Vec<i64>>);

/// Iwahori order bounds on y, shifted-conjugate integrality, and the gamma
/// constraint, plus the conjugate matrix P = adj(y) gamma y whose residues
/// the class condition will capture.
fn lambda_component_parts(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    alpha: &FormulaRef,
) -> Result<LambdaParts, BuildError> {
    let r = desc.mat_size();
    if r > 9 {
        return Err(BuildError::MatrixTooLarge { size: r });
    }
    if lambda.entries().len() != r {
        return Err(BuildError::BadLabel {
            reason: format!(
                "cocharacter has {} entries, group matrices have size {r}",
                lambda.entries().len()
            ),
        });
    }
    validate_gamma_constraint(desc, alpha, "g")?;
    let g = matrix_vars("g", r, Sort::Valued);
    let y = matrix_vars("y", r, Sort::Valued);
    let n = conj_exponents(lambda);
    let p = tmat_mul(&tmat_mul(&tmat_adjugate(&y), &g), &y);
    let mut parts = Vec::new();
    // Iwahori order bounds on y; group membership is the ambient model's.
    for (idx, row) in y.iter().enumerate() {
        for (jdx, entry) in row.iter().enumerate() {
            let bound = i64::from(idx > jdx);
            let ord = Term::ord(entry.clone()).expect("ord of a valued term");
            parts.push(
                Formula::leq(Term::int(bound, Sort::Value), ord).expect("value comparison"),
            );
        }
    }
    // Integrality of the shifted conjugate.
    for k in 0..r {
        for e in 0..r {
            let ord = Term::ord(p[k][e].clone()).expect("ord of a valued term");
            parts.push(
                Formula::leq(Term::int(-n[k][e], Sort::Value), ord).expect("value comparison"),
            );
        }
    }
    parts.push(alpha.clone());
    Ok((parts, p, n))
}

/// The full conjugation-set formula over the product ambient space: Iwahori
/// order bounds on y, integrality of the shifted conjugate, the gamma
/// constraint, and residue-class membership of the captured conjugate.
pub fn build_w_formula(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    label: &UnipotentClassLabel,
    alpha: &FormulaRef,
) -> Result<FormulaRef, BuildError> {
    validate_label(desc, label)?;
    let (mut parts, p, n) = lambda_component_parts(desc, lambda, alpha)?;
    let r = desc.mat_size();
    let w = matrix_vars("w", r, Sort::Residue);

    // Capture the residues of the shifted conjugate and pin their class.
    let mut capture = Vec::new();
    for k in 0..r {
        for e in 0..r {
            capture.push(res_shift_eq(&w[k][e], &p[k][e], n[k][e]));
        }
    }
    capture.push(build_class_residue_formula(desc, label, "w")?);
    let wflat: Vec<TermRef> = w.into_iter().flatten().collect();
    parts.push(exists_all(&wflat, Formula::and_all(capture)));
    Ok(Formula::and_all(parts))
}

/// Iwahori order bounds plus shifted-conjugate integrality without any
/// class condition: the lambda component of the conjugation set.
pub fn build_lambda_component_formula(
    desc: &GroupDescriptor,
    lambda: &MultiIndex,
    alpha: &FormulaRef,
) -> Result<FormulaRef, BuildError> {
    let (parts, _, _) = lambda_component_parts(desc, lambda, alpha)?;
    Ok(Formula::and_all(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::printer::to_text;

    fn sp2_label(square: bool) -> UnipotentClassLabel {
        UnipotentClassLabel::new(vec![2], vec![(2, square)])
    }

    #[test]
    fn w_formula_mentions_both_matrix_factors() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let lambda = MultiIndex::new(&desc, vec![1, -1]).unwrap();
        let alpha = Formula::lit(true);
        let f = build_w_formula(&desc, &lambda, &sp2_label(true), &alpha).unwrap();
        let names: Vec<String> = free_vars(&f).into_iter().map(|v| v.name).collect();
        assert_eq!(names, vec!["g11", "g12", "g21", "g22", "y11", "y12", "y21", "y22"]);
    }

    #[test]
    fn w_formula_round_trips_through_the_parser() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let lambda = MultiIndex::new(&desc, vec![0, 0]).unwrap();
        let alpha = parse_formula("g12 = 1").unwrap();
        let f = build_w_formula(&desc, &lambda, &sp2_label(false), &alpha).unwrap();
        let text = to_text(&f);
        assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn alpha_over_foreign_variables_is_rejected() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let lambda = MultiIndex::new(&desc, vec![0, 0]).unwrap();
        let alpha = parse_formula("h11 = 1").unwrap();
        let err = build_w_formula(&desc, &lambda, &sp2_label(true), &alpha).unwrap_err();
        assert!(matches!(err, BuildError::AlphaFreeVar { ref name } if name == "h11"));
        // y entries are not gamma constraints either.
        let alpha = parse_formula("y11 = 1").unwrap();
        let err = build_w_formula(&desc, &lambda, &sp2_label(true), &alpha).unwrap_err();
        assert!(matches!(err, BuildError::AlphaFreeVar { .. }));
    }

    #[test]
    fn labels_are_validated_against_the_group() {
        let desc = GroupDescriptor::symplectic(2).unwrap();
        let lambda = MultiIndex::new(&desc, vec![0, 0, 0, 0]).unwrap();
        let alpha = Formula::lit(true);
        // Partition of the wrong total.
        let label = UnipotentClassLabel::new(vec![2], vec![(2, true)]);
        assert!(matches!(
            build_w_formula(&desc, &lambda, &label, &alpha),
            Err(BuildError::BadLabel { .. })
        ));
        // Missing square-class data on the carrying part.
        let label = UnipotentClassLabel::new(vec![2, 1, 1], vec![]);
        assert!(matches!(
            build_w_formula(&desc, &lambda, &label, &alpha),
            Err(BuildError::BadLabel { .. })
        ));
        // Odd part with odd multiplicity in the symplectic group.
        let label = UnipotentClassLabel::new(vec![3, 1], vec![]);
        assert!(matches!(
            build_w_formula(&desc, &lambda, &label, &alpha),
            Err(BuildError::BadLabel { .. })
        ));
    }

    #[test]
    fn discriminant_sign_alternates_with_the_part() {
        let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
        // Part 3: floor((3-1)/2) = 1, so the Gram entry is negated.
        let f3 =
            build_class_residue_formula(&so3, &UnipotentClassLabel::new(vec![3], vec![(3, true)]), "w")
                .unwrap();
        assert!(to_text(&f3).contains("z:r * z:r = -"));
        // Part 1 on the regular class of Sp(2): floor((2-1)/2) = 0, no sign.
        let sp2 = GroupDescriptor::symplectic(1).unwrap();
        let f2 = build_class_residue_formula(&sp2, &sp2_label(true), "w").unwrap();
        assert!(!to_text(&f2).contains("z:r * z:r = -"));
    }

    #[test]
    fn identity_label_has_no_slot_conditions() {
        let desc = GroupDescriptor::symplectic(1).unwrap();
        let label = UnipotentClassLabel::new(vec![1, 1], vec![]);
        let f = build_class_residue_formula(&desc, &label, "w").unwrap();
        let text = to_text(&f);
        assert!(!text.contains("exists z:r"));
        assert!(text.contains("exists m11:r"));
    }

    #[test]
    fn class_formula_round_trips() {
        let so3 = GroupDescriptor::odd_orthogonal(1).unwrap();
        let label = UnipotentClassLabel::new(vec![1, 1, 1], vec![(1, false)]);
        let f = build_class_residue_formula(&so3, &label, "w").unwrap();
        assert_eq!(parse_formula(&to_text(&f)).unwrap(), f);
    }
}
