//! A fixed corpus of formulas used to exercise evaluators.
//!
//! Each entry is a name and a source text. The corpus spans the surface
//! language: order comparisons, angular components, congruences on orders,
//! rational constants, the infinite order, and quantifiers over all three
//! sorts, including nesting and shadowing. Free variables are always
//! valued, so an evaluator can enumerate them directly. Constants stay in
//! the range -2..=2 so small-modulus models behave well.

/// Name and source text of every corpus formula.
pub fn formula_library() -> Vec<(&'static str, &'static str)> {
    vec![
        ("unit-ball", "0 <= ord(x)"),
        ("open-ball", "1 <= ord(x)"),
        ("unit-sphere", "ord(x) = 0"),
        ("shifted-sphere", "ord(x - 1) = 1"),
        ("tail-window", "ord(x) >= 2"),
        ("doubling", "ord(x + x) = ord(2 * x)"),
        ("half-shift", "0 <= ord(x - 1/2)"),
        ("scaled-half-shift", "0 <= ord(2 * x - 1/2)"),
        ("angular-one", "ac(x) = 1"),
        ("angular-square", "exists s:r (ac(x) = s * s /\\ s != 0)"),
        ("angular-product", "ac(x) * ac(y) = ac(x * y)"),
        ("even-order", "cong(2; ord(x), 0)"),
        ("odd-order-sum", "cong(2; ord(x) + ord(y), 1)"),
        ("order-window", "0 <= ord(x) /\\ ord(x) <= 1"),
        ("odd-order-window", "cong(2; ord(x), 1) /\\ ord(x) <= 2"),
        ("ultrametric-tie", "ord(x + y) = ord(x) \\/ ord(x + y) = ord(y) \\/ ord(x) = ord(y)"),
        ("cancellation", "ord(x) = ord(y) /\\ ord(x + y) != ord(x)"),
        ("nonzero", "ord(x) != inf"),
        ("zero-point", "ord(x) = inf"),
        ("halved-order", "exists h:z (ord(x) = h + h)"),
        ("residue-invertible", "forall u:r (u = 0 \\/ exists w:r (ac(x) * w = u))"),
        ("unit-square", "exists y (x = y * y /\\ ord(y) = 0)"),
        ("near-one", "exists t (x + t = 1 /\\ 0 <= ord(t))"),
        ("order-additive", "forall t (1 <= ord(t) \\/ ord(x * t) = ord(x) + ord(t))"),
        ("angular-of-equal", "x != y \\/ ac(x) = ac(y)"),
        ("residue-lowered-match", "ord(x) = 0 /\\ ac(x) = ac(y) \\/ 1 <= ord(x) /\\ 0 = ac(y)"),
        ("unit-or-deep-capture", "exists s:r (ord(x) = 0 /\\ s = ac(x) \\/ 1 <= ord(x) /\\ s = 0)"),
        ("shadowed-probe", "exists t (ord(t) = 0 /\\ exists t (1 <= ord(t) /\\ ord(x + t) = 0))"),
    ]
}
