//! Property tests for the printer and parser: printing any well-sorted
//! formula and parsing the result reproduces the formula exactly, and the
//! sort checker accepts the printed text.

use num_bigint::BigInt;
use num_rational::BigRational;
use pas_lang::ast::{Formula, FormulaRef, Sort, Term, TermRef, Var};
use pas_lang::parser::{check_sorts, parse_formula};
use pas_lang::printer::{dag_text, to_text};
use proptest::prelude::*;

fn names(sort: Sort) -> &'static [&'static str] {
    match sort {
        Sort::Valued => &["xa", "xb", "xc"],
        Sort::Residue => &["ra", "rb", "rc"],
        Sort::Value => &["za", "zb", "zc"],
    }
}

fn arb_var(sort: Sort) -> impl Strategy<Value = Var> {
    proptest::sample::select(names(sort)).prop_map(move |name| Var::new(name, sort))
}

fn arb_term(sort: Sort, depth: u32) -> BoxedStrategy<TermRef> {
    let leaf = prop_oneof![
        (-2i64..=2).prop_map(move |n| Term::int(n, sort)),
        arb_var(sort).prop_map(Term::var),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let mut options: Vec<BoxedStrategy<TermRef>> = vec![
        leaf.boxed(),
        (arb_term(sort, depth - 1), arb_term(sort, depth - 1))
            .prop_map(|(a, b)| Term::add(a, b).unwrap())
            .boxed(),
        arb_term(sort, depth - 1).prop_map(Term::neg).boxed(),
    ];
    match sort {
        Sort::Valued => {
            options.push(
                (arb_term(sort, depth - 1), arb_term(sort, depth - 1))
                    .prop_map(|(a, b)| Term::mul(a, b).unwrap())
                    .boxed(),
            );
            options.push(
                ((-2i64..=2), (1i64..=2))
                    .prop_map(|(n, d)| {
                        Term::rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
                    })
                    .boxed(),
            );
        }
        Sort::Residue => {
            options.push(
                (arb_term(sort, depth - 1), arb_term(sort, depth - 1))
                    .prop_map(|(a, b)| Term::mul(a, b).unwrap())
                    .boxed(),
            );
            options.push(
                arb_term(Sort::Valued, depth - 1)
                    .prop_map(|t| Term::ac(t).unwrap())
                    .boxed(),
            );
        }
        Sort::Value => {
            options.push(
                arb_term(Sort::Valued, depth - 1)
                    .prop_map(|t| Term::ord(t).unwrap())
                    .boxed(),
            );
            options.push(Just(Term::inf()).boxed());
        }
    }
    proptest::strategy::Union::new(options).boxed()
}

/// Whether the printed form of the term pins down its sort.
fn anchored(t: &TermRef) -> bool {
    match t.node() {
        pas_lang::ast::TermNode::Int(_) | pas_lang::ast::TermNode::Rat(_) => false,
        pas_lang::ast::TermNode::Var(_)
        | pas_lang::ast::TermNode::Ord(_)
        | pas_lang::ast::TermNode::Ac(_)
        | pas_lang::ast::TermNode::Inf => true,
        pas_lang::ast::TermNode::Add(a, b) | pas_lang::ast::TermNode::Mul(a, b) => {
            anchored(a) || anchored(b)
        }
        pas_lang::ast::TermNode::Neg(a) => anchored(a),
    }
}

fn arb_atom() -> BoxedStrategy<FormulaRef> {
    // Constant-only sides of a non-valued equation would reparse as valued,
    // so anchor one side with a variable when needed.
    let eq_at = |sort: Sort| {
        (arb_term(sort, 2), arb_term(sort, 2), arb_var(sort), proptest::bool::ANY)
            .prop_map(move |(a, b, v, neq)| {
                let a = if sort != Sort::Valued && !anchored(&a) && !anchored(&b) {
                    Term::var(v)
                } else {
                    a
                };
                if neq {
                    Formula::neq(a, b).unwrap()
                } else {
                    Formula::eq(a, b).unwrap()
                }
            })
            .boxed()
    };
    prop_oneof![
        proptest::bool::ANY.prop_map(Formula::lit),
        eq_at(Sort::Valued),
        eq_at(Sort::Residue),
        eq_at(Sort::Value),
        (arb_term(Sort::Value, 2), arb_term(Sort::Value, 2))
            .prop_map(|(a, b)| Formula::leq(a, b).unwrap()),
        (1u64..=4, arb_term(Sort::Value, 2), arb_term(Sort::Value, 2))
            .prop_map(|(n, a, b)| Formula::cong_mod(n, a, b).unwrap()),
    ]
    .boxed()
}

fn arb_formula(depth: u32) -> BoxedStrategy<FormulaRef> {
    if depth == 0 {
        return arb_atom();
    }
    let any_var = prop_oneof![
        arb_var(Sort::Valued),
        arb_var(Sort::Residue),
        arb_var(Sort::Value)
    ];
    prop_oneof![
        arb_atom(),
        (arb_formula(depth - 1), arb_formula(depth - 1)).prop_map(|(a, b)| Formula::and(a, b)),
        (arb_formula(depth - 1), arb_formula(depth - 1)).prop_map(|(a, b)| Formula::or(a, b)),
        arb_formula(depth - 1).prop_map(Formula::not),
        (any_var.clone(), arb_formula(depth - 1), proptest::bool::ANY).prop_map(
            |(v, body, forall)| {
                if forall {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        ),
    ]
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printing_then_parsing_is_the_identity(f in arb_formula(4)) {
        let text = to_text(&f);
        let reparsed = parse_formula(&text)
            .unwrap_or_else(|e| panic!("failed to reparse {text:?}: {e}"));
        prop_assert_eq!(&reparsed, &f, "text was {}", text);
    }

    #[test]
    fn printed_formulas_pass_the_sort_checker(f in arb_formula(3)) {
        let report = check_sorts(&to_text(&f));
        prop_assert!(report.ok, "issues: {:?}", report.issues);
    }

    #[test]
    fn dag_listings_are_stable_across_reparses(f in arb_formula(3)) {
        let text = to_text(&f);
        let once = parse_formula(&text).unwrap();
        let twice = parse_formula(&text).unwrap();
        prop_assert_eq!(dag_text(&once), dag_text(&twice));
    }
}
