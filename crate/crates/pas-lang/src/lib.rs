//! Three-sorted first-order language for valued fields: terms over a valued
//! sort, its residue field and its value group, with `ord` and `ac` maps
//! between them, plus parsing, printing, substitution and builders that
//! express matrix-group conditions as formulas.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod groups;
pub mod library;
pub mod printer;
pub mod subst;
pub mod wsets;

pub use ast::{Formula, FormulaRef, Sort, SortViolation, Term, TermNode, TermRef, Var};
pub use parser::{check_sorts, parse_formula, parse_term, ParseError, SortIssue, SortReport};
pub use printer::{canonical_text, dag_text, term_to_text, to_text, FormulaTooLarge};
pub use library::formula_library;
pub use subst::{free_term_vars, free_vars, substitute, SubstError};
pub use wsets::{
    build_class_residue_formula, build_lambda_component_formula, build_w_formula,
    validate_gamma_constraint,
};
