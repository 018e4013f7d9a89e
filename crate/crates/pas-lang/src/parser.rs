//! Recursive-descent parser with scope-based sort resolution.
//!
//! The surface grammar is infix. `/\` binds tighter than `\/`, both fold
//! left, negation and quantifiers bind tighter still, and quantifier bodies
//! must be parenthesized: `forall x (phi)`. Comparisons `= != <= >=` build
//! atoms from terms; `a >= b` is sugar for `b <= a` and there is no strict
//! inequality. Terms use `+ - *`, prefix `-`, `ord(t)`, `ac(t)`, `inf`, and
//! rational literals `a/b`.
//!
//! Sorts are resolved lexically. A variable may carry a suffix `:v` (valued),
//! `:r` (residue) or `:z` (value); a bare name refers to the innermost
//! binding of that name, or, if free, defaults to the valued sort at its
//! first occurrence. Conflicting suffixes for the same variable are sort
//! errors. Integer literals take the sort their context demands.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::ast::{Formula, FormulaRef, Sort, Term, TermRef, Var};
use crate::lexer::{tokenize, Tok, TokKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: u32, col: u32, message: String },
    #[error("{line}:{col}: sort error: {message}")]
    Sort { line: u32, col: u32, message: String },
}

impl ParseError {
    pub fn position(&self) -> (u32, u32) {
        match self {
            ParseError::Syntax { line, col, .. } | ParseError::Sort { line, col, .. } => {
                (*line, *col)
            }
        }
    }
}

/// One diagnostic from `check_sorts`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortIssue {
    pub line: u32,
    pub col: u32,
    pub is_sort_error: bool,
    pub message: String,
}

/// Result of checking a source text: `ok` holds exactly when `issues` is
/// empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortReport {
    pub ok: bool,
    pub issues: Vec<SortIssue>,
}

pub fn parse_formula(src: &str) -> Result<FormulaRef, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parse a standalone term. An all-constant integer term defaults to the
/// valued sort.
pub fn parse_term(src: &str) -> Result<TermRef, ParseError> {
    let mut p = Parser::new(src)?;
    let pt = p.pterm()?;
    p.expect_eof()?;
    let target = p.infer(&pt)?.unwrap_or(Sort::Valued);
    p.check(&pt, target)
}

pub fn check_sorts(src: &str) -> SortReport {
    match parse_formula(src) {
        Ok(_) => SortReport { ok: true, issues: Vec::new() },
        Err(e) => {
            let (line, col) = e.position();
            let (is_sort_error, message) = match &e {
                ParseError::Syntax { message, .. } => (false, message.clone()),
                ParseError::Sort { message, .. } => (true, message.clone()),
            };
            SortReport {
                ok: false,
                issues: vec![SortIssue { line, col, is_sort_error, message }],
            }
        }
    }
}

/// Untyped parse tree for terms; sorts are assigned in a second pass once
/// the surrounding atom fixes the context.
struct PTerm {
    line: u32,
    col: u32,
    node: PNode,
}

enum PNode {
    Int(BigInt),
    Rat(BigInt, BigInt),
    Var { name: String, suffix: Option<Sort> },
    Add(Box<PTerm>, Box<PTerm>),
    Mul(Box<PTerm>, Box<PTerm>),
    Neg(Box<PTerm>),
    Ord(Box<PTerm>),
    Ac(Box<PTerm>),
    Inf,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    scopes: Vec<Var>,
    free: BTreeMap<String, Sort>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, scopes: Vec::new(), free: BTreeMap::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn kind(&self) -> &TokKind {
        &self.toks[self.pos].kind
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::Syntax { line: t.line, col: t.col, message: message.into() }
    }

    fn sort_at(line: u32, col: u32, message: impl Into<String>) -> ParseError {
        ParseError::Sort { line, col, message: message.into() }
    }

    fn expect(&mut self, want: &TokKind, context: &str) -> Result<Tok, ParseError> {
        if self.kind() == want {
            Ok(self.bump())
        } else {
            Err(self.syntax_here(format!(
                "expected {} {context}, found {}",
                want.describe(),
                self.kind().describe()
            )))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.kind() == TokKind::Eof {
            Ok(())
        } else {
            Err(self.syntax_here(format!("unexpected {} after formula", self.kind().describe())))
        }
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<FormulaRef, ParseError> {
        let mut f = self.conjunction()?;
        while *self.kind() == TokKind::OrOp {
            self.bump();
            let r = self.conjunction()?;
            f = Formula::or(f, r);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<FormulaRef, ParseError> {
        let mut f = self.unary()?;
        while *self.kind() == TokKind::AndOp {
            self.bump();
            let r = self.unary()?;
            f = Formula::and(f, r);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<FormulaRef, ParseError> {
        match self.kind() {
            TokKind::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            TokKind::KwForall | TokKind::KwExists => {
                let is_forall = *self.kind() == TokKind::KwForall;
                let kw = if is_forall { "forall" } else { "exists" };
                self.bump();
                let (name, _, _) = self.ident(&format!("after '{kw}'"))?;
                let sort = self.optional_suffix()?.unwrap_or(Sort::Valued);
                let var = Var::new(name, sort);
                self.expect(&TokKind::LParen, &format!("opening the '{kw}' body"))?;
                self.scopes.push(var.clone());
                let body = self.formula();
                self.scopes.pop();
                let body = body?;
                self.expect(&TokKind::RParen, &format!("closing the '{kw}' body"))?;
                Ok(if is_forall { Formula::forall(var, body) } else { Formula::exists(var, body) })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<FormulaRef, ParseError> {
        match self.kind() {
            TokKind::KwTrue => {
                self.bump();
                Ok(Formula::lit(true))
            }
            TokKind::KwFalse => {
                self.bump();
                Ok(Formula::lit(false))
            }
            TokKind::KwCong => self.cong_atom(),
            _ => self.relational_or_paren(),
        }
    }

    fn cong_atom(&mut self) -> Result<FormulaRef, ParseError> {
        self.bump();
        self.expect(&TokKind::LParen, "after 'cong'")?;
        let mod_tok = self.peek().clone();
        let modulus = match &mod_tok.kind {
            TokKind::Int(n) => {
                self.bump();
                u64::try_from(n).map_err(|_| {
                    Parser::sort_at(mod_tok.line, mod_tok.col, "congruence modulus too large")
                })?
            }
            other => {
                return Err(self.syntax_here(format!(
                    "expected integer congruence modulus, found {}",
                    other.describe()
                )))
            }
        };
        if modulus == 0 {
            return Err(Parser::sort_at(
                mod_tok.line,
                mod_tok.col,
                "congruence modulus must be at least 1",
            ));
        }
        self.expect(&TokKind::Semi, "after the congruence modulus")?;
        let a = self.pterm()?;
        self.expect(&TokKind::Comma, "between congruence operands")?;
        let b = self.pterm()?;
        self.expect(&TokKind::RParen, "closing 'cong'")?;
        let ta = self.check(&a, Sort::Value)?;
        let tb = self.check(&b, Sort::Value)?;
        Ok(Formula::cong_mod(modulus, ta, tb).expect("operands checked against the value sort"))
    }

    /// Either `term <rel> term` or a parenthesized formula. Both start with
    /// '(' in the ambiguous case, so try the term reading first and fall
    /// back on a syntax failure; sort errors are real and not retried.
    fn relational_or_paren(&mut self) -> Result<FormulaRef, ParseError> {
        let save = self.pos;
        let ambiguous = *self.kind() == TokKind::LParen;
        let term_err = match self.relational() {
            Ok(f) => return Ok(f),
            Err(e @ ParseError::Sort { .. }) => return Err(e),
            Err(e) => e,
        };
        if !ambiguous {
            return Err(term_err);
        }
        self.pos = save;
        self.bump();
        let inner = (|| {
            let f = self.formula()?;
            self.expect(&TokKind::RParen, "closing the group")?;
            Ok(f)
        })();
        inner.map_err(|formula_err: ParseError| {
            if formula_err.position() >= term_err.position() {
                formula_err
            } else {
                term_err
            }
        })
    }

    fn relational(&mut self) -> Result<FormulaRef, ParseError> {
        let a = self.pterm()?;
        let op = match self.kind() {
            TokKind::Eq | TokKind::Neq | TokKind::Leq | TokKind::Geq => self.bump(),
            other => {
                return Err(self.syntax_here(format!(
                    "expected '=', '!=', '<=' or '>=', found {}",
                    other.describe()
                )))
            }
        };
        let b = self.pterm()?;
        match &op.kind {
            TokKind::Eq | TokKind::Neq => {
                let target =
                    match self.infer(&a)? {
                        Some(s) => s,
                        None => self.infer(&b)?.unwrap_or(Sort::Valued),
                    };
                let ta = self.check(&a, target)?;
                let tb = self.check(&b, target).map_err(|e| match e {
                    ParseError::Sort { line, col, message } => ParseError::Sort {
                        line,
                        col,
                        message: format!("{message} (left operand has sort {target})"),
                    },
                    other => other,
                })?;
                Ok(if op.kind == TokKind::Eq {
                    Formula::eq(ta, tb).expect("operands share the inferred sort")
                } else {
                    Formula::neq(ta, tb).expect("operands share the inferred sort")
                })
            }
            TokKind::Leq | TokKind::Geq => {
                let ta = self.check(&a, Sort::Value)?;
                let tb = self.check(&b, Sort::Value)?;
                Ok(if op.kind == TokKind::Leq {
                    Formula::leq(ta, tb).expect("operands checked against the value sort")
                } else {
                    Formula::leq(tb, ta).expect("operands checked against the value sort")
                })
            }
            _ => unreachable!("matched above"),
        }
    }

    // ---- untyped term parsing ----

    fn pterm(&mut self) -> Result<PTerm, ParseError> {
        let mut a = self.pfactor()?;
        loop {
            match self.kind() {
                TokKind::Plus => {
                    self.bump();
                    let b = self.pfactor()?;
                    a = binary(a, b, PNode::Add);
                }
                TokKind::Minus => {
                    self.bump();
                    let b = self.pfactor()?;
                    let nb = PTerm { line: b.line, col: b.col, node: PNode::Neg(Box::new(b)) };
                    a = binary(a, nb, PNode::Add);
                }
                _ => return Ok(a),
            }
        }
    }

    fn pfactor(&mut self) -> Result<PTerm, ParseError> {
        let mut a = self.pprefix()?;
        while *self.kind() == TokKind::Star {
            self.bump();
            let b = self.pprefix()?;
            a = binary(a, b, PNode::Mul);
        }
        Ok(a)
    }

    fn pprefix(&mut self) -> Result<PTerm, ParseError> {
        if *self.kind() == TokKind::Minus {
            let t = self.bump();
            let a = self.pprefix()?;
            Ok(PTerm { line: t.line, col: t.col, node: PNode::Neg(Box::new(a)) })
        } else {
            self.pprimary()
        }
    }

    fn pprimary(&mut self) -> Result<PTerm, ParseError> {
        let tok = self.peek().clone();
        match &tok.kind {
            TokKind::Int(n) => {
                self.bump();
                if *self.kind() == TokKind::Slash {
                    self.bump();
                    let den_tok = self.peek().clone();
                    let TokKind::Int(d) = &den_tok.kind else {
                        return Err(self.syntax_here(format!(
                            "expected integer denominator, found {}",
                            self.kind().describe()
                        )));
                    };
                    if d.is_zero() {
                        return Err(ParseError::Syntax {
                            line: den_tok.line,
                            col: den_tok.col,
                            message: "rational literal with zero denominator".into(),
                        });
                    }
                    self.bump();
                    Ok(PTerm {
                        line: tok.line,
                        col: tok.col,
                        node: PNode::Rat(n.clone(), d.clone()),
                    })
                } else {
                    Ok(PTerm { line: tok.line, col: tok.col, node: PNode::Int(n.clone()) })
                }
            }
            TokKind::Ident(name) => {
                self.bump();
                let suffix = self.optional_suffix()?;
                Ok(PTerm {
                    line: tok.line,
                    col: tok.col,
                    node: PNode::Var { name: name.clone(), suffix },
                })
            }
            TokKind::KwOrd | TokKind::KwAc => {
                let is_ord = tok.kind == TokKind::KwOrd;
                self.bump();
                self.expect(&TokKind::LParen, if is_ord { "after 'ord'" } else { "after 'ac'" })?;
                let inner = self.pterm()?;
                self.expect(&TokKind::RParen, "closing the argument")?;
                let node = if is_ord {
                    PNode::Ord(Box::new(inner))
                } else {
                    PNode::Ac(Box::new(inner))
                };
                Ok(PTerm { line: tok.line, col: tok.col, node })
            }
            TokKind::KwInf => {
                self.bump();
                Ok(PTerm { line: tok.line, col: tok.col, node: PNode::Inf })
            }
            TokKind::LParen => {
                self.bump();
                let inner = self.pterm()?;
                self.expect(&TokKind::RParen, "closing the term")?;
                Ok(inner)
            }
            other => Err(self.syntax_here(format!("expected a term, found {}", other.describe()))),
        }
    }

    fn ident(&mut self, context: &str) -> Result<(String, u32, u32), ParseError> {
        let tok = self.peek().clone();
        match tok.kind {
            TokKind::Ident(name) => {
                self.bump();
                Ok((name, tok.line, tok.col))
            }
            other => Err(self.syntax_here(format!(
                "expected a variable name {context}, found {}",
                other.describe()
            ))),
        }
    }

    fn optional_suffix(&mut self) -> Result<Option<Sort>, ParseError> {
        if *self.kind() != TokKind::Colon {
            return Ok(None);
        }
        self.bump();
        let (word, line, col) = self.ident("as a sort suffix")?;
        match word.as_str() {
            "v" => Ok(Some(Sort::Valued)),
            "r" => Ok(Some(Sort::Residue)),
            "z" => Ok(Some(Sort::Value)),
            other => Err(ParseError::Syntax {
                line,
                col,
                message: format!("expected sort suffix 'v', 'r' or 'z', found '{other}'"),
            }),
        }
    }

    // ---- sort resolution ----

    /// Resolve a variable occurrence, committing a free variable's sort on
    /// first use.
    fn resolve(
        &mut self,
        name: &str,
        suffix: Option<Sort>,
        line: u32,
        col: u32,
    ) -> Result<Var, ParseError> {
        if let Some(v) = self.scopes.iter().rev().find(|v| v.name == name) {
            if let Some(s) = suffix {
                if s != v.sort {
                    return Err(Parser::sort_at(
                        line,
                        col,
                        format!(
                            "variable '{name}' is bound with sort {} but used with suffix :{}",
                            v.sort,
                            s.suffix()
                        ),
                    ));
                }
            }
            return Ok(v.clone());
        }
        match self.free.get(name).copied() {
            Some(prev) => {
                if let Some(s) = suffix {
                    if s != prev {
                        return Err(Parser::sort_at(
                            line,
                            col,
                            format!(
                                "variable '{name}' was first used with sort {prev} but now has suffix :{}",
                                s.suffix()
                            ),
                        ));
                    }
                }
                Ok(Var::new(name, prev))
            }
            None => {
                let sort = suffix.unwrap_or(Sort::Valued);
                self.free.insert(name.to_string(), sort);
                Ok(Var::new(name, sort))
            }
        }
    }

    /// First inference pass: Some(sort) when the term pins its sort, None
    /// for all-integer-constant terms, which take the surrounding sort.
    fn infer(&mut self, t: &PTerm) -> Result<Option<Sort>, ParseError> {
        match &t.node {
            PNode::Int(_) => Ok(None),
            PNode::Rat(..) => Ok(Some(Sort::Valued)),
            PNode::Var { name, suffix } => {
                Ok(Some(self.resolve(name, *suffix, t.line, t.col)?.sort))
            }
            PNode::Add(a, b) | PNode::Mul(a, b) => {
                let op = if matches!(t.node, PNode::Add(..)) { "+" } else { "*" };
                let sa = self.infer(a)?;
                let sb = self.infer(b)?;
                let combined = match (sa, sb) {
                    (Some(x), Some(y)) if x != y => {
                        return Err(Parser::sort_at(
                            t.line,
                            t.col,
                            format!("operands of '{op}' have sorts {x} and {y}"),
                        ))
                    }
                    (x, y) => x.or(y),
                };
                if op == "*" && combined == Some(Sort::Value) {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        "multiplication is not defined on the value sort".to_string(),
                    ));
                }
                Ok(combined)
            }
            PNode::Neg(a) => self.infer(a),
            PNode::Ord(a) | PNode::Ac(a) => {
                let is_ord = matches!(t.node, PNode::Ord(..));
                if let Some(s) = self.infer(a)? {
                    if s != Sort::Valued {
                        return Err(Parser::sort_at(
                            a.line,
                            a.col,
                            format!(
                                "argument of '{}' has sort {s}, expected valued",
                                if is_ord { "ord" } else { "ac" }
                            ),
                        ));
                    }
                }
                Ok(Some(if is_ord { Sort::Value } else { Sort::Residue }))
            }
            PNode::Inf => Ok(Some(Sort::Value)),
        }
    }

    /// Second pass: build the typed term against a definite sort.
    fn check(&mut self, t: &PTerm, expected: Sort) -> Result<TermRef, ParseError> {
        match &t.node {
            PNode::Int(n) => Ok(Term::int(n.clone(), expected)),
            PNode::Rat(n, d) => {
                if expected != Sort::Valued {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        format!("rational literal has sort valued, expected {expected}"),
                    ));
                }
                Ok(Term::rat(BigRational::new(n.clone(), d.clone())))
            }
            PNode::Var { name, suffix } => {
                let v = self.resolve(name, *suffix, t.line, t.col)?;
                if v.sort != expected {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        format!("variable '{name}' has sort {}, expected {expected}", v.sort),
                    ));
                }
                Ok(Term::var(v))
            }
            PNode::Add(a, b) => {
                let ta = self.check(a, expected)?;
                let tb = self.check(b, expected)?;
                Ok(Term::add(ta, tb).expect("operands share the expected sort"))
            }
            PNode::Mul(a, b) => {
                if expected == Sort::Value {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        "multiplication is not defined on the value sort".to_string(),
                    ));
                }
                let ta = self.check(a, expected)?;
                let tb = self.check(b, expected)?;
                Ok(Term::mul(ta, tb).expect("operands share a non-value sort"))
            }
            PNode::Neg(a) => Ok(Term::neg(self.check(a, expected)?)),
            PNode::Ord(a) => {
                if expected != Sort::Value {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        format!("ord(...) has sort value, expected {expected}"),
                    ));
                }
                let inner = self.check(a, Sort::Valued)?;
                Ok(Term::ord(inner).expect("argument checked against the valued sort"))
            }
            PNode::Ac(a) => {
                if expected != Sort::Residue {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        format!("ac(...) has sort residue, expected {expected}"),
                    ));
                }
                let inner = self.check(a, Sort::Valued)?;
                Ok(Term::ac(inner).expect("argument checked against the valued sort"))
            }
            PNode::Inf => {
                if expected != Sort::Value {
                    return Err(Parser::sort_at(
                        t.line,
                        t.col,
                        format!("inf has sort value, expected {expected}"),
                    ));
                }
                Ok(Term::inf())
            }
        }
    }
}

fn binary(a: PTerm, b: PTerm, make: impl FnOnce(Box<PTerm>, Box<PTerm>) -> PNode) -> PTerm {
    let (line, col) = (a.line, a.col);
    PTerm { line, col, node: make(Box::new(a), Box::new(b)) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::TermNode;

    #[test]
    fn geq_desugars_to_swapped_leq() {
        let f = parse_formula("ord(x) >= 0").unwrap();
        let Formula::Leq(lo, hi) = f.as_ref() else { panic!("expected Leq, got {f:?}") };
        assert_eq!(lo.sort(), Sort::Value);
        assert!(matches!(lo.node(), TermNode::Int(n) if n.is_zero()));
        assert!(matches!(hi.node(), TermNode::Ord(_)));
    }

    #[test]
    fn integer_literals_take_contextual_sorts() {
        // Inside ac(.) the 0 is valued; on the right of = it is residue.
        let f = parse_formula("ac(0) = 0").unwrap();
        let Formula::Eq(a, b) = f.as_ref() else { panic!() };
        assert_eq!(a.sort(), Sort::Residue);
        assert_eq!(b.sort(), Sort::Residue);
        let TermNode::Ac(inner) = a.node() else { panic!() };
        assert_eq!(inner.sort(), Sort::Valued);
    }

    #[test]
    fn value_sort_admits_addition_but_not_multiplication() {
        assert!(parse_formula("m:z + m = 1").is_ok());
        let err = parse_formula("m:z * m = 1").unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }), "got {err:?}");
        assert!(err.to_string().contains("multiplication"));
    }

    #[test]
    fn bound_variables_shadow_and_free_sorts_commit() {
        let f = parse_formula("forall x (exists x:r (x = 0)) /\\ x = 5").unwrap();
        let Formula::And(_, rhs) = f.as_ref() else { panic!() };
        let Formula::Eq(a, _) = rhs.as_ref() else { panic!() };
        // The trailing free x is unaffected by the bound residue x.
        assert_eq!(a.sort(), Sort::Valued);
    }

    #[test]
    fn conflicting_suffixes_are_sort_errors_with_positions() {
        let err = parse_formula("x:r = 0 /\\ x:v = 1").unwrap_err();
        let ParseError::Sort { line, col, message } = &err else { panic!("got {err:?}") };
        assert_eq!((*line, *col), (1, 12));
        assert!(message.contains("first used"));

        let err = parse_formula("forall y:z (y:r = 0)").unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
    }

    #[test]
    fn parenthesized_formulas_and_terms_disambiguate() {
        assert!(parse_formula("(x = 1) \\/ (x + 1) = 2").is_ok());
        assert!(parse_formula("((x = 1))").is_ok());
        assert!(parse_formula("(forall x (x = 0)) /\\ true").is_ok());
    }

    #[test]
    fn precedence_folds_left_and_and_binds_tighter() {
        let f = parse_formula("x = 1 \\/ x = 2 /\\ x = 3 \\/ x = 4").unwrap();
        // ((x=1 \/ (x=2 /\ x=3)) \/ x=4)
        let Formula::Or(l, _) = f.as_ref() else { panic!() };
        let Formula::Or(_, mid) = l.as_ref() else { panic!() };
        assert!(matches!(mid.as_ref(), Formula::And(_, _)));
    }

    #[test]
    fn rational_literals_parse_and_validate() {
        let t = parse_term("3/4").unwrap();
        assert!(matches!(t.node(), TermNode::Rat(_)));
        assert!(parse_formula("1/0 = x").is_err());
        // Rationals are valued only.
        let err = parse_formula("ord(x) = 1/2").unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
    }

    #[test]
    fn congruence_atoms_check_value_sort() {
        assert!(parse_formula("cong(2; ord(x), 0)").is_ok());
        let err = parse_formula("cong(0; ord(x), 0)").unwrap_err();
        assert!(err.to_string().contains("at least 1"));
        let err = parse_formula("cong(2; x, 0)").unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
    }

    #[test]
    fn subtraction_desugars_to_add_neg() {
        let t = parse_term("x - y").unwrap();
        let TermNode::Add(_, rhs) = t.node() else { panic!() };
        assert!(matches!(rhs.node(), TermNode::Neg(_)));
    }

    #[test]
    fn keywords_are_reserved() {
        let err = parse_formula("forall ord (x = 1)").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn quantifier_bodies_require_parentheses() {
        assert!(parse_formula("forall x x = 1").is_err());
    }

    #[test]
    fn trailing_input_is_an_error() {
        let err = parse_formula("x = 1 y").unwrap_err();
        assert!(err.to_string().contains("after formula"));
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let err = parse_formula("x =").unwrap_err();
        assert_eq!(err.position(), (1, 4));
    }
}
