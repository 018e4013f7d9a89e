//! Tokenizer for the surface syntax.
//!
//! Produces a flat token stream with line/column positions (1-based).
//! Keywords are reserved: they can never be variable names.

use num_bigint::BigInt;

use crate::parser::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Slash,
    Eq,
    Neq,
    Leq,
    Geq,
    AndOp,
    OrOp,
    Bang,
    KwForall,
    KwExists,
    KwOrd,
    KwAc,
    KwCong,
    KwTrue,
    KwFalse,
    KwInf,
    Eof,
}

impl TokKind {
    /// Human-readable token name for error messages.
    pub fn describe(&self) -> String {
        match self {
            TokKind::Ident(s) => format!("identifier '{s}'"),
            TokKind::Int(n) => format!("integer '{n}'"),
            TokKind::Plus => "'+'".into(),
            TokKind::Minus => "'-'".into(),
            TokKind::Star => "'*'".into(),
            TokKind::LParen => "'('".into(),
            TokKind::RParen => "')'".into(),
            TokKind::Comma => "','".into(),
            TokKind::Semi => "';'".into(),
            TokKind::Colon => "':'".into(),
            TokKind::Slash => "'/'".into(),
            TokKind::Eq => "'='".into(),
            TokKind::Neq => "'!='".into(),
            TokKind::Leq => "'<='".into(),
            TokKind::Geq => "'>='".into(),
            TokKind::AndOp => "'/\\'".into(),
            TokKind::OrOp => "'\\/'".into(),
            TokKind::Bang => "'!'".into(),
            TokKind::KwForall => "'forall'".into(),
            TokKind::KwExists => "'exists'".into(),
            TokKind::KwOrd => "'ord'".into(),
            TokKind::KwAc => "'ac'".into(),
            TokKind::KwCong => "'cong'".into(),
            TokKind::KwTrue => "'true'".into(),
            TokKind::KwFalse => "'false'".into(),
            TokKind::KwInf => "'inf'".into(),
            TokKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tok {
    pub kind: TokKind,
    pub line: u32,
    pub col: u32,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, message: message.into() }
    }
}

/// Tokenize a whole input. The result always ends with an Eof token carrying
/// the position just past the last character.
pub fn tokenize(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut lx = Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut toks = Vec::new();
    loop {
        while matches!(lx.peek(), Some(c) if c.is_ascii_whitespace()) {
            lx.bump();
        }
        let (line, col) = (lx.line, lx.col);
        let Some(c) = lx.peek() else {
            toks.push(Tok { kind: TokKind::Eof, line, col });
            return Ok(toks);
        };
        let kind = match c {
            b'0'..=b'9' => {
                let mut digits = String::new();
                while matches!(lx.peek(), Some(d) if d.is_ascii_digit()) {
                    digits.push(lx.bump().unwrap() as char);
                }
                TokKind::Int(digits.parse().expect("digit string parses"))
            }
            b'a'..=b'z' => {
                let mut word = String::new();
                while matches!(lx.peek(), Some(d) if d.is_ascii_lowercase() || d.is_ascii_digit() || d == b'_')
                {
                    word.push(lx.bump().unwrap() as char);
                }
                match word.as_str() {
                    "forall" => TokKind::KwForall,
                    "exists" => TokKind::KwExists,
                    "ord" => TokKind::KwOrd,
                    "ac" => TokKind::KwAc,
                    "cong" => TokKind::KwCong,
                    "true" => TokKind::KwTrue,
                    "false" => TokKind::KwFalse,
                    "inf" => TokKind::KwInf,
                    _ => TokKind::Ident(word),
                }
            }
            b'+' => {
                lx.bump();
                TokKind::Plus
            }
            b'-' => {
                lx.bump();
                TokKind::Minus
            }
            b'*' => {
                lx.bump();
                TokKind::Star
            }
            b'(' => {
                lx.bump();
                TokKind::LParen
            }
            b')' => {
                lx.bump();
                TokKind::RParen
            }
            b',' => {
                lx.bump();
                TokKind::Comma
            }
            b';' => {
                lx.bump();
                TokKind::Semi
            }
            b':' => {
                lx.bump();
                TokKind::Colon
            }
            b'=' => {
                lx.bump();
                TokKind::Eq
            }
            b'!' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    TokKind::Neq
                } else {
                    TokKind::Bang
                }
            }
            b'<' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    TokKind::Leq
                } else {
                    return Err(lx.error("expected '<=' (strict '<' is not in the language)"));
                }
            }
            b'>' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    TokKind::Geq
                } else {
                    return Err(lx.error("expected '>=' (strict '>' is not in the language)"));
                }
            }
            b'/' => {
                lx.bump();
                if lx.peek() == Some(b'\\') {
                    lx.bump();
                    TokKind::AndOp
                } else {
                    TokKind::Slash
                }
            }
            b'\\' => {
                lx.bump();
                if lx.peek() == Some(b'/') {
                    lx.bump();
                    TokKind::OrOp
                } else {
                    return Err(lx.error("expected '\\/'"));
                }
            }
            other => {
                return Err(lx.error(format!("unexpected character '{}'", other as char)));
            }
        };
        toks.push(Tok { kind, line, col });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn operators_and_keywords() {
        assert_eq!(
            kinds("forall x (ord(x) >= 0 /\\ ac(x) != 0)"),
            vec![
                TokKind::KwForall,
                TokKind::Ident("x".into()),
                TokKind::LParen,
                TokKind::KwOrd,
                TokKind::LParen,
                TokKind::Ident("x".into()),
                TokKind::RParen,
                TokKind::Geq,
                TokKind::Int(0u32.into()),
                TokKind::AndOp,
                TokKind::KwAc,
                TokKind::LParen,
                TokKind::Ident("x".into()),
                TokKind::RParen,
                TokKind::Neq,
                TokKind::Int(0u32.into()),
                TokKind::RParen,
                TokKind::Eof,
            ]
        );
    }

    #[test]
    fn slash_is_division_unless_followed_by_backslash() {
        assert_eq!(
            kinds("1/2 /\\ true"),
            vec![
                TokKind::Int(1u32.into()),
                TokKind::Slash,
                TokKind::Int(2u32.into()),
                TokKind::AndOp,
                TokKind::KwTrue,
                TokKind::Eof,
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("x\n  y").unwrap();
        assert_eq!((toks[0].line, toks[0].col), (1, 1));
        assert_eq!((toks[1].line, toks[1].col), (2, 3));
    }

    #[test]
    fn strict_inequality_is_rejected() {
        assert!(tokenize("x < y").is_err());
        let err = tokenize("x > y").unwrap_err();
        assert!(err.to_string().contains(">="));
    }
}
