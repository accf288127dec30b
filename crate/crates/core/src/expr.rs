//! Text format for Laurent polynomials.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ['-'] factor
//! factor := base (('^' | '**') ['-'] integer)?
//! base   := integer | variable | '(' expr ')'
//! ```
//!
//! Juxtaposition is not multiplication, and a divisor must be a single
//! monomial with coefficient `±1`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::laurent::{ExponentVector, IntLaurentPoly, ModLaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unsupported divisor at position {pos}: only monomials with coefficient ±1 can divide")]
    UnsupportedDivisor { pos: usize },
    #[error("unbound variable '{name}' at position {pos}")]
    UnboundVariable { name: String, pos: usize },
    #[error("invalid variable list: {0}")]
    InvalidVars(String),
}

/// Expression text together with its ordered variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprSource<'a> {
    pub text: &'a str,
    pub vars: &'a [String],
}

impl<'a> ExprSource<'a> {
    pub fn new(text: &'a str, vars: &'a [String]) -> Self {
        ExprSource { text, vars }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks that variable names are nonempty, pairwise distinct identifiers.
pub fn validate_vars(vars: &[String]) -> Result<(), ExprError> {
    if vars.is_empty() {
        return Err(ExprError::InvalidVars("at least one variable is required".into()));
    }
    for (i, v) in vars.iter().enumerate() {
        if !is_identifier(v) {
            return Err(ExprError::InvalidVars(format!("'{v}' is not an identifier")));
        }
        if vars[..i].contains(v) {
            return Err(ExprError::InvalidVars(format!("'{v}' appears twice")));
        }
    }
    Ok(())
}

/// Parses a comma-separated variable list such as `x1,x2,x3`.
pub fn parse_vars(list: &str) -> Result<Vec<String>, ExprError> {
    let vars: Vec<String> = list.split(',').map(|v| v.trim().to_string()).collect();
    validate_vars(&vars)?;
    Ok(vars)
}

/// Default variable names: `x` for one variable, `x1..xm` otherwise.
pub fn default_vars(arity: usize) -> Vec<String> {
    if arity == 1 {
        vec!["x".to_string()]
    } else {
        (1..=arity).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::parse_bytes(&bytes[start..i], 10).expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' if bytes.get(i + 1) == Some(&b'*') => {
                out.push((Tok::Caret, start));
                i += 1;
            }
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{ch}'"),
                });
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn arity(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<IntLaurentPoly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntLaurentPoly, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let divisor = self.unary()?;
                    acc = &acc * &invert(&divisor, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<IntLaurentPoly, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let f = self.factor()?;
            return Ok(-&f);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<IntLaurentPoly, ExprError> {
        let base_pos = self.pos();
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let e = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return self.syntax("expected an integer exponent"),
        };
        let e = match e.to_u64() {
            Some(e) if e <= i32::MAX as u64 => e,
            _ => return self.syntax("exponent too large"),
        };
        if negative {
            Ok(invert(&base, base_pos)?.pow(e))
        } else {
            Ok(base.pow(e))
        }
    }

    fn base(&mut self) -> Result<IntLaurentPoly, ExprError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(IntLaurentPoly::constant(self.arity(), n)),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(IntLaurentPoly::var(self.arity(), i)),
                None => Err(ExprError::UnboundVariable { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(ExprError::Syntax { pos, msg: "unexpected end of input".into() }),
            t => Err(ExprError::Syntax { pos, msg: format!("unexpected token {t:?}") }),
        }
    }
}

/// Inverse of a `±monomial` in the Laurent ring.
fn invert(p: &IntLaurentPoly, pos: usize) -> Result<IntLaurentPoly, ExprError> {
    match p.as_unit_monomial() {
        Some((e, sign)) => Ok(IntLaurentPoly::monomial(e.neg(), sign)),
        None => Err(ExprError::UnsupportedDivisor { pos }),
    }
}

/// Parses an expression into an exact integer Laurent polynomial.
pub fn parse_laurent(src: &ExprSource<'_>) -> Result<IntLaurentPoly, ExprError> {
    validate_vars(src.vars)?;
    let toks = tokenize(src.text)?;
    let mut parser = Parser { toks, at: 0, vars: src.vars };
    let result = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.syntax("unexpected trailing input");
    }
    Ok(result)
}

/// Convenience wrapper around [`parse_laurent`].
pub fn parse_with_vars(text: &str, vars: &[String]) -> Result<IntLaurentPoly, ExprError> {
    parse_laurent(&ExprSource::new(text, vars))
}

fn format_terms<'a, I>(terms: I, vars: &[String]) -> String
where
    I: IntoIterator<Item = (&'a ExponentVector, BigInt)>,
{
    let mut out = String::new();
    for (e, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        let mono: Vec<String> = e
            .as_slice()
            .iter()
            .zip(vars)
            .filter(|(&k, _)| k != 0)
            .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
            .collect();
        if mono.is_empty() {
            let _ = write!(out, "{mag}");
        } else if mag.is_one() {
            out.push_str(&mono.join("*"));
        } else {
            let _ = write!(out, "{mag}*{}", mono.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text for an integer polynomial.
pub fn format_int(p: &IntLaurentPoly, vars: &[String]) -> String {
    assert_eq!(p.arity(), vars.len(), "variable count must match arity");
    format_terms(p.terms().iter().map(|(e, c)| (e, c.clone())), vars)
}

/// Canonical text for a residue polynomial (coefficients in `[1, p^a)`).
pub fn format_mod(p: &ModLaurentPoly, vars: &[String]) -> String {
    assert_eq!(p.arity(), vars.len(), "variable count must match arity");
    format_terms(p.terms().iter().map(|(e, c)| (e, BigInt::from(*c))), vars)
}

/// Polynomial types that have a canonical text form.
pub trait FormatLaurent {
    fn format_laurent(&self, vars: &[String]) -> String;
}

impl FormatLaurent for IntLaurentPoly {
    fn format_laurent(&self, vars: &[String]) -> String {
        format_int(self, vars)
    }
}

impl FormatLaurent for ModLaurentPoly {
    fn format_laurent(&self, vars: &[String]) -> String {
        format_mod(self, vars)
    }
}

impl std::fmt::Display for IntLaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_int(self, &default_vars(self.arity())))
    }
}

impl std::fmt::Display for ModLaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_mod(self, &default_vars(self.arity())))
    }
}
