//! Parser for the term language:
//!
//! ```text
//! term  := var | "o" "{" scale "}" "(" term "," term ")"
//!              | "b" "{" scale "}" "(" term "," term ")"
//! scale := factor (("*" | whitespace) factor)*
//! factor := (ident | int | int "/" int) ["^" ["-"] int]
//! ```
//!
//! `b{s}(x, y)` is read as `o{s^-1}(x, y)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::scale_expr::ScaleExpr;
use super::tree::Term;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// 1-based line, when parsing multi-line input.
    pub line: Option<usize>,
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn at_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "parse error at line {l}, column {}: {}", self.column, self.message),
            None => write!(f, "parse error at column {}: {}", self.column, self.message),
        }
    }
}

pub(crate) struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    offset: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str, offset: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            offset,
            _src: src,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: None,
            column: self.offset + self.pos + 1,
            message: message.into(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |f| format!("{f:?}"));
            Err(self.error(format!("expected {c:?}, found {found}")))
        }
    }

    pub(crate) fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
            return None;
        }
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    pub(crate) fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        if !self.eat('^') {
            return Ok(1);
        }
        self.skip_ws();
        let neg = self.eat('-');
        self.skip_ws();
        let d = self.digits().ok_or_else(|| self.error("expected an integer exponent"))?;
        let v: i64 = d.parse().map_err(|_| self.error("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self) -> Result<ScaleExpr, ParseError> {
        self.skip_ws();
        if let Some(name) = self.ident() {
            let k = self.exponent()?;
            return Ok(ScaleExpr::var_pow(name, k));
        }
        let start = self.pos;
        let num = self.digits().ok_or_else(|| self.error("expected a scale factor"))?;
        let mut value = Rational::from_integer(num.parse::<BigInt>().expect("digits"));
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.digits().ok_or_else(|| self.error("expected a denominator"))?;
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            value /= Rational::from_integer(den);
        }
        let lit = ScaleExpr::literal(value).map_err(|_| ParseError {
            line: None,
            column: self.offset + start + 1,
            message: "scale literals must be positive".into(),
        })?;
        let k = self.exponent()?;
        Ok(lit.pow(k))
    }

    /// Parses a scale up to (not including) `close`.
    pub(crate) fn scale_until(&mut self, close: char) -> Result<ScaleExpr, ParseError> {
        self.skip_ws();
        if self.peek() == Some(close) {
            return Err(self.error("empty scale"));
        }
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == close => return Ok(acc),
                Some('*') => {
                    self.pos += 1;
                }
                None => return Err(self.error(format!("unterminated scale, expected {close:?}"))),
                _ => {}
            }
            acc = acc.mul(&self.factor()?);
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident().ok_or_else(|| self.error("expected a variable or o{..}/b{..}"))?;
        let save = self.pos;
        self.skip_ws();
        if (name == "o" || name == "b") && self.peek() == Some('{') {
            self.pos += 1;
            let mut scale = self.scale_until('}')?;
            self.expect('}')?;
            if name == "b" {
                scale = scale.inv();
            }
            self.expect('(')?;
            let base = self.term()?;
            self.expect(',')?;
            let arg = self.term()?;
            self.expect(')')?;
            return Ok(Term::dil(scale, base, arg));
        }
        self.pos = save;
        if self.peek() == Some('(') {
            self.pos = start;
            return Err(self.error(format!("{name:?} is not an operator; use o{{scale}}(..) or b{{scale}}(..)")));
        }
        Ok(Term::Var(name))
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    parse_term_at(src, 0)
}

pub(crate) fn parse_term_at(src: &str, offset: usize) -> Result<Term, ParseError> {
    let mut c = Cursor::new(src, offset);
    let t = c.term()?;
    if !c.at_end() {
        return Err(c.error("unexpected trailing input"));
    }
    Ok(t)
}

pub fn parse_scale(src: &str) -> Result<ScaleExpr, ParseError> {
    let mut c = Cursor::new(src, 0);
    c.chars.push('\u{0}');
    let s = c.scale_until('\u{0}')?;
    Ok(s)
}
