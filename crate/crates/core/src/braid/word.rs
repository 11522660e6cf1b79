use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limits::LimitError;
use crate::model::ModelError;
use crate::scale::Scale;
use crate::term::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraidError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("crossing s{position} needs strands {position} and {next} but the braid has {strands}", next = .position + 1)]
    Position { position: usize, strands: usize },
    #[error("braid needs at least 2 strands, got {0}")]
    TooFewStrands(usize),
    #[error("coloring has {got} colors for {expected} strands")]
    LengthMismatch { expected: usize, got: usize },
    #[error("braids have {left} and {right} strands")]
    StrandMismatch { left: usize, right: usize },
    #[error("{rule} at index {index} expects {expected}")]
    Move { rule: &'static str, index: usize, expected: String },
    #[error("{0}")]
    NotAnR3Pair(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Limit(#[from] LimitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// A crossing of strands `position` and `position + 1` (1-based) decorated
/// with a scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub position: usize,
    pub sign: Sign,
    pub scale: Scale,
}

impl Crossing {
    pub fn new(position: usize, sign: Sign, scale: Scale) -> Self {
        Crossing { position, sign, scale }
    }

    pub fn positive(position: usize, scale: Scale) -> Self {
        Crossing::new(position, Sign::Positive, scale)
    }

    pub fn negative(position: usize, scale: Scale) -> Self {
        Crossing::new(position, Sign::Negative, scale)
    }

    /// The crossing undoing this one.
    pub fn inverse(&self) -> Crossing {
        Crossing::new(self.position, self.sign.flip(), self.scale.clone())
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}{}{{{}}}", self.position, self.sign.symbol(), self.scale)
    }
}

/// A braid word on a fixed number of strands, read left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    crossings: Vec<Crossing>,
}

impl BraidWord {
    pub fn new(strands: usize, crossings: Vec<Crossing>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::TooFewStrands(strands));
        }
        if let Some(c) = crossings.iter().find(|c| c.position == 0 || c.position >= strands) {
            return Err(BraidError::Position { position: c.position, strands });
        }
        Ok(BraidWord { strands, crossings })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The mirror word: reversed, with every sign flipped.
    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            crossings: self.crossings.iter().rev().map(Crossing::inverse).collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().cloned());
        Ok(BraidWord { strands: self.strands, crossings })
    }

    pub(crate) fn with_crossings(&self, crossings: Vec<Crossing>) -> BraidWord {
        BraidWord { strands: self.strands, crossings }
    }

    /// Parses `[braid n=<strands>:] s<i><+|->{<scale>} ...`. Without the
    /// header the strand count is one more than the largest position.
    pub fn parse(src: &str) -> Result<BraidWord, BraidError> {
        let (declared, crossings) = parse_word(src)?;
        let strands = match declared {
            Some(n) => n,
            None => crossings.iter().map(|c| c.position + 1).max().unwrap_or(2),
        };
        BraidWord::new(strands, crossings)
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;
    fn from_str(s: &str) -> Result<Self, BraidError> {
        BraidWord::parse(s)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "braid n={}:", self.strands)?;
        for c in &self.crossings {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BraidWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn err(column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line: None, column, message: message.into() }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0 }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.col(), format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| err(start + 1, "expected a number"))
    }

    fn keyword(&mut self, word: &str) -> bool {
        let n = word.chars().count();
        let matches = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().copied().eq(word.chars());
        if matches {
            self.pos += n;
        }
        matches
    }
}

fn parse_word(src: &str) -> Result<(Option<usize>, Vec<Crossing>), ParseError> {
    let mut lx = Lexer::new(src);
    lx.skip_ws();
    let mut declared = None;
    if lx.keyword("braid") {
        lx.skip_ws();
        lx.expect('n')?;
        lx.skip_ws();
        lx.expect('=')?;
        lx.skip_ws();
        declared = Some(lx.number()?);
        lx.skip_ws();
        lx.expect(':')?;
    }
    let mut crossings = Vec::new();
    loop {
        lx.skip_ws();
        if lx.peek().is_none() {
            break;
        }
        let start = lx.col();
        if !lx.eat('s') {
            return Err(err(start, "expected a crossing such as s1+{1/2}"));
        }
        let position = lx.number()?;
        let sign = match lx.peek() {
            Some('+') => Sign::Positive,
            Some('-') => Sign::Negative,
            _ => return Err(err(lx.col(), "expected '+' or '-' after the crossing position")),
        };
        lx.pos += 1;
        lx.expect('{')?;
        let scale_col = lx.col();
        let body_start = lx.pos;
        while lx.peek().is_some_and(|c| c != '}') {
            lx.pos += 1;
        }
        let body: String = lx.chars[body_start..lx.pos].iter().collect();
        lx.expect('}')?;
        let scale = body
            .parse::<Scale>()
            .map_err(|e| err(scale_col, format!("bad scale '{}': {e}", body.trim())))?;
        if position == 0 {
            return Err(err(start, "crossing positions start at 1"));
        }
        crossings.push(Crossing { position, sign, scale });
    }
    Ok((declared, crossings))
}
