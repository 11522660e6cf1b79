//! Scale groups and decreasing schedules.
//!
//! Two realizations of the commutative scale group are supported: the exact
//! positive rationals under multiplication, and the integers written
//! multiplicatively as powers of a fixed contraction `α`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaleError {
    #[error("scale must be positive, got {0}")]
    NonPositive(String),
    #[error("cannot combine scales from different groups ({0} and {1})")]
    MixedGroups(String, String),
    #[error("invalid scale literal {0:?}")]
    Parse(String),
    #[error("schedule is empty")]
    EmptySchedule,
    #[error("schedule magnitudes must be strictly decreasing (position {0})")]
    NotDecreasing(usize),
}

/// Which scale group a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleGroup {
    PositiveRationals,
    IntegerPowers,
}

impl fmt::Display for ScaleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleGroup::PositiveRationals => f.write_str("positive-rationals"),
            ScaleGroup::IntegerPowers => f.write_str("integer-powers"),
        }
    }
}

/// An element of the scale group.
///
/// `Power(n)` stands for `αⁿ`, whose absolute value is `2⁻ⁿ`. The identity is
/// shared by both groups: `Ratio(1)` and `Power(0)` compare equal and combine
/// with either tag.
#[derive(Debug, Clone)]
pub enum Scale {
    Ratio(Rational),
    Power(i64),
}

impl Scale {
    pub fn ratio(r: Rational) -> Result<Self, ScaleError> {
        if r.is_positive() {
            Ok(Scale::Ratio(r))
        } else {
            Err(ScaleError::NonPositive(r.to_string()))
        }
    }

    pub fn from_ints(num: i64, den: i64) -> Result<Self, ScaleError> {
        if den == 0 {
            return Err(ScaleError::Parse(format!("{num}/0")));
        }
        Self::ratio(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn power(n: i64) -> Self {
        Scale::Power(n)
    }

    /// `2⁻ᵏ` as an exact rational scale.
    pub fn dyadic(k: u32) -> Self {
        Scale::Ratio(Rational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn one() -> Self {
        Scale::Ratio(Rational::one())
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scale::Ratio(r) => r.is_one(),
            Scale::Power(n) => *n == 0,
        }
    }

    /// The group tag, or `None` for the shared identity.
    pub fn group(&self) -> Option<ScaleGroup> {
        if self.is_one() {
            return None;
        }
        Some(match self {
            Scale::Ratio(_) => ScaleGroup::PositiveRationals,
            Scale::Power(_) => ScaleGroup::IntegerPowers,
        })
    }

    pub fn belongs_to(&self, g: ScaleGroup) -> bool {
        self.group().is_none_or(|h| h == g)
    }

    pub fn inv(&self) -> Self {
        match self {
            Scale::Ratio(r) => Scale::Ratio(r.recip()),
            Scale::Power(n) => Scale::Power(-n),
        }
    }

    pub fn try_mul(&self, other: &Scale) -> Result<Scale, ScaleError> {
        if self.is_one() {
            return Ok(other.clone());
        }
        if other.is_one() {
            return Ok(self.clone());
        }
        match (self, other) {
            (Scale::Ratio(a), Scale::Ratio(b)) => Ok(Scale::Ratio(a * b)),
            (Scale::Power(a), Scale::Power(b)) => Ok(Scale::Power(a + b)),
            _ => Err(ScaleError::MixedGroups(self.to_string(), other.to_string())),
        }
    }

    pub fn pow(&self, e: i64) -> Scale {
        match self {
            Scale::Ratio(r) => {
                let p = num_traits::pow(r.clone(), e.unsigned_abs() as usize);
                Scale::Ratio(if e < 0 { p.recip() } else { p })
            }
            Scale::Power(n) => Scale::Power(n * e),
        }
    }

    /// The absolute-value morphism into `(0, ∞)`, exactly.
    pub fn abs_value(&self) -> Rational {
        match self {
            Scale::Ratio(r) => r.clone(),
            Scale::Power(n) => {
                let p = BigInt::one() << n.unsigned_abs();
                if *n >= 0 {
                    Rational::new(BigInt::one(), p)
                } else {
                    Rational::from_integer(p)
                }
            }
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Scale::Ratio(r) => rational_to_f64(r),
            Scale::Power(n) => 2f64.powi(-(*n as i32)),
        }
    }
}

impl PartialEq for Scale {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scale::Ratio(a), Scale::Ratio(b)) => a == b,
            (Scale::Power(a), Scale::Power(b)) => a == b,
            _ => self.is_one() && other.is_one(),
        }
    }
}

impl Eq for Scale {}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Ratio(r) => write!(f, "{r}"),
            Scale::Power(0) => f.write_str("1"),
            Scale::Power(1) => f.write_str("t"),
            Scale::Power(n) => write!(f, "t^{n}"),
        }
    }
}

impl FromStr for Scale {
    type Err = ScaleError;

    /// Accepts `p/q`, `p`, decimal literals such as `0.25`, and `t`, `t^n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('t') {
            if rest.is_empty() {
                return Ok(Scale::Power(1));
            }
            let e = rest
                .strip_prefix('^')
                .and_then(|e| e.trim_matches(|c| c == '(' || c == ')').parse::<i64>().ok())
                .ok_or_else(|| ScaleError::Parse(s.to_string()))?;
            return Ok(Scale::Power(e));
        }
        Scale::ratio(parse_rational(s).ok_or_else(|| ScaleError::Parse(s.to_string()))?)
    }
}

impl Serialize for Scale {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scale {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `p/q`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac)
            .parse()
            .ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(digits, den);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of separately converted parts for huge values.
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// A finite sequence of scales with strictly decreasing magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule {
    scales: Vec<Scale>,
    description: String,
}

impl Schedule {
    pub fn new(scales: Vec<Scale>, description: impl Into<String>) -> Result<Self, ScaleError> {
        if scales.is_empty() {
            return Err(ScaleError::EmptySchedule);
        }
        for (i, w) in scales.windows(2).enumerate() {
            if w[1].abs_value() >= w[0].abs_value() {
                return Err(ScaleError::NotDecreasing(i + 1));
            }
        }
        Ok(Schedule {
            scales,
            description: description.into(),
        })
    }

    /// `ε = 2⁻ᵏ` for `k` in `k_min..=k_max`.
    pub fn dyadic(k_min: u32, k_max: u32) -> Self {
        let scales = (k_min..=k_max).map(Scale::dyadic).collect();
        Schedule::new(scales, format!("2^-k, k={k_min}..{k_max}")).expect("dyadic schedule")
    }

    /// `αⁿ` for `n` in `n_min..=n_max`.
    pub fn powers(n_min: i64, n_max: i64) -> Self {
        let scales = (n_min..=n_max).map(Scale::Power).collect();
        Schedule::new(scales, format!("t^n, n={n_min}..{n_max}")).expect("power schedule")
    }

    pub fn scales(&self) -> &[Scale] {
        &self.scales
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn finest(&self) -> &Scale {
        self.scales.last().expect("non-empty schedule")
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.scales.iter().map(Scale::abs_f64).collect()
    }

    pub fn reaches_below(&self, threshold: f64) -> bool {
        self.finest().abs_f64() < threshold
    }
}
