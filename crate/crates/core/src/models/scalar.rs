//! Coordinate fields shared by the vector-like models.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::model::ModelError;
use crate::scale::{parse_rational, rational_to_f64, Scale};
use crate::Rational;

/// Magnitude window accepted by double-precision models.
pub const FLOAT_SCALE_MIN: f64 = 1.0 / (1u64 << 60) as f64;
pub const FLOAT_SCALE_MAX: f64 = (1u64 << 60) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Double,
}

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Converts a positive rational scale into a coordinate factor.
    fn scale_factor(s: &Scale) -> Result<Self, ModelError>;
    fn half(&self) -> Self;
    /// Uniform sample from `[-bound, bound]`; exact samples have denominators up to 8.
    fn sample<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, ModelError>;

    fn abs_diff(&self, other: &Self) -> f64 {
        (self.clone() - other.clone()).to_f64().abs()
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn scale_factor(s: &Scale) -> Result<Self, ModelError> {
        Ok(s.abs_value())
    }

    fn half(&self) -> Self {
        self / BigInt::from(2)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        let den = rng.gen_range(1..=8i64);
        let num = rng.gen_range(-bound * den..=bound * den);
        Rational::new(num.into(), den.into())
    }

    fn to_json(&self) -> Value {
        rational_to_json(self)
    }

    fn from_json(v: &Value) -> Result<Self, ModelError> {
        rational_from_json(v)
    }

    fn abs_diff(&self, other: &Self) -> f64 {
        let d = (self - other).abs();
        if d.is_zero() {
            0.0
        } else {
            // A nonzero exact difference never reports as zero.
            rational_to_f64(&d).max(f64::MIN_POSITIVE)
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Double;

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn scale_factor(s: &Scale) -> Result<Self, ModelError> {
        check_float_scale(s)
    }

    fn half(&self) -> Self {
        self * 0.5
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        rng.gen_range(-(bound as f64)..=bound as f64)
    }

    fn to_json(&self) -> Value {
        Value::from(*self)
    }

    fn from_json(v: &Value) -> Result<Self, ModelError> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| ModelError::BadPoint(format!("not a finite number: {v}"))),
            Value::String(s) => parse_rational(s)
                .map(|r| rational_to_f64(&r))
                .ok_or_else(|| ModelError::BadPoint(format!("not a number: {s:?}"))),
            _ => Err(ModelError::BadPoint(format!("expected a number, got {v}"))),
        }
    }
}

/// Rejects scales whose magnitude leaves `[2⁻⁶⁰, 2⁶⁰]` and returns the factor.
pub fn check_float_scale(s: &Scale) -> Result<f64, ModelError> {
    let a = s.abs_f64();
    if (FLOAT_SCALE_MIN..=FLOAT_SCALE_MAX).contains(&a) {
        Ok(a)
    } else {
        Err(ModelError::ScaleOutOfRange(s.to_string()))
    }
}

/// Integers as JSON numbers, everything else as a `"p/q"` string.
pub fn rational_to_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(i) = r.numer().to_i64() {
            return Value::from(i);
        }
    }
    Value::String(r.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Rational, ModelError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                n.as_f64()
                    .and_then(Rational::from_float)
                    .ok_or_else(|| ModelError::BadPoint(format!("not a finite number: {v}")))
            }
        }
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| ModelError::BadPoint(format!("not a rational: {s:?}")))
        }
        _ => Err(ModelError::BadPoint(format!("expected a rational, got {v}"))),
    }
}

pub fn vec_to_json<F: Scalar>(v: &[F]) -> Value {
    Value::Array(v.iter().map(F::to_json).collect())
}

pub fn vec_from_json<F: Scalar>(v: &Value, dim: usize) -> Result<Vec<F>, ModelError> {
    let arr = v
        .as_array()
        .ok_or_else(|| ModelError::BadPoint(format!("expected an array, got {v}")))?;
    if arr.len() != dim {
        return Err(ModelError::BadPoint(format!(
            "expected {dim} coordinates, got {}",
            arr.len()
        )));
    }
    arr.iter().map(F::from_json).collect()
}

pub fn max_abs_diff<F: Scalar>(a: &[F], b: &[F]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.abs_diff(y))
        .fold(0.0, f64::max)
}

pub fn euclidean<F: Scalar>(a: &[F], b: &[F]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x.clone() - y.clone()).to_f64();
            d * d
        })
        .sum::<f64>()
        .sqrt()
}
