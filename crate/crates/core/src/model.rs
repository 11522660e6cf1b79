//! The model contract: one dilation operation plus optional structure.

use std::fmt::Debug;

use rand::Rng;
use serde_json::Value;
use thiserror::Error;

use crate::scale::{Scale, ScaleError, ScaleGroup};
use crate::limits::NoiseFloor;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("model {model} does not accept scale {scale} (expects {expected})")]
    WrongScaleGroup {
        model: String,
        scale: String,
        expected: ScaleGroup,
    },
    #[error("scale {0} is outside the double-precision window [2^-60, 2^60]")]
    ScaleOutOfRange(String),
    #[error("point leaves the model domain: {0}")]
    OutOfDomain(String),
    #[error("model {0} has no metric")]
    NoMetric(String),
    #[error("malformed point: {0}")]
    BadPoint(String),
    #[error("{0}")]
    Function(String),
    #[error(transparent)]
    Scale(#[from] ScaleError),
}

/// A Γ-idempotent right quasigroup realized on a concrete carrier.
///
/// Only [`Model::dil`] carries the algebra; the remaining methods supply
/// sampling, comparison and serialization for the harnesses.
pub trait Model: Sync {
    type Point: Clone + PartialEq + Debug + Send + Sync;

    fn name(&self) -> String;

    /// True when points are compared exactly (residual 0 means equality).
    fn is_exact(&self) -> bool;

    fn scale_group(&self) -> ScaleGroup;

    /// `x ∘_ε y`.
    fn dil(&self, x: &Self::Point, eps: &Scale, y: &Self::Point) -> Result<Self::Point, ModelError>;

    /// A distinguished point: the group identity for group models.
    fn origin(&self) -> Self::Point;

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;

    fn sample_scale<R: Rng + ?Sized>(&self, rng: &mut R) -> Scale {
        match self.scale_group() {
            ScaleGroup::PositiveRationals => {
                let num = rng.gen_range(1..=9i64);
                let den = rng.gen_range(1..=9i64);
                Scale::from_ints(num, den).expect("positive")
            }
            ScaleGroup::IntegerPowers => Scale::Power(rng.gen_range(-3..=3)),
        }
    }

    /// Nonnegative, zero iff the points are equal. Exact models never
    /// report a nonzero difference as zero.
    fn discrepancy(&self, p: &Self::Point, q: &Self::Point) -> f64;

    fn distance(&self, _p: &Self::Point, _q: &Self::Point) -> Result<f64, ModelError> {
        Err(ModelError::NoMetric(self.name()))
    }

    fn has_metric(&self) -> bool {
        self.distance(&self.origin(), &self.origin()).is_ok()
    }

    /// `Σ cᵢ pᵢ` in coordinates, with weights summing to 1. Used for
    /// extrapolating sequences of points.
    fn affine_combination(&self, terms: &[(&Self::Point, Rational)]) -> Self::Point;

    /// Residuals at or below this level count as zero in float models.
    fn noise_floor(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            1e-11
        }
    }

    /// Noise floor for measurements along a schedule; in float models it
    /// rises at fine scales, where dilating back amplifies rounding.
    fn noise(&self) -> NoiseFloor {
        if self.is_exact() {
            NoiseFloor::ZERO
        } else {
            NoiseFloor { base: self.noise_floor(), roundoff_gain: 16.0 }
        }
    }

    /// Tolerance for algebraic laws: 0 for exact models.
    fn law_tolerance(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            1e-9
        }
    }

    fn point_to_json(&self, p: &Self::Point) -> Value;

    fn point_from_json(&self, v: &Value) -> Result<Self::Point, ModelError>;

    fn check_scale(&self, eps: &Scale) -> Result<(), ModelError> {
        if eps.belongs_to(self.scale_group()) {
            Ok(())
        } else {
            Err(ModelError::WrongScaleGroup {
                model: self.name(),
                scale: eps.to_string(),
                expected: self.scale_group(),
            })
        }
    }
}

/// Distance when available, otherwise the coordinate discrepancy.
pub fn gap<M: Model>(m: &M, p: &M::Point, q: &M::Point) -> f64 {
    m.distance(p, q).unwrap_or_else(|_| m.discrepancy(p, q))
}

/// A group with a one-parameter family of dilations `δ_ε`.
pub trait DilationGroup: Model {
    fn identity(&self) -> Self::Point {
        self.origin()
    }
    fn mul(&self, p: &Self::Point, q: &Self::Point) -> Self::Point;
    fn inv(&self, p: &Self::Point) -> Self::Point;
    fn delta(&self, eps: &Scale, p: &Self::Point) -> Result<Self::Point, ModelError>;
}

/// A group with dilations carrying a norm; the metric is `d(x,y) = ‖x⁻¹y‖`.
pub trait NormedGroup: DilationGroup {
    fn norm(&self, p: &Self::Point) -> f64;
}
