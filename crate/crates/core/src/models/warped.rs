use rand::Rng;
use serde_json::Value;

use super::affine::combine;
use super::scalar::{check_float_scale, euclidean, max_abs_diff, vec_from_json, vec_to_json};
use crate::model::{Model, ModelError};
use crate::scale::{Scale, ScaleGroup};
use crate::Rational;

/// Half-width of the sampling box.
pub const WARPED_BOX: f64 = 2.0;

/// The chart `φ(y) = y + y³/10`, applied componentwise.
pub fn chart(y: f64) -> f64 {
    y + y * y * y / 10.0
}

/// Inverse of [`chart`]: the real root of `y³ + 10y − 10w = 0` by Cardano,
/// polished with two Newton steps.
pub fn chart_inv(w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    // y = A − p/(3A) with A³ = −q/2 + sign·√(q²/4 + p³/27); picking the sign
    // of w avoids cancellation.
    let p = 10.0;
    let half_q = -5.0 * w;
    let disc = (half_q * half_q + p * p * p / 27.0).sqrt();
    let a = (-half_q + disc.copysign(w)).cbrt();
    let mut y = a - p / (3.0 * a);
    for _ in 0..2 {
        y -= (chart(y) - w) / (1.0 + 0.3 * y * y);
    }
    y
}

/// The affine dilation conjugated by the global chart `φ`:
/// `x ∘_ε y = φ⁻¹(φ(x) + ε(φ(y) − φ(x)))`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedModel {
    dim: usize,
}

impl WarpedModel {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        WarpedModel { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_chart(&self, p: &[f64]) -> Vec<f64> {
        p.iter().map(|&y| chart(y)).collect()
    }

    pub fn from_chart(&self, p: &[f64]) -> Vec<f64> {
        p.iter().map(|&w| chart_inv(w)).collect()
    }
}

impl Model for WarpedModel {
    type Point = Vec<f64>;

    fn name(&self) -> String {
        format!("warped R^{}", self.dim)
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn scale_group(&self) -> ScaleGroup {
        ScaleGroup::PositiveRationals
    }

    fn dil(&self, x: &Vec<f64>, eps: &Scale, y: &Vec<f64>) -> Result<Vec<f64>, ModelError> {
        self.check_scale(eps)?;
        if eps.is_one() {
            return Ok(y.clone());
        }
        let e = check_float_scale(eps)?;
        let out: Vec<f64> = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| {
                let (fa, fb) = (chart(a), chart(b));
                chart_inv(fa + e * (fb - fa))
            })
            .collect();
        if out.iter().all(|c| c.is_finite()) {
            Ok(out)
        } else {
            Err(ModelError::OutOfDomain(format!("{out:?}")))
        }
    }

    fn origin(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim).map(|_| rng.gen_range(-WARPED_BOX..=WARPED_BOX)).collect()
    }

    fn discrepancy(&self, p: &Vec<f64>, q: &Vec<f64>) -> f64 {
        max_abs_diff(p, q)
    }

    fn distance(&self, p: &Vec<f64>, q: &Vec<f64>) -> Result<f64, ModelError> {
        Ok(euclidean(p, q))
    }

    fn affine_combination(&self, terms: &[(&Vec<f64>, Rational)]) -> Vec<f64> {
        combine(self.dim, terms)
    }

    fn point_to_json(&self, p: &Vec<f64>) -> Value {
        vec_to_json(p)
    }

    fn point_from_json(&self, v: &Value) -> Result<Vec<f64>, ModelError> {
        vec_from_json(v, self.dim)
    }
}
