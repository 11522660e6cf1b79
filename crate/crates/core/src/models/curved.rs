use rand::Rng;
use serde_json::Value;

use super::affine::combine;
use super::scalar::{check_float_scale, euclidean, max_abs_diff, vec_from_json, vec_to_json};
use crate::model::{Model, ModelError};
use crate::scale::{Scale, ScaleGroup};
use crate::Rational;

const KAPPA: f64 = 0.5;

/// `g(z) = z + κ(√(1+z²) − 1)`, a smooth increasing bijection of ℝ with
/// `g(0) = 0`, `g′(0) = 1`.
pub fn profile(z: f64) -> f64 {
    z + KAPPA * z * z / ((1.0 + z * z).sqrt() + 1.0)
}

/// Inverse of [`profile`], in a form free of cancellation near 0.
pub fn profile_inv(w: f64) -> f64 {
    let s = w + KAPPA;
    let root = (s * s + 1.0 - KAPPA * KAPPA).sqrt();
    if s >= 0.0 {
        w * (w + 2.0 * KAPPA) / (s + KAPPA * root)
    } else {
        (s - KAPPA * root) / (1.0 - KAPPA * KAPPA)
    }
}

/// Dilations read in a chart centred at the basepoint:
/// `x ∘_ε y = x + g⁻¹(ε·g(y − x))` componentwise.
///
/// Each `y ↦ x ∘_ε y` is a genuine one-parameter group of contractions
/// towards `x`, so every irq law holds, but because the chart moves with the
/// basepoint the operations are not self-distributive. Distributivity is
/// recovered only in the limit, at first order in `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvedModel {
    dim: usize,
}

impl CurvedModel {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        CurvedModel { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl Model for CurvedModel {
    type Point = Vec<f64>;

    fn name(&self) -> String {
        format!("curved R^{}", self.dim)
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
            .map(|(&a, &b)| a + profile_inv(e * profile(b - a)))
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
        (0..self.dim).map(|_| rng.gen_range(-2.0..=2.0)).collect()
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn profile_fixes_zero() {
        assert_eq!(profile(0.0), 0.0);
        assert_eq!(profile_inv(0.0), 0.0);
        // The branch switch of the inverse sits at w = -2κ.
        let w = -2.0 * KAPPA;
        assert!((profile(profile_inv(w)) - w).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn profile_round_trip(z in -50.0f64..50.0) {
            prop_assert!((profile_inv(profile(z)) - z).abs() <= 1e-12 * z.abs().max(1.0));
        }

        #[test]
        fn profile_inverse_small_relative(z in 1e-9f64..1e-3) {
            prop_assert!(((profile_inv(profile(z)) - z) / z).abs() <= 1e-12);
        }
    }
}
