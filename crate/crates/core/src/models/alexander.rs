use rand::Rng;
use serde_json::Value;

use super::laurent::LaurentPoly;
use crate::scale::rational_to_f64;
use crate::model::{DilationGroup, Model, ModelError};
use crate::scale::{Scale, ScaleGroup};
use crate::Rational;

/// The Alexander quandle over `ℚ[t, t⁻¹]` with scales `tⁿ`:
/// `x ∘_n y = x + tⁿ(y − x)`.
///
/// The metric is the ℓ¹ distance between coefficient vectors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlexanderModel;

impl AlexanderModel {
    pub fn new() -> Self {
        AlexanderModel
    }
}

fn exponent(eps: &Scale) -> i64 {
    match eps {
        Scale::Power(n) => *n,
        // Only the identity ratio passes `check_scale`.
        Scale::Ratio(_) => 0,
    }
}

impl Model for AlexanderModel {
    type Point = LaurentPoly;

    fn name(&self) -> String {
        "alexander Q[t,1/t]".to_string()
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn scale_group(&self) -> ScaleGroup {
        ScaleGroup::IntegerPowers
    }

    fn dil(&self, x: &LaurentPoly, eps: &Scale, y: &LaurentPoly) -> Result<LaurentPoly, ModelError> {
        self.check_scale(eps)?;
        Ok(x + &(y - x).shift(exponent(eps)))
    }

    fn origin(&self) -> LaurentPoly {
        LaurentPoly::zero()
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> LaurentPoly {
        let n = rng.gen_range(0..=4);
        LaurentPoly::from_terms((0..n).map(|_| {
            let e = rng.gen_range(-3..=3i64);
            let num = rng.gen_range(-9..=9i64);
            let den = rng.gen_range(1..=4i64);
            (e, Rational::new(num.into(), den.into()))
        }))
    }

    fn discrepancy(&self, p: &LaurentPoly, q: &LaurentPoly) -> f64 {
        let d = (p - q).l1_norm();
        if p == q {
            0.0
        } else {
            rational_to_f64(&d).max(f64::MIN_POSITIVE)
        }
    }

    fn distance(&self, p: &LaurentPoly, q: &LaurentPoly) -> Result<f64, ModelError> {
        Ok(self.discrepancy(p, q))
    }

    fn affine_combination(&self, terms: &[(&LaurentPoly, Rational)]) -> LaurentPoly {
        terms
            .iter()
            .fold(LaurentPoly::zero(), |acc, (p, c)| &acc + &p.scale(c))
    }

    fn point_to_json(&self, p: &LaurentPoly) -> Value {
        p.to_json()
    }

    fn point_from_json(&self, v: &Value) -> Result<LaurentPoly, ModelError> {
        LaurentPoly::from_json(v)
    }
}

impl DilationGroup for AlexanderModel {
    fn mul(&self, p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
        p + q
    }

    fn inv(&self, p: &LaurentPoly) -> LaurentPoly {
        -p
    }

    fn delta(&self, eps: &Scale, p: &LaurentPoly) -> Result<LaurentPoly, ModelError> {
        self.check_scale(eps)?;
        Ok(p.shift(exponent(eps)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn quandle_operations() {
        let m = AlexanderModel::new();
        let x = LaurentPoly::zero();
        let y = LaurentPoly::constant(q(1, 1));
        let xy = m.dil(&x, &Scale::Power(1), &y).unwrap();
        assert_eq!(xy, LaurentPoly::t());
        assert_eq!(xy.scale_eval(&q(1, 2)), q(1, 2));
        let back = m.dil(&x, &Scale::Power(-1), &xy).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn rejects_rational_scales() {
        let m = AlexanderModel::new();
        let z = LaurentPoly::zero();
        assert!(m.dil(&z, &Scale::from_ints(1, 2).unwrap(), &z).is_err());
        assert!(m.dil(&z, &Scale::one(), &z).is_ok());
    }
}
