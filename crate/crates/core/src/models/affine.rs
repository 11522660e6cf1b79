use std::marker::PhantomData;

use rand::Rng;
use serde_json::Value;

use super::scalar::{euclidean, max_abs_diff, vec_from_json, vec_to_json, Mode, Scalar};
use crate::model::{DilationGroup, Model, ModelError, NormedGroup};
use crate::scale::{Scale, ScaleGroup};
use crate::Rational;

/// `x ∘_ε y = x + ε(y − x)` on an n-dimensional vector space.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineModel<F> {
    dim: usize,
    _field: PhantomData<F>,
}

impl<F: Scalar> AffineModel<F> {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        AffineModel {
            dim,
            _field: PhantomData,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, coords: &[i64]) -> Vec<F> {
        assert_eq!(coords.len(), self.dim);
        coords
            .iter()
            .map(|&c| F::from_rational(&Rational::from_integer(c.into())))
            .collect()
    }
}

impl<F: Scalar> Model for AffineModel<F> {
    type Point = Vec<F>;

    fn name(&self) -> String {
        let mode = match F::MODE {
            Mode::Exact => "Q",
            Mode::Double => "R",
        };
        format!("affine {mode}^{}", self.dim)
    }

    fn is_exact(&self) -> bool {
        F::MODE == Mode::Exact
    }

    fn scale_group(&self) -> ScaleGroup {
        ScaleGroup::PositiveRationals
    }

    fn dil(&self, x: &Vec<F>, eps: &Scale, y: &Vec<F>) -> Result<Vec<F>, ModelError> {
        self.check_scale(eps)?;
        if eps.is_one() {
            return Ok(y.clone());
        }
        let e = F::scale_factor(eps)?;
        Ok(x.iter()
            .zip(y)
            .map(|(a, b)| a.clone() + e.clone() * (b.clone() - a.clone()))
            .collect())
    }

    fn origin(&self) -> Vec<F> {
        vec![F::zero(); self.dim]
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<F> {
        (0..self.dim).map(|_| F::sample(rng, 4)).collect()
    }

    fn discrepancy(&self, p: &Vec<F>, q: &Vec<F>) -> f64 {
        max_abs_diff(p, q)
    }

    fn distance(&self, p: &Vec<F>, q: &Vec<F>) -> Result<f64, ModelError> {
        Ok(euclidean(p, q))
    }

    fn affine_combination(&self, terms: &[(&Vec<F>, Rational)]) -> Vec<F> {
        combine(self.dim, terms)
    }

    fn point_to_json(&self, p: &Vec<F>) -> Value {
        vec_to_json(p)
    }

    fn point_from_json(&self, v: &Value) -> Result<Vec<F>, ModelError> {
        vec_from_json(v, self.dim)
    }
}

pub(crate) fn combine<F: Scalar>(dim: usize, terms: &[(&Vec<F>, Rational)]) -> Vec<F> {
    let mut out = vec![F::zero(); dim];
    for (p, c) in terms {
        let c = F::from_rational(c);
        for (o, a) in out.iter_mut().zip(p.iter()) {
            *o = o.clone() + c.clone() * a.clone();
        }
    }
    out
}

impl<F: Scalar> DilationGroup for AffineModel<F> {
    fn mul(&self, p: &Vec<F>, q: &Vec<F>) -> Vec<F> {
        p.iter().zip(q).map(|(a, b)| a.clone() + b.clone()).collect()
    }

    fn inv(&self, p: &Vec<F>) -> Vec<F> {
        p.iter().map(|a| -a.clone()).collect()
    }

    fn delta(&self, eps: &Scale, p: &Vec<F>) -> Result<Vec<F>, ModelError> {
        self.check_scale(eps)?;
        let e = F::scale_factor(eps)?;
        Ok(p.iter().map(|a| e.clone() * a.clone()).collect())
    }
}

impl<F: Scalar> NormedGroup for AffineModel<F> {
    fn norm(&self, p: &Vec<F>) -> f64 {
        euclidean(p, &self.origin())
    }
}
