use std::fmt;
use std::marker::PhantomData;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::scalar::{vec_from_json, vec_to_json, Mode, Scalar};
use crate::model::{DilationGroup, Model, ModelError, NormedGroup};
use crate::scale::{Scale, ScaleGroup};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// `δ_ε(a,b,c) = (εa, εb, ε²c)`, a group morphism.
    Graded,
    /// `δ_ε(a,b,c) = (εa, εb, εc)`.
    Isotropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// `((a²+b²)² + 16c²)^{1/4}`.
    Koranyi,
    /// `√(a²+b²+c²)`.
    Euclidean,
}

/// A point `(a, b, c)` of the Heisenberg group.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisPoint<F> {
    pub a: F,
    pub b: F,
    pub c: F,
}

impl<F: Scalar> HeisPoint<F> {
    pub fn new(a: F, b: F, c: F) -> Self {
        HeisPoint { a, b, c }
    }

    pub fn identity() -> Self {
        HeisPoint::new(F::zero(), F::zero(), F::zero())
    }

    fn coords(&self) -> [&F; 3] {
        [&self.a, &self.b, &self.c]
    }
}

impl HeisPoint<Rational> {
    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        let q = |v: i64| Rational::from_integer(v.into());
        HeisPoint::new(q(a), q(b), q(c))
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for HeisPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// `(a,b,c)(a′,b′,c′) = (a+a′, b+b′, c+c′+(ab′−ba′)/2)`.
pub fn heis_mul<F: Scalar>(p: &HeisPoint<F>, q: &HeisPoint<F>) -> HeisPoint<F> {
    let omega = (p.a.clone() * q.b.clone() - p.b.clone() * q.a.clone()).half();
    HeisPoint::new(
        p.a.clone() + q.a.clone(),
        p.b.clone() + q.b.clone(),
        p.c.clone() + q.c.clone() + omega,
    )
}

pub fn heis_inv<F: Scalar>(p: &HeisPoint<F>) -> HeisPoint<F> {
    HeisPoint::new(-p.a.clone(), -p.b.clone(), -p.c.clone())
}

pub fn heis_delta<F: Scalar>(grading: Grading, eps: &Scale, p: &HeisPoint<F>) -> Result<HeisPoint<F>, ModelError> {
    let e = F::scale_factor(eps)?;
    let ec = match grading {
        Grading::Graded => e.clone() * e.clone(),
        Grading::Isotropic => e.clone(),
    };
    Ok(HeisPoint::new(e.clone() * p.a.clone(), e * p.b.clone(), ec * p.c.clone()))
}

pub fn koranyi_norm<F: Scalar>(p: &HeisPoint<F>) -> f64 {
    let (a, b, c) = (p.a.to_f64(), p.b.to_f64(), p.c.to_f64());
    let h = a * a + b * b;
    (h * h + 16.0 * c * c).sqrt().sqrt()
}

pub fn euclidean_norm<F: Scalar>(p: &HeisPoint<F>) -> f64 {
    let (a, b, c) = (p.a.to_f64(), p.b.to_f64(), p.c.to_f64());
    (a * a + b * b + c * c).sqrt()
}

/// The Heisenberg group with left-invariant dilations
/// `x ∘_ε u = x·δ_ε(x⁻¹u)` and metric `d(x,y) = ‖x⁻¹y‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergModel<F> {
    grading: Grading,
    norm: NormKind,
    _field: PhantomData<F>,
}

impl<F: Scalar> HeisenbergModel<F> {
    pub fn new(grading: Grading, norm: NormKind) -> Self {
        HeisenbergModel {
            grading,
            norm,
            _field: PhantomData,
        }
    }

    pub fn graded() -> Self {
        Self::new(Grading::Graded, NormKind::Koranyi)
    }

    pub fn isotropic() -> Self {
        Self::new(Grading::Isotropic, NormKind::Koranyi)
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }
}

impl<F: Scalar> Model for HeisenbergModel<F> {
    type Point = HeisPoint<F>;

    fn name(&self) -> String {
        let g = match self.grading {
            Grading::Graded => "graded",
            Grading::Isotropic => "isotropic",
        };
        let mode = match F::MODE {
            Mode::Exact => "exact",
            Mode::Double => "double",
        };
        format!("heisenberg {g} {mode}")
    }

    fn is_exact(&self) -> bool {
        F::MODE == Mode::Exact
    }

    fn scale_group(&self) -> ScaleGroup {
        ScaleGroup::PositiveRationals
    }

    fn dil(&self, x: &HeisPoint<F>, eps: &Scale, u: &HeisPoint<F>) -> Result<HeisPoint<F>, ModelError> {
        self.check_scale(eps)?;
        if eps.is_one() {
            return Ok(u.clone());
        }
        let rel = heis_mul(&heis_inv(x), u);
        Ok(heis_mul(x, &heis_delta(self.grading, eps, &rel)?))
    }

    fn origin(&self) -> HeisPoint<F> {
        HeisPoint::identity()
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> HeisPoint<F> {
        HeisPoint::new(F::sample(rng, 2), F::sample(rng, 2), F::sample(rng, 2))
    }

    fn discrepancy(&self, p: &HeisPoint<F>, q: &HeisPoint<F>) -> f64 {
        p.coords()
            .iter()
            .zip(q.coords())
            .map(|(x, y)| x.abs_diff(y))
            .fold(0.0, f64::max)
    }

    fn distance(&self, p: &HeisPoint<F>, q: &HeisPoint<F>) -> Result<f64, ModelError> {
        Ok(self.norm(&heis_mul(&heis_inv(p), q)))
    }

    fn affine_combination(&self, terms: &[(&HeisPoint<F>, Rational)]) -> HeisPoint<F> {
        let mut out = HeisPoint::identity();
        for (p, c) in terms {
            let c = F::from_rational(c);
            out.a = out.a + c.clone() * p.a.clone();
            out.b = out.b + c.clone() * p.b.clone();
            out.c = out.c + c * p.c.clone();
        }
        out
    }

    fn point_to_json(&self, p: &HeisPoint<F>) -> Value {
        vec_to_json(&[p.a.clone(), p.b.clone(), p.c.clone()])
    }

    fn point_from_json(&self, v: &Value) -> Result<HeisPoint<F>, ModelError> {
        let mut c = vec_from_json::<F>(v, 3)?.into_iter();
        let (a, b, cc) = (c.next().unwrap(), c.next().unwrap(), c.next().unwrap());
        Ok(HeisPoint::new(a, b, cc))
    }
}

impl<F: Scalar> DilationGroup for HeisenbergModel<F> {
    fn mul(&self, p: &HeisPoint<F>, q: &HeisPoint<F>) -> HeisPoint<F> {
        heis_mul(p, q)
    }

    fn inv(&self, p: &HeisPoint<F>) -> HeisPoint<F> {
        heis_inv(p)
    }

    fn delta(&self, eps: &Scale, p: &HeisPoint<F>) -> Result<HeisPoint<F>, ModelError> {
        self.check_scale(eps)?;
        heis_delta(self.grading, eps, p)
    }
}

impl<F: Scalar> NormedGroup for HeisenbergModel<F> {
    fn norm(&self, p: &HeisPoint<F>) -> f64 {
        match self.norm {
            NormKind::Koranyi => koranyi_norm(p),
            NormKind::Euclidean => euclidean_norm(p),
        }
    }
}
