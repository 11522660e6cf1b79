use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use super::scalar::{vec_from_json, vec_to_json, Scalar};
use crate::scale::rational_to_f64;
use crate::model::{DilationGroup, Model, ModelError};
use crate::scale::{Scale, ScaleGroup};
use crate::Rational;

/// An upper unitriangular `n×n` rational matrix, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        UnipotentMatrix { n, entries }
    }

    /// Builds the matrix from its strictly upper entries in row-major order.
    pub fn from_upper(n: usize, upper: Vec<Rational>) -> Result<Self, ModelError> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(ModelError::BadPoint(format!(
                "expected {} strictly upper entries, got {}",
                n * (n - 1) / 2,
                upper.len()
            )));
        }
        let mut m = Self::identity(n);
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                m.entries[i * n + j] = it.next().expect("length checked");
            }
        }
        Ok(m)
    }

    pub fn upper(&self) -> Vec<Rational> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut s = Rational::zero();
                for k in i..=j {
                    s += self.get(i, k) * other.get(k, j);
                }
                out.entries[i * n + j] = s;
            }
        }
        out
    }

    /// Inverse by back substitution on `M·X = I`.
    pub fn inv(&self) -> Self {
        let n = self.n;
        let mut out = Self::identity(n);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut s = Rational::zero();
                for k in i + 1..=j {
                    s += self.get(i, k) * out.get(k, j);
                }
                out.entries[i * n + j] = -s;
            }
        }
        out
    }

    /// `αᵏ`: conjugation by `diag(1, 2, 4, …)ᵏ`, scaling entry `(i,j)` by `2^{-k(j−i)}`.
    pub fn alpha_pow(&self, k: i64) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in i + 1..n {
                let shift = k * (j - i) as i64;
                let p = BigInt::one() << shift.unsigned_abs();
                let f = if shift >= 0 {
                    Rational::new(BigInt::one(), p)
                } else {
                    Rational::from_integer(p)
                };
                out.entries[i * n + j] = self.get(i, j) * f;
            }
        }
        out
    }

    /// Homogeneous gauge `max |m_ij|^{1/(j−i)}`: `gauge(αᵏ m) = 2⁻ᵏ gauge(m)`.
    pub fn gauge(&self) -> f64 {
        let n = self.n;
        let mut g: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let v = rational_to_f64(&self.get(i, j).abs());
                g = g.max(v.powf(1.0 / (j - i) as f64));
            }
        }
        g
    }
}

/// Unitriangular matrices with the contraction `α`, scales `αⁿ`:
/// `x ∘_n y = x·αⁿ(x⁻¹y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractibleModel {
    n: usize,
}

impl ContractibleModel {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "matrix size must be at least 2");
        ContractibleModel { n }
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

fn exponent(eps: &Scale) -> i64 {
    match eps {
        Scale::Power(n) => *n,
        Scale::Ratio(_) => 0,
    }
}

impl Model for ContractibleModel {
    type Point = UnipotentMatrix;

    fn name(&self) -> String {
        format!("contractible UT({})", self.n)
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn scale_group(&self) -> ScaleGroup {
        ScaleGroup::IntegerPowers
    }

    fn dil(&self, x: &UnipotentMatrix, eps: &Scale, y: &UnipotentMatrix) -> Result<UnipotentMatrix, ModelError> {
        self.check_scale(eps)?;
        Ok(x.mul(&x.inv().mul(y).alpha_pow(exponent(eps))))
    }

    fn origin(&self) -> UnipotentMatrix {
        UnipotentMatrix::identity(self.n)
    }

    fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> UnipotentMatrix {
        let k = self.n * (self.n - 1) / 2;
        UnipotentMatrix::from_upper(self.n, (0..k).map(|_| Rational::sample(rng, 3)).collect())
            .expect("sized")
    }

    fn discrepancy(&self, p: &UnipotentMatrix, q: &UnipotentMatrix) -> f64 {
        p.upper()
            .iter()
            .zip(q.upper())
            .map(|(a, b)| a.abs_diff(&b))
            .fold(0.0, f64::max)
    }

    fn affine_combination(&self, terms: &[(&UnipotentMatrix, Rational)]) -> UnipotentMatrix {
        let k = self.n * (self.n - 1) / 2;
        let mut acc = vec![Rational::zero(); k];
        for (p, c) in terms {
            for (a, v) in acc.iter_mut().zip(p.upper()) {
                *a += c * v;
            }
        }
        UnipotentMatrix::from_upper(self.n, acc).expect("sized")
    }

    fn point_to_json(&self, p: &UnipotentMatrix) -> Value {
        vec_to_json(&p.upper())
    }

    fn point_from_json(&self, v: &Value) -> Result<UnipotentMatrix, ModelError> {
        UnipotentMatrix::from_upper(self.n, vec_from_json(v, self.n * (self.n - 1) / 2)?)
    }
}

impl DilationGroup for ContractibleModel {
    fn mul(&self, p: &UnipotentMatrix, q: &UnipotentMatrix) -> UnipotentMatrix {
        p.mul(q)
    }

    fn inv(&self, p: &UnipotentMatrix) -> UnipotentMatrix {
        p.inv()
    }

    fn delta(&self, eps: &Scale, p: &UnipotentMatrix) -> Result<UnipotentMatrix, ModelError> {
        self.check_scale(eps)?;
        Ok(p.alpha_pow(exponent(eps)))
    }
}
