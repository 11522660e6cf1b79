use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use super::scalar::{rational_from_json, rational_to_json};
use crate::model::ModelError;
use crate::Rational;

/// A Laurent polynomial over ℚ in the formal variable `t`, stored as a map
/// from exponent to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplication by `tⁿ`.
    pub fn shift(&self, n: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + n, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Substitutes a nonzero rational for `t`.
    pub fn scale_eval(&self, t: &Rational) -> Rational {
        assert!(!t.is_zero(), "cannot evaluate a Laurent polynomial at 0");
        self.terms
            .iter()
            .map(|(e, c)| c * num_traits::pow::pow(if *e < 0 { t.recip() } else { t.clone() }, e.unsigned_abs() as usize))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.terms {
            m.insert(e.to_string(), rational_to_json(c));
        }
        Value::Object(m)
    }

    /// Accepts `{"exp": coef, ...}` or a bare rational for a constant.
    pub fn from_json(v: &Value) -> Result<Self, ModelError> {
        match v {
            Value::Object(m) => {
                let mut p = LaurentPoly::zero();
                for (k, c) in m {
                    let e: i64 = k
                        .trim()
                        .parse()
                        .map_err(|_| ModelError::BadPoint(format!("bad exponent {k:?}")))?;
                    p.add_term(e, rational_from_json(c)?);
                }
                Ok(p)
            }
            _ => Ok(LaurentPoly::constant(rational_from_json(v)?)),
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let var = match *e {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            match (mag.is_one(), var.is_empty()) {
                (true, true) => f.write_str("1")?,
                (true, false) => f.write_str(&var)?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}
