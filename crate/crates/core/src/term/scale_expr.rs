use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use crate::scale::{Scale, ScaleError};
use crate::Rational;

/// A formal product `q · Π vᵢ^{kᵢ}` of a positive rational literal and
/// scale variables, kept in canonical form (no zero exponents).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScaleExpr {
    literal: Rational,
    vars: BTreeMap<String, i64>,
}

impl ScaleExpr {
    pub fn one() -> Self {
        ScaleExpr {
            literal: Rational::one(),
            vars: BTreeMap::new(),
        }
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::var_pow(name, 1)
    }

    pub fn var_pow(name: impl Into<String>, exp: i64) -> Self {
        let mut e = Self::one();
        if exp != 0 {
            e.vars.insert(name.into(), exp);
        }
        e
    }

    pub fn literal(r: Rational) -> Result<Self, ScaleError> {
        if !r.is_positive() {
            return Err(ScaleError::NonPositive(r.to_string()));
        }
        Ok(ScaleExpr {
            literal: r,
            vars: BTreeMap::new(),
        })
    }

    pub fn is_one(&self) -> bool {
        self.literal.is_one() && self.vars.is_empty()
    }

    pub fn literal_part(&self) -> &Rational {
        &self.literal
    }

    pub fn variables(&self) -> impl Iterator<Item = (&str, i64)> {
        self.vars.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn mul(&self, other: &ScaleExpr) -> ScaleExpr {
        let mut out = self.clone();
        out.literal *= &other.literal;
        for (k, v) in &other.vars {
            let e = out.vars.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                out.vars.remove(k);
            }
        }
        out
    }

    pub fn inv(&self) -> ScaleExpr {
        ScaleExpr {
            literal: self.literal.recip(),
            vars: self.vars.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> ScaleExpr {
        if k == 0 {
            return Self::one();
        }
        let lit = num_traits::pow(self.literal.clone(), k.unsigned_abs() as usize);
        ScaleExpr {
            literal: if k < 0 { lit.recip() } else { lit },
            vars: self.vars.iter().map(|(n, v)| (n.clone(), v * k)).collect(),
        }
    }

    /// Number of factors: the literal (when not 1) plus the summed absolute exponents.
    pub fn length(&self) -> u64 {
        u64::from(!self.literal.is_one()) + self.vars.values().map(|v| v.unsigned_abs()).sum::<u64>()
    }

    /// Substitutes scales for the variables.
    pub fn eval(&self, env: &BTreeMap<String, Scale>) -> Result<Scale, EvalScaleError> {
        let mut acc = Scale::ratio(self.literal.clone())?;
        for (k, v) in &self.vars {
            let s = env.get(k).ok_or_else(|| EvalScaleError::Unbound(k.clone()))?;
            acc = acc.try_mul(&s.pow(*v))?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalScaleError {
    #[error("unbound scale variable {0:?}")]
    Unbound(String),
    #[error(transparent)]
    Scale(#[from] ScaleError),
}

impl fmt::Display for ScaleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.literal.is_one() || self.vars.is_empty() {
            parts.push(self.literal.to_string());
        }
        for (k, v) in &self.vars {
            parts.push(if *v == 1 { k.clone() } else { format!("{k}^{v}") });
        }
        f.write_str(&parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_products() {
        let e = ScaleExpr::var("e");
        assert!(e.mul(&e.inv()).is_one());
        let a = ScaleExpr::literal(q(1, 2)).unwrap().mul(&ScaleExpr::literal(q(1, 3)).unwrap());
        assert_eq!(a, ScaleExpr::literal(q(1, 6)).unwrap());
        assert_eq!(e.mul(&ScaleExpr::var_pow("m", -1)).to_string(), "e*m^-1");
        assert_eq!(ScaleExpr::one().to_string(), "1");
        assert_eq!(a.mul(&e).to_string(), "1/6*e");
        assert_eq!(e.pow(-2).length(), 2);
    }

    #[test]
    fn evaluation() {
        let env = BTreeMap::from([("e".to_string(), Scale::from_ints(1, 2).unwrap())]);
        let x = ScaleExpr::literal(q(3, 1)).unwrap().mul(&ScaleExpr::var_pow("e", 2));
        assert_eq!(x.eval(&env).unwrap(), Scale::from_ints(3, 4).unwrap());
        assert!(ScaleExpr::var("m").eval(&env).is_err());
    }
}
