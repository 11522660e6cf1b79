//! Sampled verification of the irq axioms, the gate identities and
//! self-distributivity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::gates::{approx_difference, approx_inverse, approx_sum, codil};
use crate::model::{Model, ModelError};
use crate::scale::Scale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawStatus {
    Pass,
    Fail,
    ExpectedFailure,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResult {
    pub law: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub status: LawStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl LawResult {
    pub fn measured(law: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        let status = if max_residual <= tolerance {
            LawStatus::Pass
        } else {
            LawStatus::Fail
        };
        LawResult {
            law: law.into(),
            max_residual,
            tolerance,
            status,
            witness: None,
        }
    }

    pub fn informational(law: impl Into<String>, value: f64) -> Self {
        LawResult {
            law: law.into(),
            max_residual: value,
            tolerance: 0.0,
            status: LawStatus::Informational,
            witness: None,
        }
    }

    /// A law decided by an external criterion rather than a tolerance.
    pub fn judged(law: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        LawResult {
            law: law.into(),
            max_residual: value,
            tolerance,
            status: if pass { LawStatus::Pass } else { LawStatus::Fail },
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == LawStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub test: String,
    pub model: String,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub laws: Vec<LawResult>,
    pub pass: bool,
}

impl LawReport {
    pub fn new(test: impl Into<String>, model: impl Into<String>, samples: usize, seed: Option<u64>, laws: Vec<LawResult>) -> Self {
        let mut r = LawReport {
            test: test.into(),
            model: model.into(),
            samples,
            seed,
            laws,
            pass: false,
        };
        r.refresh();
        r
    }

    fn refresh(&mut self) {
        self.pass = self.laws.iter().all(|l| l.status != LawStatus::Fail);
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.laws.iter().map(|l| l.max_residual).fold(0.0, f64::max)
    }

    /// Downgrades failures of the listed laws (matched as `test/law` or `law`)
    /// to expected failures.
    pub fn mark_expected_failures(&mut self, expected: &[String]) {
        for l in &mut self.laws {
            let qualified = format!("{}/{}", self.test, l.law);
            if l.status == LawStatus::Fail && expected.iter().any(|e| *e == l.law || *e == qualified) {
                l.status = LawStatus::ExpectedFailure;
            }
        }
        self.refresh();
    }

    pub fn failures(&self) -> Vec<&LawResult> {
        self.laws.iter().filter(|l| l.status == LawStatus::Fail).collect()
    }
}

/// Evaluates every sample (in parallel, collected by index) and keeps, per law,
/// the largest residual together with the inputs that produced it.
pub(crate) fn tabulate_laws<S, E, W>(
    names: &[&str],
    tolerance: f64,
    samples: &[S],
    eval: E,
    witness: W,
) -> Result<Vec<LawResult>, ModelError>
where
    S: Sync,
    E: Fn(&S) -> Result<Vec<f64>, ModelError> + Sync,
    W: Fn(&S) -> Value,
{
    let rows: Vec<Vec<f64>> = samples.par_iter().map(&eval).collect::<Result<_, _>>()?;
    Ok(names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in rows.iter().enumerate() {
                if best.is_none_or(|(_, b)| row[j] > b) {
                    best = Some((i, row[j]));
                }
            }
            let (idx, max) = best.unwrap_or((0, 0.0));
            let mut r = LawResult::measured(*name, max, tolerance);
            if max > 0.0 {
                r = r.with_witness(witness(&samples[idx]));
            }
            r
        })
        .collect())
}

struct AxiomSample<P> {
    x: P,
    y: P,
    eps: Scale,
    mu: Scale,
}

pub const IRQ_LAWS: [&str; 4] = ["R1", "R2", "unit", "fusion"];

/// Idempotence, right division, unit and fusion over seeded samples.
pub fn verify_irq_axioms<M: Model>(m: &M, n_samples: usize, seed: u64) -> Result<LawReport, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..n_samples.max(1))
        .map(|_| AxiomSample {
            x: m.sample_point(&mut rng),
            y: m.sample_point(&mut rng),
            eps: m.sample_scale(&mut rng),
            mu: m.sample_scale(&mut rng),
        })
        .collect();
    let laws = tabulate_laws(
        &IRQ_LAWS,
        m.law_tolerance(),
        &samples,
        |s| {
            let AxiomSample { x, y, eps, mu } = s;
            let r1 = m.discrepancy(&m.dil(x, eps, x)?, x);
            let r2a = m.discrepancy(&m.dil(x, eps, &codil(m, x, eps, y)?)?, y);
            let r2b = m.discrepancy(&codil(m, x, eps, &m.dil(x, eps, y)?)?, y);
            let unit = m.discrepancy(&m.dil(x, &Scale::one(), y)?, y);
            let fused = m.dil(x, &eps.try_mul(mu)?, y)?;
            let fusion = m.discrepancy(&m.dil(x, eps, &m.dil(x, mu, y)?)?, &fused);
            Ok(vec![r1, r2a.max(r2b), unit, fusion])
        },
        |s| {
            json!({
                "x": m.point_to_json(&s.x),
                "y": m.point_to_json(&s.y),
                "eps": s.eps.to_string(),
                "mu": s.mu.to_string(),
            })
        },
    )?;
    Ok(LawReport::new("irq-axioms", m.name(), n_samples.max(1), Some(seed), laws))
}

/// The seven identities satisfied by the gates at every fixed scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateIdentity {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl GateIdentity {
    pub const ALL: [GateIdentity; 7] = [
        GateIdentity::A,
        GateIdentity::B,
        GateIdentity::C,
        GateIdentity::D,
        GateIdentity::E,
        GateIdentity::F,
        GateIdentity::G,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GateIdentity::A => "a",
            GateIdentity::B => "b",
            GateIdentity::C => "c",
            GateIdentity::D => "d",
            GateIdentity::E => "e",
            GateIdentity::F => "f",
            GateIdentity::G => "g",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            GateIdentity::A => "difference is the inverse of sum",
            GateIdentity::B => "sum is the inverse of difference",
            GateIdentity::C => "difference is the sum of the inverse",
            GateIdentity::D => "inverse is an involution",
            GateIdentity::E => "associativity of the sum",
            GateIdentity::F => "inverse as a difference",
            GateIdentity::G => "neutral element at right",
        }
    }

    /// Both sides of the identity evaluated at `(x, ε, u, v, w)`.
    pub fn sides<M: Model>(
        self,
        m: &M,
        x: &M::Point,
        eps: &Scale,
        u: &M::Point,
        v: &M::Point,
        w: &M::Point,
    ) -> Result<(M::Point, M::Point), ModelError> {
        Ok(match self {
            GateIdentity::A => {
                let s = approx_sum(m, x, eps, u, v)?;
                (approx_difference(m, x, eps, u, &s)?, v.clone())
            }
            GateIdentity::B => {
                let d = approx_difference(m, x, eps, u, v)?;
                (approx_sum(m, x, eps, u, &d)?, v.clone())
            }
            GateIdentity::C => {
                let xu = m.dil(x, eps, u)?;
                let i = approx_inverse(m, x, eps, u)?;
                (approx_difference(m, x, eps, u, v)?, approx_sum(m, &xu, eps, &i, v)?)
            }
            GateIdentity::D => {
                let xu = m.dil(x, eps, u)?;
                let i = approx_inverse(m, x, eps, u)?;
                (approx_inverse(m, &xu, eps, &i)?, u.clone())
            }
            GateIdentity::E => {
                let xu = m.dil(x, eps, u)?;
                let inner = approx_sum(m, &xu, eps, v, w)?;
                let uv = approx_sum(m, x, eps, u, v)?;
                (approx_sum(m, x, eps, u, &inner)?, approx_sum(m, x, eps, &uv, w)?)
            }
            GateIdentity::F => (approx_inverse(m, x, eps, u)?, approx_difference(m, x, eps, u, x)?),
            GateIdentity::G => (approx_sum(m, x, eps, x, u)?, u.clone()),
        })
    }
}

struct GateSample<P> {
    x: P,
    u: P,
    v: P,
    w: P,
}

/// Residuals of the seven gate identities at the fixed scale `eps`.
pub fn verify_pplay<M: Model>(m: &M, eps: &Scale, n_samples: usize, seed: u64) -> Result<LawReport, ModelError> {
    m.check_scale(eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..n_samples.max(1))
        .map(|_| GateSample {
            x: m.sample_point(&mut rng),
            u: m.sample_point(&mut rng),
            v: m.sample_point(&mut rng),
            w: m.sample_point(&mut rng),
        })
        .collect();
    let names: Vec<String> = GateIdentity::ALL
        .iter()
        .map(|g| format!("({}) {}", g.label(), g.title()))
        .collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let laws = tabulate_laws(
        &name_refs,
        m.law_tolerance(),
        &samples,
        |s| {
            GateIdentity::ALL
                .iter()
                .map(|g| {
                    let (l, r) = g.sides(m, &s.x, eps, &s.u, &s.v, &s.w)?;
                    Ok(m.discrepancy(&l, &r))
                })
                .collect()
        },
        |s| {
            json!({
                "x": m.point_to_json(&s.x),
                "u": m.point_to_json(&s.u),
                "v": m.point_to_json(&s.v),
                "w": m.point_to_json(&s.w),
                "eps": eps.to_string(),
            })
        },
    )?;
    Ok(LawReport::new(format!("gate-identities eps={eps}"), m.name(), n_samples.max(1), Some(seed), laws))
}

pub const DISTRIBUTIVITY_LAW: &str = "self-distributivity";

/// Residual of `x∘_ε(y∘_λ z) = (x∘_ε y)∘_λ(x∘_ε z)`.
pub fn distributivity_residual<M: Model>(
    m: &M,
    eps: &Scale,
    lambda: &Scale,
    x: &M::Point,
    y: &M::Point,
    z: &M::Point,
) -> Result<f64, ModelError> {
    let lhs = m.dil(x, eps, &m.dil(y, lambda, z)?)?;
    let rhs = m.dil(&m.dil(x, eps, y)?, lambda, &m.dil(x, eps, z)?)?;
    Ok(m.discrepancy(&lhs, &rhs))
}

pub fn verify_distributivity<M: Model>(
    m: &M,
    eps: &Scale,
    lambda: &Scale,
    n_samples: usize,
    seed: u64,
) -> Result<LawReport, ModelError> {
    m.check_scale(eps)?;
    m.check_scale(lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..n_samples.max(1))
        .map(|_| {
            (
                m.sample_point(&mut rng),
                m.sample_point(&mut rng),
                m.sample_point(&mut rng),
            )
        })
        .collect();
    let laws = tabulate_laws(
        &[DISTRIBUTIVITY_LAW],
        m.law_tolerance(),
        &samples,
        |(x, y, z)| Ok(vec![distributivity_residual(m, eps, lambda, x, y, z)?]),
        |(x, y, z)| {
            json!({
                "x": m.point_to_json(x),
                "y": m.point_to_json(y),
                "z": m.point_to_json(z),
                "eps": eps.to_string(),
                "lambda": lambda.to_string(),
            })
        },
    )?;
    Ok(LawReport::new(
        format!("distributivity eps={eps} lambda={lambda}"),
        m.name(),
        n_samples.max(1),
        Some(seed),
        laws,
    ))
}
