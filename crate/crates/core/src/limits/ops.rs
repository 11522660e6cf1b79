//! The emergent sum, difference and inverse at a basepoint, and the checks
//! that they form a conical group.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::report::{ConvergenceReport, ANY_ORDER};
use super::sequence::{estimate_limit, extrapolate_from, sweep, LimitError, MIN_SCHEDULE};
use crate::irq::{approx_difference, approx_inverse, approx_sum, relative_dilation, LawReport, LawResult};
use crate::model::{gap, Model, ModelError};
use crate::scale::{Scale, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmergentOp {
    Sum,
    Difference,
    Inverse,
}

impl EmergentOp {
    pub const ALL: [EmergentOp; 3] = [EmergentOp::Sum, EmergentOp::Difference, EmergentOp::Inverse];
}

/// Limits as `ε → 0` of the approximate gates at a fixed basepoint.
///
/// A limit value is the extrapolation to zero through the three finest
/// scales of the schedule; for sequences polynomial of degree at most two
/// in `|ε|` it is exact.
pub struct EmergentOps<'a, M: Model> {
    m: &'a M,
    x: M::Point,
    schedule: Schedule,
}

impl<'a, M: Model> EmergentOps<'a, M> {
    pub fn new(m: &'a M, x: M::Point, schedule: Schedule) -> Result<Self, LimitError> {
        if schedule.len() < MIN_SCHEDULE {
            return Err(LimitError::TooFewScales { needed: MIN_SCHEDULE, got: schedule.len() });
        }
        Ok(EmergentOps { m, x, schedule })
    }

    pub fn model(&self) -> &M {
        self.m
    }

    pub fn basepoint(&self) -> &M::Point {
        &self.x
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    fn approx(&self, op: EmergentOp, eps: &Scale, u: &M::Point, v: &M::Point) -> Result<M::Point, ModelError> {
        match op {
            EmergentOp::Sum => approx_sum(self.m, &self.x, eps, u, v),
            EmergentOp::Difference => approx_difference(self.m, &self.x, eps, u, v),
            EmergentOp::Inverse => approx_inverse(self.m, &self.x, eps, u),
        }
    }

    /// Limit of `f(ε)` from the three finest scales.
    pub fn limit_of<F>(&self, f: F) -> Result<M::Point, ModelError>
    where
        F: Fn(&Scale) -> Result<M::Point, ModelError>,
    {
        let n = self.schedule.len();
        let scales = &self.schedule.scales()[n - 3..];
        let tail: Vec<M::Point> = scales.iter().map(f).collect::<Result<_, _>>()?;
        Ok(extrapolate_from(self.m, scales, &tail))
    }

    pub fn limit(&self, op: EmergentOp, u: &M::Point, v: &M::Point) -> Result<M::Point, ModelError> {
        self.limit_of(|e| self.approx(op, e, u, v))
    }

    pub fn sum(&self, u: &M::Point, v: &M::Point) -> Result<M::Point, ModelError> {
        self.limit(EmergentOp::Sum, u, v)
    }

    pub fn difference(&self, u: &M::Point, v: &M::Point) -> Result<M::Point, ModelError> {
        self.limit(EmergentOp::Difference, u, v)
    }

    pub fn inverse(&self, u: &M::Point) -> Result<M::Point, ModelError> {
        self.limit(EmergentOp::Inverse, u, u)
    }

    /// `δ^x_λ u`.
    pub fn dilate(&self, lambda: &Scale, u: &M::Point) -> Result<M::Point, ModelError> {
        self.m.dil(&self.x, lambda, u)
    }

    /// The whole sequence for one operation and its convergence report.
    pub fn sequence(&self, op: EmergentOp, u: &M::Point, v: &M::Point) -> Result<(M::Point, ConvergenceReport), LimitError> {
        let values = sweep(&self.schedule, |e| self.approx(op, e, u, v))?;
        let est = estimate_limit(self.m, &self.schedule, values)?;
        let name = match op {
            EmergentOp::Inverse => format!("{op:?} u={}", self.m.point_to_json(u)),
            _ => format!("{op:?} u={} v={}", self.m.point_to_json(u), self.m.point_to_json(v)),
        }
        .to_lowercase();
        let report = est.to_report(name, self.m, &self.schedule);
        Ok((est.extrapolated, report))
    }

    /// Sup over samples of `d(x ∘_ε u, x)` along the schedule.
    pub fn contraction(&self, samples: &[M::Point]) -> Result<ConvergenceReport, LimitError> {
        let defects = sweep(&self.schedule, |e| {
            samples.iter().try_fold(0.0f64, |acc, u| Ok(acc.max(gap(self.m, &self.m.dil(&self.x, e, u)?, &self.x))))
        })?;
        Ok(ConvergenceReport::from_defects_at("contraction", self.m.name(), &self.schedule, &defects, self.m.noise(), ANY_ORDER))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpEntry {
    pub op: EmergentOp,
    pub u: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Value>,
    pub limit: Value,
    pub report: ConvergenceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpsTable {
    pub model: String,
    pub basepoint: Value,
    pub schedule: String,
    pub entries: Vec<OpEntry>,
    pub contraction: ConvergenceReport,
    pub pass: bool,
}

impl OpsTable {
    pub fn reports(&self) -> impl Iterator<Item = &ConvergenceReport> {
        self.entries.iter().map(|e| &e.report)
    }
}

/// Tabulates sum, difference and inverse for every sample pair.
pub fn emergent_ops<M: Model>(ops: &EmergentOps<'_, M>, pairs: &[(M::Point, M::Point)]) -> Result<OpsTable, LimitError> {
    let m = ops.model();
    let jobs: Vec<(EmergentOp, &M::Point, &M::Point)> = pairs
        .iter()
        .flat_map(|(u, v)| EmergentOp::ALL.into_iter().map(move |op| (op, u, v)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|(op, u, v)| {
            let (limit, report) = ops.sequence(*op, u, v)?;
            Ok(OpEntry {
                op: *op,
                u: m.point_to_json(u),
                v: (*op != EmergentOp::Inverse).then(|| m.point_to_json(v)),
                limit: m.point_to_json(&limit),
                report,
            })
        })
        .collect::<Result<Vec<_>, LimitError>>()?;
    let samples: Vec<M::Point> = pairs.iter().flat_map(|(u, v)| [u.clone(), v.clone()]).collect();
    let contraction = ops.contraction(&samples)?;
    let pass = contraction.pass && entries.iter().all(|e| e.report.pass);
    Ok(OpsTable {
        model: m.name(),
        basepoint: m.point_to_json(ops.basepoint()),
        schedule: ops.schedule().description().to_string(),
        entries,
        contraction,
        pass,
    })
}

/// Names of the conical-group laws checked on the emergent operations.
pub const CONICAL_LAWS: [&str; 8] = [
    "associativity",
    "left neutral",
    "right neutral",
    "left inverse",
    "right inverse",
    "difference inverts sum",
    "sum inverts difference",
    "dilations are automorphisms",
];

/// Residuals of the group laws for the limit operations at the basepoint.
pub fn verify_conical_group<M: Model>(
    ops: &EmergentOps<'_, M>,
    triples: &[(M::Point, M::Point, M::Point)],
    lambdas: &[Scale],
    tolerance: f64,
) -> Result<LawReport, LimitError> {
    let m = ops.model();
    let x = ops.basepoint();
    let rows = triples
        .par_iter()
        .map(|(u, v, w)| -> Result<[(f64, Value); 8], ModelError> {
            let wit = json!({"u": m.point_to_json(u), "v": m.point_to_json(v), "w": m.point_to_json(w)});
            let uv = ops.sum(u, v)?;
            let assoc = gap(m, &ops.sum(u, &ops.sum(v, w)?)?, &ops.sum(&uv, w)?);
            let left = gap(m, &ops.sum(x, u)?, u);
            let right = gap(m, &ops.sum(u, x)?, u);
            let iu = ops.inverse(u)?;
            let linv = gap(m, &ops.sum(&iu, u)?, x);
            let rinv = gap(m, &ops.sum(u, &iu)?, x);
            let a = gap(m, &ops.difference(u, &uv)?, v);
            let b = gap(m, &ops.sum(u, &ops.difference(u, v)?)?, v);
            let mut hom = 0.0f64;
            for l in lambdas {
                let lhs = ops.dilate(l, &uv)?;
                let rhs = ops.sum(&ops.dilate(l, u)?, &ops.dilate(l, v)?)?;
                hom = hom.max(gap(m, &lhs, &rhs));
            }
            Ok([assoc, left, right, linv, rinv, a, b, hom].map(|r| (r, wit.clone())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let laws = CONICAL_LAWS
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let worst = rows.iter().map(|r| &r[i]).fold(None::<&(f64, Value)>, |best, c| match best {
                Some(b) if b.0 >= c.0 => Some(b),
                _ => Some(c),
            });
            let (res, wit) = worst.cloned().unwrap_or((0.0, Value::Null));
            let law = LawResult::measured(*name, res, tolerance);
            if res > 0.0 {
                law.with_witness(wit)
            } else {
                law
            }
        })
        .collect();
    Ok(LawReport::new("conical-group", m.name(), triples.len(), None, laws))
}

/// Sup over samples of `d(u ∘^{x,ε}_λ v, Σ^x(u, δ^x_λ Δ^x(u,v)))` along the
/// schedule, where the right side uses the limit operations.
pub fn verify_relative_limit<M: Model>(
    ops: &EmergentOps<'_, M>,
    lambda: &Scale,
    pairs: &[(M::Point, M::Point)],
) -> Result<ConvergenceReport, LimitError> {
    let m = ops.model();
    let x = ops.basepoint();
    let targets = pairs
        .par_iter()
        .map(|(u, v)| ops.sum(u, &ops.dilate(lambda, &ops.difference(u, v)?)?))
        .collect::<Result<Vec<_>, _>>()?;
    let defects = sweep(ops.schedule(), |e| {
        pairs.iter().zip(&targets).try_fold(0.0f64, |acc, ((u, v), t)| {
            Ok(acc.max(gap(m, &relative_dilation(m, x, e, lambda, u, v)?, t)))
        })
    })?;
    Ok(ConvergenceReport::from_defects(
        format!("relative dilation limit lambda={lambda}"),
        m.name(),
        ops.schedule(),
        &defects,
        m.noise(),
    ))
}
