//! Rescaled distances, tangent cones and limit norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::report::{consecutive_gaps, extrapolate_reals, ConvergenceReport, NoiseFloor};
use super::sequence::{sweep, LimitError, MIN_SCHEDULE};
use crate::irq::{LawReport, LawResult};
use crate::model::{Model, ModelError, NormedGroup};
use crate::scale::{Scale, Schedule};

/// Floor for real-valued sequences computed in double precision from
/// possibly exact points.
pub const REAL_FLOOR: f64 = 1e-12;

/// Nondegeneracy threshold for limit norms.
pub const DEGENERATE_BELOW: f64 = 1e-9;

/// How the tangent distance `d^x` at the basepoint is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TangentDistance {
    /// The model metric itself, for models that are already conical.
    Exact,
    /// `d(δ^x_ε u, δ^x_ε v) / |ε|` at the finest scale.
    #[default]
    Rescaled,
}

fn require_metric<M: Model>(m: &M) -> Result<(), LimitError> {
    m.distance(&m.origin(), &m.origin()).map(|_| ()).map_err(LimitError::from)
}

fn check_len(schedule: &Schedule) -> Result<(), LimitError> {
    if schedule.len() < MIN_SCHEDULE {
        return Err(LimitError::TooFewScales { needed: MIN_SCHEDULE, got: schedule.len() });
    }
    Ok(())
}

/// `d(x ∘_ε u, x ∘_ε v) / |ε|`.
pub fn rescaled_distance<M: Model>(m: &M, x: &M::Point, eps: &Scale, u: &M::Point, v: &M::Point) -> Result<f64, ModelError> {
    Ok(m.distance(&m.dil(x, eps, u)?, &m.dil(x, eps, v)?)? / eps.abs_f64())
}

pub fn tangent_distance<M: Model>(
    m: &M,
    x: &M::Point,
    schedule: &Schedule,
    kind: TangentDistance,
    u: &M::Point,
    v: &M::Point,
) -> Result<f64, ModelError> {
    match kind {
        TangentDistance::Exact => m.distance(u, v),
        TangentDistance::Rescaled => rescaled_distance(m, x, schedule.finest(), u, v),
    }
}

/// Sup over pairs of `|d(δ^x_ε u, δ^x_ε v)/|ε| − d^x(u,v)|` along the
/// schedule, with `d^x` taken at the finest scale.
pub fn verify_a2<M: Model>(
    m: &M,
    x: &M::Point,
    schedule: &Schedule,
    pairs: &[(M::Point, M::Point)],
) -> Result<ConvergenceReport, LimitError> {
    require_metric(m)?;
    check_len(schedule)?;
    let finest = pairs
        .iter()
        .map(|(u, v)| rescaled_distance(m, x, schedule.finest(), u, v))
        .collect::<Result<Vec<_>, _>>()?;
    let defects = sweep(schedule, |e| {
        pairs.iter().zip(&finest).try_fold(0.0f64, |acc, ((u, v), d)| {
            Ok(acc.max((rescaled_distance(m, x, e, u, v)? - d).abs()))
        })
    })?;
    let floor = if m.is_exact() { NoiseFloor::constant(REAL_FLOOR) } else { m.noise() };
    Ok(ConvergenceReport::from_defects("rescaled distance", m.name(), schedule, &defects, floor))
}

/// Homogeneity `d^x(δ^x_λ u, δ^x_λ v) = |λ| d^x(u,v)` and symmetry of the
/// tangent distance.
pub fn verify_cone<M: Model>(
    m: &M,
    x: &M::Point,
    schedule: &Schedule,
    kind: TangentDistance,
    lambdas: &[Scale],
    pairs: &[(M::Point, M::Point)],
    tolerance: f64,
) -> Result<LawReport, LimitError> {
    require_metric(m)?;
    let rows = pairs
        .par_iter()
        .map(|(u, v)| -> Result<(f64, f64, Value), ModelError> {
            let d = tangent_distance(m, x, schedule, kind, u, v)?;
            let sym = (d - tangent_distance(m, x, schedule, kind, v, u)?).abs();
            let mut hom = 0.0f64;
            for l in lambdas {
                let du = m.dil(x, l, u)?;
                let dv = m.dil(x, l, v)?;
                let lhs = tangent_distance(m, x, schedule, kind, &du, &dv)?;
                hom = hom.max((lhs - l.abs_f64() * d).abs());
            }
            Ok((hom, sym, json!({"u": m.point_to_json(u), "v": m.point_to_json(v)})))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let worst = |pick: fn(&(f64, f64, Value)) -> f64| {
        rows.iter()
            .fold(None::<&(f64, f64, Value)>, |b, r| match b {
                Some(b) if pick(b) >= pick(r) => Some(b),
                _ => Some(r),
            })
            .map(|r| (pick(r), r.2.clone()))
            .unwrap_or((0.0, Value::Null))
    };
    let (hom, hw) = worst(|r| r.0);
    let (sym, sw) = worst(|r| r.1);
    let laws = vec![
        LawResult::measured("cone homogeneity", hom, tolerance).with_witness(hw),
        LawResult::measured("tangent symmetry", sym, tolerance).with_witness(sw),
    ];
    let test = match kind {
        TangentDistance::Exact => "cone (exact metric)",
        TangentDistance::Rescaled => "cone (rescaled metric)",
    };
    Ok(LawReport::new(test, m.name(), pairs.len(), None, laws))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEntry {
    pub point: Value,
    pub norm: f64,
    pub limit: f64,
    pub report: ConvergenceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormLimitReport {
    pub model: String,
    pub entries: Vec<NormEntry>,
    pub laws: LawReport,
    pub pass: bool,
}

impl NormLimitReport {
    pub fn mark_expected_failures(&mut self, expected: &[String]) {
        self.laws.mark_expected_failures(expected);
        self.pass = self.laws.pass;
    }

    /// Points whose limit norm vanishes although they are not the identity.
    pub fn degenerate_points(&self) -> Vec<&Value> {
        self.entries
            .iter()
            .filter(|e| e.norm > 0.0 && e.limit.abs() <= DEGENERATE_BELOW)
            .map(|e| &e.point)
            .collect()
    }
}

pub const NORM_ITEMS: [&str; 5] = [
    "(a) positive definite",
    "(b) symmetric under inverse",
    "(c) subadditive",
    "(d) limit exists",
    "(e) limit is nondegenerate",
];

/// Tabulates `‖x‖^N = lim |ε|⁻¹ ‖δ_ε x‖` at `points` and checks the normed
/// group items on `points` and `pairs`. Item (e) fails, with a witness,
/// when some point other than the identity has a vanishing limit norm.
pub fn verify_norm_limit<G: NormedGroup>(
    g: &G,
    schedule: &Schedule,
    points: &[G::Point],
    pairs: &[(G::Point, G::Point)],
) -> Result<NormLimitReport, LimitError> {
    check_len(schedule)?;
    let e = g.identity();
    let entries = points
        .par_iter()
        .map(|p| -> Result<NormEntry, LimitError> {
            let values = sweep(schedule, |s| Ok(g.norm(&g.delta(s, p)?) / s.abs_f64()))?;
            let limit = extrapolate_reals(schedule, &values);
            let report = ConvergenceReport::from_sequence(
                format!("limit norm at {}", g.point_to_json(p)),
                g.name(),
                schedule,
                values.iter().map(|v| Value::from(*v)).collect(),
                consecutive_gaps(&values),
                Some(Value::from(limit)),
                REAL_FLOOR,
            );
            Ok(NormEntry { point: g.point_to_json(p), norm: g.norm(p), limit, report })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let non_identity: Vec<&G::Point> = points.iter().filter(|p| **p != e).collect();
    let definite = non_identity
        .iter()
        .filter(|p| g.norm(p) <= 0.0)
        .count() as f64
        + g.norm(&e);
    let symmetric = points.iter().map(|p| (g.norm(&g.inv(p)) - g.norm(p)).abs()).fold(0.0, f64::max);
    let (sub, sub_w) = pairs
        .iter()
        .map(|(p, q)| {
            let excess = g.norm(&g.mul(p, q)) - g.norm(p) - g.norm(q);
            (excess.max(0.0), json!({"x": g.point_to_json(p), "y": g.point_to_json(q)}))
        })
        .fold((0.0, Value::Null), |b, c| if c.0 > b.0 { c } else { b });
    let unconverged = entries.iter().filter(|e| !e.report.converged).count();
    let last_residual = entries
        .iter()
        .filter_map(|e| e.report.residuals.last().copied())
        .fold(0.0, f64::max);
    let degenerate: Vec<&NormEntry> = entries
        .iter()
        .filter(|e| e.norm > 0.0 && e.limit.abs() <= DEGENERATE_BELOW)
        .collect();
    let min_limit = entries
        .iter()
        .filter(|e| e.norm > 0.0)
        .map(|e| e.limit.abs())
        .fold(f64::INFINITY, f64::min);
    let tol = 1e-9;
    let mut laws = vec![
        LawResult::measured(NORM_ITEMS[0], definite, 0.0),
        LawResult::measured(NORM_ITEMS[1], symmetric, tol),
        LawResult::measured(NORM_ITEMS[2], sub, tol),
        LawResult::judged(NORM_ITEMS[3], last_residual, REAL_FLOOR, unconverged == 0),
        LawResult::judged(
            NORM_ITEMS[4],
            if min_limit.is_finite() { min_limit } else { 0.0 },
            DEGENERATE_BELOW,
            degenerate.is_empty(),
        ),
    ];
    if sub > 0.0 {
        laws[2] = laws[2].clone().with_witness(sub_w);
    }
    if let Some(d) = degenerate.first() {
        laws[4] = laws[4].clone().with_witness(d.point.clone());
    }
    let laws = LawReport::new("norm limit", g.name(), points.len(), None, laws);
    let pass = laws.pass;
    Ok(NormLimitReport { model: g.name(), entries, laws, pass })
}
