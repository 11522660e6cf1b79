//! Groups with dilations: contraction, the limit operation `β` and its
//! conical-group structure.

use rayon::prelude::*;
use serde::Serialize;

use super::report::{ConvergenceReport, ANY_ORDER};
use super::sequence::{estimate_limit, extrapolate_from, sweep, LimitError, MIN_SCHEDULE};
use crate::irq::{LawReport, LawResult};
use crate::model::{gap, DilationGroup, ModelError};
use crate::scale::{Scale, Schedule};

pub const GWD_LAWS: [&str; 8] = [
    "H0 uniform contraction",
    "H1 beta limit exists",
    "H2 inverse limit",
    "beta associativity",
    "beta neutral element",
    "beta inverse",
    "dilations are beta automorphisms",
    "beta equals the group law",
];

/// Informational: `sup d(β(x,y), β(y,x))`.
pub const BETA_ABELIAN: &str = "beta is abelian";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GwdReport {
    pub laws: LawReport,
    pub contraction: ConvergenceReport,
    pub beta: Vec<ConvergenceReport>,
    pub pass: bool,
}

impl GwdReport {
    pub fn mark_expected_failures(&mut self, expected: &[String]) {
        self.laws.mark_expected_failures(expected);
        self.pass = self.laws.pass;
    }
}

fn beta_approx<G: DilationGroup>(g: &G, e: &Scale, x: &G::Point, y: &G::Point) -> Result<G::Point, ModelError> {
    g.delta(&e.inv(), &g.mul(&g.delta(e, x)?, &g.delta(e, y)?))
}

fn inverse_approx<G: DilationGroup>(g: &G, e: &Scale, x: &G::Point) -> Result<G::Point, ModelError> {
    g.delta(&e.inv(), &g.inv(&g.delta(e, x)?))
}

/// `β(x,y) = lim δ_ε⁻¹(δ_ε x · δ_ε y)` from the three finest scales.
pub fn beta<G: DilationGroup>(g: &G, schedule: &Schedule, x: &G::Point, y: &G::Point) -> Result<G::Point, ModelError> {
    let n = schedule.len();
    let scales = &schedule.scales()[n - 3..];
    let tail = scales.iter().map(|e| beta_approx(g, e, x, y)).collect::<Result<Vec<_>, _>>()?;
    Ok(extrapolate_from(g, scales, &tail))
}

fn beta_inverse<G: DilationGroup>(g: &G, schedule: &Schedule, x: &G::Point) -> Result<G::Point, ModelError> {
    let n = schedule.len();
    let scales = &schedule.scales()[n - 3..];
    let tail = scales.iter().map(|e| inverse_approx(g, e, x)).collect::<Result<Vec<_>, _>>()?;
    Ok(extrapolate_from(g, scales, &tail))
}

/// Checks the axioms of a group with dilations on sampled triples, and that
/// the limit operation `β` makes the carrier a conical group.
pub fn verify_gwd_axioms<G: DilationGroup>(
    g: &G,
    schedule: &Schedule,
    triples: &[(G::Point, G::Point, G::Point)],
    lambdas: &[Scale],
    tolerance: f64,
) -> Result<GwdReport, LimitError> {
    if schedule.len() < MIN_SCHEDULE {
        return Err(LimitError::TooFewScales { needed: MIN_SCHEDULE, got: schedule.len() });
    }
    let e = g.identity();
    let points: Vec<&G::Point> = triples.iter().flat_map(|(a, b, c)| [a, b, c]).collect();
    let contraction_defects = sweep(schedule, |s| {
        points.iter().try_fold(0.0f64, |acc, p| Ok(acc.max(gap(g, &g.delta(s, p)?, &e))))
    })?;
    let contraction = ConvergenceReport::from_defects_at("H0 contraction", g.name(), schedule, &contraction_defects, g.noise(), ANY_ORDER);

    let beta_reports = triples
        .par_iter()
        .map(|(x, y, _)| -> Result<ConvergenceReport, LimitError> {
            let values = sweep(schedule, |s| beta_approx(g, s, x, y))?;
            let est = estimate_limit(g, schedule, values)?;
            Ok(est.to_report(format!("beta x={} y={}", g.point_to_json(x), g.point_to_json(y)), g, schedule))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let rows = triples
        .par_iter()
        .map(|(x, y, z)| -> Result<[f64; 7], ModelError> {
            let xy = beta(g, schedule, x, y)?;
            let assoc = gap(g, &beta(g, schedule, &xy, z)?, &beta(g, schedule, x, &beta(g, schedule, y, z)?)?);
            let neutral = gap(g, &beta(g, schedule, &e, x)?, x).max(gap(g, &beta(g, schedule, x, &e)?, x));
            let ix = beta_inverse(g, schedule, x)?;
            let h2 = gap(g, &ix, &g.inv(x));
            let inverse = gap(g, &beta(g, schedule, x, &ix)?, &e).max(gap(g, &beta(g, schedule, &ix, x)?, &e));
            let mut hom = 0.0f64;
            for l in lambdas {
                let lhs = g.delta(l, &xy)?;
                let rhs = beta(g, schedule, &g.delta(l, x)?, &g.delta(l, y)?)?;
                hom = hom.max(gap(g, &lhs, &rhs));
            }
            let is_mul = gap(g, &xy, &g.mul(x, y));
            let abelian = gap(g, &xy, &beta(g, schedule, y, x)?);
            Ok([h2, assoc, neutral, inverse, hom, is_mul, abelian])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sup = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);

    let unconverged = beta_reports.iter().filter(|r| !r.converged).count();
    let last_beta = beta_reports.iter().map(|r| r.final_value()).fold(0.0, f64::max);
    let laws = vec![
        LawResult::judged(GWD_LAWS[0], contraction.final_value(), 0.0, contraction.pass),
        LawResult::judged(GWD_LAWS[1], last_beta, g.noise_floor(), unconverged == 0),
        LawResult::measured(GWD_LAWS[2], sup(0), tolerance),
        LawResult::measured(GWD_LAWS[3], sup(1), tolerance),
        LawResult::measured(GWD_LAWS[4], sup(2), tolerance),
        LawResult::measured(GWD_LAWS[5], sup(3), tolerance),
        LawResult::measured(GWD_LAWS[6], sup(4), tolerance),
        LawResult::informational(GWD_LAWS[7], sup(5)),
        LawResult::informational(BETA_ABELIAN, sup(6)),
    ];
    let laws = LawReport::new("gwd-axioms", g.name(), triples.len(), None, laws);
    let pass = laws.pass;
    Ok(GwdReport { laws, contraction, beta: beta_reports, pass })
}
