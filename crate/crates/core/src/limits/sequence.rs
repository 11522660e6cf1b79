use rayon::prelude::*;
use thiserror::Error;

use super::report::{extrapolation_weights, fit_rate, tail_decreasing, ConvergenceReport};
use crate::model::{gap, Model, ModelError};
use crate::scale::{Scale, ScaleGroup, Schedule};

/// Fewest schedule points for which a limit is estimated.
pub const MIN_SCHEDULE: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitError {
    #[error("a limit needs at least {needed} scales, got {got}")]
    TooFewScales { needed: usize, got: usize },
    #[error("{0} values for a schedule of {1} scales")]
    LengthMismatch(usize, usize),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Default schedule: `2^-k` for `k = 1..20` in double precision, `k = 1..12`
/// for exact arithmetic, where rational sizes grow quickly.
pub fn default_schedule(group: ScaleGroup, exact: bool) -> Schedule {
    let k_max = if exact { 12 } else { 20 };
    match group {
        ScaleGroup::PositiveRationals => Schedule::dyadic(1, k_max),
        ScaleGroup::IntegerPowers => Schedule::powers(1, k_max as i64),
    }
}

/// Evaluates `f` at every scale of the schedule, in schedule order.
pub fn sweep<T, F>(schedule: &Schedule, f: F) -> Result<Vec<T>, ModelError>
where
    T: Send,
    F: Fn(&Scale) -> Result<T, ModelError> + Sync,
{
    schedule.scales().par_iter().map(&f).collect()
}

/// A sampled sequence `v_k` indexed by a schedule, with its limit estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate<P> {
    pub values: Vec<P>,
    /// `d(v_k, v_{k+1})`.
    pub residuals: Vec<f64>,
    /// The value at the finest scale.
    pub last: P,
    /// Polynomial extrapolation to `|ε| = 0` through the last three values.
    pub extrapolated: P,
    /// Log-log slope of the Cauchy residuals.
    pub rate: Option<f64>,
    /// Log-log slope of `d(v_k, v_last)`.
    pub rate_to_last: Option<f64>,
    pub converged: bool,
}

pub fn estimate_limit<M: Model>(
    m: &M,
    schedule: &Schedule,
    values: Vec<M::Point>,
) -> Result<LimitEstimate<M::Point>, LimitError> {
    let n = values.len();
    if n != schedule.len() {
        return Err(LimitError::LengthMismatch(n, schedule.len()));
    }
    if n < MIN_SCHEDULE {
        return Err(LimitError::TooFewScales { needed: MIN_SCHEDULE, got: n });
    }
    let floor = m.noise();
    let abs = schedule.abs_values();
    let residuals: Vec<f64> = values.windows(2).map(|w| gap(m, &w[0], &w[1])).collect();
    let last = values[n - 1].clone();
    let to_last: Vec<f64> = values[..n - 1].iter().map(|v| gap(m, v, &last)).collect();
    let extrapolated = extrapolate(m, schedule, &values);
    Ok(LimitEstimate {
        rate: fit_rate(&abs[..n - 1], &residuals, floor),
        rate_to_last: fit_rate(&abs[..n - 1], &to_last, floor),
        converged: tail_decreasing(&abs[..n - 1], &residuals, floor),
        residuals,
        last,
        extrapolated,
        values,
    })
}

/// Extrapolates through the last three values of a sequence on `schedule`.
pub fn extrapolate<M: Model>(m: &M, schedule: &Schedule, values: &[M::Point]) -> M::Point {
    let n = values.len();
    debug_assert!(n >= 3 && n <= schedule.len());
    extrapolate_from(m, &schedule.scales()[n - 3..n], &values[n - 3..])
}

/// Extrapolates to `|ε| = 0` the values taken at the given scales.
pub fn extrapolate_from<M: Model>(m: &M, scales: &[Scale], values: &[M::Point]) -> M::Point {
    let h: Vec<_> = scales.iter().map(Scale::abs_value).collect();
    let terms: Vec<_> = values.iter().zip(extrapolation_weights(&h)).collect();
    m.affine_combination(&terms)
}

impl<P> LimitEstimate<P> {
    pub fn to_report<M: Model<Point = P>>(&self, test: impl Into<String>, m: &M, schedule: &Schedule) -> ConvergenceReport {
        ConvergenceReport::from_sequence(
            test,
            m.name(),
            schedule,
            self.values.iter().map(|v| m.point_to_json(v)).collect(),
            self.residuals.clone(),
            Some(m.point_to_json(&self.extrapolated)),
            m.noise(),
        )
    }
}
