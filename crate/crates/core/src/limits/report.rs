use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use crate::scale::{rational_to_f64, Schedule};
use crate::Rational;

/// Minimum log-log slope accepted for a claimed first-order rate.
pub const RATE_THRESHOLD: f64 = 0.9;

/// Threshold for checks that only require decay to zero, at any order.
pub const ANY_ORDER: f64 = f64::EPSILON;

/// Minimum number of positive samples for a rate to be reported.
pub const MIN_RATE_SAMPLES: usize = 4;

/// Level at or below which a measurement is indistinguishable from zero.
///
/// Float sweeps divide by `|ε|` when dilating back, so rounding error grows
/// like `roundoff_gain · EPSILON / |ε|` at fine scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFloor {
    pub base: f64,
    pub roundoff_gain: f64,
}

impl NoiseFloor {
    pub const ZERO: NoiseFloor = NoiseFloor { base: 0.0, roundoff_gain: 0.0 };

    pub fn constant(base: f64) -> Self {
        NoiseFloor { base, roundoff_gain: 0.0 }
    }

    pub fn at(&self, abs_eps: f64) -> f64 {
        if self.roundoff_gain == 0.0 {
            return self.base;
        }
        self.base.max(self.roundoff_gain * f64::EPSILON / abs_eps)
    }
}

impl From<f64> for NoiseFloor {
    fn from(base: f64) -> Self {
        NoiseFloor::constant(base)
    }
}

/// What the fitted rate was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RateBasis {
    /// Distances between consecutive values of a converging sequence.
    Cauchy,
    /// A defect that should itself tend to zero.
    Defect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub test: String,
    pub model: String,
    pub schedule: Vec<String>,
    pub abs_eps: Vec<f64>,
    /// Per-scale measurement: a point, or a real defect.
    pub values: Vec<Value>,
    /// Distances between consecutive measurements; length is one less than the schedule.
    pub residuals: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<Value>,
    pub rate: Option<f64>,
    pub rate_basis: RateBasis,
    pub converged: bool,
    pub threshold: f64,
    pub pass: bool,
}

impl ConvergenceReport {
    /// A report for a quantity that should decay to zero. The defect passes
    /// when it vanishes (up to `floor`) everywhere, or when its tail is
    /// decreasing with a slope of at least [`RATE_THRESHOLD`].
    pub fn from_defects(
        test: impl Into<String>,
        model: impl Into<String>,
        schedule: &Schedule,
        defects: &[f64],
        floor: impl Into<NoiseFloor>,
    ) -> Self {
        Self::from_defects_at(test, model, schedule, defects, floor, RATE_THRESHOLD)
    }

    /// As [`ConvergenceReport::from_defects`] with an explicit rate threshold.
    pub fn from_defects_at(
        test: impl Into<String>,
        model: impl Into<String>,
        schedule: &Schedule,
        defects: &[f64],
        floor: impl Into<NoiseFloor>,
        threshold: f64,
    ) -> Self {
        let floor = floor.into();
        let abs = schedule.abs_values();
        let residuals = consecutive_gaps(defects);
        let vanishing = defects.iter().zip(&abs).all(|(d, e)| *d <= floor.at(*e));
        let rate = fit_rate(&abs, defects, floor);
        let converged = vanishing || tail_decreasing(&abs, defects, floor);
        let pass = vanishing || (converged && rate.is_some_and(|r| r >= threshold));
        ConvergenceReport {
            test: test.into(),
            model: model.into(),
            schedule: schedule.scales().iter().map(|s| s.to_string()).collect(),
            abs_eps: abs,
            values: defects.iter().map(|d| Value::from(*d)).collect(),
            residuals,
            limit: Some(Value::from(0.0)),
            rate,
            rate_basis: RateBasis::Defect,
            converged,
            threshold,
            pass,
        }
    }

    /// A report for a sequence of points given its Cauchy residuals. Passes
    /// when converged and, if a rate is measurable, the rate meets the threshold.
    #[allow(clippy::too_many_arguments)]
    pub fn from_sequence(
        test: impl Into<String>,
        model: impl Into<String>,
        schedule: &Schedule,
        values: Vec<Value>,
        residuals: Vec<f64>,
        limit: Option<Value>,
        floor: impl Into<NoiseFloor>,
    ) -> Self {
        let floor = floor.into();
        let abs = schedule.abs_values();
        let x = &abs[..residuals.len().min(abs.len())];
        let rate = fit_rate(x, &residuals, floor);
        let converged = residuals.len() >= 3 && tail_decreasing(x, &residuals, floor);
        let pass = converged && rate.is_none_or(|r| r >= RATE_THRESHOLD);
        ConvergenceReport {
            test: test.into(),
            model: model.into(),
            schedule: schedule.scales().iter().map(|s| s.to_string()).collect(),
            abs_eps: abs,
            values,
            residuals,
            limit,
            rate,
            rate_basis: RateBasis::Cauchy,
            converged,
            threshold: RATE_THRESHOLD,
            pass,
        }
    }

    /// Largest value at the finest scale (defect reports) or largest final residual.
    pub fn final_value(&self) -> f64 {
        match self.rate_basis {
            RateBasis::Defect => self.values.last().and_then(Value::as_f64).unwrap_or(f64::NAN),
            RateBasis::Cauchy => self.residuals.last().copied().unwrap_or(0.0),
        }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().filter_map(Value::as_f64).fold(0.0, f64::max)
    }

    /// Rows `(k, |ε|, defect)`, where the defect is the value for defect
    /// reports and the Cauchy residual otherwise.
    pub fn csv_rows(&self) -> Vec<(usize, f64, f64)> {
        match self.rate_basis {
            RateBasis::Defect => self
                .abs_eps
                .iter()
                .zip(&self.values)
                .enumerate()
                .map(|(k, (e, v))| (k + 1, *e, v.as_f64().unwrap_or(f64::NAN)))
                .collect(),
            RateBasis::Cauchy => self
                .abs_eps
                .iter()
                .zip(&self.residuals)
                .enumerate()
                .map(|(k, (e, r))| (k + 1, *e, *r))
                .collect(),
        }
    }
}

pub fn consecutive_gaps(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[0] - w[1]).abs()).collect()
}

/// Least-squares slope of `ln y` against `ln x` over entries above the
/// floor; `None` with fewer than [`MIN_RATE_SAMPLES`] usable entries.
pub fn fit_rate(x: &[f64], y: &[f64], floor: impl Into<NoiseFloor>) -> Option<f64> {
    let floor = floor.into();
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > floor.at(**a) && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < MIN_RATE_SAMPLES {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// True when each of the last three steps decreases strictly, treating
/// values at or below the floor as already converged. `x[i]` is the scale
/// of `values[i]`.
pub fn tail_decreasing(x: &[f64], values: &[f64], floor: impl Into<NoiseFloor>) -> bool {
    let floor = floor.into();
    let low: Vec<bool> = values.iter().zip(x).map(|(v, e)| *v <= floor.at(*e)).collect();
    if values.len() < 2 {
        return low.iter().all(|l| *l);
    }
    let start = values.len().saturating_sub(4);
    (start..values.len() - 1).all(|i| values[i + 1] < values[i] || (low[i] && low[i + 1]))
}

/// Lagrange weights for evaluating at 0 the interpolant through the nodes
/// `h`: exact for data polynomial of degree `< h.len()` in the node.
pub fn extrapolation_weights(h: &[Rational]) -> Vec<Rational> {
    (0..h.len())
        .map(|i| {
            let mut w = Rational::from_integer(1.into());
            for (j, hj) in h.iter().enumerate() {
                if j != i {
                    let den = hj - &h[i];
                    debug_assert!(!den.is_zero(), "nodes must be distinct");
                    w = w * hj / den;
                }
            }
            w
        })
        .collect()
}

/// Extrapolates real values to `|ε| = 0` from the last three schedule points.
pub fn extrapolate_reals(schedule: &Schedule, values: &[f64]) -> f64 {
    let n = values.len().min(schedule.len());
    if n < 3 {
        return values.last().copied().unwrap_or(f64::NAN);
    }
    let h: Vec<Rational> = schedule.scales()[n - 3..n].iter().map(|s| s.abs_value()).collect();
    extrapolation_weights(&h)
        .iter()
        .zip(&values[n - 3..n])
        .map(|(w, v)| rational_to_f64(w) * v)
        .sum()
}
