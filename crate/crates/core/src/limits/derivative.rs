use serde::{Deserialize, Serialize};

use super::report::ConvergenceReport;
use super::sequence::{estimate_limit, sweep, LimitError};
use crate::irq::derivative;
use crate::model::{Model, ModelError};
use crate::models::Scalar;
use crate::scale::Schedule;

/// Coordinatewise test functions on vector models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    Identity,
    Square,
    Cube,
    /// `y ↦ 2y + 1`.
    Affine,
}

impl TestFunction {
    pub fn apply<F: Scalar>(self, y: &[F]) -> Vec<F> {
        let one = F::from_rational(&crate::Rational::from_integer(1.into()));
        y.iter()
            .map(|c| match self {
                TestFunction::Identity => c.clone(),
                TestFunction::Square => c.clone() * c.clone(),
                TestFunction::Cube => c.clone() * c.clone() * c.clone(),
                TestFunction::Affine => c.clone() + c.clone() + one.clone(),
            })
            .collect()
    }
}

impl std::str::FromStr for TestFunction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "identity" | "id" => Ok(TestFunction::Identity),
            "square" => Ok(TestFunction::Square),
            "cube" => Ok(TestFunction::Cube),
            "affine" => Ok(TestFunction::Affine),
            _ => Err(format!("unknown function '{s}' (expected identity, square, cube or affine)")),
        }
    }
}

/// The sequence `D_ε f(x) u` along the schedule, with its limit.
pub fn derivative_convergence<M, F>(
    m: &M,
    f: F,
    x: &M::Point,
    u: &M::Point,
    schedule: &Schedule,
) -> Result<(M::Point, ConvergenceReport), LimitError>
where
    M: Model,
    F: Fn(&M::Point) -> Result<M::Point, ModelError> + Sync,
{
    let values = sweep(schedule, |e| derivative(m, &f, x, e, u))?;
    let est = estimate_limit(m, schedule, values)?;
    let report = est.to_report(
        format!("derivative x={} u={}", m.point_to_json(x), m.point_to_json(u)),
        m,
        schedule,
    );
    Ok((est.extrapolated, report))
}
