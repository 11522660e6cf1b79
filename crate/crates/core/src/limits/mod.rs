//! Measurements of the `ε → 0` behaviour along decreasing schedules.

pub mod derivative;
pub mod gwd;
pub mod metric;
pub mod ops;
pub mod report;
pub mod sequence;

pub use derivative::{derivative_convergence, TestFunction};
pub use gwd::{beta, verify_gwd_axioms, GwdReport, BETA_ABELIAN, GWD_LAWS};
pub use metric::{
    rescaled_distance, tangent_distance, verify_a2, verify_cone, verify_norm_limit, NormEntry, NormLimitReport,
    TangentDistance, DEGENERATE_BELOW, NORM_ITEMS, REAL_FLOOR,
};
pub use ops::{emergent_ops, verify_conical_group, verify_relative_limit, EmergentOp, EmergentOps, OpEntry, OpsTable, CONICAL_LAWS};
pub use report::{fit_rate, ConvergenceReport, NoiseFloor, RateBasis, ANY_ORDER, RATE_THRESHOLD};
pub use sequence::{default_schedule, estimate_limit, sweep, LimitError, LimitEstimate, MIN_SCHEDULE};

#[cfg(test)]
mod tests;
