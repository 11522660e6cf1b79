//! The dilation contract's derived gates and their sampled laws.

pub mod gates;
pub mod laws;

pub use gates::{approx_difference, approx_inverse, approx_sum, codil, derivative, relative_dilation};
pub use laws::{
    distributivity_residual, verify_distributivity, verify_irq_axioms, verify_pplay, GateIdentity, LawReport,
    LawResult, LawStatus,
};

#[cfg(test)]
mod tests;
