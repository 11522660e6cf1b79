//! Emergent algebras: dilation operations indexed by a scale group, the gates
//! built from them, and tools to prove, color and measure with them.
//!
//! - [`scale`]: scale groups and decreasing schedules.
//! - [`model`] and [`models`]: the dilation contract and its realizations.
//! - [`irq`]: difference, sum, inverse, relative dilation and derivative gates,
//!   plus sampled law checks.
//! - [`term`]: decorated binary trees, rewriting and an identity prover.
//! - [`braid`]: braid words with decorated crossings and their colorings.
//! - [`limits`]: measurements of the `ε → 0` behaviour.
//! - [`report`]: JSON and CSV serialization.

pub type Rational = num_rational::BigRational;

pub mod braid;
pub mod irq;
pub mod limits;
pub mod model;
pub mod models;
pub mod report;
pub mod scale;
pub mod term;

pub use model::{DilationGroup, Model, ModelError, NormedGroup};
pub use scale::{Scale, ScaleGroup, Schedule};
