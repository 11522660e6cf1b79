//! Concrete realizations of the dilation contract.

pub mod affine;
pub mod alexander;
pub mod catalog;
pub mod contractible;
pub mod curved;
pub mod heisenberg;
pub mod laurent;
pub mod scalar;
pub mod warped;

pub use affine::AffineModel;
pub use alexander::AlexanderModel;
pub use catalog::{AnyModel, ConfigError, ModelConfig, ModelKind};
pub use contractible::{ContractibleModel, UnipotentMatrix};
pub use curved::CurvedModel;
pub use heisenberg::{heis_delta, heis_inv, heis_mul, koranyi_norm, Grading, HeisPoint, HeisenbergModel, NormKind};
pub use laurent::LaurentPoly;
pub use scalar::{Mode, Scalar};
pub use warped::WarpedModel;
