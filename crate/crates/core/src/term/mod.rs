//! Decorated binary trees over point variables, rewritten with the unit,
//! idempotence and fusion rules.

pub mod builtin;
pub mod parse;
pub mod prove;
pub mod rewrite;
pub mod scale_expr;
pub mod tree;

pub use builtin::builtin_identities;
pub use parse::{parse_scale, parse_term, ParseError};
pub use prove::{prove_identity, prove_identity_seeded, Counterexample, Identity, ProofResult, Verdict};
pub use rewrite::{normalize, normalize_with, DerivationTrace, Rule, Step, Strategy};
pub use scale_expr::ScaleExpr;
pub use tree::{eval, EvalError, Term};

#[cfg(test)]
mod tests;
