//! Model configuration records and a runtime-dispatched model handle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::scalar::Mode;
use super::{
    AffineModel, AlexanderModel, ContractibleModel, CurvedModel, Grading, HeisenbergModel, NormKind, WarpedModel,
};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("model {model} does not support {what}")]
    Unsupported { model: String, what: String },
    #[error("invalid dimension {0}")]
    BadDimension(usize),
    #[error("malformed model configuration: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Affine,
    Warped,
    Curved,
    Heisenberg,
    Contractible,
    Alexander,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Affine => "affine",
            ModelKind::Warped => "warped",
            ModelKind::Curved => "curved",
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::Contractible => "contractible",
            ModelKind::Alexander => "alexander",
        }
    }
}

/// `{"model", "dimension", "mode", "grading", "norm", "expected_failures"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Grading>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,
    /// Law names whose failure is a documented counterexample, not a regression.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected_failures: Vec<String>,
}

impl ModelConfig {
    pub fn named(model: impl Into<String>) -> Self {
        ModelConfig {
            model: model.into(),
            dimension: None,
            mode: None,
            grading: None,
            norm: None,
            expected_failures: Vec::new(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(s).map_err(|e| ConfigError::Malformed(e.to_string()))
    }

    /// Resolves aliases (`heis-iso`, `heis-graded`) to a kind plus implied grading.
    pub fn kind(&self) -> Result<(ModelKind, Option<Grading>), ConfigError> {
        Ok(match self.model.trim().to_ascii_lowercase().as_str() {
            "affine" => (ModelKind::Affine, None),
            "warped" => (ModelKind::Warped, None),
            "curved" => (ModelKind::Curved, None),
            "heisenberg" | "heis" => (ModelKind::Heisenberg, None),
            "heis-iso" | "heisenberg-isotropic" => (ModelKind::Heisenberg, Some(Grading::Isotropic)),
            "heis-graded" | "heisenberg-graded" => (ModelKind::Heisenberg, Some(Grading::Graded)),
            "contractible" => (ModelKind::Contractible, None),
            "alexander" => (ModelKind::Alexander, None),
            other => return Err(ConfigError::UnknownModel(other.to_string())),
        })
    }

    pub fn build(&self) -> Result<AnyModel, ConfigError> {
        let (kind, implied) = self.kind()?;
        let unsupported = |what: String| ConfigError::Unsupported {
            model: kind.as_str().to_string(),
            what,
        };
        if kind != ModelKind::Heisenberg {
            if self.grading.is_some() {
                return Err(unsupported("a grading".into()));
            }
            if self.norm.is_some() {
                return Err(unsupported("a norm choice".into()));
            }
        }
        let dim = |default: usize, min: usize| match self.dimension {
            None => Ok(default),
            Some(d) if d >= min && d <= 64 => Ok(d),
            Some(d) => Err(ConfigError::BadDimension(d)),
        };
        Ok(match kind {
            ModelKind::Affine => match self.mode.unwrap_or(Mode::Exact) {
                Mode::Exact => AnyModel::AffineExact(AffineModel::new(dim(2, 1)?)),
                Mode::Double => AnyModel::AffineDouble(AffineModel::new(dim(2, 1)?)),
            },
            ModelKind::Warped | ModelKind::Curved => {
                if self.mode == Some(Mode::Exact) {
                    return Err(unsupported("exact arithmetic".into()));
                }
                if kind == ModelKind::Warped {
                    AnyModel::Warped(WarpedModel::new(dim(2, 1)?))
                } else {
                    AnyModel::Curved(CurvedModel::new(dim(2, 1)?))
                }
            }
            ModelKind::Heisenberg => {
                if let Some(d) = self.dimension {
                    if d != 3 {
                        return Err(ConfigError::BadDimension(d));
                    }
                }
                let grading = match (self.grading, implied) {
                    (Some(g), Some(h)) if g != h => {
                        return Err(ConfigError::Malformed(format!(
                            "model {:?} conflicts with grading {g:?}",
                            self.model
                        )))
                    }
                    (g, h) => g.or(h).unwrap_or(Grading::Graded),
                };
                let norm = self.norm.unwrap_or(NormKind::Koranyi);
                match self.mode.unwrap_or(Mode::Exact) {
                    Mode::Exact => AnyModel::HeisExact(HeisenbergModel::new(grading, norm)),
                    Mode::Double => AnyModel::HeisDouble(HeisenbergModel::new(grading, norm)),
                }
            }
            ModelKind::Contractible => {
                if self.mode == Some(Mode::Double) {
                    return Err(unsupported("double arithmetic".into()));
                }
                AnyModel::Contractible(ContractibleModel::new(dim(3, 2)?))
            }
            ModelKind::Alexander => {
                if self.mode == Some(Mode::Double) {
                    return Err(unsupported("double arithmetic".into()));
                }
                if self.dimension.is_some() {
                    return Err(unsupported("a dimension".into()));
                }
                AnyModel::Alexander(AlexanderModel::new())
            }
        })
    }
}

/// A model chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    AffineExact(AffineModel<Rational>),
    AffineDouble(AffineModel<f64>),
    Warped(WarpedModel),
    Curved(CurvedModel),
    HeisExact(HeisenbergModel<Rational>),
    HeisDouble(HeisenbergModel<f64>),
    Contractible(ContractibleModel),
    Alexander(AlexanderModel),
}

/// Runs `$body` with `$m` bound to the concrete model inside an [`AnyModel`].
#[macro_export]
macro_rules! with_model {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            $crate::models::AnyModel::AffineExact($m) => $body,
            $crate::models::AnyModel::AffineDouble($m) => $body,
            $crate::models::AnyModel::Warped($m) => $body,
            $crate::models::AnyModel::Curved($m) => $body,
            $crate::models::AnyModel::HeisExact($m) => $body,
            $crate::models::AnyModel::HeisDouble($m) => $body,
            $crate::models::AnyModel::Contractible($m) => $body,
            $crate::models::AnyModel::Alexander($m) => $body,
        }
    };
}

/// Like [`with_model!`] for models with group structure; `$none` otherwise.
#[macro_export]
macro_rules! with_group_model {
    ($any:expr, $m:ident => $body:expr, _ => $none:expr) => {
        match $any {
            $crate::models::AnyModel::AffineExact($m) => $body,
            $crate::models::AnyModel::AffineDouble($m) => $body,
            $crate::models::AnyModel::HeisExact($m) => $body,
            $crate::models::AnyModel::HeisDouble($m) => $body,
            $crate::models::AnyModel::Contractible($m) => $body,
            $crate::models::AnyModel::Alexander($m) => $body,
            _ => $none,
        }
    };
}

/// Like [`with_model!`] for normed groups; `$none` otherwise.
#[macro_export]
macro_rules! with_normed_model {
    ($any:expr, $m:ident => $body:expr, _ => $none:expr) => {
        match $any {
            $crate::models::AnyModel::AffineExact($m) => $body,
            $crate::models::AnyModel::AffineDouble($m) => $body,
            $crate::models::AnyModel::HeisExact($m) => $body,
            $crate::models::AnyModel::HeisDouble($m) => $body,
            _ => $none,
        }
    };
}

impl AnyModel {
    pub fn name(&self) -> String {
        use crate::model::Model;
        with_model!(self, m => m.name())
    }

    pub fn is_exact(&self) -> bool {
        use crate::model::Model;
        with_model!(self, m => m.is_exact())
    }

    pub fn scale_group(&self) -> crate::scale::ScaleGroup {
        use crate::model::Model;
        with_model!(self, m => m.scale_group())
    }

    pub fn has_metric(&self) -> bool {
        use crate::model::Model;
        with_model!(self, m => m.has_metric())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_config_records() {
        let c = ModelConfig::from_json_str(r#"{"model":"heisenberg","mode":"exact","grading":"isotropic"}"#).unwrap();
        let m = c.build().unwrap();
        assert_eq!(m.name(), "heisenberg isotropic exact");
        let c = ModelConfig::from_json_str(r#"{"model":"affine","dimension":3,"mode":"double"}"#).unwrap();
        assert_eq!(c.build().unwrap().name(), "affine R^3");
    }

    #[test]
    fn aliases() {
        assert_eq!(ModelConfig::named("heis-iso").build().unwrap().name(), "heisenberg isotropic exact");
        assert_eq!(ModelConfig::named("heis-graded").build().unwrap().name(), "heisenberg graded exact");
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(ModelConfig::named("sphere").build(), Err(ConfigError::UnknownModel(_))));
        let mut c = ModelConfig::named("warped");
        c.mode = Some(Mode::Exact);
        assert!(c.build().is_err());
        let mut c = ModelConfig::named("heisenberg");
        c.dimension = Some(5);
        assert!(c.build().is_err());
        let mut c = ModelConfig::named("affine");
        c.grading = Some(Grading::Graded);
        assert!(c.build().is_err());
        assert!(ModelConfig::from_json_str(r#"{"model":"affine","colour":1}"#).is_err());
        let mut c = ModelConfig::named("heis-iso");
        c.grading = Some(Grading::Graded);
        assert!(c.build().is_err());
    }
}
