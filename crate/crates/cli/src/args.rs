use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use emergent::models::{Grading, Mode, ModelConfig, NormKind};
use emergent::report::to_json;
use emergent::{Model, Scale, ScaleGroup, Schedule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

/// Any error that stops a command before a verdict: exit code 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure(e.to_string())
            }
        }
    )*};
}

failure_from!(
    emergent::models::ConfigError,
    emergent::ModelError,
    emergent::limits::LimitError,
    emergent::braid::BraidError,
    emergent::term::ParseError,
    emergent::scale::ScaleError
);

/// `Ok(true)` when every check passed.
pub type Outcome = Result<bool, Failure>;

pub fn fail(msg: impl Into<String>) -> Failure {
    Failure(msg.into())
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Model name: affine, warped, curved, heisenberg (heis, heis-iso, heis-graded), contractible, alexander.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// exact or double.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// graded or isotropic (Heisenberg only).
    #[arg(long, value_parser = parse_grading)]
    pub grading: Option<Grading>,
    /// koranyi or euclidean (Heisenberg only).
    #[arg(long, value_parser = parse_norm)]
    pub norm: Option<NormKind>,
    /// JSON model configuration; command-line flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Law whose failure is a documented counterexample (repeatable).
    #[arg(long = "expect-fail")]
    pub expect_fail: Vec<String>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "exact" => Ok(Mode::Exact),
        "double" => Ok(Mode::Double),
        _ => Err(format!("unknown mode '{s}' (expected exact or double)")),
    }
}

fn parse_grading(s: &str) -> Result<Grading, String> {
    match s {
        "graded" => Ok(Grading::Graded),
        "isotropic" => Ok(Grading::Isotropic),
        _ => Err(format!("unknown grading '{s}' (expected graded or isotropic)")),
    }
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    match s {
        "koranyi" => Ok(NormKind::Koranyi),
        "euclidean" => Ok(NormKind::Euclidean),
        _ => Err(format!("unknown norm '{s}' (expected koranyi or euclidean)")),
    }
}

impl ModelArgs {
    /// The configuration file, if any, overridden by explicit flags.
    pub fn resolve(&self) -> Result<ModelConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| fail(format!("cannot read model config {}: {e}", path.display())))?;
                ModelConfig::from_json_str(&text)?
            }
            None => ModelConfig::named("affine"),
        };
        if let Some(m) = &self.model {
            cfg.model = m.clone();
        }
        cfg.dimension = self.dim.or(cfg.dimension);
        cfg.mode = self.mode.or(cfg.mode);
        cfg.grading = self.grading.or(cfg.grading);
        cfg.norm = self.norm.or(cfg.norm);
        cfg.expected_failures.extend(self.expect_fail.iter().cloned());
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Seed for sampled runs; falls back to EMERGE_SEED, then 0.
    #[arg(long, env = "EMERGE_SEED")]
    pub seed: Option<u64>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed())
    }

    pub fn emit<T: Serialize + ?Sized>(&self, report: &T) -> Result<(), Failure> {
        write_or_print(&to_json(report), self.out.as_deref())
    }
}

pub fn write_or_print(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| fail(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    /// First schedule exponent: scales run over 2^-k for k = k-min..k-max.
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    /// Last schedule exponent; defaults to 20 in double precision and 12 in exact arithmetic.
    #[arg(long)]
    pub k_max: Option<u32>,
}

impl ScheduleArgs {
    pub fn schedule(&self, group: ScaleGroup, exact: bool) -> Result<Schedule, Failure> {
        let k_max = self.k_max.unwrap_or(if exact { 12 } else { 20 });
        if k_max <= self.k_min {
            return Err(fail(format!("k-max ({k_max}) must exceed k-min ({})", self.k_min)));
        }
        Ok(match group {
            ScaleGroup::PositiveRationals => Schedule::dyadic(self.k_min, k_max),
            ScaleGroup::IntegerPowers => Schedule::powers(self.k_min as i64, k_max as i64),
        })
    }
}

pub fn parse_scale(s: &str) -> Result<Scale, Failure> {
    s.parse::<Scale>().map_err(|e| fail(format!("bad scale '{s}': {e}")))
}

/// Three test scales of the model's scale group.
pub fn test_scales(group: ScaleGroup) -> Vec<Scale> {
    match group {
        ScaleGroup::PositiveRationals => ["1/2", "3/7", "5/3"].iter().map(|s| s.parse().expect("literal")).collect(),
        ScaleGroup::IntegerPowers => vec![Scale::Power(1), Scale::Power(-2), Scale::Power(3)],
    }
}

/// Reads a point given as JSON, or as comma-separated coordinates such as `1,2` or `1/2,3`.
pub fn point_value(s: &str) -> Result<Value, Failure> {
    let t = s.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| fail(format!("bad point '{s}': {e}")));
    }
    let coords = t
        .split(',')
        .map(|c| {
            let c = c.trim();
            if let Ok(i) = c.parse::<i64>() {
                Value::from(i)
            } else if let Ok(f) = c.parse::<f64>() {
                Value::from(f)
            } else {
                Value::from(c)
            }
        })
        .collect();
    Ok(Value::Array(coords))
}

pub fn read_point<M: Model>(m: &M, s: &str) -> Result<M::Point, Failure> {
    if matches!(s.trim(), "e" | "origin") {
        return Ok(m.origin());
    }
    let v = point_value(s)?;
    m.point_from_json(&v).map_err(|e| fail(format!("point '{s}' for {}: {e}", m.name())))
}

pub fn positive_tolerance(t: Option<f64>, default: f64) -> Result<f64, Failure> {
    match t {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(fail(format!("tolerance must be positive, got {t}"))),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}
