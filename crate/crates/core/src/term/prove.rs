use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use super::parse::{parse_term_at, ParseError};
use super::rewrite::{normalize, DerivationTrace};
use super::tree::{eval, Term};
use crate::model::Model;
use crate::models::AffineModel;
use crate::scale::Scale;
use crate::Rational;

/// An equation between terms, universally quantified over its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
    /// Point variables of both sides.
    pub vars: Vec<String>,
    /// Scale variables of both sides.
    pub scale_vars: Vec<String>,
}

impl Identity {
    pub fn new(label: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        let mut vars = lhs.free_vars();
        vars.extend(rhs.free_vars());
        let mut scale_vars = lhs.scale_vars();
        scale_vars.extend(rhs.scale_vars());
        Identity {
            label: label.into(),
            lhs,
            rhs,
            vars: vars.into_iter().collect(),
            scale_vars: scale_vars.into_iter().collect(),
        }
    }

    /// Parses `[label:] lhs = rhs`.
    pub fn parse(line: &str) -> Result<Identity, ParseError> {
        let (label, body, offset) = match line.split_once(':') {
            Some((l, rest)) => (l.trim().to_string(), rest, l.chars().count() + 1),
            None => (String::new(), line, 0),
        };
        let mut parts = body.splitn(2, '=');
        let lhs_src = parts.next().unwrap_or("");
        let rhs_src = parts.next().ok_or_else(|| ParseError {
            line: None,
            column: offset + body.chars().count() + 1,
            message: "expected '=' between the two sides".into(),
        })?;
        if rhs_src.contains('=') {
            return Err(ParseError {
                line: None,
                column: offset + lhs_src.chars().count() + 1 + rhs_src.find('=').unwrap_or(0) + 1,
                message: "more than one '='".into(),
            });
        }
        let lhs = parse_term_at(lhs_src, offset)?;
        let rhs = parse_term_at(rhs_src, offset + lhs_src.chars().count() + 1)?;
        let label = if label.is_empty() {
            format!("{lhs} = {rhs}")
        } else {
            label
        };
        Ok(Identity::new(label, lhs, rhs))
    }

    /// One identity per non-empty line; `#` starts a comment.
    pub fn parse_many(src: &str) -> Result<Vec<Identity>, ParseError> {
        let mut out = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            out.push(Identity::parse(line).map_err(|e| e.at_line(i + 1))?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Success,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub points: BTreeMap<String, Value>,
    pub scales: BTreeMap<String, String>,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofResult {
    pub label: String,
    pub identity: String,
    pub verdict: Verdict,
    #[serde(serialize_with = "term_str")]
    pub lhs_normal: Term,
    #[serde(serialize_with = "term_str")]
    pub rhs_normal: Term,
    pub lhs_trace: DerivationTrace,
    pub rhs_trace: DerivationTrace,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn term_str<S: serde::Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

impl ProofResult {
    pub fn success(&self) -> bool {
        self.verdict == Verdict::Success
    }
}

pub const COUNTEREXAMPLE_TRIALS: usize = 100;

pub fn prove_identity(id: &Identity) -> ProofResult {
    prove_identity_seeded(id, 0)
}

/// Normalizes both sides; on mismatch, searches for a counterexample by
/// random rational instantiation in the affine plane.
pub fn prove_identity_seeded(id: &Identity, seed: u64) -> ProofResult {
    let (ln, lt) = normalize(&id.lhs);
    let (rn, rt) = normalize(&id.rhs);
    let verdict = if ln == rn { Verdict::Success } else { Verdict::Fail };
    let (counterexample, note) = if verdict == Verdict::Fail {
        match find_counterexample(id, COUNTEREXAMPLE_TRIALS, seed) {
            Some(c) => (Some(c), None),
            None => (
                None,
                Some(format!("no counterexample found in {COUNTEREXAMPLE_TRIALS} trials")),
            ),
        }
    } else {
        (None, None)
    };
    ProofResult {
        label: id.label.clone(),
        identity: format!("{} = {}", id.lhs, id.rhs),
        verdict,
        lhs_normal: ln,
        rhs_normal: rn,
        lhs_trace: lt,
        rhs_trace: rt,
        counterexample,
        note,
    }
}

pub fn find_counterexample(id: &Identity, trials: usize, seed: u64) -> Option<Counterexample> {
    let m = AffineModel::<Rational>::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let points: BTreeMap<String, Vec<Rational>> =
            id.vars.iter().map(|v| (v.clone(), m.sample_point(&mut rng))).collect();
        let scales: BTreeMap<String, Scale> = id
            .scale_vars
            .iter()
            .map(|v| {
                let s = Scale::from_ints(rng.gen_range(1..=9), rng.gen_range(1..=9)).expect("positive");
                (v.clone(), s)
            })
            .collect();
        let (Ok(l), Ok(r)) = (eval(&m, &id.lhs, &points, &scales), eval(&m, &id.rhs, &points, &scales)) else {
            continue;
        };
        if l != r {
            return Some(Counterexample {
                points: points.iter().map(|(k, p)| (k.clone(), m.point_to_json(p))).collect(),
                scales: scales.iter().map(|(k, s)| (k.clone(), s.to_string())).collect(),
                lhs: m.point_to_json(&l),
                rhs: m.point_to_json(&r),
            });
        }
    }
    None
}
