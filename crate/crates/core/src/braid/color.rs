//! Colorings of decorated braids by points of a model.

use serde::{Deserialize, Serialize};

use super::moves::is_r3_pair;
use super::word::{BraidError, BraidWord, Crossing, Sign};
use crate::irq::{codil, relative_dilation};
use crate::limits::{sweep, ConvergenceReport, LimitError, MIN_SCHEDULE};
use crate::model::{Model, ModelError};
use crate::scale::{Scale, Schedule};

fn check_len<P>(word: &BraidWord, colors: &[P]) -> Result<(), BraidError> {
    if colors.len() != word.strands() {
        return Err(BraidError::LengthMismatch { expected: word.strands(), got: colors.len() });
    }
    Ok(())
}

fn run<P: Clone>(
    word: &BraidWord,
    input: &[P],
    mut cross: impl FnMut(&Crossing, &P, &P) -> Result<(P, P), ModelError>,
) -> Result<Vec<P>, BraidError> {
    check_len(word, input)?;
    let mut c = input.to_vec();
    for x in word.crossings() {
        let i = x.position - 1;
        let (l, r) = cross(x, &c[i], &c[i + 1])?;
        c[i] = l;
        c[i + 1] = r;
    }
    Ok(c)
}

/// Pushes colors through the braid: a positive crossing sends `(a,b)` to
/// `(a ∘_λ b, a)` and a negative one sends `(a,b)` to `(b, b •_λ a)`.
pub fn color<M: Model>(m: &M, word: &BraidWord, input: &[M::Point]) -> Result<Vec<M::Point>, BraidError> {
    run(word, input, |x, a, b| match x.sign {
        Sign::Positive => Ok((m.dil(a, &x.scale, b)?, a.clone())),
        Sign::Negative => Ok((b.clone(), codil(m, b, &x.scale, a)?)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Granularity {
    /// Dilate all inputs towards the basepoint, color, then dilate back.
    #[default]
    Whole,
    /// Replace every crossing operation by its relative dilation.
    PerCrossing,
}

/// Encircling a diagram by a basepoint `x` at scale `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncircleSpec<P> {
    pub basepoint: P,
    pub scale: Scale,
    pub granularity: Granularity,
}

impl<P> EncircleSpec<P> {
    pub fn new(basepoint: P, scale: Scale) -> Self {
        EncircleSpec { basepoint, scale, granularity: Granularity::Whole }
    }

    pub fn per_crossing(mut self) -> Self {
        self.granularity = Granularity::PerCrossing;
        self
    }
}

/// The coloring of the encircled diagram. Both granularities agree exactly
/// in exact models.
pub fn encircle<M: Model>(
    m: &M,
    word: &BraidWord,
    spec: &EncircleSpec<M::Point>,
    input: &[M::Point],
) -> Result<Vec<M::Point>, BraidError> {
    check_len(word, input)?;
    let (x, e) = (&spec.basepoint, &spec.scale);
    match spec.granularity {
        Granularity::Whole => {
            let inner: Vec<M::Point> = input.iter().map(|u| m.dil(x, e, u)).collect::<Result<_, _>>()?;
            color(m, word, &inner)?
                .iter()
                .map(|w| codil(m, x, e, w).map_err(BraidError::from))
                .collect()
        }
        Granularity::PerCrossing => run(word, input, |c, a, b| match c.sign {
            Sign::Positive => Ok((relative_dilation(m, x, e, &c.scale, a, b)?, a.clone())),
            Sign::Negative => Ok((b.clone(), relative_dilation(m, x, e, &c.scale.inv(), b, a)?)),
        }),
    }
}

/// Largest strand-wise distance between two colorings.
pub fn coloring_defect<M: Model>(m: &M, a: &[M::Point], b: &[M::Point]) -> Result<f64, BraidError> {
    if a.len() != b.len() {
        return Err(BraidError::LengthMismatch { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).try_fold(0.0f64, |acc, (p, q)| Ok(acc.max(m.distance(p, q)?)))
}

/// Sup over inputs of the defect between the encircled colorings of two
/// words, along the schedule.
pub fn encircled_defect_sweep<M: Model>(
    m: &M,
    b1: &BraidWord,
    b2: &BraidWord,
    x: &M::Point,
    schedule: &Schedule,
    inputs: &[Vec<M::Point>],
) -> Result<ConvergenceReport, BraidError> {
    if b1.strands() != b2.strands() {
        return Err(BraidError::StrandMismatch { left: b1.strands(), right: b2.strands() });
    }
    if schedule.len() < MIN_SCHEDULE {
        return Err(LimitError::TooFewScales { needed: MIN_SCHEDULE, got: schedule.len() }.into());
    }
    m.distance(x, x)?;
    for input in inputs {
        check_len(b1, input)?;
    }
    let defects = sweep(schedule, |e| {
        let spec = EncircleSpec::new(x.clone(), e.clone());
        inputs.iter().try_fold(0.0f64, |acc, input| {
            let d = encircle(m, b1, &spec, input)
                .and_then(|c1| coloring_defect(m, &c1, &encircle(m, b2, &spec, input)?))
                .map_err(|err| match err {
                    BraidError::Model(me) => me,
                    other => ModelError::Function(other.to_string()),
                })?;
            Ok(acc.max(d))
        })
    })?;
    Ok(ConvergenceReport::from_defects(
        format!("encircled defect {b1} vs {b2}"),
        m.name(),
        schedule,
        &defects,
        m.noise(),
    ))
}

/// [`encircled_defect_sweep`] for a pair of words related by one R3 shift.
pub fn r3_defect_sweep<M: Model>(
    m: &M,
    b1: &BraidWord,
    b2: &BraidWord,
    x: &M::Point,
    schedule: &Schedule,
    inputs: &[Vec<M::Point>],
) -> Result<ConvergenceReport, BraidError> {
    if !is_r3_pair(b1, b2) {
        return Err(BraidError::NotAnR3Pair(format!("{b2} is not one R3 shift away from {b1}")));
    }
    let mut r = encircled_defect_sweep(m, b1, b2, x, schedule, inputs)?;
    r.test = format!("encircled R3 defect {b1} vs {b2}");
    Ok(r)
}
