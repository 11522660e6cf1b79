use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::scale_expr::{EvalScaleError, ScaleExpr};
use crate::model::{Model, ModelError};
use crate::scale::Scale;

/// A decorated planar binary tree: a variable, or `base ∘_scale arg`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Dil {
        scale: ScaleExpr,
        base: Box<Term>,
        arg: Box<Term>,
    },
}

/// Child index along a path: 0 is the base, 1 the argument.
pub type Path = Vec<u8>;

pub fn path_string(p: &[u8]) -> String {
    if p.is_empty() {
        "root".to_string()
    } else {
        p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn dil(scale: ScaleExpr, base: Term, arg: Term) -> Self {
        Term::Dil {
            scale,
            base: Box::new(base),
            arg: Box::new(arg),
        }
    }

    /// `base •_scale arg`, i.e. `base ∘_{scale⁻¹} arg`.
    pub fn codil(scale: &ScaleExpr, base: Term, arg: Term) -> Self {
        Term::dil(scale.inv(), base, arg)
    }

    pub fn node_count(&self) -> u64 {
        match self {
            Term::Var(_) => 1,
            Term::Dil { base, arg, .. } => 1 + base.node_count() + arg.node_count(),
        }
    }

    pub fn scale_length(&self) -> u64 {
        match self {
            Term::Var(_) => 0,
            Term::Dil { scale, base, arg } => scale.length() + base.scale_length() + arg.scale_length(),
        }
    }

    /// The termination measure `(nodes, summed scale length)`, compared lexicographically.
    pub fn measure(&self) -> (u64, u64) {
        (self.node_count(), self.scale_length())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Dil { base, arg, .. } => {
                base.collect_vars(out);
                arg.collect_vars(out);
            }
        }
    }

    pub fn scale_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_scale_vars(&mut out);
        out
    }

    fn collect_scale_vars(&self, out: &mut BTreeSet<String>) {
        if let Term::Dil { scale, base, arg } = self {
            out.extend(scale.variables().map(|(k, _)| k.to_string()));
            base.collect_scale_vars(out);
            arg.collect_scale_vars(out);
        }
    }

    pub fn subterm(&self, path: &[u8]) -> Option<&Term> {
        match (path.split_first(), self) {
            (None, t) => Some(t),
            (Some((0, rest)), Term::Dil { base, .. }) => base.subterm(rest),
            (Some((1, rest)), Term::Dil { arg, .. }) => arg.subterm(rest),
            _ => None,
        }
    }

    /// Replaces the subterm at `path`.
    pub fn replace(&self, path: &[u8], new: Term) -> Option<Term> {
        match (path.split_first(), self) {
            (None, _) => Some(new),
            (Some((0, rest)), Term::Dil { scale, base, arg }) => {
                Some(Term::dil(scale.clone(), base.replace(rest, new)?, (**arg).clone()))
            }
            (Some((1, rest)), Term::Dil { scale, base, arg }) => {
                Some(Term::dil(scale.clone(), (**base).clone(), arg.replace(rest, new)?))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Dil { scale, base, arg } => write!(f, "o{{{scale}}}({base}, {arg})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound point variable {0:?}")]
    Unbound(String),
    #[error(transparent)]
    Scale(#[from] EvalScaleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Evaluates a term in a model under assignments of points and scales.
pub fn eval<M: Model>(
    m: &M,
    t: &Term,
    points: &BTreeMap<String, M::Point>,
    scales: &BTreeMap<String, Scale>,
) -> Result<M::Point, EvalError> {
    match t {
        Term::Var(v) => points.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone())),
        Term::Dil { scale, base, arg } => {
            let s = scale.eval(scales)?;
            let b = eval(m, base, points, scales)?;
            let a = eval(m, arg, points, scales)?;
            Ok(m.dil(&b, &s, &a)?)
        }
    }
}
