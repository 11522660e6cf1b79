use std::fmt;

use serde::Serialize;

use super::tree::{path_string, Path, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Rule {
    /// `o{1}(x, y) → y`
    Unit,
    /// `o{e}(x, x) → x`
    Idem,
    /// `o{e}(x, o{m}(x, y)) → o{e·m}(x, y)`
    Fusion,
}

impl Rule {
    pub const PRIORITY: [Rule; 3] = [Rule::Unit, Rule::Idem, Rule::Fusion];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Unit => "UNIT",
            Rule::Idem => "IDEM",
            Rule::Fusion => "FUSION",
        }
    }

    /// Applies the rule at the root of `t`.
    pub fn apply(self, t: &Term) -> Option<Term> {
        let Term::Dil { scale, base, arg } = t else {
            return None;
        };
        match self {
            Rule::Unit => scale.is_one().then(|| (**arg).clone()),
            Rule::Idem => (base == arg).then(|| (**base).clone()),
            Rule::Fusion => match &**arg {
                Term::Dil {
                    scale: inner,
                    base: inner_base,
                    arg: inner_arg,
                } if inner_base == base => Some(Term::dil(scale.mul(inner), (**base).clone(), (**inner_arg).clone())),
                _ => None,
            },
        }
    }

    /// The first rule, by priority, that applies at the root.
    pub fn first_applicable(t: &Term) -> Option<(Rule, Term)> {
        Rule::PRIORITY.iter().find_map(|r| r.apply(t).map(|out| (*r, out)))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Leftmost-innermost: the first redex in post-order.
    #[default]
    Innermost,
    /// Leftmost-outermost: the first redex in pre-order.
    Outermost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub path: Path,
    pub before: Term,
    pub after: Term,
}

impl Serialize for Step {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Step", 4)?;
        st.serialize_field("rule", self.rule.name())?;
        st.serialize_field("path", &path_string(&self.path))?;
        st.serialize_field("before", &self.before.to_string())?;
        st.serialize_field("after", &self.after.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationTrace {
    #[serde(serialize_with = "display_ser")]
    pub start: Term,
    pub steps: Vec<Step>,
}

fn display_ser<S: serde::Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("replay diverged at step {step}: {reason}")]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

impl DerivationTrace {
    pub fn result(&self) -> &Term {
        self.steps.last().map_or(&self.start, |s| &s.after)
    }

    /// Re-applies every step from the start term, checking each recorded
    /// intermediate, and returns the final term.
    pub fn replay(&self) -> Result<Term, ReplayError> {
        let mut cur = self.start.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let fail = |reason: String| ReplayError { step: i, reason };
            if cur != s.before {
                return Err(fail("recorded term-before does not match".into()));
            }
            let sub = cur
                .subterm(&s.path)
                .ok_or_else(|| fail(format!("no subterm at {}", path_string(&s.path))))?;
            let rewritten = s
                .rule
                .apply(sub)
                .ok_or_else(|| fail(format!("{} does not apply at {}", s.rule, path_string(&s.path))))?;
            cur = cur.replace(&s.path, rewritten).expect("path exists");
            if cur != s.after {
                return Err(fail("recorded term-after does not match".into()));
            }
        }
        Ok(cur)
    }

    pub fn rules_used(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}

/// Finds the redex selected by `strategy`.
pub fn find_redex(t: &Term, strategy: Strategy) -> Option<(Path, Rule, Term)> {
    fn go(t: &Term, strategy: Strategy, path: &mut Path) -> Option<(Path, Rule, Term)> {
        if strategy == Strategy::Outermost {
            if let Some((r, out)) = Rule::first_applicable(t) {
                return Some((path.clone(), r, out));
            }
        }
        if let Term::Dil { base, arg, .. } = t {
            for (i, child) in [(0u8, base), (1u8, arg)] {
                path.push(i);
                let hit = go(child, strategy, path);
                path.pop();
                if hit.is_some() {
                    return hit;
                }
            }
        }
        if strategy == Strategy::Innermost {
            if let Some((r, out)) = Rule::first_applicable(t) {
                return Some((path.clone(), r, out));
            }
        }
        None
    }
    go(t, strategy, &mut Vec::new())
}

pub fn normalize(t: &Term) -> (Term, DerivationTrace) {
    normalize_with(t, Strategy::Innermost)
}

/// Rewrites until no rule applies. Terminates because every step lowers the
/// node count.
pub fn normalize_with(t: &Term, strategy: Strategy) -> (Term, DerivationTrace) {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    while let Some((path, rule, out)) = find_redex(&cur, strategy) {
        let next = cur.replace(&path, out).expect("redex path exists");
        steps.push(Step {
            rule,
            path,
            before: cur,
            after: next.clone(),
        });
        cur = next;
    }
    (
        cur,
        DerivationTrace {
            start: t.clone(),
            steps,
        },
    )
}

pub fn is_normal(t: &Term) -> bool {
    find_redex(t, Strategy::Outermost).is_none()
}
