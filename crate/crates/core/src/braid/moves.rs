//! Reidemeister moves on decorated braid words.

use serde::{Deserialize, Serialize};

use super::word::{BraidError, BraidWord, Crossing, Sign};
use crate::scale::Scale;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "move")]
pub enum Move {
    /// Removes `s_i±{λ} s_i∓{λ}`.
    R2Cancel,
    /// Inserts `s_i±{λ} s_i∓{λ}`.
    R2Insert { position: usize, sign: Sign, scale: Scale },
    /// `s_i s_{i+1} s_i ↔ s_{i+1} s_i s_{i+1}` with equal signs and scales.
    R3Shift,
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::R2Cancel => "R2 cancel",
            Move::R2Insert { .. } => "R2 insert",
            Move::R3Shift => "R3 shift",
        }
    }
}

const R2_PATTERN: &str = "s_i±{λ} followed by s_i∓{λ} (same position and scale, opposite signs)";
const R3_PATTERN: &str =
    "s_i{λ} s_j{λ} s_i{λ} with |i−j| = 1, all crossings of the same sign and scale";

fn r3_target(w: &[Crossing]) -> Option<Vec<Crossing>> {
    let [a, b, c] = w else { return None };
    let same = a.sign == b.sign && b.sign == c.sign && a.scale == b.scale && b.scale == c.scale;
    if !same || a.position != c.position || a.position.abs_diff(b.position) != 1 {
        return None;
    }
    let mk = |p| Crossing::new(p, a.sign, a.scale.clone());
    Some(vec![mk(b.position), mk(a.position), mk(b.position)])
}

fn cancels(a: &Crossing, b: &Crossing) -> bool {
    a.position == b.position && a.sign != b.sign && a.scale == b.scale
}

/// Applies a move at crossing index `at` (0-based). Decorations must match;
/// otherwise the error names the pattern the move expects.
pub fn apply_move(word: &BraidWord, mv: &Move, at: usize) -> Result<BraidWord, BraidError> {
    let cs = word.crossings();
    let mismatch = |expected: &str| BraidError::Move { rule: mv.name(), index: at, expected: expected.to_string() };
    match mv {
        Move::R2Cancel => {
            if at + 1 >= cs.len() || !cancels(&cs[at], &cs[at + 1]) {
                return Err(mismatch(R2_PATTERN));
            }
            let mut out = cs.to_vec();
            out.drain(at..at + 2);
            Ok(word.with_crossings(out))
        }
        Move::R2Insert { position, sign, scale } => {
            if at > cs.len() {
                return Err(mismatch(&format!("an insertion index between 0 and {}", cs.len())));
            }
            let c = Crossing::new(*position, *sign, scale.clone());
            let mut out = cs.to_vec();
            out.splice(at..at, [c.clone(), c.inverse()]);
            BraidWord::new(word.strands(), out)
        }
        Move::R3Shift => {
            let target = cs.get(at..at + 3).and_then(r3_target).ok_or_else(|| mismatch(R3_PATTERN))?;
            let mut out = cs.to_vec();
            out.splice(at..at + 3, target);
            Ok(word.with_crossings(out))
        }
    }
}

/// First index at which the move applies.
pub fn find_move(word: &BraidWord, mv: &Move) -> Option<usize> {
    (0..=word.len()).find(|&i| apply_move(word, mv, i).is_ok())
}

/// True when `b` is `a` with one R3 shift applied.
pub fn is_r3_pair(a: &BraidWord, b: &BraidWord) -> bool {
    a.strands() == b.strands()
        && a.len() == b.len()
        && (0..a.len()).any(|i| apply_move(a, &Move::R3Shift, i).is_ok_and(|w| w == *b))
}
