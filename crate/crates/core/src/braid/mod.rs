//! Braid words with scale-decorated crossings, Reidemeister moves, and
//! colorings by the points of a model.

pub mod color;
pub mod moves;
pub mod word;

pub use color::{coloring_defect, color, encircle, encircled_defect_sweep, r3_defect_sweep, EncircleSpec, Granularity};
pub use moves::{apply_move, find_move, is_r3_pair, Move};
pub use word::{BraidError, BraidWord, Crossing, Sign};

#[cfg(test)]
mod tests;
