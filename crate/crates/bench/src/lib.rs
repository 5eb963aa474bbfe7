//! Shared fixtures for the criterion benchmarks.

use parapuzzle_core::{Board, Clause, RuleMode};

/// Boards of increasing difficulty.
pub const REFERENCE_BOARDS: [&str; 4] = [
    "2,3,6,1,7,8,5,4,hole",
    "2,4,3,8,7,6,5,1,hole",
    "2,5,3,8,6,1,7,4,hole",
    "6,5,8,7,4,3,2,1,hole",
];

pub fn board(text: &str) -> Board {
    Board::parse(text, None).expect("fixture board parses")
}

pub fn rules(mode: RuleMode) -> Vec<Clause> {
    parapuzzle_core::move_rules(3, 3, mode)
        .into_iter()
        .map(|r| r.clause)
        .collect()
}
