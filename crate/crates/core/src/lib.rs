//! A unit-equality paramodulation prover with a given-clause loop, and its
//! application to sliding-block puzzles.
//!
//! Boards are encoded as nested-list terms, slides are equalities between
//! board patterns, and a puzzle is solved when paramodulation derives the goal
//! state. The number of clauses generated before that point measures how hard
//! the puzzle is for the prover. A breadth-first oracle provides independent
//! ground truth for solvability and optimal solution lengths.

pub mod clause;
pub mod error;
pub mod experiment;
pub mod inference;
pub mod oracle;
pub mod puzzle;
pub mod saturation;
pub mod subst;
pub mod symbol;
pub mod syntax;
pub mod term;

pub use clause::{
    canonical_signature, is_variant, rename_apart, weigh, Clause, ClauseDb, ClauseId, Literal, ParentRole,
};
pub use error::{ExperimentError, OracleError, ParseError, ProverError, PuzzleError, TermError};
pub use experiment::{run_experiment, summarize, ExperimentConfig, RunRecord, Summary};
pub use inference::{paramodulate_given, paramodulate_pair, Orientation, ParaConfig, Paramodulant};
pub use oracle::{build_reachability, validate_solution, ReachabilitySet, Validation};
pub use puzzle::{
    count_inversions, decode, encode, generate_solvable, is_solvable, legal_moves, move_rules, Board, HolePlacement,
    MoveRule, RuleMode,
};
pub use saturation::{extract_solution, LimitKind, Limits, Outcome, Prover, ProverResult};
pub use subst::{unify, Substitution};
pub use symbol::Symbol;
pub use syntax::{parse_clause, parse_clause_lists, parse_term};
pub use term::{subterm_positions, Position, Term};
