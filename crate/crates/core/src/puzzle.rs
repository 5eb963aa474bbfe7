//! Sliding-puzzle boards, inversion-parity solvability, random generation,
//! term encoding and move-rule clauses.
//!
//! A board is read in row-major order. Its term encoding is a right-nested
//! list: each slot becomes `n(<tile>)` or `hole`, terminated by `nil`.
//!
//! ```text
//! [1,hole,2]  ->  l(n(1),l(hole,l(n(2),nil)))
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::clause::{Clause, Literal};
use crate::error::PuzzleError;
use crate::symbol::Symbol;
use crate::term::Term;

pub const HOLE: u8 = 0;
pub const STATE: &str = "State";

/// A rectangular board with exactly one hole. Slot value `0` is the hole.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Board {
    width: usize,
    height: usize,
    slots: Vec<u8>,
}

impl Board {
    pub fn new(width: usize, height: usize, slots: Vec<u8>) -> Result<Board, PuzzleError> {
        if width < 2 || height < 2 {
            return Err(PuzzleError::InvalidBoard(format!(
                "{width}x{height}: both sides must be at least 2"
            )));
        }
        let n = width * height;
        if n > u8::MAX as usize {
            return Err(PuzzleError::InvalidBoard(format!("{width}x{height} is too large")));
        }
        if slots.len() != n {
            return Err(PuzzleError::InvalidBoard(format!(
                "{} slots for a {width}x{height} board",
                slots.len()
            )));
        }
        let mut seen = vec![false; n];
        for &s in &slots {
            let s = s as usize;
            if s >= n || seen[s] {
                return Err(PuzzleError::InvalidBoard(format!(
                    "slots must be a permutation of hole and 1..{}",
                    n - 1
                )));
            }
            seen[s] = true;
        }
        Ok(Board { width, height, slots })
    }

    /// The conventional goal: tiles in order with the hole last.
    pub fn goal(width: usize, height: usize) -> Result<Board, PuzzleError> {
        let n = width * height;
        let mut slots: Vec<u8> = (1..n as u8).collect();
        slots.push(HOLE);
        Board::new(width, height, slots)
    }

    /// Parses `2,3,6,1,7,8,5,4,hole` (commas, `-` or whitespace as separators).
    /// Without a width, the board must be square.
    pub fn parse(text: &str, width: Option<usize>) -> Result<Board, PuzzleError> {
        let slots = text
            .split(|c: char| c == ',' || c == '-' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|tok| match tok {
                "hole" => Ok(HOLE),
                _ => match tok.parse::<u8>() {
                    Ok(v) if v > 0 => Ok(v),
                    _ => Err(PuzzleError::InvalidBoard(format!("bad tile {tok:?}"))),
                },
            })
            .collect::<Result<Vec<u8>, _>>()?;
        let n = slots.len();
        let width = match width {
            Some(w) => w,
            None => {
                let side = (n as f64).sqrt().round() as usize;
                if side * side != n {
                    return Err(PuzzleError::InvalidBoard(format!(
                        "{n} slots is not a square board; give the width"
                    )));
                }
                side
            }
        };
        if width == 0 || n % width != 0 {
            return Err(PuzzleError::InvalidBoard(format!(
                "{n} slots do not fill rows of width {width}"
            )));
        }
        Board::new(width, n / width, slots)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[u8] {
        &self.slots
    }

    pub fn hole_index(&self) -> usize {
        self.slots.iter().position(|&s| s == HOLE).expect("board has a hole")
    }

    fn same_shape(&self, other: &Board) -> Result<(), PuzzleError> {
        if self.width == other.width && self.height == other.height {
            Ok(())
        } else {
            Err(PuzzleError::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ))
        }
    }

    fn swapped(&self, a: usize, b: usize) -> Board {
        let mut slots = self.slots.clone();
        slots.swap(a, b);
        Board {
            width: self.width,
            height: self.height,
            slots,
        }
    }

    /// Serialized with `-` separators, for contexts where commas are taken.
    pub fn to_dashed(&self) -> String {
        self.tokens().collect::<Vec<_>>().join("-")
    }

    fn tokens(&self) -> impl Iterator<Item = String> + '_ {
        self.slots
            .iter()
            .map(|&s| if s == HOLE { "hole".to_string() } else { s.to_string() })
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens().collect::<Vec<_>>().join(","))
    }
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Inversions contributed by one tile: the later tiles that are smaller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionTally {
    pub tile: u8,
    pub precedes: Vec<u8>,
}

/// Per-tile inversion tallies in reading order, skipping the hole.
pub fn inversion_tallies(b: &Board) -> Vec<InversionTally> {
    let tiles: Vec<u8> = b.slots.iter().copied().filter(|&s| s != HOLE).collect();
    tiles
        .iter()
        .enumerate()
        .map(|(i, &tile)| InversionTally {
            tile,
            precedes: tiles[i + 1..].iter().copied().filter(|&t| t < tile).collect(),
        })
        .collect()
}

pub fn count_inversions(b: &Board) -> usize {
    let tiles: Vec<u8> = b.slots.iter().copied().filter(|&s| s != HOLE).collect();
    let mut count = 0;
    for i in 0..tiles.len() {
        for j in i + 1..tiles.len() {
            if tiles[i] > tiles[j] {
                count += 1;
            }
        }
    }
    count
}

/// Parity class preserved by every slide. For odd widths it is the inversion
/// parity; for even widths the hole's row counted from the bottom is added.
pub fn parity_class(b: &Board) -> usize {
    let inversions = count_inversions(b);
    if b.width % 2 == 1 {
        inversions % 2
    } else {
        let row_from_bottom = b.height - b.hole_index() / b.width;
        (inversions + row_from_bottom) % 2
    }
}

pub fn is_solvable(b: &Board, goal: &Board) -> Result<bool, PuzzleError> {
    b.same_shape(goal)?;
    Ok(parity_class(b) == parity_class(goal))
}

/// Neighbors reachable by one slide, ordered by hole movement: up, down, left, right.
pub fn legal_moves(b: &Board) -> Vec<Board> {
    let h = b.hole_index();
    let (row, col) = (h / b.width, h % b.width);
    let mut out = Vec::with_capacity(4);
    if row > 0 {
        out.push(b.swapped(h, h - b.width));
    }
    if row + 1 < b.height {
        out.push(b.swapped(h, h + b.width));
    }
    if col > 0 {
        out.push(b.swapped(h, h - 1));
    }
    if col + 1 < b.width {
        out.push(b.swapped(h, h + 1));
    }
    out
}

/// Where random boards put the hole.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HolePlacement {
    /// Hole fixed in the last slot; only the tiles are shuffled.
    #[default]
    LastSlot,
    Anywhere,
}

/// A uniformly random board of the given shape (not necessarily solvable).
pub fn random_board<R: rand::Rng>(rng: &mut R, width: usize, height: usize, placement: HolePlacement) -> Board {
    let n = width * height;
    let mut slots: Vec<u8> = (1..n as u8).collect();
    match placement {
        HolePlacement::LastSlot => {
            slots.shuffle(rng);
            slots.push(HOLE);
        }
        HolePlacement::Anywhere => {
            slots.push(HOLE);
            slots.shuffle(rng);
        }
    }
    Board { width, height, slots }
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// `count` distinct solvable boards, rejection-sampled from uniform shuffles.
///
/// Deterministic for a given seed.
pub fn generate_solvable(
    count: usize,
    seed: u64,
    goal: &Board,
    placement: HolePlacement,
) -> Result<Vec<Board>, PuzzleError> {
    let n = goal.len();
    let pool = match placement {
        HolePlacement::LastSlot => factorial(n - 1),
        HolePlacement::Anywhere => factorial(n),
    };
    if let Some(pool) = pool {
        if count as u64 > pool / 2 {
            return Err(PuzzleError::InvalidBoard(format!(
                "only {} distinct solvable boards exist for this shape",
                pool / 2
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = FxHashSet::default();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let b = random_board(&mut rng, goal.width, goal.height, placement);
        if parity_class(&b) == parity_class(goal) && seen.insert(b.slots.clone()) {
            out.push(b);
        }
    }
    Ok(out)
}

pub(crate) struct PuzzleSymbols {
    pub list: Symbol,
    pub tile: Symbol,
    pub hole: Symbol,
    pub nil: Symbol,
    pub state: Symbol,
    numbers: Vec<Symbol>,
}

impl PuzzleSymbols {
    pub fn get() -> &'static PuzzleSymbols {
        static SYMS: OnceLock<PuzzleSymbols> = OnceLock::new();
        SYMS.get_or_init(|| PuzzleSymbols {
            list: Symbol::intern("l"),
            tile: Symbol::intern("n"),
            hole: Symbol::intern("hole"),
            nil: Symbol::intern("nil"),
            state: Symbol::intern(STATE),
            numbers: (0..=u8::MAX).map(|k| Symbol::intern(&k.to_string())).collect(),
        })
    }

    fn number(&self, k: u8) -> Symbol {
        self.numbers[k as usize]
    }
}

fn slot_term(s: u8) -> Term {
    let syms = PuzzleSymbols::get();
    if s == HOLE {
        Term::Const(syms.hole)
    } else {
        Term::App(syms.tile, vec![Term::Const(syms.number(s))].into())
    }
}

/// Right-nested list `l(e1,l(e2,...l(en,tail)))`.
fn nested_list(elements: Vec<Term>, tail: Term) -> Term {
    let list = PuzzleSymbols::get().list;
    elements
        .into_iter()
        .rev()
        .fold(tail, |acc, e| Term::App(list, vec![e, acc].into()))
}

pub fn encode(b: &Board) -> Term {
    let nil = Term::Const(PuzzleSymbols::get().nil);
    nested_list(b.slots.iter().map(|&s| slot_term(s)).collect(), nil)
}

/// The unit fact `State(<encoding>)`.
pub fn state_literal(b: &Board) -> Literal {
    Literal {
        positive: true,
        predicate: PuzzleSymbols::get().state,
        args: vec![encode(b)],
    }
}

/// Inverse of [`encode`] for a board of the given shape.
pub fn decode(t: &Term, width: usize, height: usize) -> Result<Board, PuzzleError> {
    let syms = PuzzleSymbols::get();
    let not_a_board = || PuzzleError::NotABoard(t.to_string());
    let mut slots = Vec::with_capacity(width * height);
    let mut cur = t;
    loop {
        match cur {
            Term::Const(c) if *c == syms.nil => break,
            Term::App(f, args) if *f == syms.list && args.len() == 2 => {
                let slot = match &args[0] {
                    Term::Const(h) if *h == syms.hole => HOLE,
                    Term::App(n, inner) if *n == syms.tile && inner.len() == 1 => match &inner[0] {
                        Term::Const(k) => match k.as_str().parse::<u8>() {
                            Ok(v) if v > 0 => v,
                            _ => return Err(not_a_board()),
                        },
                        _ => return Err(not_a_board()),
                    },
                    _ => return Err(not_a_board()),
                };
                slots.push(slot);
                cur = &args[1];
            }
            _ => return Err(not_a_board()),
        }
    }
    Board::new(width, height, slots).map_err(|_| not_a_board())
}

/// Decodes a `State(...)` literal.
pub fn decode_state(lit: &Literal, width: usize, height: usize) -> Result<Board, PuzzleError> {
    if lit.predicate != PuzzleSymbols::get().state || lit.args.len() != 1 {
        return Err(PuzzleError::NotABoard(lit.to_string()));
    }
    if !lit.is_ground() {
        return Err(PuzzleError::NonGroundState(lit.to_string()));
    }
    decode(&lit.args[0], width, height)
}

/// Weight of any ground `State(...)` clause of this shape: the predicate, one
/// `l` per slot, `n(k)` for each tile, the hole and `nil`.
pub fn ground_state_weight(width: usize, height: usize) -> u32 {
    let n = (width * height) as u32;
    1 + n + 2 * (n - 1) + 1 + 1
}

/// Slack above the ground-state weight when no explicit weight cap is given.
pub const WEIGHT_MARGIN: u32 = 4;

pub fn default_max_weight(width: usize, height: usize) -> u32 {
    ground_state_weight(width, height) + WEIGHT_MARGIN
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RuleMode {
    /// One rule per slot pair, pinned to absolute positions of a full-length list.
    #[default]
    BoundarySafe,
    /// The two position-generic rules, which also match across row ends.
    PaperFaithful,
}

impl RuleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleMode::BoundarySafe => "boundary-safe",
            RuleMode::PaperFaithful => "paper-faithful",
        }
    }
}

impl fmt::Display for RuleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boundary-safe" => Ok(RuleMode::BoundarySafe),
            "paper-faithful" => Ok(RuleMode::PaperFaithful),
            other => Err(format!("unknown rule mode {other:?} (boundary-safe | paper-faithful)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug)]
pub struct MoveRule {
    pub clause: Clause,
    pub kind: MoveKind,
    /// Slot of the hole on the left-hand side; `None` for position-generic rules.
    pub anchor: Option<usize>,
}

fn anchored_rule(n: usize, hole_at: usize, tile_at: usize) -> Literal {
    let tile = Term::app("n", vec![Term::var("x")]);
    let pattern = |hole_slot: usize, tile_slot: usize| {
        let slots = (0..n)
            .map(|i| {
                if i == hole_slot {
                    slot_term(HOLE)
                } else if i == tile_slot {
                    tile.clone()
                } else {
                    Term::var(&format!("y{i}"))
                }
            })
            .collect();
        nested_list(slots, Term::Const(PuzzleSymbols::get().nil))
    };
    Literal::equality(pattern(hole_at, tile_at), pattern(tile_at, hole_at))
}

/// Names for the slots skipped by a generic vertical rule: `x y z u`, then `x1 y1 z1 u1`, ...
fn skipped_slot_names(count: usize) -> Vec<String> {
    const BASE: [&str; 4] = ["x", "y", "z", "u"];
    (0..count)
        .map(|i| {
            let round = i / BASE.len();
            if round == 0 {
                BASE[i].to_string()
            } else {
                format!("{}{round}", BASE[i % BASE.len()])
            }
        })
        .collect()
}

fn generic_horizontal() -> Literal {
    let tile = Term::app("n", vec![Term::var("x")]);
    let rest = Term::var("y");
    Literal::equality(
        nested_list(vec![slot_term(HOLE), tile.clone()], rest.clone()),
        nested_list(vec![tile, slot_term(HOLE)], rest),
    )
}

fn generic_vertical(width: usize) -> Literal {
    let tile = Term::app("n", vec![Term::var("w")]);
    let rest = Term::var("v");
    let skipped: Vec<Term> = skipped_slot_names(width - 1).iter().map(|s| Term::var(s)).collect();
    let side = |first: Term, last: Term| {
        let mut elems = vec![first];
        elems.extend(skipped.iter().cloned());
        elems.push(last);
        nested_list(elems, rest.clone())
    };
    Literal::equality(side(slot_term(HOLE), tile.clone()), side(tile, slot_term(HOLE)))
}

pub fn move_rules(width: usize, height: usize, mode: RuleMode) -> Vec<MoveRule> {
    assert!(width >= 2 && height >= 2, "boards are at least 2x2");
    match mode {
        RuleMode::BoundarySafe => {
            let n = width * height;
            let horizontal = (0..n).filter(|p| p % width != width - 1).map(|p| MoveRule {
                clause: Clause::new(anchored_rule(n, p, p + 1)),
                kind: MoveKind::Horizontal,
                anchor: Some(p),
            });
            let vertical = (0..n - width).map(|p| MoveRule {
                clause: Clause::new(anchored_rule(n, p, p + width)),
                kind: MoveKind::Vertical,
                anchor: Some(p),
            });
            horizontal.chain(vertical).collect()
        }
        RuleMode::PaperFaithful => vec![
            MoveRule {
                clause: Clause::new(generic_horizontal()),
                kind: MoveKind::Horizontal,
                anchor: None,
            },
            MoveRule {
                clause: Clause::new(generic_vertical(width)),
                kind: MoveKind::Vertical,
                anchor: None,
            },
        ],
    }
}

/// Input clauses for solving `board`: the move rules (usable), the initial
/// state (set of support) and the negated goal state.
#[derive(Clone, Debug)]
pub struct PuzzleProblem {
    pub usable: Vec<Clause>,
    pub sos: Vec<Clause>,
    pub goal: Clause,
}

pub fn puzzle_problem(board: &Board, goal: &Board, mode: RuleMode) -> Result<PuzzleProblem, PuzzleError> {
    board.same_shape(goal)?;
    Ok(PuzzleProblem {
        usable: move_rules(board.width, board.height, mode)
            .into_iter()
            .map(|r| r.clause)
            .collect(),
        sos: vec![Clause::new(state_literal(board))],
        goal: Clause::new(state_literal(goal).negated()),
    })
}
