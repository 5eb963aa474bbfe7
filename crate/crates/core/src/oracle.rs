//! Breadth-first ground truth over board states.
//!
//! Cache file layout (little-endian):
//!
//! ```text
//! magic    8 bytes  "PPORACLE"
//! version  u32      1
//! width    u8
//! height   u8
//! goal     width*height bytes, hole = 0
//! count    u64
//! entries  count * (key: u64, distance: u8), ascending by key
//! ```
//!
//! A key packs the slots four bits each, first slot in the low bits.

use std::collections::VecDeque;
use std::fmt;
use std::fs;
use std::path::Path;

use rustc_hash::FxHashMap;

use crate::error::OracleError;
use crate::puzzle::{legal_moves, Board};

/// Largest board (in slots) the oracle will enumerate.
pub const MAX_SLOTS: usize = 12;

const MAGIC: &[u8; 8] = b"PPORACLE";
const VERSION: u32 = 1;

fn key(b: &Board) -> u64 {
    b.slots()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &s)| acc | (s as u64) << (4 * i))
}

/// Optimal distances to `goal` for every board in its orbit.
#[derive(Clone)]
pub struct ReachabilitySet {
    goal: Board,
    distances: FxHashMap<u64, u8>,
}

impl fmt::Debug for ReachabilitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReachabilitySet")
            .field("goal", &self.goal)
            .field("states", &self.distances.len())
            .finish()
    }
}

impl ReachabilitySet {
    pub fn goal(&self) -> &Board {
        &self.goal
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn contains(&self, b: &Board) -> bool {
        self.optimal_length(b).is_some()
    }

    /// Optimal number of slides from `b` to the goal; `None` when unreachable.
    pub fn optimal_length(&self, b: &Board) -> Option<u32> {
        if b.width() != self.goal.width() || b.height() != self.goal.height() {
            return None;
        }
        self.distances.get(&key(b)).map(|&d| d as u32)
    }

    pub fn max_distance(&self) -> u32 {
        self.distances.values().copied().max().unwrap_or(0) as u32
    }

    /// Number of states at each distance from the goal.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut layers = vec![0; self.max_distance() as usize + 1];
        for &d in self.distances.values() {
            layers[d as usize] += 1;
        }
        layers
    }

    pub fn save(&self, path: &Path) -> Result<(), OracleError> {
        let mut entries: Vec<(u64, u8)> = self.distances.iter().map(|(k, d)| (*k, *d)).collect();
        entries.sort_unstable();
        let mut buf = Vec::with_capacity(32 + entries.len() * 9);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.push(self.goal.width() as u8);
        buf.push(self.goal.height() as u8);
        buf.extend_from_slice(self.goal.slots());
        buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
        for (k, d) in entries {
            buf.extend_from_slice(&k.to_le_bytes());
            buf.push(d);
        }
        fs::write(path, buf).map_err(|source| OracleError::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<ReachabilitySet, OracleError> {
        let bytes = fs::read(path).map_err(|source| OracleError::Io {
            path: path.to_owned(),
            source,
        })?;
        let bad = |message: &str| OracleError::BadCache {
            path: path.to_owned(),
            message: message.to_string(),
        };
        let mut cur = bytes.as_slice();
        let mut take = |n: usize| -> Result<&[u8], OracleError> {
            if cur.len() < n {
                return Err(bad("truncated"));
            }
            let (head, tail) = cur.split_at(n);
            cur = tail;
            Ok(head)
        };
        if take(8)? != MAGIC {
            return Err(bad("not an oracle cache"));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let dims = take(2)?;
        let (width, height) = (dims[0] as usize, dims[1] as usize);
        let goal = Board::new(width, height, take(width * height)?.to_vec()).map_err(|e| bad(&e.to_string()))?;
        let count = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        let mut distances = FxHashMap::default();
        distances.reserve(count);
        for _ in 0..count {
            let k = u64::from_le_bytes(take(8)?.try_into().unwrap());
            let d = take(1)?[0];
            distances.insert(k, d);
        }
        if !cur.is_empty() {
            return Err(bad("trailing bytes"));
        }
        Ok(ReachabilitySet { goal, distances })
    }
}

/// Complete BFS from `goal` over legal slides.
pub fn build_reachability(goal: &Board) -> Result<ReachabilitySet, OracleError> {
    if goal.len() > MAX_SLOTS {
        return Err(OracleError::TooLarge(goal.len()));
    }
    let mut distances = FxHashMap::default();
    let mut queue = VecDeque::new();
    distances.insert(key(goal), 0u8);
    queue.push_back((goal.clone(), 0u8));
    while let Some((b, d)) = queue.pop_front() {
        for n in legal_moves(&b) {
            let k = key(&n);
            if let std::collections::hash_map::Entry::Vacant(e) = distances.entry(k) {
                e.insert(d + 1);
                queue.push_back((n, d + 1));
            }
        }
    }
    Ok(ReachabilitySet {
        goal: goal.clone(),
        distances,
    })
}

/// Loads the cache at `path` if it matches `goal`, otherwise builds and writes it.
pub fn cached_reachability(goal: &Board, path: &Path) -> Result<ReachabilitySet, OracleError> {
    if path.exists() {
        let set = ReachabilitySet::load(path)?;
        if set.goal() == goal {
            return Ok(set);
        }
    }
    let set = build_reachability(goal)?;
    set.save(path)?;
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Valid,
    Invalid { index: usize, reason: String },
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

/// Valid iff `steps` starts at `start`, ends at `goal`, and every consecutive
/// pair is one legal slide apart.
pub fn validate_solution(start: &Board, steps: &[Board], goal: &Board) -> Validation {
    let invalid = |index: usize, reason: String| Validation::Invalid { index, reason };
    match steps.first() {
        None => return invalid(0, "empty solution".into()),
        Some(first) if first != start => return invalid(0, format!("starts at {first}, expected {start}")),
        _ => {}
    }
    for (i, pair) in steps.windows(2).enumerate() {
        if !legal_moves(&pair[0]).contains(&pair[1]) {
            return invalid(i + 1, format!("illegal step {} -> {}", pair[0], pair[1]));
        }
    }
    let last = steps.last().unwrap();
    if last != goal {
        return invalid(steps.len() - 1, format!("ends at {last}, expected {goal}"));
    }
    Validation::Valid
}
