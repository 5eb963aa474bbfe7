//! Batch experiment: generate solvable boards, measure each with the prover,
//! validate against the oracle, and emit CSV, plot series and a summary.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ExperimentError, PuzzleError};
use crate::inference::ParaConfig;
use crate::oracle::{build_reachability, cached_reachability, validate_solution, ReachabilitySet};
use crate::puzzle::{default_max_weight, generate_solvable, puzzle_problem, Board, HolePlacement, RuleMode};
use crate::saturation::{extract_solution, Limits, Outcome, Prover, ProverResult};

pub const DEFAULT_COUNT: usize = 100;
pub const DEFAULT_MAX_GENERATED: u64 = 5_000_000;

pub const CSV_HEADER: &str =
    "index,board,rule_mode,outcome,generated,kept,given,solution_length,optimal_length,wall_ms";

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub count: usize,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    /// Defaults to tiles in order with the hole last.
    pub goal: Option<Board>,
    pub rule_mode: RuleMode,
    /// A missing `max_weight` is filled in from the board shape.
    pub limits: Limits,
    pub placement: HolePlacement,
    /// Explicit boards to measure instead of generated ones.
    pub boards: Option<Vec<Board>>,
    pub oracle_cache: Option<PathBuf>,
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            count: DEFAULT_COUNT,
            seed: 0,
            width: 3,
            height: 3,
            goal: None,
            rule_mode: RuleMode::BoundarySafe,
            limits: Limits {
                max_generated: Some(DEFAULT_MAX_GENERATED),
                ..Limits::default()
            },
            placement: HolePlacement::LastSlot,
            boards: None,
            oracle_cache: None,
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    pub fn goal_board(&self) -> Result<Board, ExperimentError> {
        let goal = match &self.goal {
            Some(g) => g.clone(),
            None => Board::goal(self.width, self.height)?,
        };
        if goal.width() != self.width || goal.height() != self.height {
            return Err(ExperimentError::Config(format!(
                "goal {goal} does not have shape {}x{}",
                self.width, self.height
            )));
        }
        Ok(goal)
    }

    pub fn effective_limits(&self) -> Limits {
        effective_limits(self.limits, self.width, self.height)
    }
}

pub fn effective_limits(limits: Limits, width: usize, height: usize) -> Limits {
    Limits {
        max_weight: Some(limits.max_weight.unwrap_or_else(|| default_max_weight(width, height))),
        ..limits
    }
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub puzzle_index: usize,
    pub board: Board,
    pub rule_mode: RuleMode,
    pub outcome: Outcome,
    pub generated: u64,
    pub kept: u64,
    pub given: u64,
    pub solution_length: Option<u32>,
    pub optimal_length: Option<u32>,
    pub wall_time: Duration,
    /// Oracle verdict on the extracted solution, when a proof was found.
    pub solution_valid: Option<bool>,
}

/// A single prover run on one board, with the decoded solution.
#[derive(Clone, Debug)]
pub struct Solved {
    pub result: ProverResult,
    pub solution: Option<Vec<Board>>,
    pub wall_time: Duration,
}

pub fn solve_board(board: &Board, goal: &Board, mode: RuleMode, limits: Limits) -> Result<Solved, PuzzleError> {
    let problem = puzzle_problem(board, goal, mode)?;
    let started = Instant::now();
    let mut prover = Prover::new(problem.usable, problem.sos, problem.goal, limits, ParaConfig::default())
        .expect("puzzle problems are well formed");
    let result = prover.run();
    let wall_time = started.elapsed();
    let solution = match &result.proof {
        Some(proof) => Some(extract_solution(&proof.clauses, board.width(), board.height())?),
        None => None,
    };
    Ok(Solved {
        result,
        solution,
        wall_time,
    })
}

fn measure(
    index: usize,
    board: &Board,
    goal: &Board,
    mode: RuleMode,
    limits: Limits,
    oracle: &ReachabilitySet,
) -> Result<RunRecord, PuzzleError> {
    let solved = solve_board(board, goal, mode, limits)?;
    let solution_valid = solved
        .solution
        .as_ref()
        .map(|steps| validate_solution(board, steps, goal).is_valid());
    let c = solved.result.counters;
    Ok(RunRecord {
        puzzle_index: index,
        board: board.clone(),
        rule_mode: mode,
        outcome: solved.result.outcome,
        generated: c.generated,
        kept: c.kept,
        given: c.given,
        solution_length: solved.solution.as_ref().map(|s| s.len() as u32 - 1),
        optimal_length: oracle.optimal_length(board),
        wall_time: solved.wall_time,
        solution_valid,
    })
}

/// Measures every board of the experiment, in generation order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>, ExperimentError> {
    let goal = cfg.goal_board()?;
    let boards = match &cfg.boards {
        Some(boards) => {
            if let Some(b) = boards
                .iter()
                .find(|b| b.width() != cfg.width || b.height() != cfg.height)
            {
                return Err(ExperimentError::Config(format!(
                    "board {b} does not have shape {}x{}",
                    cfg.width, cfg.height
                )));
            }
            boards.clone()
        }
        None => generate_solvable(cfg.count, cfg.seed, &goal, cfg.placement)?,
    };
    if boards.is_empty() {
        return Ok(Vec::new());
    }
    let oracle = match &cfg.oracle_cache {
        Some(path) => cached_reachability(&goal, path)?,
        None => build_reachability(&goal)?,
    };
    let limits = cfg.effective_limits();
    let run = |(i, b): (usize, &Board)| measure(i, b, &goal, cfg.rule_mode, limits, &oracle);
    let records: Result<Vec<RunRecord>, PuzzleError> = if cfg.parallel {
        boards.par_iter().enumerate().map(run).collect()
    } else {
        boards.iter().enumerate().map(run).collect()
    };
    Ok(records?)
}

fn opt<T: fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the CSV. Wall-clock times are left empty unless `timing` is set,
/// so that repeated runs produce identical bytes.
pub fn write_csv<W: Write>(records: &[RunRecord], out: &mut W, timing: bool) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let wall = if timing {
            format!("{:.3}", r.wall_time.as_secs_f64() * 1000.0)
        } else {
            String::new()
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.puzzle_index,
            r.board.to_dashed(),
            r.rule_mode,
            r.outcome,
            r.generated,
            r.kept,
            r.given,
            opt(r.solution_length),
            opt(r.optimal_length),
            wall
        )?;
    }
    Ok(())
}

pub fn emit_csv(records: &[RunRecord], path: &Path, timing: bool) -> Result<(), ExperimentError> {
    let io_err = |source| ExperimentError::Io {
        path: path.to_owned(),
        source,
    };
    let mut file = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    write_csv(records, &mut file, timing).map_err(io_err)?;
    file.flush().map_err(io_err)
}

/// Scalar fields of one CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub index: usize,
    pub board: Board,
    pub rule_mode: RuleMode,
    pub outcome: Outcome,
    pub generated: u64,
    pub kept: u64,
    pub given: u64,
    pub solution_length: Option<u32>,
    pub optimal_length: Option<u32>,
    pub wall_ms: Option<f64>,
}

impl CsvRow {
    pub fn matches(&self, r: &RunRecord) -> bool {
        self.index == r.puzzle_index
            && self.board == r.board
            && self.rule_mode == r.rule_mode
            && self.outcome == r.outcome
            && self.generated == r.generated
            && self.kept == r.kept
            && self.given == r.given
            && self.solution_length == r.solution_length
            && self.optimal_length == r.optimal_length
    }
}

pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<CsvRow>, ExperimentError> {
    let err = |line: usize, message: String| ExperimentError::Csv {
        path: path.to_owned(),
        line,
        message,
    };
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(err(1, "unexpected header".into()));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(n, format!("expected 10 fields, found {}", f.len())));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| err(n, format!("{s:?}: {e}")));
        let opt_u32 = |s: &str| -> Result<Option<u32>, ExperimentError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|e| err(n, format!("{s:?}: {e}")))
            }
        };
        rows.push(CsvRow {
            index: num(f[0])? as usize,
            board: Board::parse(f[1], None).map_err(|e| err(n, e.to_string()))?,
            rule_mode: f[2].parse().map_err(|e: String| err(n, e))?,
            outcome: Outcome::from_tag(f[3]).ok_or_else(|| err(n, format!("unknown outcome {:?}", f[3])))?,
            generated: num(f[4])?,
            kept: num(f[5])?,
            given: num(f[6])?,
            solution_length: opt_u32(f[7])?,
            optimal_length: opt_u32(f[8])?,
            wall_ms: if f[9].is_empty() {
                None
            } else {
                Some(f[9].parse().map_err(|e| err(n, format!("{:?}: {e}", f[9])))?)
            },
        });
    }
    Ok(rows)
}

/// Generated counts in puzzle order and in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotSeries {
    pub by_index: Vec<u64>,
    pub sorted: Vec<u64>,
}

pub fn emit_sorted_plot(records: &[RunRecord]) -> PlotSeries {
    let by_index: Vec<u64> = records.iter().map(|r| r.generated).collect();
    let mut sorted = by_index.clone();
    sorted.sort_unstable();
    PlotSeries { by_index, sorted }
}

/// Writes `<prefix>_by_index.dat` and `<prefix>_sorted.dat` as two-column text.
pub fn write_plot(series: &PlotSeries, prefix: &Path) -> Result<(PathBuf, PathBuf), ExperimentError> {
    let with_suffix = |suffix: &str| {
        let mut name = prefix.as_os_str().to_owned();
        name.push(suffix);
        PathBuf::from(name)
    };
    let write = |path: &Path, header: &str, values: &[u64]| {
        let mut text = format!("# {header}\n");
        for (i, v) in values.iter().enumerate() {
            text.push_str(&format!("{} {v}\n", i + 1));
        }
        fs::write(path, text).map_err(|source| ExperimentError::Io {
            path: path.to_owned(),
            source,
        })
    };
    let a = with_suffix("_by_index.dat");
    let b = with_suffix("_sorted.dat");
    write(&a, "puzzle generated", &series.by_index)?;
    write(&b, "rank generated", &series.sorted)?;
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extreme {
    pub index: usize,
    pub board: String,
    pub generated: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub solved: usize,
    pub easiest: Extreme,
    pub hardest: Extreme,
    /// Hardest over easiest generated count.
    pub ratio: f64,
    pub mean: f64,
    pub median: f64,
    /// Spearman correlation between generated count and optimal length.
    pub spearman: Option<f64>,
}

pub fn summarize(records: &[RunRecord]) -> Result<Summary, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyInput);
    }
    let extreme = |r: &RunRecord| Extreme {
        index: r.puzzle_index,
        board: r.board.to_string(),
        generated: r.generated,
    };
    // Earliest record wins ties on both ends.
    let easiest = records.iter().min_by_key(|r| (r.generated, r.puzzle_index)).unwrap();
    let hardest = records
        .iter()
        .max_by_key(|r| (r.generated, std::cmp::Reverse(r.puzzle_index)))
        .unwrap();
    let counts: Vec<f64> = records.iter().map(|r| r.generated as f64).collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let mut sorted = counts.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    };
    let paired: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.optimal_length.map(|o| (r.generated as f64, o as f64)))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = paired.into_iter().unzip();
    Ok(Summary {
        count: records.len(),
        solved: records.iter().filter(|r| r.outcome == Outcome::ProofFound).count(),
        easiest: extreme(easiest),
        hardest: extreme(hardest),
        ratio: hardest.generated as f64 / easiest.generated as f64,
        mean,
        median,
        spearman: spearman(&xs, &ys),
    })
}

/// Average ranks (1-based), ties sharing the mean of their positions.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation; `None` for fewer than two points or a constant series.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    pearson(&ranks(xs), &ranks(ys))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "puzzles:  {} ({} solved)", self.count, self.solved)?;
        writeln!(
            f,
            "easiest:  {} generated={} (#{})",
            self.easiest.board, self.easiest.generated, self.easiest.index
        )?;
        writeln!(
            f,
            "hardest:  {} generated={} (#{})",
            self.hardest.board, self.hardest.generated, self.hardest.index
        )?;
        writeln!(f, "ratio:    {:.4}", self.ratio)?;
        writeln!(f, "mean:     {:.2}", self.mean)?;
        writeln!(f, "median:   {:.1}", self.median)?;
        match self.spearman {
            Some(rho) => writeln!(f, "spearman: {rho:.4} (generated vs optimal length)"),
            None => writeln!(f, "spearman: n/a"),
        }
    }
}

impl Summary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}
