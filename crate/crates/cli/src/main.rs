use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use parapuzzle_core::experiment::{
    effective_limits, emit_csv, emit_sorted_plot, run_experiment, solve_board, summarize, write_plot, ExperimentConfig,
    DEFAULT_COUNT, DEFAULT_MAX_GENERATED,
};
use parapuzzle_core::oracle::{build_reachability, cached_reachability, ReachabilitySet};
use parapuzzle_core::puzzle::{generate_solvable, inversion_tallies, is_solvable, Board, HolePlacement, RuleMode};
use parapuzzle_core::saturation::{format_proof, write_counters, Limits, Outcome, Prover};
use parapuzzle_core::syntax::parse_clause_lists;
use parapuzzle_core::ParaConfig;

const EXIT_USAGE: u8 = 1;
const EXIT_UNSOLVABLE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "parapuzzle",
    version,
    about = "Sliding puzzles solved by unit-equality paramodulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write seeded random solvable boards, one per line.
    Gen {
        #[arg(long, default_value_t = DEFAULT_COUNT)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        shape: Shape,
        /// Place the hole anywhere instead of in the last slot.
        #[arg(long)]
        hole_anywhere: bool,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the inversion breakdown and the solvability verdict.
    Check {
        board: String,
        #[command(flatten)]
        shape: Shape,
    },
    /// Run the prover on one board.
    Solve {
        board: String,
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        prover: ProverArgs,
        /// Print the proof trace.
        #[arg(long)]
        proof: bool,
        /// Print each selected given clause.
        #[arg(long)]
        log_given: bool,
    },
    /// Optimal solution length from breadth-first search.
    Oracle {
        board: String,
        #[command(flatten)]
        shape: Shape,
        /// Read or write the reachability table here.
        #[arg(long)]
        oracle_cache: Option<PathBuf>,
    },
    /// Solve a batch of boards and report clause counts.
    Experiment {
        #[arg(long, default_value_t = DEFAULT_COUNT)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        prover: ProverArgs,
        #[arg(long)]
        hole_anywhere: bool,
        /// Boards file (as written by `gen`) to use instead of generating.
        #[arg(long)]
        boards: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Writes <prefix>_by_index.dat and <prefix>_sorted.dat.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Write the summary as JSON.
        #[arg(long)]
        summary_json: Option<PathBuf>,
        /// Record wall-clock milliseconds in the CSV (makes it nondeterministic).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        oracle_cache: Option<PathBuf>,
        /// Solve one board at a time.
        #[arg(long)]
        serial: bool,
    },
    /// Run the prover on a clause-list file with exactly one negative clause.
    Prove {
        file: PathBuf,
        #[command(flatten)]
        prover: ProverArgs,
        #[arg(long)]
        log_given: bool,
    },
}

#[derive(Args, Clone)]
struct Shape {
    #[arg(long, default_value_t = 3)]
    width: usize,
    #[arg(long, default_value_t = 3)]
    height: usize,
    /// Goal board; tiles in order with the hole last by default.
    #[arg(long)]
    goal: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    BoundarySafe,
    PaperFaithful,
}

impl From<ModeArg> for RuleMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::BoundarySafe => RuleMode::BoundarySafe,
            ModeArg::PaperFaithful => RuleMode::PaperFaithful,
        }
    }
}

#[derive(Args, Clone)]
struct ProverArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::BoundarySafe)]
    rule_mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_MAX_GENERATED)]
    max_generated: u64,
    #[arg(long)]
    max_kept: Option<u64>,
    #[arg(long)]
    max_given: Option<u64>,
    /// Derived clauses heavier than this are discarded; defaults to the
    /// ground state weight plus a small margin.
    #[arg(long)]
    max_weight: Option<u32>,
}

impl ProverArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_generated: Some(self.max_generated),
            max_kept: self.max_kept,
            max_given: self.max_given,
            max_weight: self.max_weight,
        }
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Gen {
            count,
            seed,
            shape,
            hole_anywhere,
            output,
        } => gen(count, seed, &shape, placement(hole_anywhere), output.as_deref()),
        Command::Check { board, shape } => check(&board, &shape),
        Command::Solve {
            board,
            shape,
            prover,
            proof,
            log_given,
        } => solve(&board, &shape, &prover, proof, log_given),
        Command::Oracle {
            board,
            shape,
            oracle_cache,
        } => oracle(&board, &shape, oracle_cache.as_deref()),
        Command::Experiment {
            count,
            seed,
            shape,
            prover,
            hole_anywhere,
            boards,
            csv,
            plot,
            summary_json,
            timing,
            oracle_cache,
            serial,
        } => {
            let boards = boards.map(|p| read_boards(&p, &shape)).transpose()?;
            let cfg = ExperimentConfig {
                count,
                seed,
                width: shape.width,
                height: shape.height,
                goal: Some(goal_board(&shape)?),
                rule_mode: prover.rule_mode.into(),
                limits: prover.limits(),
                placement: placement(hole_anywhere),
                boards,
                oracle_cache,
                parallel: !serial,
            };
            experiment(&cfg, csv.as_deref(), plot.as_deref(), summary_json.as_deref(), timing)
        }
        Command::Prove {
            file,
            prover,
            log_given,
        } => prove(&file, &prover, log_given),
    }
}

fn placement(anywhere: bool) -> HolePlacement {
    if anywhere {
        HolePlacement::Anywhere
    } else {
        HolePlacement::LastSlot
    }
}

fn parse_board(text: &str, shape: &Shape) -> Result<Board, Failure> {
    let b = Board::parse(text, Some(shape.width)).map_err(usage)?;
    if b.height() != shape.height {
        return Err(usage(format!(
            "board {b} has {} rows, expected {}",
            b.height(),
            shape.height
        )));
    }
    Ok(b)
}

fn goal_board(shape: &Shape) -> Result<Board, Failure> {
    match &shape.goal {
        Some(text) => parse_board(text, shape),
        None => Board::goal(shape.width, shape.height).map_err(usage),
    }
}

fn read_boards(path: &Path, shape: &Shape) -> Result<Vec<Board>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_board(l, shape))
        .collect()
}

fn io_failure(e: io::Error) -> Failure {
    if e.kind() == io::ErrorKind::BrokenPipe {
        return Failure {
            code: 0,
            message: String::new(),
        };
    }
    usage(e)
}

fn gen(count: usize, seed: u64, shape: &Shape, placement: HolePlacement, output: Option<&Path>) -> CmdResult {
    let goal = goal_board(shape)?;
    let boards = generate_solvable(count, seed, &goal, placement).map_err(usage)?;
    let text: String = boards.iter().map(|b| format!("{b}\n")).collect();
    match output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(text.as_bytes()).map_err(io_failure)?,
    }
    Ok(0)
}

fn check(text: &str, shape: &Shape) -> CmdResult {
    let board = parse_board(text, shape)?;
    let goal = goal_board(shape)?;
    println!("board: [{board}]");
    let tallies = inversion_tallies(&board);
    for (i, t) in tallies.iter().enumerate() {
        let list = if t.precedes.is_empty() {
            "none".to_string()
        } else {
            t.precedes.iter().map(u8::to_string).collect::<Vec<_>>().join(", ")
        };
        println!(
            "{}. {} precedes {list} - {} inversions",
            i + 1,
            t.tile,
            t.precedes.len()
        );
    }
    let total: usize = tallies.iter().map(|t| t.precedes.len()).sum();
    let terms: Vec<String> = tallies.iter().map(|t| t.precedes.len().to_string()).collect();
    let parity = if total.is_multiple_of(2) { "even" } else { "odd" };
    println!("total inversions {} = {total} ({parity})", terms.join("+"));
    let solvable = is_solvable(&board, &goal).map_err(usage)?;
    println!("{}", if solvable { "SOLVABLE" } else { "UNSOLVABLE" });
    Ok(0)
}

fn limit_exit(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::ProofFound => 0,
        Outcome::SosExhausted | Outcome::LimitHit(_) => EXIT_LIMIT,
    }
}

fn solve(text: &str, shape: &Shape, args: &ProverArgs, show_proof: bool, log_given: bool) -> CmdResult {
    let board = parse_board(text, shape)?;
    let goal = goal_board(shape)?;
    if !is_solvable(&board, &goal).map_err(usage)? {
        return Err(Failure {
            code: EXIT_UNSOLVABLE,
            message: format!("board {board} cannot reach {goal}"),
        });
    }
    let limits = effective_limits(args.limits(), shape.width, shape.height);
    let mode: RuleMode = args.rule_mode.into();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let (result, solution) = if log_given {
        let problem = parapuzzle_core::puzzle::puzzle_problem(&board, &goal, mode).map_err(usage)?;
        let mut prover =
            Prover::new(problem.usable, problem.sos, problem.goal, limits, ParaConfig::default()).map_err(usage)?;
        let result = prover.run_logged(&mut out).map_err(io_failure)?;
        let solution = match &result.proof {
            Some(p) => Some(parapuzzle_core::extract_solution(&p.clauses, shape.width, shape.height).map_err(usage)?),
            None => None,
        };
        (result, solution)
    } else {
        let solved = solve_board(&board, &goal, mode, limits).map_err(usage)?;
        write_counters(&mut out, &solved.result).map_err(io_failure)?;
        (solved.result, solved.solution)
    };
    if show_proof {
        if let Some(p) = &result.proof {
            write!(out, "{}", format_proof(p)).map_err(io_failure)?;
        }
    }
    if let Some(steps) = solution {
        writeln!(out, "solution ({} moves):", steps.len() - 1).map_err(io_failure)?;
        for b in &steps {
            writeln!(out, "  {b}").map_err(io_failure)?;
        }
    }
    Ok(limit_exit(result.outcome))
}

fn load_oracle(goal: &Board, cache: Option<&Path>) -> Result<ReachabilitySet, Failure> {
    match cache {
        Some(path) => cached_reachability(goal, path),
        None => build_reachability(goal),
    }
    .map_err(usage)
}

fn oracle(text: &str, shape: &Shape, cache: Option<&Path>) -> CmdResult {
    let board = parse_board(text, shape)?;
    let goal = goal_board(shape)?;
    let set = load_oracle(&goal, cache)?;
    match set.optimal_length(&board) {
        Some(d) => {
            println!("optimal length: {d}");
            Ok(0)
        }
        None => {
            println!("unreachable");
            Ok(EXIT_UNSOLVABLE)
        }
    }
}

fn experiment(
    cfg: &ExperimentConfig,
    csv: Option<&Path>,
    plot: Option<&Path>,
    summary_json: Option<&Path>,
    timing: bool,
) -> CmdResult {
    let records = run_experiment(cfg).map_err(usage)?;
    if let Some(path) = csv {
        emit_csv(&records, path, timing).map_err(usage)?;
    }
    if let Some(prefix) = plot {
        write_plot(&emit_sorted_plot(&records), prefix).map_err(usage)?;
    }
    let invalid: Vec<usize> = records
        .iter()
        .filter(|r| r.solution_valid == Some(false))
        .map(|r| r.puzzle_index)
        .collect();
    if !invalid.is_empty() {
        eprintln!("warning: invalid solutions for puzzles {invalid:?}");
    }
    if records.is_empty() {
        println!("no puzzles");
        return Ok(0);
    }
    let summary = summarize(&records).map_err(usage)?;
    print!("{summary}");
    if let Some(path) = summary_json {
        fs::write(path, summary.to_json() + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(
        if records.iter().all(|r| r.outcome == Outcome::ProofFound) && invalid.is_empty() {
            0
        } else {
            EXIT_LIMIT
        },
    )
}

fn prove(file: &Path, args: &ProverArgs, log_given: bool) -> CmdResult {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let lists = parse_clause_lists(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let mut goals = lists.usable.iter().chain(&lists.sos).filter(|c| !c.literal.positive);
    let goal = match (goals.next(), goals.next()) {
        (Some(g), None) => g.clone(),
        _ => return Err(usage("expected exactly one negative clause")),
    };
    let usable = lists.usable.into_iter().filter(|c| c.literal.positive).collect();
    let sos = lists.sos.into_iter().filter(|c| c.literal.positive).collect();
    let mut prover = Prover::new(usable, sos, goal, args.limits(), ParaConfig::default()).map_err(usage)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = if log_given {
        prover.run_logged(&mut out).map_err(io_failure)?
    } else {
        let result = prover.run();
        write_counters(&mut out, &result).map_err(io_failure)?;
        result
    };
    if let Some(p) = &result.proof {
        write!(out, "{}", format_proof(p)).map_err(io_failure)?;
    }
    Ok(limit_exit(result.outcome))
}
