use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parapuzzle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_prints_the_inversion_breakdown() {
    let o = run(&["check", "2,3,6,1,7,8,5,4,hole"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("3. 6 precedes 1, 5, 4 - 3 inversions"));
    assert!(text.contains("4. 1 precedes none - 0 inversions"));
    assert!(text.contains("1+1+3+0+2+2+1+0 = 10"));
    assert!(text.trim_end().ends_with("SOLVABLE"));

    let o = run(&["check", "2,1,3,4,5,6,7,8,hole"]);
    assert!(stdout(&o).trim_end().ends_with("UNSOLVABLE"));
}

#[test]
fn solve_reports_counters_and_solution() {
    let o = run(&["solve", "1,2,3,4,5,6,7,hole,8", "--proof"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("outcome:   proof_found"));
    assert!(text.contains("generated: "));
    assert!(text.contains("unit conflict: "));
    assert!(text.contains("solution (1 moves):"));
    assert!(text.contains("  1,2,3,4,5,6,7,8,hole"));
}

#[test]
fn solve_logs_given_clauses() {
    let o = run(&["solve", "1,2,3,4,5,6,hole,7,8", "--log-given"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("given #1: id=13 wt=28 State("));
    assert!(text.contains("given #2: "));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["solve", "2,1,3,4,5,6,7,8,hole"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "8,7,6,5,4,3,2,1,hole", "--max-generated", "100"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(run(&["solve", "1,2,3"]).status.code(), Some(1));
    assert_eq!(run(&["solve"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["solve", "1,2,3,4,5,6,7,8,hole", "--rule-mode", "sideways"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_reports_optimal_length() {
    let o = run(&["oracle", "2,3,6,1,7,8,5,4,hole"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "optimal length: 12");
    let o = run(&["oracle", "2,1", "--width", "2", "--height", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gen_is_seeded() {
    let a = stdout(&run(&["gen", "--count", "5", "--seed", "11"]));
    let b = stdout(&run(&["gen", "--count", "5", "--seed", "11"]));
    let c = stdout(&run(&["gen", "--count", "5", "--seed", "12"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 5);
    assert!(a.lines().all(|l| l.ends_with(",hole")));
}

#[test]
fn experiment_writes_csv_plot_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let boards = dir.path().join("boards.txt");
    let csv = dir.path().join("run.csv");
    let prefix = dir.path().join("fig");
    let json = dir.path().join("summary.json");
    let g = run(&[
        "gen",
        "--count",
        "4",
        "--seed",
        "3",
        "--output",
        boards.to_str().unwrap(),
    ]);
    assert_eq!(g.status.code(), Some(0));
    let o = run(&[
        "experiment",
        "--boards",
        boards.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--plot",
        prefix.to_str().unwrap(),
        "--summary-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("puzzles:  4 (4 solved)"));

    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 5);
    assert!(table
        .starts_with("index,board,rule_mode,outcome,generated,kept,given,solution_length,optimal_length,wall_ms\n"));
    let first_board = fs::read_to_string(&boards)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .replace(',', "-");
    assert!(table
        .lines()
        .nth(1)
        .unwrap()
        .starts_with(&format!("0,{first_board},boundary-safe,proof_found,")));
    assert!(table.lines().skip(1).all(|l| l.ends_with(',')));

    let sorted = fs::read_to_string(dir.path().join("fig_sorted.dat")).unwrap();
    let values: Vec<u64> = sorted
        .lines()
        .skip(1)
        .map(|l| l.split(' ').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 4);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert!(dir.path().join("fig_by_index.dat").exists());

    let summary = fs::read_to_string(&json).unwrap();
    assert!(summary.contains("\"ratio\""));
    assert!(summary.contains(&format!("\"generated\": {}", values[0])));
}

#[test]
fn prove_reads_clause_lists() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("input.in");
    fs::write(
        &file,
        "% rewriting with a single equation\n\
         list(usable).\nEQUAL(g(a),b).\nend_of_list.\n\
         list(sos).\nQ(g(f(g(a)))).\n-Q(g(f(b))).\nend_of_list.\n",
    )
    .unwrap();
    let o = run(&["prove", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("outcome:   proof_found"));
    assert!(text.contains("[para_from,1,2] Q(g(f(b)))."));

    fs::write(&file, "list(sos).\nQ(a).\nend_of_list.\n").unwrap();
    assert_eq!(run(&["prove", file.to_str().unwrap()]).status.code(), Some(1));
}
