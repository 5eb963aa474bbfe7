use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use parapuzzle_bench::{board, rules, REFERENCE_BOARDS};
use parapuzzle_core::clause::literal_signature;
use parapuzzle_core::experiment::{effective_limits, solve_board};
use parapuzzle_core::puzzle::{encode, state_literal};
use parapuzzle_core::syntax::parse_term;
use parapuzzle_core::{build_reachability, paramodulate_given, unify, Board, Clause, Limits, ParaConfig, RuleMode};

fn terms(c: &mut Criterion) {
    let s = parse_term("f(g(x,h(y)),l(a,l(b,l(z,nil))))").unwrap();
    let t = parse_term("f(g(h(c),h(d)),l(a,l(b,l(f(u,v),nil))))").unwrap();
    c.bench_function("unify_nested", |b| b.iter(|| unify(black_box(&s), black_box(&t))));

    let state = state_literal(&board(REFERENCE_BOARDS[3]));
    c.bench_function("signature_ground_state", |b| {
        b.iter(|| literal_signature(black_box(&state)))
    });
    c.bench_function("encode_board", |b| {
        b.iter(|| encode(black_box(&board(REFERENCE_BOARDS[0]))))
    });
}

fn inference(c: &mut Criterion) {
    let cfg = ParaConfig::default();
    let given = Clause::new(state_literal(&board(REFERENCE_BOARDS[1])));
    for mode in [RuleMode::BoundarySafe, RuleMode::PaperFaithful] {
        let usable = rules(mode);
        c.bench_function(&format!("paramodulate_given_{mode}"), |b| {
            b.iter(|| paramodulate_given(black_box(&given), &usable, &cfg))
        });
    }
}

fn solving(c: &mut Criterion) {
    let goal = Board::goal(3, 3).unwrap();
    let limits = effective_limits(Limits::default(), 3, 3);
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let easy = board(REFERENCE_BOARDS[0]);
    group.bench_function("easiest_reference_board", |b| {
        b.iter(|| solve_board(black_box(&easy), &goal, RuleMode::BoundarySafe, limits).unwrap())
    });
    group.bench_function("oracle_3x3", |b| {
        b.iter(|| build_reachability(black_box(&goal)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, terms, inference, solving);
criterion_main!(benches);
