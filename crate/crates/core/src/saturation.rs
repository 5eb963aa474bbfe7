//! The given-clause loop over a usable list and a weight-ordered set of support.
//!
//! Each iteration selects the lightest set-of-support clause (oldest first on
//! ties), moves it to usable, paramodulates it against usable, and runs every
//! paramodulant through the retention test. A retained clause that unifies
//! with the negated goal ends the search.
//!
//! Counters: `generated` counts every paramodulant handed to the retention
//! test, `kept` those that survive it. The conflicting clause is retained
//! before the conflict test, so `|usable| + |sos| = inputs + kept` holds at
//! every point of the run with no correction term.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;
use std::io::{self, Write};

use crate::clause::{rename_apart, Clause, ClauseDb, ClauseId, ParentRole};
use crate::error::{ProverError, PuzzleError};
use crate::inference::{paramodulate_given, ParaConfig};
use crate::puzzle::{decode_state, Board};
use crate::subst::{unify_args, Substitution};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Limits {
    pub max_generated: Option<u64>,
    pub max_kept: Option<u64>,
    pub max_given: Option<u64>,
    pub max_weight: Option<u32>,
}

impl Limits {
    pub fn unlimited() -> Self {
        Self::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LimitKind {
    MaxGenerated,
    MaxKept,
    MaxGiven,
}

impl LimitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitKind::MaxGenerated => "max_generated",
            LimitKind::MaxKept => "max_kept",
            LimitKind::MaxGiven => "max_given",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    ProofFound,
    SosExhausted,
    LimitHit(LimitKind),
}

impl Outcome {
    /// Stable tag used in CSV output.
    pub fn tag(&self) -> String {
        match self {
            Outcome::ProofFound => "proof_found".into(),
            Outcome::SosExhausted => "sos_exhausted".into(),
            Outcome::LimitHit(k) => format!("limit_hit:{}", k.as_str()),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Outcome> {
        Some(match tag {
            "proof_found" => Outcome::ProofFound,
            "sos_exhausted" => Outcome::SosExhausted,
            "limit_hit:max_generated" => Outcome::LimitHit(LimitKind::MaxGenerated),
            "limit_hit:max_kept" => Outcome::LimitHit(LimitKind::MaxKept),
            "limit_hit:max_given" => Outcome::LimitHit(LimitKind::MaxGiven),
            _ => return None,
        })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Counters {
    pub generated: u64,
    pub kept: u64,
    pub given: u64,
}

/// What one given-clause iteration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GivenRecord {
    pub id: ClauseId,
    /// Paramodulants passed to the retention test (they all count as generated).
    pub processed: u32,
    pub retained: u32,
}

/// A refutation: the ancestors of the conflicting clause in id order (the
/// conflicting clause last) and the negated goal it clashed with.
#[derive(Clone, Debug)]
pub struct Proof {
    pub clauses: Vec<Clause>,
    pub goal: Clause,
    pub unifier: Substitution,
}

impl Proof {
    pub fn conflict(&self) -> &Clause {
        self.clauses.last().expect("a proof has at least one clause")
    }
}

#[derive(Clone, Debug)]
pub struct ProverResult {
    pub outcome: Outcome,
    pub counters: Counters,
    pub proof: Option<Proof>,
    pub given_log: Vec<GivenRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Processed {
    Retained(ClauseId),
    Discarded,
    ProofSignal(ClauseId, Substitution),
}

pub struct Prover {
    /// All registered clauses; the clause with id `k` is at index `k - 1`.
    clauses: Vec<Clause>,
    usable: Vec<ClauseId>,
    usable_ids: BTreeSet<ClauseId>,
    usable_equalities: BTreeSet<ClauseId>,
    sos: BinaryHeap<Reverse<(u32, u64, ClauseId)>>,
    db: ClauseDb,
    goal: Clause,
    input_count: usize,
    counters: Counters,
    limits: Limits,
    config: ParaConfig,
    next_birth: u64,
    given_log: Vec<GivenRecord>,
    finished: Option<ProverResult>,
    started: bool,
}

/// Result of one call to [`Prover::step`].
pub enum Step {
    Continue,
    Done(ProverResult),
}

impl Prover {
    /// Registers the inputs. Ids are assigned in order: usable, then set of
    /// support, then the goal; derived clauses are numbered after them.
    pub fn new(
        input_usable: Vec<Clause>,
        input_sos: Vec<Clause>,
        goal: Clause,
        limits: Limits,
        config: ParaConfig,
    ) -> Result<Prover, ProverError> {
        if goal.literal.positive {
            return Err(ProverError::InvalidInput(format!(
                "goal {goal} must be a negative unit"
            )));
        }
        if let Some(c) = input_usable.iter().chain(&input_sos).find(|c| !c.literal.positive) {
            return Err(ProverError::InvalidInput(format!(
                "only the goal may be negative, found {c}"
            )));
        }
        let mut prover = Prover {
            clauses: Vec::new(),
            usable: Vec::new(),
            usable_ids: BTreeSet::new(),
            usable_equalities: BTreeSet::new(),
            sos: BinaryHeap::new(),
            db: ClauseDb::new(),
            goal: Clause::new(goal.literal.clone()),
            input_count: input_usable.len() + input_sos.len(),
            counters: Counters::default(),
            limits,
            config,
            next_birth: 0,
            given_log: Vec::new(),
            finished: None,
            started: false,
        };
        for c in input_usable {
            let id = prover.register(Clause::new(c.literal));
            prover.add_usable(id);
        }
        for c in input_sos {
            let id = prover.register(Clause::new(c.literal));
            prover.push_sos(id);
        }
        let goal_id = ClauseId(prover.clauses.len() as u32 + 1);
        prover.goal.id = Some(goal_id);
        prover.clauses.push(prover.goal.clone());
        Ok(prover)
    }

    fn register(&mut self, mut c: Clause) -> ClauseId {
        let id = ClauseId(self.clauses.len() as u32 + 1);
        c.id = Some(id);
        c.birth = self.next_birth;
        self.next_birth += 1;
        // Input duplicates stay in their lists; the index keeps the first.
        let _ = self.db.insert(&c.literal, id);
        self.clauses.push(c);
        id
    }

    fn push_sos(&mut self, id: ClauseId) {
        let c = self.clause(id);
        self.sos.push(Reverse((c.weight, c.birth, id)));
    }

    fn add_usable(&mut self, id: ClauseId) {
        self.usable.push(id);
        self.usable_ids.insert(id);
        if self.clause(id).literal.equation().is_some() {
            self.usable_equalities.insert(id);
        }
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id.0 as usize - 1]
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn goal(&self) -> &Clause {
        &self.goal
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    /// Usable clauses in the order they joined the list.
    pub fn usable(&self) -> impl Iterator<Item = &Clause> {
        self.usable.iter().map(|id| self.clause(*id))
    }

    pub fn usable_len(&self) -> usize {
        self.usable.len()
    }

    pub fn sos_len(&self) -> usize {
        self.sos.len()
    }

    pub fn given_log(&self) -> &[GivenRecord] {
        &self.given_log
    }

    /// Removes and returns the lightest set-of-support clause, oldest first on ties.
    pub fn select_given(&mut self) -> Option<ClauseId> {
        self.sos.pop().map(|Reverse((_, _, id))| id)
    }

    fn conflict_with_goal(&self, c: &Clause) -> Option<Substitution> {
        let lit = &c.literal;
        let goal = &self.goal.literal;
        if !lit.positive || lit.predicate != goal.predicate {
            return None;
        }
        let vars = lit.vars();
        let goal = rename_apart(&self.goal, &vars);
        unify_args(&lit.args, &goal.literal.args)
    }

    /// Retention test for a freshly generated clause.
    pub fn process_new(&mut self, c: Clause) -> Processed {
        self.counters.generated += 1;
        if self.limits.max_weight.is_some_and(|w| c.weight > w) {
            return Processed::Discarded;
        }
        if self.db.lookup(&c.literal).is_some() {
            return Processed::Discarded;
        }
        let id = self.register(c);
        self.push_sos(id);
        self.counters.kept += 1;
        match self.conflict_with_goal(self.clause(id)) {
            Some(sigma) => Processed::ProofSignal(id, sigma),
            None => Processed::Retained(id),
        }
    }

    fn limit_hit(&self) -> Option<LimitKind> {
        if self.limits.max_generated.is_some_and(|m| self.counters.generated >= m) {
            Some(LimitKind::MaxGenerated)
        } else if self.limits.max_kept.is_some_and(|m| self.counters.kept >= m) {
            Some(LimitKind::MaxKept)
        } else {
            None
        }
    }

    fn finish(&mut self, outcome: Outcome, proof: Option<Proof>) -> ProverResult {
        let result = ProverResult {
            outcome,
            counters: self.counters,
            proof,
            given_log: self.given_log.clone(),
        };
        self.finished = Some(result.clone());
        result
    }

    fn proof_for(&self, conflict: ClauseId, unifier: Substitution) -> Proof {
        let mut seen = BTreeSet::new();
        let mut stack = vec![conflict];
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.clause(id).parents.iter().map(|(p, _)| *p));
            }
        }
        Proof {
            clauses: seen.into_iter().map(|id| self.clause(id).clone()).collect(),
            goal: self.goal.clone(),
            unifier,
        }
    }

    /// Runs one given-clause iteration (the first call also checks the input
    /// set of support against the goal).
    pub fn step(&mut self) -> Step {
        if let Some(done) = &self.finished {
            return Step::Done(done.clone());
        }
        if !self.started {
            self.started = true;
            let inputs: Vec<ClauseId> = self.sos.iter().map(|Reverse((_, _, id))| *id).collect();
            let mut inputs = inputs;
            inputs.sort();
            for id in inputs {
                if let Some(sigma) = self.conflict_with_goal(self.clause(id)) {
                    let proof = self.proof_for(id, sigma);
                    return Step::Done(self.finish(Outcome::ProofFound, Some(proof)));
                }
            }
        }
        if self.limits.max_given.is_some_and(|m| self.counters.given >= m) {
            return Step::Done(self.finish(Outcome::LimitHit(LimitKind::MaxGiven), None));
        }
        let Some(given_id) = self.select_given() else {
            return Step::Done(self.finish(Outcome::SosExhausted, None));
        };
        self.counters.given += 1;
        self.add_usable(given_id);

        let given = self.clause(given_id);
        // Only equalities can act as from clauses, so a non-equality given
        // meets nothing but the usable equalities.
        let partners = if given.literal.equation().is_some() {
            &self.usable_ids
        } else {
            &self.usable_equalities
        };
        let paramodulants = paramodulate_given(given, partners.iter().map(|id| self.clause(*id)), &self.config);

        let mut record = GivenRecord {
            id: given_id,
            processed: 0,
            retained: 0,
        };
        for p in paramodulants {
            if let Some(kind) = self.limit_hit() {
                self.given_log.push(record);
                return Step::Done(self.finish(Outcome::LimitHit(kind), None));
            }
            record.processed += 1;
            match self.process_new(p.clause) {
                Processed::Discarded => {}
                Processed::Retained(_) => record.retained += 1,
                Processed::ProofSignal(id, sigma) => {
                    record.retained += 1;
                    self.given_log.push(record);
                    let proof = self.proof_for(id, sigma);
                    return Step::Done(self.finish(Outcome::ProofFound, Some(proof)));
                }
            }
        }
        self.given_log.push(record);
        Step::Continue
    }

    pub fn run(&mut self) -> ProverResult {
        loop {
            if let Step::Done(result) = self.step() {
                return result;
            }
        }
    }

    /// Like [`Prover::run`], writing one line per given clause followed by the counters.
    pub fn run_logged<W: Write>(&mut self, out: &mut W) -> io::Result<ProverResult> {
        loop {
            let before = self.given_log.len();
            let step = self.step();
            if let Some(rec) = self.given_log.get(before) {
                let c = self.clause(rec.id);
                writeln!(out, "given #{}: id={} wt={} {}", before + 1, rec.id, c.weight, c)?;
            }
            if let Step::Done(result) = step {
                write_counters(out, &result)?;
                return Ok(result);
            }
        }
    }
}

pub fn write_counters<W: Write>(out: &mut W, result: &ProverResult) -> io::Result<()> {
    writeln!(out, "outcome:   {}", result.outcome)?;
    writeln!(out, "generated: {}", result.counters.generated)?;
    writeln!(out, "kept:      {}", result.counters.kept)?;
    writeln!(out, "given:     {}", result.counters.given)
}

/// Convenience wrapper: builds a prover over the inputs and runs it to completion.
pub fn run(
    input_usable: Vec<Clause>,
    input_sos: Vec<Clause>,
    goal: Clause,
    limits: Limits,
) -> Result<ProverResult, ProverError> {
    Ok(Prover::new(input_usable, input_sos, goal, limits, ParaConfig::default())?.run())
}

/// Proof trace, one clause per line: `<id> [para_from,<from>,<into>] <clause>.`
/// (inputs print `[]`), ending with the goal and the conflict.
pub fn format_proof(proof: &Proof) -> String {
    let mut out = String::new();
    for c in &proof.clauses {
        let id = c.id.map(|i| i.0).unwrap_or(0);
        match (c.parent(ParentRole::From), c.parent(ParentRole::Into)) {
            (Some(from), Some(into)) => out.push_str(&format!("{id} [para_from,{from},{into}] {c}\n")),
            _ => out.push_str(&format!("{id} [] {c}\n")),
        }
    }
    let goal_id = proof.goal.id.map(|i| i.0).unwrap_or(0);
    out.push_str(&format!("{goal_id} [] {}\n", proof.goal));
    out.push_str(&format!(
        "unit conflict: {} with {goal_id}\n",
        proof.conflict().id.map(|i| i.0).unwrap_or(0)
    ));
    out
}

/// Decodes the chain of into-parents ending at the conflicting clause into
/// the sequence of boards from the initial state to the goal.
pub fn extract_solution(proof: &[Clause], width: usize, height: usize) -> Result<Vec<Board>, PuzzleError> {
    let Some(last) = proof.last() else {
        return Ok(Vec::new());
    };
    let find = |id: ClauseId| proof.iter().find(|c| c.id == Some(id));
    let mut boards = Vec::new();
    let mut current = Some(last);
    while let Some(c) = current {
        boards.push(decode_state(&c.literal, width, height)?);
        current = match c.parent(ParentRole::Into) {
            Some(pid) => Some(find(pid).ok_or_else(|| {
                PuzzleError::NotABoard(format!("into-parent {pid} of {c} is missing from the proof"))
            })?),
            None => None,
        };
    }
    boards.reverse();
    Ok(boards)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{legal_moves, puzzle_problem, state_literal, RuleMode};
    use crate::syntax::parse_clause;

    fn c(s: &str) -> Clause {
        parse_clause(s).unwrap()
    }

    fn board(s: &str) -> Board {
        Board::parse(s, None).unwrap()
    }

    fn prover_for(start: &Board, limits: Limits) -> Prover {
        let goal = Board::goal(3, 3).unwrap();
        let p = puzzle_problem(start, &goal, RuleMode::BoundarySafe).unwrap();
        Prover::new(p.usable, p.sos, p.goal, limits, ParaConfig::default()).unwrap()
    }

    #[test]
    fn select_given_order() {
        let mut empty = Prover::new(vec![], vec![], c("-Q(z)."), Limits::default(), ParaConfig::default()).unwrap();
        assert_eq!(empty.select_given(), None);

        // B is older but heavier; A wins on weight.
        let mut p = Prover::new(
            vec![],
            vec![c("B(f(a),b)."), c("A(a,b).")],
            c("-Q(z)."),
            Limits::default(),
            ParaConfig::default(),
        )
        .unwrap();
        assert_eq!(p.select_given(), Some(ClauseId(2)));

        // Equal weights: the earlier birth wins.
        let mut p = Prover::new(
            vec![],
            vec![c("B(a,b)."), c("A(a,b).")],
            c("-Q(z)."),
            Limits::default(),
            ParaConfig::default(),
        )
        .unwrap();
        assert_eq!(p.select_given(), Some(ClauseId(1)));
        assert_eq!(p.select_given(), Some(ClauseId(2)));
        assert_eq!(p.select_given(), None);
    }

    #[test]
    fn process_new_counts() {
        let mut p = Prover::new(
            vec![],
            vec![c("P(a).")],
            c("-Q(b)."),
            Limits::default(),
            ParaConfig::default(),
        )
        .unwrap();
        assert_eq!(p.process_new(c("P(a).")), Processed::Discarded);
        assert_eq!(
            p.counters(),
            Counters {
                generated: 1,
                kept: 0,
                given: 0
            }
        );
        for (i, name) in ["P(b).", "P(c).", "P(d).", "P(e).", "R(x)."].iter().enumerate() {
            assert!(matches!(p.process_new(c(name)), Processed::Retained(ClauseId(id)) if id as usize == 3 + i));
        }
        assert_eq!(p.counters().kept, 5);
        assert_eq!(p.sos_len(), 6);
        assert_eq!(p.process_new(c("R(y).")), Processed::Discarded);
        assert!(matches!(p.process_new(c("Q(b).")), Processed::ProofSignal(..)));
        assert!(matches!(p.process_new(c("Q(z).")), Processed::ProofSignal(..)));
    }

    #[test]
    fn weight_cap_discards() {
        let limits = Limits {
            max_weight: Some(2),
            ..Default::default()
        };
        let mut p = Prover::new(vec![], vec![], c("-Q(b)."), limits, ParaConfig::default()).unwrap();
        assert_eq!(p.process_new(c("P(f(a)).")), Processed::Discarded);
        assert!(matches!(p.process_new(c("P(a).")), Processed::Retained(_)));
    }

    #[test]
    fn invalid_inputs() {
        assert!(run(vec![], vec![], c("Q(a)."), Limits::default()).is_err());
        assert!(run(vec![c("-P(a).")], vec![], c("-Q(a)."), Limits::default()).is_err());
    }

    #[test]
    fn initial_state_is_goal() {
        let goal = Board::goal(3, 3).unwrap();
        let result = prover_for(&goal, Limits::default()).run();
        assert_eq!(result.outcome, Outcome::ProofFound);
        assert_eq!(result.counters, Counters::default());
        let proof = result.proof.unwrap();
        assert_eq!(proof.clauses.len(), 1);
        assert_eq!(extract_solution(&proof.clauses, 3, 3).unwrap(), vec![goal]);
    }

    #[test]
    fn one_move_puzzle() {
        let start = board("1,2,3,4,5,6,7,hole,8");
        let result = prover_for(&start, Limits::default()).run();
        assert_eq!(result.outcome, Outcome::ProofFound);
        let proof = result.proof.unwrap();
        let boards = extract_solution(&proof.clauses, 3, 3).unwrap();
        assert_eq!(boards.len(), 2);
        assert_eq!(boards[0], start);
        assert_eq!(boards[1], Board::goal(3, 3).unwrap());
        assert!(legal_moves(&boards[0]).contains(&boards[1]));
        let trace = format_proof(&proof);
        assert!(trace.contains("[para_from,"), "{trace}");
        assert!(trace.ends_with(&format!("unit conflict: {} with 14\n", proof.conflict().id.unwrap())));
    }

    #[test]
    fn limit_semantics() {
        let start = board("1,2,3,4,5,6,hole,7,8");
        let limits = Limits {
            max_generated: Some(0),
            ..Default::default()
        };
        let result = prover_for(&start, limits).run();
        assert_eq!(result.outcome, Outcome::LimitHit(LimitKind::MaxGenerated));
        assert_eq!(result.counters.generated, 0);

        let limits = Limits {
            max_given: Some(3),
            ..Default::default()
        };
        let result = prover_for(&board("8,7,6,5,4,3,2,1,hole"), limits).run();
        assert_eq!(result.outcome, Outcome::LimitHit(LimitKind::MaxGiven));
        assert_eq!(result.counters.given, 3);

        let limits = Limits {
            max_kept: Some(5),
            ..Default::default()
        };
        let result = prover_for(&board("8,7,6,5,4,3,2,1,hole"), limits).run();
        assert_eq!(result.outcome, Outcome::LimitHit(LimitKind::MaxKept));
        assert_eq!(result.counters.kept, 5);

        // No inference applies: the set of support simply runs dry.
        let result = run(
            vec![],
            vec![c("P(a).")],
            c("-Q(a)."),
            Limits {
                max_generated: Some(0),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(result.outcome, Outcome::SosExhausted);
    }

    #[test]
    fn conservation_and_log() {
        let mut p = prover_for(&board("4,1,3,7,2,6,hole,5,8"), Limits::default());
        loop {
            assert_eq!(
                p.usable_len() + p.sos_len(),
                p.input_count() + p.counters().kept as usize
            );
            if let Step::Done(result) = p.step() {
                assert_eq!(result.outcome, Outcome::ProofFound);
                let processed: u64 = result.given_log.iter().map(|r| r.processed as u64).sum();
                let retained: u64 = result.given_log.iter().map(|r| r.retained as u64).sum();
                assert_eq!(processed, result.counters.generated);
                assert_eq!(retained, result.counters.kept);
                assert_eq!(result.given_log.len() as u64, result.counters.given);
                break;
            }
        }
        assert_eq!(
            p.usable_len() + p.sos_len(),
            p.input_count() + p.counters().kept as usize
        );
    }

    #[test]
    fn logged_run_prints_each_given() {
        let mut p = prover_for(&board("1,2,3,4,5,6,hole,7,8"), Limits::default());
        let mut out = Vec::new();
        let result = p.run_logged(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(&format!(
            "given #1: id=13 wt=28 {}.\n",
            state_literal(&board("1,2,3,4,5,6,hole,7,8"))
        )));
        assert_eq!(text.matches("given #").count() as u64, result.counters.given);
        assert!(text.contains(&format!("generated: {}\n", result.counters.generated)));
    }

    #[test]
    fn deterministic() {
        let start = board("2,3,6,1,7,8,5,4,hole");
        let a = prover_for(&start, Limits::default()).run();
        let b = prover_for(&start, Limits::default()).run();
        assert_eq!(a.counters, b.counters);
        assert_eq!(a.given_log, b.given_log);
        let pa: Vec<String> = a.proof.unwrap().clauses.iter().map(|c| c.to_string()).collect();
        let pb: Vec<String> = b.proof.unwrap().clauses.iter().map(|c| c.to_string()).collect();
        assert_eq!(pa, pb);
    }

    #[test]
    fn extract_rejects_non_ground_chain() {
        let proof = vec![c("State(l(hole,y)).").with_id(1)];
        assert!(matches!(
            extract_solution(&proof, 2, 2),
            Err(PuzzleError::NonGroundState(_))
        ));
    }
}
