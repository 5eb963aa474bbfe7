//! Unit clauses, weights, renaming apart, and variant detection.

use std::fmt;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;

use crate::symbol::Symbol;
use crate::term::Term;

pub const EQUAL: &str = "EQUAL";

pub fn equal_symbol() -> Symbol {
    static EQ: OnceLock<Symbol> = OnceLock::new();
    *EQ.get_or_init(|| Symbol::intern(EQUAL))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u32);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParentRole {
    From,
    Into,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub positive: bool,
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, predicate: &str, args: Vec<Term>) -> Self {
        Literal {
            positive,
            predicate: Symbol::intern(predicate),
            args,
        }
    }

    pub fn atom(predicate: &str, args: Vec<Term>) -> Self {
        Literal::new(true, predicate, args)
    }

    pub fn equality(lhs: Term, rhs: Term) -> Self {
        Literal {
            positive: true,
            predicate: equal_symbol(),
            args: vec![lhs, rhs],
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            positive: !self.positive,
            ..self.clone()
        }
    }

    pub fn is_equality(&self) -> bool {
        self.predicate == equal_symbol() && self.args.len() == 2
    }

    /// Sides of a positive equality.
    pub fn equation(&self) -> Option<(&Term, &Term)> {
        (self.positive && self.is_equality()).then(|| (&self.args[0], &self.args[1]))
    }

    pub fn weight(&self) -> u32 {
        1 + self.args.iter().map(Term::symbol_count).sum::<usize>() as u32
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        for a in &self.args {
            a.collect_vars(&mut out);
        }
        out
    }

    /// The subterm at a literal position; the first index selects the argument.
    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let (&i, rest) = path.split_first()?;
        self.args.get(i)?.subterm(rest)
    }

    pub fn replace_at(&self, path: &[usize], with: Term) -> Literal {
        let (&i, rest) = path.split_first().expect("literal positions are never empty");
        let mut args = self.args.clone();
        args[i] = args[i].replace_at(rest, with);
        Literal { args, ..self.clone() }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Literal {
        Literal {
            positive: self.positive,
            predicate: self.predicate,
            args: self.args.iter().map(&mut f).collect(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        f.write_str(self.predicate.as_str())?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A unit clause.
///
/// `id` and `birth` are assigned when the clause is registered with a prover;
/// an input clause has no parents.
#[derive(Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: Option<ClauseId>,
    pub literal: Literal,
    pub parents: Vec<(ClauseId, ParentRole)>,
    pub weight: u32,
    pub birth: u64,
}

impl Clause {
    pub fn new(literal: Literal) -> Self {
        let weight = literal.weight();
        Clause {
            id: None,
            literal,
            parents: Vec::new(),
            weight,
            birth: 0,
        }
    }

    pub fn with_parents(literal: Literal, parents: Vec<(ClauseId, ParentRole)>) -> Self {
        Clause {
            parents,
            ..Clause::new(literal)
        }
    }

    pub fn with_id(mut self, id: u32) -> Self {
        self.id = Some(ClauseId(id));
        self
    }

    pub fn is_input(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn parent(&self, role: ParentRole) -> Option<ClauseId> {
        self.parents.iter().find(|(_, r)| *r == role).map(|(id, _)| *id)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.", self.literal)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            Some(id) => write!(f, "#{id} {self}"),
            None => write!(f, "{self}"),
        }
    }
}

/// Symbol-count weight of a clause.
pub fn weigh(c: &Clause) -> u32 {
    c.literal.weight()
}

fn fresh_name(base: Symbol, taken: &dyn Fn(Symbol) -> bool) -> Symbol {
    let letter: String = base.as_str().chars().take_while(|c| !c.is_ascii_digit()).collect();
    (1u32..)
        .map(|k| Symbol::intern(&format!("{letter}{k}")))
        .find(|s| !taken(*s))
        .expect("unbounded name supply")
}

/// Returns a variant of `c` whose variables avoid `avoid`.
///
/// Only colliding variables are renamed; each gets the first free name formed
/// from its own letter plus a counter (`x` becomes `x1`, then `x2`, ...).
pub fn rename_apart(c: &Clause, avoid: &[Symbol]) -> Clause {
    if avoid.is_empty() {
        return c.clone();
    }
    let vars = c.literal.vars();
    if !vars.iter().any(|v| avoid.contains(v)) {
        return c.clone();
    }
    let mut mapping: Vec<(Symbol, Symbol)> = Vec::new();
    for &v in &vars {
        if !avoid.contains(&v) {
            continue;
        }
        let fresh = fresh_name(v, &|s| {
            avoid.contains(&s) || vars.contains(&s) || mapping.iter().any(|(_, m)| *m == s)
        });
        mapping.push((v, fresh));
    }
    let literal = c.literal.map_terms(|t| rename_vars(t, &mapping));
    Clause { literal, ..c.clone() }
}

fn rename_vars(t: &Term, mapping: &[(Symbol, Symbol)]) -> Term {
    match t {
        Term::Var(v) => match mapping.iter().find(|(from, _)| from == v) {
            Some((_, to)) => Term::Var(*to),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| rename_vars(a, mapping)).collect()),
    }
}

/// True iff `a` and `b` are equal up to a bijective renaming of variables.
pub fn is_variant(a: &Clause, b: &Clause) -> bool {
    literal_is_variant(&a.literal, &b.literal)
}

pub fn literal_is_variant(a: &Literal, b: &Literal) -> bool {
    if a.positive != b.positive || a.predicate != b.predicate || a.args.len() != b.args.len() {
        return false;
    }
    let mut forward = FxHashMap::default();
    let mut backward = FxHashMap::default();
    a.args
        .iter()
        .zip(&b.args)
        .all(|(x, y)| variant_terms(x, y, &mut forward, &mut backward))
}

fn variant_terms(
    a: &Term,
    b: &Term,
    forward: &mut FxHashMap<Symbol, Symbol>,
    backward: &mut FxHashMap<Symbol, Symbol>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let fx = *forward.entry(*x).or_insert(*y);
            let by = *backward.entry(*y).or_insert(*x);
            fx == *y && by == *x
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g
                && fa.len() == ga.len()
                && fa
                    .iter()
                    .zip(ga.iter())
                    .all(|(x, y)| variant_terms(x, y, forward, backward))
        }
        _ => false,
    }
}

/// Variant-invariant key: the literal with its variables renamed to a fixed
/// sequence in first-occurrence order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Signature(Literal);

fn canonical_var(i: usize) -> Symbol {
    static CACHE: OnceLock<Vec<Symbol>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..32).map(|k| Symbol::intern(&format!("v{k}"))).collect());
    cache
        .get(i)
        .copied()
        .unwrap_or_else(|| Symbol::intern(&format!("v{i}")))
}

pub fn canonical_signature(c: &Clause) -> Signature {
    literal_signature(&c.literal)
}

pub fn literal_signature(lit: &Literal) -> Signature {
    if lit.is_ground() {
        return Signature(lit.clone());
    }
    let mapping: Vec<(Symbol, Symbol)> = lit
        .vars()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, canonical_var(i)))
        .collect();
    Signature(lit.map_terms(|t| rename_vars(t, &mapping)))
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Retained clauses keyed by variant signature.
#[derive(Default)]
pub struct ClauseDb {
    index: FxHashMap<Signature, ClauseId>,
}

impl ClauseDb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// The retained clause that `lit` is a variant of, if any.
    pub fn lookup(&self, lit: &Literal) -> Option<ClauseId> {
        self.index.get(&literal_signature(lit)).copied()
    }

    /// Registers `lit` under `id`; returns the existing id if a variant is already present.
    pub fn insert(&mut self, lit: &Literal, id: ClauseId) -> Result<(), ClauseId> {
        use std::collections::hash_map::Entry;
        match self.index.entry(literal_signature(lit)) {
            Entry::Occupied(e) => Err(*e.get()),
            Entry::Vacant(e) => {
                e.insert(id);
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::unify_args;
    use crate::syntax::parse_clause;
    use proptest::prelude::*;

    fn c(s: &str) -> Clause {
        parse_clause(s).unwrap()
    }

    fn syms(names: &[&str]) -> Vec<Symbol> {
        names.iter().map(|n| Symbol::intern(n)).collect()
    }

    #[test]
    fn weights() {
        assert_eq!(weigh(&c("EQUAL(a,b).")), 3);
        assert_eq!(weigh(&c("Q(g(f(b))).")), 4);
        assert_eq!(weigh(&c("EQUAL(l(hole,l(n(x),y)),l(n(x),l(hole,y))).")), 13);
    }

    #[test]
    fn rename_apart_examples() {
        let ground = c("EQUAL(a,b).");
        assert_eq!(rename_apart(&ground, &syms(&["x"])), ground);

        assert_eq!(rename_apart(&c("Q(x)."), &syms(&["x"])).to_string(), "Q(x1).");

        let rule = c("EQUAL(l(hole,l(n(x),y)),l(n(x),l(hole,y))).");
        let renamed = rename_apart(&rule, &syms(&["x", "y"]));
        assert_eq!(renamed.to_string(), "EQUAL(l(hole,l(n(x1),y1)),l(n(x1),l(hole,y1))).");
        let vars = renamed.literal.vars();
        assert_eq!(vars.len(), 2);
        assert!(vars.iter().all(|v| !syms(&["x", "y"]).contains(v)));
        // Original and renamed unify through a pure variable renaming.
        let sigma = unify_args(&rule.literal.args, &renamed.literal.args).unwrap();
        assert_eq!(sigma.len(), 2);
        assert!(sigma.iter().all(|(_, t)| t.is_var()));
        assert!(is_variant(&rule, &renamed));
    }

    #[test]
    fn rename_apart_skips_names_already_in_clause() {
        let clause = c("P(x,x1).");
        let renamed = rename_apart(&clause, &syms(&["x"]));
        assert_eq!(renamed.to_string(), "P(x2,x1).");
    }

    #[test]
    fn variant_examples() {
        assert!(is_variant(&c("Q(x)."), &c("Q(y).")));
        assert!(!is_variant(&c("Q(x)."), &c("Q(a).")));
        // Swapping the two variables is a bijective renaming.
        assert!(is_variant(&c("EQUAL(x,y)."), &c("EQUAL(y,x).")));
        // Orientation is syntactic: the sides are not interchangeable.
        assert!(!is_variant(&c("EQUAL(a,x)."), &c("EQUAL(x,a).")));
        assert!(!is_variant(&c("P(x,x)."), &c("P(x,y).")));
        assert!(!is_variant(&c("P(x,y)."), &c("P(x,x).")));
        assert!(!is_variant(&c("Q(a)."), &c("-Q(a).")));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(canonical_signature(&c("Q(x).")), canonical_signature(&c("Q(y).")));
        assert_ne!(canonical_signature(&c("Q(a).")), canonical_signature(&c("Q(b).")));
    }

    #[test]
    fn clause_db_rejects_variants() {
        let mut db = ClauseDb::new();
        assert!(db.insert(&c("P(x,f(y)).").literal, ClauseId(1)).is_ok());
        assert_eq!(db.insert(&c("P(z,f(x)).").literal, ClauseId(2)), Err(ClauseId(1)));
        assert!(db.insert(&c("P(z,f(z)).").literal, ClauseId(3)).is_ok());
        assert_eq!(db.len(), 2);
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::constant("a")),
            Just(Term::constant("b")),
            Just(Term::var("x")),
            Just(Term::var("y")),
            Just(Term::var("z")),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Term::app("g", vec![a])),
                (inner.clone(), inner).prop_map(|(a, b)| Term::app("f", vec![a, b])),
            ]
        })
    }

    fn arb_clause() -> impl Strategy<Value = Clause> {
        (arb_term(), arb_term(), any::<bool>()).prop_map(|(a, b, eq)| {
            let lit = if eq {
                Literal::equality(a, b)
            } else {
                Literal::atom("P", vec![a, b])
            };
            Clause::new(lit)
        })
    }

    /// Applies a random permutation of {x,y,z} so that pairs are often variants.
    fn permute(clause: &Clause, perm: &[usize; 3]) -> Clause {
        let names = ["x", "y", "z"];
        let mapping: Vec<_> = (0..3)
            .map(|i| (Symbol::intern(names[i]), Symbol::intern(names[perm[i]])))
            .collect();
        Clause::new(clause.literal.map_terms(|t| rename_vars(t, &mapping)))
    }

    fn arb_perm() -> impl Strategy<Value = [usize; 3]> {
        prop_oneof![Just([0, 1, 2]), Just([1, 0, 2]), Just([2, 1, 0]), Just([1, 2, 0]),]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn signature_equality_iff_variant(a in arb_clause(), b in arb_clause(), perm in arb_perm(), mix in any::<bool>()) {
            let b = if mix { permute(&a, &perm) } else { b };
            prop_assert_eq!(canonical_signature(&a) == canonical_signature(&b), is_variant(&a, &b));
        }

        #[test]
        fn variance_is_an_equivalence(a in arb_clause(), p in arb_perm(), q in arb_perm(), c2 in arb_clause()) {
            let b = permute(&a, &p);
            let c3 = permute(&b, &q);
            prop_assert!(is_variant(&a, &a));
            prop_assert_eq!(is_variant(&a, &c2), is_variant(&c2, &a));
            prop_assert!(is_variant(&a, &b) && is_variant(&b, &c3) && is_variant(&a, &c3));
        }

        #[test]
        fn rename_apart_is_a_disjoint_variant(a in arb_clause(), avoid_mask in 0u8..8) {
            let avoid: Vec<Symbol> = ["x", "y", "z"]
                .iter()
                .enumerate()
                .filter(|(i, _)| avoid_mask & (1 << i) != 0)
                .map(|(_, n)| Symbol::intern(n))
                .collect();
            let renamed = rename_apart(&a, &avoid);
            prop_assert!(renamed.literal.vars().iter().all(|v| !avoid.contains(v)));
            prop_assert!(is_variant(&a, &renamed));
            prop_assert_eq!(weigh(&a), weigh(&renamed));
            prop_assert_eq!(rename_apart(&a, &avoid), renamed);
        }
    }
}
