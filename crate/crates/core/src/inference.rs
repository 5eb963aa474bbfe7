//! Paramodulation between unit clauses.
//!
//! From a positive equality `s = t` and an into clause `B`, every non-variable
//! subterm `B|p` that unifies with `s` under σ yields `B[p ← t]σ`. Both
//! orientations of each equality are tried; there are no ordering constraints.

use crate::clause::{rename_apart, Clause, ClauseId, Literal, ParentRole};
use crate::subst::{match_ground, unify, Substitution};
use crate::term::{Position, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `s = t` rewrites occurrences of `s` into `t`.
    LeftToRight,
    /// `s = t` rewrites occurrences of `t` into `s`.
    RightToLeft,
}

/// Inference toggles. The defaults disable paramodulation into variable
/// positions and from equation sides that are bare variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParaConfig {
    pub into_variables: bool,
    pub from_variables: bool,
}

#[derive(Clone, Debug)]
pub struct Paramodulant {
    pub clause: Clause,
    pub from_id: ClauseId,
    pub into_id: ClauseId,
    /// Position in the into literal; the first index selects the argument.
    pub into_position: Position,
    pub orientation: Orientation,
    pub unifier: Substitution,
}

/// Placeholder id for clauses that have not been registered with a prover.
pub const UNREGISTERED: ClauseId = ClauseId(0);

/// Builds the paramodulant of `from` into `into` at `position`, or `None` when
/// the chosen side does not unify there. Also used to replay recorded inferences.
pub fn paramodulate_at(
    from: &Clause,
    into: &Clause,
    orientation: Orientation,
    position: &Position,
) -> Option<Paramodulant> {
    let (lhs, rhs) = from.literal.equation()?;
    let (pattern, replacement) = match orientation {
        Orientation::LeftToRight => (lhs, rhs),
        Orientation::RightToLeft => (rhs, lhs),
    };
    let target = into.literal.subterm(position.as_slice())?;
    let sigma = unify(pattern, target)?;
    Some(build(from, into, orientation, position.clone(), replacement, sigma))
}

fn build(
    from: &Clause,
    into: &Clause,
    orientation: Orientation,
    into_position: Position,
    replacement: &Term,
    sigma: Substitution,
) -> Paramodulant {
    let replaced = into.literal.replace_at(into_position.as_slice(), replacement.clone());
    let literal: Literal = replaced.map_terms(|t| sigma.apply(t));
    let from_id = from.id.unwrap_or(UNREGISTERED);
    let into_id = into.id.unwrap_or(UNREGISTERED);
    let clause = Clause::with_parents(literal, vec![(from_id, ParentRole::From), (into_id, ParentRole::Into)]);
    Paramodulant {
        clause,
        from_id,
        into_id,
        into_position,
        orientation,
        unifier: sigma,
    }
}

/// All paramodulants from `from` into `into`, left-to-right before right-to-left,
/// positions in preorder. The clauses must already share no variables.
pub fn paramodulate_pair(from: &Clause, into: &Clause, cfg: &ParaConfig) -> Vec<Paramodulant> {
    let mut out = Vec::new();
    paramodulate_sites(from, into, &into_sites(&into.literal), cfg, &mut out);
    out
}

/// A candidate subterm of an into literal.
struct Site<'a> {
    path: Vec<usize>,
    term: &'a Term,
    depth: u32,
    ground: bool,
}

/// Every subterm of `lit` in preorder, with its depth and groundness.
fn into_sites(lit: &Literal) -> Vec<Site<'_>> {
    fn walk<'a>(t: &'a Term, path: &mut Vec<usize>, out: &mut Vec<Site<'a>>) -> (u32, bool) {
        let slot = out.len();
        out.push(Site {
            path: path.clone(),
            term: t,
            depth: 0,
            ground: false,
        });
        let (depth, ground) = match t {
            Term::Var(_) => (0, false),
            Term::Const(_) => (1, true),
            Term::App(_, args) => {
                let (mut depth, mut ground) = (0, true);
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    let (d, g) = walk(a, path, out);
                    path.pop();
                    depth = depth.max(d);
                    ground &= g;
                }
                (depth + 1, ground)
            }
        };
        out[slot].depth = depth;
        out[slot].ground = ground;
        (depth, ground)
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(16);
    for (i, a) in lit.args.iter().enumerate() {
        path.push(i);
        walk(a, &mut path, &mut out);
        path.pop();
    }
    out
}

/// Depth of the non-variable part of `t`. A term with a deeper skeleton
/// cannot be instantiated to a shallower ground term.
fn skeleton_depth(t: &Term) -> u32 {
    match t {
        Term::Var(_) => 0,
        Term::Const(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(skeleton_depth).max().unwrap_or(0),
    }
}

fn paramodulate_sites(from: &Clause, into: &Clause, sites: &[Site], cfg: &ParaConfig, out: &mut Vec<Paramodulant>) {
    let Some((lhs, rhs)) = from.literal.equation() else {
        return;
    };
    for (orientation, pattern, replacement) in [
        (Orientation::LeftToRight, lhs, rhs),
        (Orientation::RightToLeft, rhs, lhs),
    ] {
        if pattern.is_var() && !cfg.from_variables {
            continue;
        }
        let skeleton = skeleton_depth(pattern);
        for site in sites {
            let sub = site.term;
            if sub.is_var() {
                if !cfg.into_variables {
                    continue;
                }
            } else if !pattern.is_var() && sub.head() != pattern.head() {
                continue;
            }
            let sigma = if site.ground {
                if site.depth < skeleton {
                    continue;
                }
                match_ground(pattern, sub)
            } else {
                unify(pattern, sub)
            };
            if let Some(sigma) = sigma {
                out.push(build(
                    from,
                    into,
                    orientation,
                    Position(site.path.clone()),
                    replacement,
                    sigma,
                ));
            }
        }
    }
}

/// Paramodulants of `given` against the usable clauses.
///
/// `usable` must be in id order and already contain `given`. For each partner,
/// inferences with `given` as the from clause come before those with `given`
/// as the into clause. Partners are renamed apart from `given` first; `given`
/// is paired with itself only once.
pub fn paramodulate_given<'a, I>(given: &Clause, usable: I, cfg: &ParaConfig) -> Vec<Paramodulant>
where
    I: IntoIterator<Item = &'a Clause>,
{
    let given_vars = given.literal.vars();
    let given_is_eq = given.literal.equation().is_some();
    let given_sites = into_sites(&given.literal);
    let mut out = Vec::new();
    let mut last_id = None;
    for partner in usable {
        debug_assert!(last_id <= partner.id, "usable clauses must be in id order");
        last_id = partner.id;
        let is_self = given.id.is_some() && partner.id == given.id;
        let renamed;
        let partner = if given_vars.is_empty() {
            partner
        } else {
            renamed = rename_apart(partner, &given_vars);
            &renamed
        };
        if given_is_eq {
            paramodulate_sites(given, partner, &into_sites(&partner.literal), cfg, &mut out);
        }
        if !is_self && partner.literal.equation().is_some() {
            paramodulate_sites(partner, given, &given_sites, cfg, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_clause;
    use proptest::prelude::*;

    fn c(s: &str) -> Clause {
        parse_clause(s).unwrap()
    }

    fn texts(ps: &[Paramodulant]) -> Vec<String> {
        ps.iter().map(|p| p.clause.to_string()).collect()
    }

    #[test]
    fn constant_replacement() {
        let out = paramodulate_pair(&c("EQUAL(a,b)."), &c("Q(a)."), &ParaConfig::default());
        assert_eq!(texts(&out), ["Q(b)."]);
        assert_eq!(out[0].orientation, Orientation::LeftToRight);
        assert_eq!(out[0].into_position, Position(vec![0]));
    }

    #[test]
    fn sum_identity_example() {
        let out = paramodulate_pair(
            &c("EQUAL(sum(x,0),x)."),
            &c("P(sum(sum(a,0),b),c)."),
            &ParaConfig::default(),
        );
        assert!(texts(&out).contains(&"P(sum(a,b),c).".to_string()));
        // The right side is a bare variable, so only one orientation is used.
        assert!(out.iter().all(|p| p.orientation == Orientation::LeftToRight));
    }

    #[test]
    fn nested_example() {
        let into = c("Q(g(f(g(x)))).");
        let out = paramodulate_pair(&c("EQUAL(g(a),b)."), &into, &ParaConfig::default());
        assert!(texts(&out).contains(&"Q(g(f(b))).".to_string()));
    }

    #[test]
    fn identity_equality_is_a_fixed_point() {
        let out = paramodulate_pair(&c("EQUAL(a,a)."), &c("Q(a)."), &ParaConfig::default());
        assert_eq!(texts(&out), ["Q(a).", "Q(a)."]);
    }

    #[test]
    fn variable_positions_are_skipped_unless_enabled() {
        let from = c("EQUAL(f(a),b).");
        let into = c("P(z).");
        assert!(paramodulate_pair(&from, &into, &ParaConfig::default()).is_empty());
        let cfg = ParaConfig {
            into_variables: true,
            ..Default::default()
        };
        assert_eq!(texts(&paramodulate_pair(&from, &into, &cfg)), ["P(b).", "P(f(a))."]);

        let from_var = c("EQUAL(z,c).");
        let cfg = ParaConfig {
            from_variables: true,
            ..Default::default()
        };
        assert!(paramodulate_pair(&from_var, &c("Q(a)."), &ParaConfig::default())
            .iter()
            .all(|p| p.orientation == Orientation::RightToLeft));
        assert_eq!(paramodulate_pair(&from_var, &c("Q(a)."), &cfg).len(), 1);
    }

    #[test]
    fn parents_and_replay() {
        let from = c("EQUAL(g(a),b).").with_id(1);
        let into = c("Q(g(f(g(x)))).").with_id(2);
        for p in paramodulate_pair(&from, &into, &ParaConfig::default()) {
            assert_eq!(
                p.clause.parents,
                vec![(ClauseId(1), ParentRole::From), (ClauseId(2), ParentRole::Into)]
            );
            assert!(!into.literal.subterm(p.into_position.as_slice()).unwrap().is_var());
            let replay = paramodulate_at(&from, &into, p.orientation, &p.into_position).unwrap();
            assert_eq!(replay.clause, p.clause);
        }
    }

    #[test]
    fn given_with_empty_usable() {
        let given = c("State(l(n(1),l(hole,nil))).").with_id(1);
        assert!(paramodulate_given(&given, [], &ParaConfig::default()).is_empty());
    }

    #[test]
    fn given_equality_pairs_with_itself_once() {
        let given = c("EQUAL(f(x),g(x)).").with_id(3);
        let usable = [given.clone()];
        let out = paramodulate_given(&given, &usable, &ParaConfig::default());
        // f(x)→g(x) into the renamed copy, at its f(x1) and g(x1) positions.
        assert_eq!(texts(&out), ["EQUAL(g(x1),g(x1)).", "EQUAL(f(x1),f(x1))."]);
    }

    /// Straightforward reference: rebuild every candidate from scratch by
    /// enumerating positions explicitly and substituting afterwards.
    fn naive_paramodulants(from: &Clause, into: &Clause) -> Vec<String> {
        let (l, r) = from.literal.equation().unwrap();
        let mut out = Vec::new();
        for (s, t) in [(l, r), (r, l)] {
            if s.is_var() {
                continue;
            }
            for (i, arg) in into.literal.args.iter().enumerate() {
                for sub in crate::term::subterm_positions(arg) {
                    if sub.is_variable {
                        continue;
                    }
                    if let Some(sigma) = unify(s, sub.term) {
                        let mut path = vec![i];
                        path.extend(sub.position.0.iter());
                        let lit = into.literal.map_terms(|x| sigma.apply(x));
                        let lit = lit.replace_at(&path, sigma.apply(t));
                        out.push(format!("{lit}."));
                    }
                }
            }
        }
        out
    }

    fn arb_term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::constant("a")),
            Just(Term::constant("b")),
            prop::sample::select(vars).prop_map(Term::var),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Term::app("g", vec![a])),
                (inner.clone(), inner).prop_map(|(a, b)| Term::app("f", vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn matches_naive_implementation(
            l in arb_term(&["x", "y"]),
            r in arb_term(&["x", "y"]),
            a in arb_term(&["z", "w"]),
            b in arb_term(&["z", "w"]),
        ) {
            let from = Clause::new(Literal::equality(l, r));
            let into = Clause::new(Literal::atom("P", vec![a, b]));
            let fast = texts(&paramodulate_pair(&from, &into, &ParaConfig::default()));
            prop_assert_eq!(fast, naive_paramodulants(&from, &into));
        }
    }
}
