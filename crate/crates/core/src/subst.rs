//! Substitutions and syntactic unification with occurs check.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::TermError;
use crate::symbol::Symbol;
use crate::term::{occurs_in, Term};

/// An idempotent finite map from variables to terms.
///
/// Every constructor rejects maps where a bound variable appears in some image,
/// so applying a substitution twice is the same as applying it once.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Symbol, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Single binding `var ↦ term`. Binding a variable to itself yields the identity.
    pub fn single(var: Symbol, term: Term) -> Result<Self, TermError> {
        Self::from_bindings([(var, term)])
    }

    pub fn from_bindings<I>(bindings: I) -> Result<Self, TermError>
    where
        I: IntoIterator<Item = (Symbol, Term)>,
    {
        let mut map = BTreeMap::new();
        for (v, t) in bindings {
            if t == Term::Var(v) {
                continue;
            }
            map.insert(v, t);
        }
        let subst = Substitution { map };
        subst.check_idempotent()?;
        Ok(subst)
    }

    fn check_idempotent(&self) -> Result<(), TermError> {
        for image in self.map.values() {
            if let Some(&var) = self.map.keys().find(|v| occurs_in(**v, image)) {
                return Err(TermError::OccursViolation {
                    var: var.to_string(),
                    image: image.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, var: Symbol) -> Option<&Term> {
        self.map.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    /// Replaces every bound variable of `t` by its image.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        self.apply_changed(t).unwrap_or_else(|| t.clone())
    }

    // `None` means unchanged, so untouched subtrees are shared rather than rebuilt.
    fn apply_changed(&self, t: &Term) -> Option<Term> {
        match t {
            Term::Var(v) => self.map.get(v).cloned(),
            Term::Const(_) => None,
            Term::App(f, args) => {
                let mut rebuilt: Option<Vec<Term>> = None;
                for (i, a) in args.iter().enumerate() {
                    if let Some(new) = self.apply_changed(a) {
                        rebuilt.get_or_insert_with(|| args[..i].to_vec()).push(new);
                    } else if let Some(r) = rebuilt.as_mut() {
                        r.push(a.clone());
                    }
                }
                rebuilt.map(|r| Term::App(*f, r.into()))
            }
        }
    }

    /// `compose(outer, inner)` behaves as applying `inner` first, then `outer`.
    pub fn compose(outer: &Substitution, inner: &Substitution) -> Result<Substitution, TermError> {
        let mut bindings: Vec<(Symbol, Term)> = inner.map.iter().map(|(v, t)| (*v, outer.apply(t))).collect();
        for (v, t) in &outer.map {
            if !inner.map.contains_key(v) {
                bindings.push((*v, t.clone()));
            }
        }
        Substitution::from_bindings(bindings)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for [`Substitution::apply`].
pub fn apply(s: &Substitution, t: &Term) -> Term {
    s.apply(t)
}

/// Shorthand for [`Substitution::compose`].
pub fn compose(outer: &Substitution, inner: &Substitution) -> Result<Substitution, TermError> {
    Substitution::compose(outer, inner)
}

/// Triangular binding store used while unifying.
struct Bindings(Vec<(Symbol, Term)>);

impl Bindings {
    fn lookup(&self, v: Symbol) -> Option<&Term> {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, t)| t)
    }

    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.lookup(*v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: Symbol, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        if let Term::Var(x) = a {
            if let Some(t) = self.lookup(*x).cloned() {
                return self.unify(&t, b);
            }
        }
        if let Term::Var(y) = b {
            if let Some(t) = self.lookup(*y).cloned() {
                return self.unify(a, &t);
            }
        }
        match (a, b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if self.occurs(*x, other) {
                    return false;
                }
                self.0.push((*x, other.clone()));
                true
            }
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g && fa.len() == ga.len() && fa.iter().zip(ga.iter()).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| self.resolve(a)).collect()),
            other => other.clone(),
        }
    }

    fn into_substitution(self) -> Substitution {
        let map = self.0.iter().map(|(v, _)| (*v, self.resolve(&Term::Var(*v)))).collect();
        Substitution { map }
    }
}

/// Most general unifier of `a` and `b`, or `None` when they do not unify.
///
/// The occurs check is always performed. The returned substitution is idempotent.
pub fn unify(a: &Term, b: &Term) -> Option<Substitution> {
    // Cheap rejection before allocating anything.
    match (a, b) {
        (Term::Const(c), Term::Const(d)) => return (c == d).then(Substitution::new),
        (Term::App(f, fa), Term::App(g, ga)) if f != g || fa.len() != ga.len() => return None,
        (Term::Const(_), Term::App(..)) | (Term::App(..), Term::Const(_)) => return None,
        _ => {}
    }
    let mut bindings = Bindings(Vec::new());
    bindings.unify(a, b).then(|| bindings.into_substitution())
}

/// Matches `pattern` onto a ground `target`: the substitution σ with
/// σ(pattern) = target. For ground targets this is exactly the mgu, found
/// without occurs checks.
pub fn match_ground(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut bound: Vec<(Symbol, &Term)> = Vec::with_capacity(16);
    match_into(pattern, target, &mut bound).then(|| Substitution {
        map: bound.into_iter().map(|(v, t)| (v, t.clone())).collect(),
    })
}

fn match_into<'t>(pattern: &Term, target: &'t Term, bound: &mut Vec<(Symbol, &'t Term)>) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) => match bound.iter().find(|(w, _)| w == v) {
            Some((_, t)) => *t == target,
            None => {
                bound.push((*v, target));
                true
            }
        },
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f, pa), Term::App(g, ta)) => {
            f == g && pa.len() == ta.len() && pa.iter().zip(ta.iter()).all(|(p, t)| match_into(p, t, bound))
        }
        _ => false,
    }
}

/// Unifies two argument lists pairwise under one substitution.
pub fn unify_args(a: &[Term], b: &[Term]) -> Option<Substitution> {
    if a.len() != b.len() {
        return None;
    }
    let mut bindings = Bindings(Vec::new());
    a.iter()
        .zip(b)
        .all(|(x, y)| bindings.unify(x, y))
        .then(|| bindings.into_substitution())
}
