//! First-order terms and positions within them.

use std::fmt;
use std::sync::Arc;

use crate::symbol::Symbol;

/// A first-order term.
///
/// Applications always have at least one argument; a zero-arity functor is a
/// [`Term::Const`]. Arguments are reference counted so that substitution and
/// replacement can share untouched subtrees.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
    App(Symbol, Arc<[Term]>),
}

/// A path of zero-based argument indices from a root. The root is the empty path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Position {
    fn from(path: Vec<usize>) -> Self {
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// One entry of [`subterm_positions`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtermAt<'a> {
    pub position: Position,
    pub term: &'a Term,
    /// Variable positions are enumerated but never rewritten by default.
    pub is_variable: bool,
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::intern(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Symbol::intern(name))
    }

    /// Builds an application, collapsing an empty argument list to a constant.
    pub fn app(functor: &str, args: Vec<Term>) -> Term {
        Term::app_sym(Symbol::intern(functor), args)
    }

    pub fn app_sym(functor: Symbol, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Const(functor)
        } else {
            Term::App(functor, args.into())
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Head symbol: the functor, constant or variable name.
    pub fn head(&self) -> Symbol {
        match self {
            Term::Var(s) | Term::Const(s) | Term::App(s, _) => *s,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol occurrences (variables, constants and functors each count 1).
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }

    /// Appends the variables of `self` to `out` in first-occurrence order, without repeats.
    pub fn collect_vars(&self, out: &mut Vec<Symbol>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.subterm(rest),
        }
    }

    /// Returns a copy of `self` with the subterm at `path` replaced by `with`.
    ///
    /// Panics if `path` does not address a subterm.
    pub fn replace_at(&self, path: &[usize], with: Term) -> Term {
        match path.split_first() {
            None => with,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut new_args: Vec<Term> = args.to_vec();
                    new_args[i] = args[i].replace_at(rest, with);
                    Term::App(*f, new_args.into())
                }
                _ => panic!("position {path:?} does not exist in {self}"),
            },
        }
    }

    /// Preorder walk calling `f(path, subterm)` for every subterm including the root.
    pub fn visit_subterms<'a, F>(&'a self, path: &mut Vec<usize>, f: &mut F)
    where
        F: FnMut(&[usize], &'a Term),
    {
        f(path, self);
        if let Term::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                a.visit_subterms(path, f);
                path.pop();
            }
        }
    }
}

/// True iff variable `v` occurs anywhere in `t`.
pub fn occurs_in(v: Symbol, t: &Term) -> bool {
    match t {
        Term::Var(w) => *w == v,
        Term::Const(_) => false,
        Term::App(_, args) => args.iter().any(|a| occurs_in(v, a)),
    }
}

/// Preorder enumeration of every subterm position of `t`, root first.
pub fn subterm_positions(t: &Term) -> Vec<SubtermAt<'_>> {
    let mut out = Vec::new();
    t.visit_subterms(&mut Vec::new(), &mut |path, sub| {
        out.push(SubtermAt {
            position: Position(path.to_vec()),
            term: sub,
            is_variable: sub.is_var(),
        })
    });
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(s) | Term::Const(s) => f.write_str(s.as_str()),
            Term::App(name, args) => {
                f.write_str(name.as_str())?;
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
