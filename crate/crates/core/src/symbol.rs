//! Process-wide symbol interning.
//!
//! Functors, constants, predicates and variables are all stored as [`Symbol`]
//! handles so that term comparison and hashing never touch string data.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// An interned identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

#[derive(Default)]
struct Interner {
    names: Vec<&'static str>,
    index: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| RwLock::new(Interner::default()))
}

impl Symbol {
    pub fn intern(name: &str) -> Symbol {
        if let Some(&id) = interner().read().unwrap().index.get(name) {
            return Symbol(id);
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.index.get(name) {
            return Symbol(id);
        }
        // Interned names live for the whole process.
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = table.names.len() as u32;
        table.names.push(leaked);
        table.index.insert(leaked, id);
        Symbol(id)
    }

    pub fn as_str(self) -> &'static str {
        interner().read().unwrap().names[self.0 as usize]
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// True for identifiers that the text syntax reads as variables:
/// one of `u v w x y z`, optionally followed by decimal digits.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some('u'..='z') => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Symbol::intern("hole");
        let b = Symbol::intern("hole");
        assert_eq!(a, b);
        assert_eq!(a.as_str(), "hole");
        assert_ne!(a, Symbol::intern("nil"));
    }

    #[test]
    fn variable_lexicon() {
        for v in ["u", "v", "w", "x", "y", "z", "x1", "y12"] {
            assert!(is_variable_name(v), "{v}");
        }
        for c in ["a", "hole", "nil", "n", "l", "xa", "t", "0", "x_1", ""] {
            assert!(!is_variable_name(c), "{c}");
        }
    }
}
