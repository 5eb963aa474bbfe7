//! Text syntax for terms, unit clauses and clause lists.
//!
//! ```text
//! list(usable).
//! EQUAL(l(hole,l(n(x),y)),l(n(x),l(hole,y))).
//! end_of_list.
//! list(sos).
//! State(l(n(1),l(hole,l(n(2),nil)))).
//! -State(l(n(1),l(n(2),l(hole,nil)))).
//! end_of_list.
//! ```
//!
//! Identifiers are ASCII alphanumerics (plus `_`). The identifiers `u`..`z`,
//! optionally followed by digits, are variables; everything else is a constant
//! or functor. `%` starts a comment that runs to the end of the line.

use crate::clause::{Clause, Literal};
use crate::error::ParseError;
use crate::symbol::{is_variable_name, Symbol};
use crate::term::Term;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'%' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map(|b| (b as char).to_string())
                .unwrap_or_else(|| "end of input".into());
            self.error(format!("expected '{}', found {found}", c as char))
        }
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected identifier");
        }
        Ok(&self.src[start..self.pos])
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident()?;
        if self.peek() == Some(b'(') {
            if is_variable_name(name) {
                return self.error(format!("variable {name} used as a functor"));
            }
            let args = self.arg_list()?;
            Ok(Term::app_sym(Symbol::intern(name), args))
        } else if is_variable_name(name) {
            Ok(Term::var(name))
        } else {
            Ok(Term::constant(name))
        }
    }

    fn arg_list(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(b'(')?;
        let mut args = vec![self.term()?];
        while self.eat(b',') {
            args.push(self.term()?);
        }
        self.expect(b')')?;
        Ok(args)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let positive = !self.eat(b'-');
        let name = self.ident()?;
        let args = if self.peek() == Some(b'(') {
            self.arg_list()?
        } else {
            Vec::new()
        };
        if name == crate::clause::EQUAL && args.len() != 2 {
            return self.error("EQUAL takes exactly two arguments");
        }
        Ok(Literal::new(positive, name, args))
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let lit = self.literal()?;
        if self.peek() == Some(b'|') {
            return self.error("non-unit clauses are not supported");
        }
        self.expect(b'.')?;
        Ok(Clause::new(lit))
    }
}

fn finish<T>(mut p: Parser<'_>, value: T) -> Result<T, ParseError> {
    if p.at_end() {
        Ok(value)
    } else {
        p.error("trailing input")
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    finish(p, t)
}

pub fn parse_literal(src: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(src);
    let l = p.literal()?;
    finish(p, l)
}

/// Parses a single clause terminated by `.`.
pub fn parse_clause(src: &str) -> Result<Clause, ParseError> {
    let mut p = Parser::new(src);
    let c = p.clause()?;
    finish(p, c)
}

/// Contents of a clause-list file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseLists {
    pub usable: Vec<Clause>,
    pub sos: Vec<Clause>,
}

pub fn parse_clause_lists(src: &str) -> Result<ClauseLists, ParseError> {
    let mut p = Parser::new(src);
    let mut lists = ClauseLists::default();
    while !p.at_end() {
        let head = p.ident()?;
        if head != "list" {
            return p.error(format!("expected list(...), found {head}"));
        }
        p.expect(b'(')?;
        let name = p.ident()?;
        p.expect(b')')?;
        p.expect(b'.')?;
        let target = match name {
            "usable" => &mut lists.usable,
            "sos" => &mut lists.sos,
            other => return p.error(format!("unsupported list {other}")),
        };
        loop {
            let save = p.pos;
            if p.ident().ok() == Some("end_of_list") {
                p.expect(b'.')?;
                break;
            }
            p.pos = save;
            if p.at_end() {
                return p.error("missing end_of_list.");
            }
            target.push(p.clause()?);
        }
    }
    Ok(lists)
}

pub fn format_clause_list(name: &str, clauses: &[Clause]) -> String {
    let mut out = format!("list({name}).\n");
    for c in clauses {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out.push_str("end_of_list.\n");
    out
}

pub fn format_clause_lists(lists: &ClauseLists) -> String {
    format_clause_list("usable", &lists.usable) + &format_clause_list("sos", &lists.sos)
}
