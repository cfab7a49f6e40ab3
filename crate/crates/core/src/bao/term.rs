//! A small term language for the equations in the axiom table.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! term  := "0" | "1" | var | "neg(" term ")" | "join(" term "," term ")"
//!        | "meet(" term "," term ")" | "c(" ix "," term ")" | "d(" ix "," ix ")"
//!        | "sub(" ix "," ix "," term ")" | "swap(" ix "," ix "," term ")"
//! var   := "x" | "y" | "z"
//! ix    := "i" | "j" | "k" | "l"
//! ```
//!
//! `sub(i,j,t)` is `s^i_j t` and `swap(i,j,t)` is `s_ij t`.

use std::fmt;

use super::atomset::AtomSet;
use super::structure::{CaAtomStructure, Op};

pub const VARS: [char; 3] = ['x', 'y', 'z'];
pub const INDICES: [char; 4] = ['i', 'j', 'k', 'l'];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Zero,
    One,
    Neg(Box<Term>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Cyl(usize, Box<Term>),
    Diag(usize, usize),
    Sub(usize, usize, Box<Term>),
    Swap(usize, usize, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "term parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError(format!("expected '{}' at {}", c as char, self.pos)))
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError(format!("expected a name at {start}")));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let w = self.word()?;
        let mut chars = w.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => INDICES
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| ParseError(format!("unknown index {w}"))),
            _ => Err(ParseError(format!("unknown index {w}"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let w = self.word()?;
        let t = match w {
            "0" => Term::Zero,
            "1" => Term::One,
            "neg" => {
                self.expect(b'(')?;
                let a = self.term()?;
                self.expect(b')')?;
                Term::Neg(Box::new(a))
            }
            "join" | "meet" => {
                self.expect(b'(')?;
                let a = self.term()?;
                self.expect(b',')?;
                let b = self.term()?;
                self.expect(b')')?;
                if w == "join" {
                    Term::Join(Box::new(a), Box::new(b))
                } else {
                    Term::Meet(Box::new(a), Box::new(b))
                }
            }
            "c" => {
                self.expect(b'(')?;
                let i = self.index()?;
                self.expect(b',')?;
                let a = self.term()?;
                self.expect(b')')?;
                Term::Cyl(i, Box::new(a))
            }
            "d" => {
                self.expect(b'(')?;
                let i = self.index()?;
                self.expect(b',')?;
                let j = self.index()?;
                self.expect(b')')?;
                Term::Diag(i, j)
            }
            "sub" | "swap" => {
                self.expect(b'(')?;
                let i = self.index()?;
                self.expect(b',')?;
                let j = self.index()?;
                self.expect(b',')?;
                let a = self.term()?;
                self.expect(b')')?;
                if w == "sub" {
                    Term::Sub(i, j, Box::new(a))
                } else {
                    Term::Swap(i, j, Box::new(a))
                }
            }
            v if v.len() == 1 => {
                let c = v.chars().next().expect("one char");
                Term::Var(
                    VARS.iter()
                        .position(|&x| x == c)
                        .ok_or_else(|| ParseError(format!("unknown variable {v}")))?,
                )
            }
            other => return Err(ParseError(format!("unknown symbol {other}"))),
        };
        Ok(t)
    }
}

/// `lhs = rhs` or `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub lhs: Term,
    pub rhs: Term,
    pub inclusion: bool,
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(ParseError(format!("trailing input at {}", p.pos)));
    }
    Ok(t)
}

pub fn parse_statement(src: &str) -> Result<Statement, ParseError> {
    let (lhs, rhs, inclusion) = if let Some((l, r)) = src.split_once("<=") {
        (l, r, true)
    } else if let Some((l, r)) = src.split_once('=') {
        (l, r, false)
    } else {
        return Err(ParseError("statement needs '=' or '<='".into()));
    };
    Ok(Statement {
        lhs: parse_term(lhs)?,
        rhs: parse_term(rhs)?,
        inclusion,
    })
}

impl Term {
    /// Number of distinct set variables (one more than the largest used).
    pub fn var_count(&self) -> usize {
        let mut m = 0;
        self.visit(&mut |t| {
            if let Term::Var(v) = t {
                m = m.max(v + 1);
            }
        });
        m
    }

    pub fn index_count(&self) -> usize {
        let mut m = 0;
        self.visit(&mut |t| match t {
            Term::Cyl(i, _) => m = m.max(i + 1),
            Term::Diag(i, j) | Term::Sub(i, j, _) | Term::Swap(i, j, _) => m = m.max(i.max(j) + 1),
            _ => {}
        });
        m
    }

    /// Operations used, with symbolic indices left unresolved.
    pub fn uses(&self) -> (bool, bool, bool) {
        let (mut d, mut s, mut t) = (false, false, false);
        self.visit(&mut |x| match x {
            Term::Diag(..) => d = true,
            Term::Sub(..) => s = true,
            Term::Swap(..) => t = true,
            _ => {}
        });
        (d, s, t)
    }

    fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Neg(a) | Term::Cyl(_, a) | Term::Sub(_, _, a) | Term::Swap(_, _, a) => a.visit(f),
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Evaluate in the complex algebra with the given index and set assignments.
    pub fn eval(&self, s: &CaAtomStructure, ix: &[usize], vars: &[AtomSet]) -> AtomSet {
        match self {
            Term::Var(v) => vars[*v].clone(),
            Term::Zero => s.empty_set(),
            Term::One => s.full_set(),
            Term::Neg(a) => a.eval(s, ix, vars).complement(),
            Term::Join(a, b) => a.eval(s, ix, vars).union(&b.eval(s, ix, vars)),
            Term::Meet(a, b) => a.eval(s, ix, vars).intersection(&b.eval(s, ix, vars)),
            Term::Cyl(i, a) => s.apply_unary(Op::Cyl(ix[*i]), &a.eval(s, ix, vars)),
            Term::Diag(i, j) => s.apply_unary(Op::Diag(ix[*i], ix[*j]), &s.empty_set()),
            Term::Sub(i, j, a) => s.apply_unary(Op::Repl(ix[*i], ix[*j]), &a.eval(s, ix, vars)),
            Term::Swap(i, j, a) => s.apply_unary(Op::Transp(ix[*i], ix[*j]), &a.eval(s, ix, vars)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", VARS[*v]),
            Term::Zero => write!(f, "0"),
            Term::One => write!(f, "1"),
            Term::Neg(a) => write!(f, "neg({a})"),
            Term::Join(a, b) => write!(f, "join({a}, {b})"),
            Term::Meet(a, b) => write!(f, "meet({a}, {b})"),
            Term::Cyl(i, a) => write!(f, "c({}, {a})", INDICES[*i]),
            Term::Diag(i, j) => write!(f, "d({}, {})", INDICES[*i], INDICES[*j]),
            Term::Sub(i, j, a) => write!(f, "sub({}, {}, {a})", INDICES[*i], INDICES[*j]),
            Term::Swap(i, j, a) => write!(f, "swap({}, {}, {a})", INDICES[*i], INDICES[*j]),
        }
    }
}
