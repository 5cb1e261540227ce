//! Expression grammar for graded groups and named objects.
//!
//! ```text
//! object := block (";" block)?
//! block  := sum ("[" degree "]")?
//! sum    := term ("+" term)*
//! term   := "S" term
//!         | "Z" ("^" nat)? | "Z/" nat | "Q" | "I(" prime ")"
//!         | "kappa(" point ")" | "iota(" point ")" | "moore(" nat ")"
//!         | "unit"
//! degree := "0" | "1"
//! ```
//!
//! A single block is placed at its marked degree (default 0). Two blocks
//! separated by ";" are the degree-0 and degree-1 parts; explicit markers
//! may restate or swap that, but must cover both degrees. Suspension binds
//! to the following term. Moduli must be at least 2.

use std::fmt;
use thiserror::Error;

use crate::graded::{Degree, GradedGroup};
use crate::groups::GroupExpr;
use crate::object::{injective_object, moore, residue_object, unit, BootObject};
use crate::spectrum::{SpecPoint, SpecSubset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    fn new(position: usize, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError {
            position,
            expected: expected.into(),
            found: found.into(),
        }
    }
}

/// One parsed term of the grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Free(usize),
    Cyclic(u64),
    Rationals,
    Prufer(u64),
    Kappa(SpecPoint),
    Iota(SpecPoint),
    Moore(u64),
    Unit,
    Suspend(Box<Term>),
}

impl Term {
    fn eval(&self) -> GradedGroup {
        match self {
            Term::Free(n) => GradedGroup::place(GroupExpr::free(*n), Degree::Zero),
            Term::Cyclic(n) => GradedGroup::place(GroupExpr::cyclic(*n), Degree::Zero),
            Term::Rationals => GradedGroup::place(GroupExpr::rationals(1), Degree::Zero),
            Term::Prufer(p) => GradedGroup::place(GroupExpr::prufer(*p), Degree::Zero),
            Term::Kappa(p) => residue_object(*p).ktheory().clone(),
            Term::Iota(p) => injective_object(*p).ktheory().clone(),
            Term::Moore(n) => moore(*n).ktheory().clone(),
            Term::Unit => unit().ktheory().clone(),
            Term::Suspend(t) => t.eval().suspend(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Block {
    terms: Vec<Term>,
    degree: Option<Degree>,
}

impl Block {
    fn eval(&self) -> GradedGroup {
        self.terms
            .iter()
            .fold(GradedGroup::zero(), |acc, t| acc.direct_sum(&t.eval()))
    }
}

/// A parsed object expression, retaining the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectExpr {
    blocks: Vec<Block>,
    source: String,
}

impl ObjectExpr {
    pub fn source(&self) -> &str {
        &self.source
    }

    /// The graded group the expression denotes. Placement at degree one is
    /// suspension, so named graded constructors compose with markers.
    pub fn eval(&self) -> GradedGroup {
        match self.blocks.as_slice() {
            [b] => match b.degree.unwrap_or(Degree::Zero) {
                Degree::Zero => b.eval(),
                Degree::One => b.eval().suspend(),
            },
            [b0, b1] => {
                let part = |b: &Block| match b.degree.expect("two-block degrees resolved") {
                    Degree::Zero => b.eval(),
                    Degree::One => b.eval().suspend(),
                };
                part(b0).direct_sum(&part(b1))
            }
            _ => unreachable!("parser yields one or two blocks"),
        }
    }

    /// Realize the expression as an object labeled by its source text.
    pub fn realize(&self) -> BootObject {
        crate::object::realize_labeled(self.eval(), self.source.trim())
    }
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn found_here(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(_) => {
                let rest = &self.text[self.pos..];
                let snippet: String = rest.chars().take(8).collect();
                format!("\"{snippet}\"")
            }
        }
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, expected, self.found_here())
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("a number"));
        }
        self.text[start..self.pos].parse::<u64>().map_err(|_| {
            ParseError::new(
                start,
                "a number that fits in 64 bits",
                self.text[start..self.pos].to_string(),
            )
        })
    }

    fn point(&mut self) -> Result<SpecPoint, ParseError> {
        let start = self.pos;
        let n = self.nat()?;
        SpecPoint::try_from_u64(n)
            .ok_or_else(|| ParseError::new(start, "0 or a prime", n.to_string()))
    }

    fn prime(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let n = self.nat()?;
        if crate::arith::is_prime_u64(n) {
            Ok(n)
        } else {
            Err(ParseError::new(start, "a prime", n.to_string()))
        }
    }

    fn modulus(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let n = self.nat()?;
        if n >= 2 {
            Ok(n)
        } else {
            Err(ParseError::new(
                start,
                "a modulus of at least 2",
                n.to_string(),
            ))
        }
    }

    fn paren_arg<T>(
        &mut self,
        read: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        self.skip_ws();
        self.expect(b'(', "\"(\"")?;
        self.skip_ws();
        let v = read(self)?;
        self.skip_ws();
        self.expect(b')', "\")\"")?;
        Ok(v)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(word) = self.ident() else {
            return Err(self.error("a term"));
        };
        match word {
            "S" => Ok(Term::Suspend(Box::new(self.term()?))),
            "Z" => {
                if self.eat(b'/') {
                    Ok(Term::Cyclic(self.modulus()?))
                } else if self.eat(b'^') {
                    let start = self.pos;
                    let n = self.nat()?;
                    if n > 10_000 {
                        return Err(ParseError::new(
                            start,
                            "a rank at most 10000",
                            n.to_string(),
                        ));
                    }
                    Ok(Term::Free(n as usize))
                } else {
                    Ok(Term::Free(1))
                }
            }
            "Q" => Ok(Term::Rationals),
            "I" => Ok(Term::Prufer(self.paren_arg(Self::prime)?)),
            "kappa" => Ok(Term::Kappa(self.paren_arg(Self::point)?)),
            "iota" => Ok(Term::Iota(self.paren_arg(Self::point)?)),
            "moore" => Ok(Term::Moore(self.paren_arg(Self::modulus)?)),
            "unit" => Ok(Term::Unit),
            other => Err(ParseError::new(
                start,
                "one of Z, Z/n, Q, I(p), kappa, iota, moore, unit, S",
                format!("\"{other}\""),
            )),
        }
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else {
                break;
            }
        }
        let mut degree = None;
        self.skip_ws();
        if self.eat(b'[') {
            self.skip_ws();
            degree = Some(match self.peek() {
                Some(b'0') => Degree::Zero,
                Some(b'1') => Degree::One,
                _ => return Err(self.error("degree 0 or 1")),
            });
            self.pos += 1;
            self.skip_ws();
            self.expect(b']', "\"]\"")?;
        }
        Ok(Block { terms, degree })
    }

    fn object(&mut self) -> Result<Vec<Block>, ParseError> {
        let first = self.block()?;
        let mut blocks = vec![first];
        self.skip_ws();
        if self.eat(b';') {
            let marker_pos = self.pos;
            let mut second = self.block()?;
            let resolved = match (blocks[0].degree, second.degree) {
                (Some(a), Some(b)) if a == b => {
                    return Err(ParseError::new(
                        marker_pos,
                        "blocks covering distinct degrees",
                        format!("two [{}] blocks", if a == Degree::Zero { 0 } else { 1 }),
                    ));
                }
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) => (a, a.flip()),
                (None, Some(b)) => (b.flip(), b),
                (None, None) => (Degree::Zero, Degree::One),
            };
            blocks[0].degree = Some(resolved.0);
            second.degree = Some(resolved.1);
            blocks.push(second);
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.error("end of input"));
        }
        Ok(blocks)
    }
}

pub fn parse_object(text: &str) -> Result<ObjectExpr, ParseError> {
    let mut parser = Parser::new(text);
    let blocks = parser.object()?;
    Ok(ObjectExpr {
        blocks,
        source: text.to_string(),
    })
}

/// Parse a subset of Spec Z: "all", or a comma list of points such as
/// "0,2,5" (empty means the empty set).
pub fn parse_spec_subset(text: &str) -> Result<SpecSubset, ParseError> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("all") {
        return Ok(SpecSubset::All);
    }
    let mut points = std::collections::BTreeSet::new();
    if trimmed.is_empty() {
        return Ok(SpecSubset::finite(points));
    }
    let mut offset = 0usize;
    for part in text.split(',') {
        let inner = part.trim();
        let pos = offset + (part.len() - part.trim_start().len());
        let n: u64 = inner
            .parse()
            .map_err(|_| ParseError::new(pos, "a point of Spec Z", format!("\"{inner}\"")))?;
        let p = SpecPoint::try_from_u64(n)
            .ok_or_else(|| ParseError::new(pos, "0 or a prime", n.to_string()))?;
        points.insert(p);
        offset += part.len() + 1;
    }
    Ok(SpecSubset::finite(points))
}
