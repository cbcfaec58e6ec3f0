//! Recursive-descent parser for connected-sum descriptors.
//!
//! ```text
//! manifold := term { "#" term } | "S3"
//! term     := [ "-" ] [ integer "*" ] atom
//! atom     := [ "-" ] base
//! base     := name | "sigma(" int "," int "," int ")"
//!           | "surgery(T(" int "," int ")," int ")"
//! ```
//!
//! Whitespace is insignificant. Each `-` reverses orientation. `name` must be
//! a registered atom (`P` and `O` by default).

use std::fmt;

use thiserror::Error;

use super::{Atom, AtomKind, BrieskornParams, Manifold, ManifoldError, Orientation, Registry};
use crate::alexander::{AlexanderError, TorusKnot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected trailing input")]
    Trailing,
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("integer out of range")]
    Overflow,
    #[error("only +2 surgery is supported, got {0}")]
    UnsupportedSurgery(i64),
    #[error(transparent)]
    Brieskorn(ManifoldError),
    #[error(transparent)]
    Knot(AlexanderError),
}

/// Error with the 1-based character column where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.kind)
    }
}

/// Parses against the default registry.
pub fn parse_descriptor(text: &str) -> Result<Manifold, ParseError> {
    parse_descriptor_with(&Registry::default(), text)
}

pub fn parse_descriptor_with(registry: &Registry, text: &str) -> Result<Manifold, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        registry,
    };
    p.manifold()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    registry: &'a Registry,
}

impl Parser<'_> {
    fn err<T>(&self, at: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { column: at + 1, kind })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(self.pos, ParseErrorKind::Expected(what))
        }
    }

    fn ident(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(start).is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        Some((start, self.chars[start..self.pos].iter().collect()))
    }

    /// Optionally signed decimal integer.
    fn integer(&mut self) -> Result<(usize, i64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        if let Some(&c @ ('+' | '-')) = self.chars.get(self.pos) {
            negative = c == '-';
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return self.err(start, ParseErrorKind::Expected("integer"));
        }
        let digits: String = self.chars[digits_start..self.pos].iter().collect();
        let value: i64 = match digits.parse() {
            Ok(v) => v,
            Err(_) => return self.err(start, ParseErrorKind::Overflow),
        };
        Ok((start, if negative { -value } else { value }))
    }

    fn manifold(&mut self) -> Result<Manifold, ParseError> {
        let save = self.pos;
        if let Some((_, name)) = self.ident() {
            if name == "S3" {
                if self.peek().is_some() {
                    return self.err(self.pos, ParseErrorKind::Trailing);
                }
                return Ok(Manifold::sphere());
            }
        }
        self.pos = save;

        let mut out = Manifold::sphere();
        loop {
            let (atom, mult) = self.term()?;
            out.add(atom, mult);
            if !self.eat('#') {
                break;
            }
        }
        if self.peek().is_some() {
            return self.err(self.pos, ParseErrorKind::Trailing);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Atom, u64), ParseError> {
        let mut orientation = Orientation::Positive;
        if self.eat('-') {
            orientation = orientation.reversed();
        }
        let mut mult = 1u64;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let (at, n) = self.integer()?;
            if n == 0 {
                return self.err(at, ParseErrorKind::ZeroMultiplicity);
            }
            mult = n as u64;
            self.expect('*', "'*' after multiplicity")?;
        }
        if self.eat('-') {
            orientation = orientation.reversed();
        }
        let kind = self.base()?;
        Ok((Atom::new(kind, orientation), mult))
    }

    fn base(&mut self) -> Result<AtomKind, ParseError> {
        let here = {
            self.skip_ws();
            self.pos
        };
        let Some((at, name)) = self.ident() else {
            return self.err(here, ParseErrorKind::Expected("atom"));
        };
        match name.as_str() {
            "sigma" => {
                self.expect('(', "'('")?;
                let (_, a) = self.integer()?;
                self.expect(',', "','")?;
                let (_, b) = self.integer()?;
                self.expect(',', "','")?;
                let (_, c) = self.integer()?;
                self.expect(')', "')'")?;
                BrieskornParams::new(a, b, c)
                    .map(AtomKind::Brieskorn)
                    .or_else(|e| self.err(at, ParseErrorKind::Brieskorn(e)))
            }
            "surgery" => {
                self.expect('(', "'('")?;
                let Some((t_at, t)) = self.ident() else {
                    return self.err(self.pos, ParseErrorKind::Expected("'T'"));
                };
                if t != "T" {
                    return self.err(t_at, ParseErrorKind::Expected("'T'"));
                }
                self.expect('(', "'('")?;
                let (_, p) = self.integer()?;
                self.expect(',', "','")?;
                let (_, q) = self.integer()?;
                self.expect(')', "')'")?;
                self.expect(',', "','")?;
                let (coef_at, n) = self.integer()?;
                self.expect(')', "')'")?;
                let knot = match TorusKnot::new(p, q) {
                    Ok(k) => k,
                    Err(e) => return self.err(t_at, ParseErrorKind::Knot(e)),
                };
                if n != 2 {
                    return self.err(coef_at, ParseErrorKind::UnsupportedSurgery(n));
                }
                Ok(AtomKind::Surgery2(knot))
            }
            _ if self.registry.contains(&name) => Ok(AtomKind::Named(name)),
            _ => self.err(at, ParseErrorKind::UnknownAtom(name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Manifold {
        parse_descriptor(s).unwrap()
    }

    fn err(s: &str) -> ParseError {
        parse_descriptor(s).unwrap_err()
    }

    #[test]
    fn single_atom() {
        let m = parse("P");
        assert_eq!(m.summands().collect::<Vec<_>>(), vec![(&Atom::poincare(), 1)]);
    }

    #[test]
    fn family_descriptor() {
        let m = parse("3*P # -25*O");
        assert_eq!(m.multiplicity(&Atom::poincare()), 3);
        assert_eq!(m.multiplicity(&Atom::named("O", Orientation::Negative)), 25);
        assert_eq!(m.summand_count(), 28);
        assert_eq!(m, Manifold::family(3, 25));
    }

    #[test]
    fn sign_positions() {
        assert_eq!(parse("3*-O"), parse("-3*O"));
        assert_eq!(parse("--O"), parse("O"));
        assert_eq!(parse("  P#P # 2 * P "), parse("4*P"));
    }

    #[test]
    fn brieskorn_and_surgery() {
        let m = parse("sigma(2,3,5)");
        let (atom, _) = m.summands().next().unwrap();
        assert_eq!(atom.kind, AtomKind::Brieskorn(BrieskornParams::new(2, 3, 5).unwrap()));
        assert_eq!(parse("sigma( 5 , 3 , 2 )"), m);
        let s = parse("surgery(T(2,3),2)");
        assert_eq!(s.to_string(), "surgery(T(2,3),2)");
        assert_eq!(parse("surgery(T(3,2),+2)"), s);
    }

    #[test]
    fn sphere() {
        assert!(parse("S3").is_sphere());
        assert!(parse(" S3 ").is_sphere());
        assert_eq!(err("S3 # P").kind, ParseErrorKind::Trailing);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            err("P # Q"),
            ParseError {
                column: 5,
                kind: ParseErrorKind::UnknownAtom("Q".into())
            }
        );
        assert_eq!(err("P #").kind, ParseErrorKind::Expected("atom"));
        assert_eq!(err("").kind, ParseErrorKind::Expected("atom"));
        assert_eq!(err("3 P").column, 3);
        assert_eq!(err("0*P").kind, ParseErrorKind::ZeroMultiplicity);
        assert_eq!(err("P P").kind, ParseErrorKind::Trailing);
        assert!(matches!(err("sigma(2,4,5)").kind, ParseErrorKind::Brieskorn(_)));
        assert!(matches!(err("surgery(T(2,4),2)").kind, ParseErrorKind::Knot(_)));
        let e = err("surgery(T(2,3),3)");
        assert_eq!(e.kind, ParseErrorKind::UnsupportedSurgery(3));
        assert_eq!(e.column, 16);
        assert_eq!(err("sigma(2,3)").kind, ParseErrorKind::Expected("','"));
    }

    #[test]
    fn render_round_trip() {
        for s in ["S3", "P", "3*P # -25*O", "-P # 2*sigma(2,3,7) # -surgery(T(2,5),2)"] {
            let m = parse(s);
            assert_eq!(parse(&m.to_string()), m, "{s}");
        }
    }
}
