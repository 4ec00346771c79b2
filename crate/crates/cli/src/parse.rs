//! Strict parser for the bivariate polynomial input grammar.
//!
//! A polynomial is a sum of terms separated by `+` or `-` (a leading `-`
//! is allowed); each term is
//!
//! ```text
//! [integer] ['*'] ['t' ['^' integer]] ['*'] ['x' ['^' integer]]
//! ```
//!
//! with at least one of the three parts present, whitespace ignored
//! between tokens, and coefficients reduced modulo the field
//! characteristic. `x^3 + t*x^2 + t + 1` is a typical accepted string.
//! Errors carry the line and column of the offending character.

use std::fmt;
use std::iter::Peekable;
use std::str::Chars;

use odoni_core::bipoly::{bp_from_coeffs, BiPoly};
use odoni_core::ff::FieldSpec;
use odoni_core::poly::PolyRing;

/// Exponents above this are rejected outright; they exceed anything the
/// desk-scale engines handle and would only serve to exhaust memory.
pub const MAX_EXPONENT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Scanner<'a> {
    chars: Peekable<Chars<'a>>,
    line: usize,
    col: usize,
}

struct Term {
    coeff: u64,
    t_exp: usize,
    x_exp: usize,
}

impl<'a> Scanner<'a> {
    fn new(input: &'a str) -> Scanner<'a> {
        Scanner { chars: input.chars().peekable(), line: 1, col: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        match c {
            Some('\n') => {
                self.line += 1;
                self.col = 1;
            }
            Some(_) => self.col += 1,
            None => {}
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().map_or(false, |c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let mut value: u64 = 0;
        let mut any = false;
        while let Some(c) = self.peek() {
            let Some(digit) = c.to_digit(10) else { break };
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(digit as u64))
                .ok_or_else(|| self.err("integer literal overflows 64 bits"))?;
            self.bump();
            any = true;
        }
        if !any {
            return Err(self.err("expected a digit"));
        }
        Ok(value)
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        if !self.eat('^') {
            return Ok(1);
        }
        self.skip_ws();
        let e = self.integer()?;
        if e > MAX_EXPONENT {
            return Err(self.err(format!("exponent exceeds the supported maximum {MAX_EXPONENT}")));
        }
        Ok(e as usize)
    }

    fn term(&mut self, p: u64) -> Result<Term, ParseError> {
        let mut term = Term { coeff: 1, t_exp: 0, x_exp: 0 };
        let mut seen_part = false;
        self.skip_ws();

        let mut star_pending = false;
        if self.peek().map_or(false, |c| c.is_ascii_digit()) {
            term.coeff = self.integer()? % p;
            seen_part = true;
            self.skip_ws();
            star_pending = self.eat('*');
            if star_pending {
                self.skip_ws();
            }
        }

        if self.peek() == Some('t') {
            self.bump();
            term.t_exp = self.exponent()?;
            seen_part = true;
            star_pending = false;
            self.skip_ws();
            if self.eat('*') {
                star_pending = true;
                self.skip_ws();
            }
        } else if star_pending {
            return Err(self.err("expected 't' or 'x' after '*'"));
        }

        if self.peek() == Some('x') {
            self.bump();
            term.x_exp = self.exponent()?;
            seen_part = true;
        } else if star_pending {
            return Err(self.err("expected 'x' after '*'"));
        }

        if !seen_part {
            return Err(match self.peek() {
                Some(c) => self.err(format!("expected a term, found '{c}'")),
                None => self.err("expected a term, found end of input"),
            });
        }
        Ok(term)
    }
}

/// Parse a polynomial in the input grammar over the prime field `F_p`,
/// reducing coefficients modulo `p`.
pub fn parse_bipoly(field: &FieldSpec, input: &str) -> Result<BiPoly, ParseError> {
    let p = field.p();
    let mut s = Scanner::new(input);
    s.skip_ws();
    if s.at_end() {
        return Err(s.err("empty polynomial"));
    }
    let mut terms: Vec<(u64, usize, usize)> = Vec::new();
    let mut negate = s.eat('-');
    loop {
        s.skip_ws();
        let t = s.term(p)?;
        let coeff = if negate { (p - t.coeff % p) % p } else { t.coeff % p };
        terms.push((coeff, t.t_exp, t.x_exp));
        s.skip_ws();
        if s.at_end() {
            break;
        }
        if s.eat('+') {
            negate = false;
        } else if s.eat('-') {
            negate = true;
        } else {
            let c = s.peek().unwrap();
            return Err(s.err(format!("expected '+' or '-', found '{c}'")));
        }
    }

    let x_max = terms.iter().map(|&(_, _, xe)| xe).max().unwrap_or(0);
    let mut rows: Vec<Vec<u64>> = vec![Vec::new(); x_max + 1];
    for (coeff, t_exp, x_exp) in terms {
        let row = &mut rows[x_exp];
        if row.len() <= t_exp {
            row.resize(t_exp + 1, 0);
        }
        row[t_exp] = (row[t_exp] + coeff) % p;
    }
    let tr = PolyRing::new(field);
    let coeffs = rows
        .into_iter()
        .map(|row| tr.from_coeffs(row.into_iter().map(|c| field.scalar(c)).collect()))
        .collect();
    Ok(bp_from_coeffs(field, coeffs))
}
