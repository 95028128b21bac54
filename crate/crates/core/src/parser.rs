//! Text formats for polynomials, matrices, factor lists and points.
//!
//! ```text
//! poly   := ['-'] term (('+'|'-') term)* ;
//! term   := coeff ('*' factor)* | factor ('*' factor)* ;
//! factor := var ('^' nat)? ;
//! coeff  := int ('/' nat)? ;
//! var    := 'x' digit+ ;
//! matrix := '[' row (',' row)* ']' ;  row := '[' poly (',' poly)* ']'
//! ```
//!
//! Factor lists are entries separated by `;` or newlines. An entry is either
//! `(poly)^nat`, `(poly)`, or a bare `poly` whose trailing `^nat` (if any) is
//! read as the multiplicity. Lines starting with `#` are comments, except
//! `#vars N`, which raises the ambient variable count to at least `N`.
//!
//! Printing is canonical: terms in decreasing graded-lex order, explicit `*`
//! and `^`, coefficient 1 omitted.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{Monomial, Polynomial, ProjectivePoint, Rational};
use crate::matrix::{HypersurfaceSpec, PolyMatrix};

/// Byte range into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String },
    RaggedRows { expected: usize, found: usize },
    ProportionalFactors,
    ZeroDenominator,
    BadPoint(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{} at {}..{}", describe(.kind), .span.start, .span.end)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax { expected } => format!("syntax error: expected {expected}"),
        ParseErrorKind::RaggedRows { expected, found } => {
            format!("ragged rows: expected {expected} entries, found {found}")
        }
        ParseErrorKind::ProportionalFactors => "factor is proportional to an earlier one".into(),
        ParseErrorKind::ZeroDenominator => "zero denominator".into(),
        ParseErrorKind::BadPoint(msg) => format!("bad point: {msg}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn name(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Var(i) => format!("variable x{i}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
        }
    }
}

fn syntax(expected: impl Into<String>, span: SourceSpan) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax {
            expected: expected.into(),
        },
        span,
    }
}

/// Tokenizes `text[range]`; spans are absolute offsets into `text`.
fn lex(text: &str, base: usize) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = base + i;
        let single = |t: Tok| (t, SourceSpan::new(start, start + 1));
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'0'..=b'9' => {
                let s = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[s..i].parse().expect("digits");
                out.push((Tok::Int(n), SourceSpan::new(base + s, base + i)));
            }
            b'x' => {
                let s = i;
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(syntax("variable index after 'x'", SourceSpan::new(base + s, base + i)));
                }
                let idx: usize = text[ds..i].parse().map_err(|_| {
                    syntax("small variable index", SourceSpan::new(base + s, base + i))
                })?;
                out.push((Tok::Var(idx), SourceSpan::new(base + s, base + i)));
            }
            b'+' => {
                out.push(single(Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push(single(Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push(single(Tok::Star));
                i += 1;
            }
            b'^' => {
                out.push(single(Tok::Caret));
                i += 1;
            }
            b'/' => {
                out.push(single(Tok::Slash));
                i += 1;
            }
            b'[' => {
                out.push(single(Tok::LBracket));
                i += 1;
            }
            b']' => {
                out.push(single(Tok::RBracket));
                i += 1;
            }
            b'(' => {
                out.push(single(Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push(single(Tok::RParen));
                i += 1;
            }
            b',' => {
                out.push(single(Tok::Comma));
                i += 1;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(
                    format!("a polynomial token, found {ch:?}"),
                    SourceSpan::new(start, start + ch.len_utf8()),
                ));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    eof: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan::new(self.eof, self.eof))
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        let found = match self.peek() {
            Some(t) => t.name(),
            None => "end of input".into(),
        };
        Err(syntax(format!("{expected}, found {found}"), self.span()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&tok.name())
        }
    }

    fn nat(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("a natural number"),
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let span = self.span();
        let n = self.nat()?;
        u32::try_from(&n).map_err(|_| syntax("an exponent that fits in 32 bits", span))
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        let mut out = Polynomial::zero(1);
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        }
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negate { -c } else { c });
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::one();
        match self.peek() {
            Some(Tok::Int(_)) => {
                let num = self.nat()?;
                let mut den = BigInt::one();
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let span = self.span();
                    den = self.nat()?;
                    if den.is_zero() {
                        return Err(ParseError {
                            kind: ParseErrorKind::ZeroDenominator,
                            span,
                        });
                    }
                }
                coeff = Rational::new(num, den);
            }
            Some(Tok::Var(_)) => {
                mono = self.factor()?;
            }
            _ => return self.fail("a coefficient or variable"),
        }
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            mono = mono.mul(&self.factor()?);
        }
        Ok((mono, coeff))
    }

    fn factor(&mut self) -> Result<Monomial, ParseError> {
        let Some(Tok::Var(i)) = self.peek().cloned() else {
            return self.fail("a variable");
        };
        self.pos += 1;
        let mut e = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            e = self.exponent()?;
        }
        Ok(Monomial::var_pow(i, e))
    }

    fn end(&self, what: &str) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.fail(what)
        } else {
            Ok(())
        }
    }
}

/// Blanks out comment lines and reads `#vars N` headers.
fn preprocess(text: &str) -> Result<(String, usize), ParseError> {
    let mut out = String::with_capacity(text.len());
    let mut nvars = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(n) = rest.trim().strip_prefix("vars") {
                let lead = offset + (line.len() - trimmed.len());
                nvars = n.trim().parse().map_err(|_| {
                    syntax(
                        "a variable count after #vars",
                        SourceSpan::new(lead, lead + trimmed.trim_end().len()),
                    )
                })?;
            }
            out.extend(line.chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
        } else {
            out.push_str(line);
        }
        offset += line.len();
    }
    Ok((out, nvars))
}

fn parser_for(text: &str, base: usize) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text, base)?,
        pos: 0,
        eof: base + text.len(),
    })
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let (clean, nvars) = preprocess(text)?;
    let mut p = parser_for(&clean, 0)?;
    let poly = p.poly()?;
    p.end("'+', '-', '*' or end of input")?;
    Ok(poly.with_nvars(nvars))
}

pub fn parse_matrix(text: &str) -> Result<PolyMatrix, ParseError> {
    let (clean, nvars) = preprocess(text)?;
    let mut p = parser_for(&clean, 0)?;
    p.expect(Tok::LBracket)?;
    let mut rows: Vec<Vec<Polynomial>> = Vec::new();
    loop {
        let row_start = p.span().start;
        p.expect(Tok::LBracket)?;
        let mut row = vec![p.poly()?];
        while p.peek() == Some(&Tok::Comma) {
            p.pos += 1;
            row.push(p.poly()?);
        }
        let row_end = p.span().end;
        p.expect(Tok::RBracket)?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ParseError {
                    kind: ParseErrorKind::RaggedRows {
                        expected: first.len(),
                        found: row.len(),
                    },
                    span: SourceSpan::new(row_start, row_end),
                });
            }
        }
        rows.push(row);
        if p.peek() == Some(&Tok::Comma) {
            p.pos += 1;
        } else {
            break;
        }
    }
    p.expect(Tok::RBracket)?;
    p.end("end of input after matrix")?;
    let d = rows.len();
    if rows[0].len() != d {
        return Err(ParseError {
            kind: ParseErrorKind::RaggedRows {
                expected: d,
                found: rows[0].len(),
            },
            span: SourceSpan::new(0, clean.len()),
        });
    }
    let n = rows
        .iter()
        .flatten()
        .map(Polynomial::nvars)
        .max()
        .unwrap_or(1)
        .max(nvars);
    Ok(PolyMatrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(|e| e.with_nvars(n)).collect())
            .collect(),
    ))
}

pub fn parse_factors(text: &str) -> Result<HypersurfaceSpec, ParseError> {
    let (clean, nvars) = preprocess(text)?;
    let mut entries: Vec<(Polynomial, u32, SourceSpan)> = Vec::new();
    let mut start = 0;
    for piece in clean.split_inclusive([';', '\n']) {
        let body = piece.trim_end_matches([';', '\n']);
        let base = start;
        start += piece.len();
        if body.trim().is_empty() {
            continue;
        }
        let mut p = parser_for(body, base)?;
        let span = SourceSpan::new(base, base + body.len());
        let (poly, mult) = if p.peek() == Some(&Tok::LParen) {
            p.pos += 1;
            let poly = p.poly()?;
            p.expect(Tok::RParen)?;
            let mut mult = 1;
            if p.peek() == Some(&Tok::Caret) {
                p.pos += 1;
                mult = p.exponent()?;
            }
            p.end("end of factor entry")?;
            (poly, mult)
        } else {
            // a trailing `^ nat` is the multiplicity
            let n = p.toks.len();
            let mut mult = 1;
            if n >= 2 && p.toks[n - 2].0 == Tok::Caret {
                if let Tok::Int(k) = &p.toks[n - 1].0 {
                    mult = u32::try_from(k)
                        .map_err(|_| syntax("a small multiplicity", p.toks[n - 1].1))?;
                    p.toks.truncate(n - 2);
                    p.eof = p.toks.last().map(|t| t.1.end).unwrap_or(base);
                }
            }
            let poly = p.poly()?;
            p.end("';' or end of factor entry")?;
            (poly, mult)
        };
        if mult == 0 {
            return Err(syntax("a positive multiplicity", span));
        }
        if entries
            .iter()
            .any(|(q, _, _)| poly.proportionality(q).is_some())
        {
            return Err(ParseError {
                kind: ParseErrorKind::ProportionalFactors,
                span,
            });
        }
        entries.push((poly, mult, span));
    }
    if entries.is_empty() {
        return Err(syntax("at least one factor", SourceSpan::new(0, clean.len())));
    }
    let n = entries
        .iter()
        .map(|(p, _, _)| p.nvars())
        .max()
        .unwrap_or(1)
        .max(nvars);
    Ok(HypersurfaceSpec::new(
        entries
            .into_iter()
            .map(|(p, m, _)| (p.with_nvars(n), m))
            .collect(),
    ))
}

/// Comma-separated rationals, e.g. `1,0,0` or `1/2,-3,0`.
pub fn parse_point(text: &str) -> Result<ProjectivePoint, crate::error::Error> {
    let mut coords = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let span = SourceSpan::new(offset, offset + part.len());
        offset += part.len() + 1;
        let s = part.trim();
        let bad = || ParseError {
            kind: ParseErrorKind::BadPoint(format!("{s:?} is not a rational")),
            span,
        };
        let r: Rational = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ParseError {
                    kind: ParseErrorKind::ZeroDenominator,
                    span,
                }
                .into());
            }
            Rational::new(n, d)
        } else {
            Rational::from_integer(s.parse().map_err(|_| bad())?)
        };
        coords.push(r);
    }
    ProjectivePoint::new(coords).map_err(|_| {
        ParseError {
            kind: ParseErrorKind::BadPoint("all coordinates are zero".into()),
            span: SourceSpan::new(0, text.len()),
        }
        .into()
    })
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{i}")?;
        } else {
            write!(f, "x{i}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.size() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.size() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for HypersurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (p, m)) in self.factors().iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "({p})^{m}")?;
        }
        Ok(())
    }
}
