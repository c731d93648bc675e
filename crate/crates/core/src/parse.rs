//! Text format for polynomial map-germs.
//!
//! ```text
//! vars: x1, x2 | x1^3 + x1*x2 ; x2
//! ```
//!
//! An optional `vars:` header names the source variables and an optional
//! `params: a = 1/2, b = -3` header fixes named constants. Headers end at a
//! `|` or at the first token that does not continue the list, so they may
//! also sit on their own lines. Without `vars:` the variables are
//! `x1, …, xN` with `N` the largest index used. Components are separated by
//! `;`. Operators: `+ - * / ^` and parentheses; `^` takes a nonnegative
//! integer literal and binds tighter than unary minus, which binds tighter
//! than `*` and `/`. Division is only by nonzero constants. `#` starts a
//! comment running to the end of the line.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::germ::MapGerm;
use crate::poly::{Poly, MAX_VARS};
use crate::rat::Rat;

const MAX_EXPONENT: u32 = 64;
const MAX_DEGREE: u32 = 64;
const MAX_DEPTH: usize = 64;
const MAX_LITERAL_DIGITS: usize = 64;
const MAX_TERMS: usize = 20_000;
const MAX_COEFF_BITS: u64 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    Exponent,
    ConstantTerm,
    TooComplex,
    Dimension,
}

/// A parse failure with its 1-based position and byte span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub col: usize,
    pub span: (usize, usize),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Colon,
    Comma,
    Pipe,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(i) => write!(f, "number `{i}`"),
            Tok::End => write!(f, "end of input"),
            other => {
                let s = match other {
                    Tok::Colon => ":",
                    Tok::Comma => ",",
                    Tok::Pipe => "|",
                    Tok::Semi => ";",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Star => "*",
                    Tok::Slash => "/",
                    Tok::Caret => "^",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    _ => "=",
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b':' => Some(Tok::Colon),
            b',' => Some(Tok::Comma),
            b'|' => Some(Tok::Pipe),
            b';' => Some(Tok::Semi),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token { tok, start, end: i });
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i - start > MAX_LITERAL_DIGITS {
                return Err(error_at(text, ParseErrorKind::TooComplex, "numeric literal too long", (start, i)));
            }
            let v: BigInt = text[start..i].parse().expect("ascii digits");
            out.push(Token { tok: Tok::Int(v), start, end: i });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                start,
                end: i,
            });
            continue;
        }
        let ch = text[i..].chars().next().expect("in bounds");
        let end = i + ch.len_utf8();
        return Err(error_at(
            text,
            ParseErrorKind::Syntax,
            &format!("unexpected character {ch:?}"),
            (start, end),
        ));
    }
    out.push(Token {
        tok: Tok::End,
        start: text.len(),
        end: text.len(),
    });
    Ok(out)
}

fn error_at(text: &str, kind: ParseErrorKind, message: &str, span: (usize, usize)) -> ParseError {
    let (line, col) = position(text, span.0);
    ParseError {
        kind,
        message: message.to_string(),
        line,
        col,
        span,
    }
}

/// Parsed expression before variables are fixed: a polynomial over the
/// identifiers seen so far.
struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
    declared: bool,
    params: HashMap<String, Rat>,
    depth: usize,
}

/// Sparse expression value keyed by variable index; the variable count is
/// only known after the whole input has been read.
type Terms = HashMap<Vec<u16>, Rat>;

/// A top-level summand with its byte span.
type Summand = ((usize, usize), Terms);

fn t_const(c: Rat) -> Terms {
    let mut m = HashMap::new();
    if !c.is_zero() {
        m.insert(vec![], c);
    }
    m
}

fn t_add(a: &Terms, b: &Terms, sign: i8) -> Terms {
    let mut out = a.clone();
    for (e, c) in b {
        let c = if sign < 0 { -c } else { c.clone() };
        let slot = out.entry(e.clone()).or_insert_with(Rat::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            out.remove(e);
        }
    }
    out
}

fn add_exps(a: &[u16], b: &[u16]) -> Vec<u16> {
    let n = a.len().max(b.len());
    let mut e: Vec<u16> = (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// Product, or `None` when the result would exceed the size limits.
fn t_mul(a: &Terms, b: &Terms) -> Option<Terms> {
    if a.len().saturating_mul(b.len()) > 50 * MAX_TERMS {
        return None;
    }
    let mut out: Terms = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = add_exps(ea, eb);
            let slot = out.entry(e.clone()).or_insert_with(Rat::zero);
            *slot = &*slot + &(ca * cb);
            if slot.is_zero() {
                out.remove(&e);
            }
        }
    }
    let small = |c: &Rat| c.numer().bits() <= MAX_COEFF_BITS && c.denom().bits() <= MAX_COEFF_BITS;
    (out.len() <= MAX_TERMS && out.values().all(small)).then_some(out)
}

fn t_degree(a: &Terms) -> u32 {
    a.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
}

fn t_constant(a: &Terms) -> Option<Rat> {
    match a.len() {
        0 => Some(Rat::zero()),
        1 => a.get(&vec![]).cloned(),
        _ => None,
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.start, t.end)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, message: &str) -> ParseError {
        error_at(self.text, kind, message, self.span())
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.err(
            ParseErrorKind::Syntax,
            &format!("expected {wanted}, found {}", self.peek()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn is_header(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word) && *self.peek_at(1) == Tok::Colon
    }

    fn headers(&mut self) -> Result<(), ParseError> {
        loop {
            if self.is_header("vars") {
                if self.declared {
                    return Err(self.err(ParseErrorKind::Syntax, "duplicate `vars:` header"));
                }
                self.bump();
                self.bump();
                loop {
                    let span = self.span();
                    match self.bump().tok {
                        Tok::Ident(name) => {
                            if self.vars.contains(&name) {
                                return Err(error_at(
                                    self.text,
                                    ParseErrorKind::Syntax,
                                    &format!("variable `{name}` declared twice"),
                                    span,
                                ));
                            }
                            self.vars.push(name);
                        }
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("a variable name"));
                        }
                    }
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
                if self.vars.len() > MAX_VARS {
                    return Err(self.err(
                        ParseErrorKind::Dimension,
                        &format!("at most {MAX_VARS} variables are supported"),
                    ));
                }
                self.declared = true;
            } else if self.is_header("params") {
                self.bump();
                self.bump();
                loop {
                    let span = self.span();
                    let name = match self.bump().tok {
                        Tok::Ident(name) => name,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("a parameter name"));
                        }
                    };
                    if self.params.contains_key(&name) || self.vars.contains(&name) {
                        return Err(error_at(
                            self.text,
                            ParseErrorKind::Syntax,
                            &format!("`{name}` declared twice"),
                            span,
                        ));
                    }
                    self.expect(Tok::Eq, "`=`")?;
                    let vspan = self.span();
                    let value = self.expr()?;
                    let value = t_constant(&value).ok_or_else(|| {
                        error_at(
                            self.text,
                            ParseErrorKind::Syntax,
                            "parameter values must be constants",
                            (vspan.0, self.toks[self.pos.saturating_sub(1)].end),
                        )
                    })?;
                    self.params.insert(name, value);
                    if *self.peek() != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            } else {
                return Ok(());
            }
            if *self.peek() == Tok::Pipe {
                self.bump();
            }
        }
    }

    fn variable(&mut self, name: &str, span: (usize, usize)) -> Result<Terms, ParseError> {
        if let Some(v) = self.params.get(name) {
            return Ok(t_const(v.clone()));
        }
        let index = if self.declared {
            self.vars.iter().position(|v| v == name)
        } else {
            name.strip_prefix('x')
                .filter(|d| !d.is_empty() && !d.starts_with('0') && d.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| (1..=MAX_VARS).contains(&i))
                .map(|i| i - 1)
        };
        let index = index.ok_or_else(|| {
            let hint = if self.declared {
                ""
            } else {
                " (without a `vars:` header only x1..x8 are known)"
            };
            error_at(
                self.text,
                ParseErrorKind::UnknownIdentifier,
                &format!("unknown identifier `{name}`{hint}"),
                span,
            )
        })?;
        let mut e = vec![0u16; index + 1];
        e[index] = 1;
        let mut m = HashMap::new();
        m.insert(e, Rat::one());
        Ok(m)
    }

    fn too_large(&self, span: (usize, usize)) -> ParseError {
        error_at(self.text, ParseErrorKind::TooComplex, "expression too large", span)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::TooComplex, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Terms, ParseError> {
        self.summands().map(|(t, _)| t)
    }

    /// Sum of terms, also returning each top-level summand's span and value.
    fn summands(&mut self) -> Result<(Terms, Vec<Summand>), ParseError> {
        self.enter()?;
        let mut parts = Vec::new();
        let mut start = self.span().0;
        let mut acc = self.term()?;
        parts.push(((start, self.prev_end()), acc.clone()));
        loop {
            let sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => break,
            };
            start = self.span().0;
            self.bump();
            let rhs = self.term()?;
            let signed = if sign < 0 { t_add(&HashMap::new(), &rhs, -1) } else { rhs.clone() };
            parts.push(((start, self.prev_end()), signed));
            acc = t_add(&acc, &rhs, sign);
        }
        self.depth -= 1;
        Ok((acc, parts))
    }

    fn prev_end(&self) -> usize {
        self.toks[self.pos.saturating_sub(1)].end
    }

    fn term(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let span = self.span();
                    self.bump();
                    let rhs = self.unary()?;
                    if t_degree(&acc) + t_degree(&rhs) > MAX_DEGREE {
                        return Err(error_at(self.text, ParseErrorKind::TooComplex, "degree too large", span));
                    }
                    acc = t_mul(&acc, &rhs).ok_or_else(|| self.too_large(span))?;
                }
                Tok::Slash => {
                    self.bump();
                    let span = self.span();
                    let rhs = self.unary()?;
                    let span = (span.0, self.prev_end());
                    match t_constant(&rhs) {
                        Some(c) if !c.is_zero() => {
                            acc = t_mul(&acc, &t_const(c.recip())).ok_or_else(|| self.too_large(span))?;
                        }
                        Some(_) => {
                            return Err(error_at(self.text, ParseErrorKind::Syntax, "division by zero", span));
                        }
                        None => {
                            return Err(error_at(
                                self.text,
                                ParseErrorKind::Syntax,
                                "division by a non-constant expression",
                                span,
                            ));
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Terms, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.enter()?;
                self.bump();
                let v = self.unary()?;
                self.depth -= 1;
                Ok(t_add(&HashMap::new(), &v, -1))
            }
            Tok::Plus => {
                self.enter()?;
                self.bump();
                let v = self.unary();
                self.depth -= 1;
                v
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Terms, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let span = self.span();
        let e = match &self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                u32::try_from(v.clone())
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| {
                        error_at(
                            self.text,
                            ParseErrorKind::Exponent,
                            &format!("exponent larger than {MAX_EXPONENT}"),
                            span,
                        )
                    })?
            }
            other => {
                return Err(error_at(
                    self.text,
                    ParseErrorKind::Syntax,
                    &format!("exponent must be a nonnegative integer literal, found {other}"),
                    span,
                ));
            }
        };
        if t_degree(&base) * e > MAX_DEGREE {
            return Err(error_at(self.text, ParseErrorKind::TooComplex, "degree too large", span));
        }
        if *self.peek() == Tok::Caret {
            return Err(self.err(ParseErrorKind::Syntax, "chained `^`; use parentheses"));
        }
        let mut out = t_const(Rat::one());
        for _ in 0..e {
            out = t_mul(&out, &base).ok_or_else(|| self.too_large(span))?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Terms, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(t_const(Rat::from_bigints(v, BigInt::from(1)).expect("nonzero denominator")))
            }
            Tok::Ident(name) => {
                self.bump();
                self.variable(&name, span)
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            _ => Err(self.unexpected("a number, variable or `(`")),
        }
    }
}

/// A parsed germ together with its variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedGerm {
    pub germ: MapGerm,
    pub vars: Vec<String>,
}

/// Parses the text format into a germ and its variable names.
pub fn parse_germ(text: &str) -> Result<ParsedGerm, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        text,
        toks,
        pos: 0,
        vars: Vec::new(),
        declared: false,
        params: HashMap::new(),
        depth: 0,
    };
    p.headers()?;
    let mut comps = Vec::new();
    loop {
        let (value, parts) = p.summands()?;
        if let Some(c) = value.get(&vec![]) {
            // Point at the first summand carrying a constant.
            let span = parts
                .iter()
                .find(|(_, t)| t.contains_key(&vec![]))
                .map_or(p.span(), |(s, _)| *s);
            return Err(error_at(
                text,
                ParseErrorKind::ConstantTerm,
                &format!("nonzero constant term {c} (germs must vanish at the origin)"),
                span,
            ));
        }
        comps.push(value);
        match p.peek() {
            Tok::Semi => {
                p.bump();
            }
            Tok::End => break,
            _ => return Err(p.unexpected("`;`, an operator or end of input")),
        }
    }
    let n = if p.declared {
        p.vars.len()
    } else {
        comps
            .iter()
            .flat_map(|c| c.keys().map(|e| e.len()))
            .max()
            .unwrap_or(0)
    };
    if n == 0 {
        return Err(error_at(text, ParseErrorKind::Dimension, "no source variables", (0, 0)));
    }
    let vars: Vec<String> = if p.declared {
        p.vars.clone()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    let polys: Vec<Poly> = comps
        .into_iter()
        .map(|c| {
            Poly::from_terms(
                n,
                c.into_iter().map(|(mut e, v)| {
                    e.resize(n, 0);
                    (e, v)
                }),
            )
            .expect("exponents sized to n")
        })
        .collect();
    let germ = MapGerm::new(n, polys).map_err(|e| error_at(text, ParseErrorKind::Dimension, &e.to_string(), (0, 0)))?;
    Ok(ParsedGerm { germ, vars })
}

/// Parses raw bytes, rejecting invalid UTF-8 with a positioned error.
pub fn parse_bytes(bytes: &[u8]) -> Result<ParsedGerm, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_germ(text),
        Err(e) => {
            let ok = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let (line, col) = position(ok, ok.len());
            Err(ParseError {
                kind: ParseErrorKind::Syntax,
                message: "input is not valid UTF-8".into(),
                line,
                col,
                span: (e.valid_up_to(), e.valid_up_to() + 1),
            })
        }
    }
}

/// Parses the text format into a germ.
pub fn parse_map(text: &str) -> Result<MapGerm, ParseError> {
    parse_germ(text).map(|p| p.germ)
}

/// Renders a germ in the text format; `parse_germ` reads it back exactly.
pub fn render(germ: &MapGerm, vars: &[String]) -> String {
    format!("vars: {} | {}", vars.join(", "), germ.display_with(Some(vars)))
}

/// Renders with the default names `x1, …, xn`.
pub fn render_default(germ: &MapGerm) -> String {
    let vars: Vec<String> = (1..=germ.src_dim()).map(|i| format!("x{i}")).collect();
    render(germ, &vars)
}
