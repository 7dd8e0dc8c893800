//! Expression language for algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | 'i' | IDENT | FUNC '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `*` is left associative and never reordered: products are noncommutative.

mod eval;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::scalar::Param;

pub use eval::{eval, eval_uea_source, parse_scalar, Engine, EvalError, MatrixEngine, ScalarEngine, UeaEngine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Comm,
    Acomm,
    Sym3,
    Pb,
    Nf,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Comm => "comm",
            Func::Acomm => "acomm",
            Func::Sym3 => "sym3",
            Func::Pb => "pb",
            Func::Nf => "nf",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Comm | Func::Acomm | Func::Pb => 2,
            Func::Sym3 => 3,
            Func::Nf => 1,
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        [Func::Comm, Func::Acomm, Func::Sym3, Func::Pb, Func::Nf].into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Imag,
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Func, Vec<Expr>),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.prec() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Int(n) => write!(f, "{n}")?,
            Expr::Imag => f.write_str("i")?,
            Expr::Ident(s) => f.write_str(s)?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write(f, 3)?;
            }
            Expr::Pow(a, n) => {
                a.write(f, 5)?;
                write!(f, "^{n}")?;
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    a.write(f, 0)?;
                }
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }

    /// Top-level additive pieces with their signs: `a - 2*b + c` gives
    /// `[(+, a), (-, 2*b), (+, c)]`.
    pub fn summands(&self) -> Vec<(bool, &Expr)> {
        fn go<'a>(e: &'a Expr, positive: bool, out: &mut Vec<(bool, &'a Expr)>) {
            match e {
                Expr::Add(a, b) => {
                    go(a, positive, out);
                    go(b, positive, out);
                }
                Expr::Sub(a, b) => {
                    go(a, positive, out);
                    go(b, !positive, out);
                }
                Expr::Neg(a) => go(a, !positive, out),
                _ => out.push((positive, e)),
            }
        }
        let mut out = Vec::new();
        go(self, true, &mut out);
        out
    }

    /// Every identifier mentioned.
    pub fn identifiers(&self) -> BTreeSet<&str> {
        fn go<'a>(e: &'a Expr, out: &mut BTreeSet<&'a str>) {
            match e {
                Expr::Ident(s) => {
                    out.insert(s);
                }
                Expr::Neg(a) | Expr::Pow(a, _) => go(a, out),
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Expr::Call(_, args) => args.iter().for_each(|a| go(a, out)),
                Expr::Int(_) | Expr::Imag => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// What the parser accepts as identifiers, and whether negative powers are
/// allowed.
#[derive(Clone, Debug, Default)]
pub struct Context {
    names: BTreeSet<String>,
    pub laurent: bool,
    /// Accept `X'3` as a spelling of `X3`.
    pub primes: bool,
}

impl Context {
    pub fn new(names: impl IntoIterator<Item = impl Into<String>>) -> Self {
        let mut c = Context::default();
        c.names.extend(Param::ALL.iter().map(|p| p.name().to_string()));
        c.names.extend(names.into_iter().map(Into::into));
        c
    }

    pub fn scalars() -> Self {
        Context::new(std::iter::empty::<String>())
    }

    pub fn with_laurent(mut self, on: bool) -> Self {
        self.laurent = on;
        self
    }

    pub fn with_primes(mut self, on: bool) -> Self {
        self.primes = on;
        self
    }

    pub fn add_name(&mut self, name: impl Into<String>) {
        self.names.insert(name.into());
    }

    pub fn knows(&self, name: &str) -> bool {
        self.names.contains(name)
    }
}

/// A parse failure with its position (1-based) and the tokens that would
/// have been accepted.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}{}", expected_suffix(.expected))]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            col += k - start;
            out.push(Lexed { tok: Tok::Int(text.parse().unwrap()), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            col += k - start;
            out.push(Lexed { tok: Tok::Ident(text), line: l0, col: c0 });
            continue;
        }
        if "+-*/^(),".contains(c) {
            out.push(Lexed { tok: Tok::Sym(c), line: l0, col: c0 });
            col += 1;
            k += 1;
            continue;
        }
        return Err(Diagnostic {
            line: l0,
            col: c0,
            message: format!("unexpected character {c:?}"),
            expected: Vec::new(),
        });
    }
    out.push(Lexed { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    ctx: &'a Context,
}

const OPERAND_START: &[&str] = &["integer", "identifier", "'('", "'-'"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn fail<T>(&self, message: impl Into<String>, expected: &[&str]) -> Result<T, Diagnostic> {
        let (line, col) = self.here();
        Err(Diagnostic {
            line,
            col,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let n = match self.peek().clone() {
            Tok::Int(n) => n,
            _ => return self.fail(format!("expected an integer exponent, found {}", self.describe()), &["integer"]),
        };
        if negative && !self.ctx.laurent {
            return self.fail("negative exponent (powers must be non-negative here)", &["integer"]);
        }
        let n: i64 = match i64::try_from(&n) {
            Ok(v) if v <= 1000 => v,
            _ => return self.fail("exponent too large", &[]),
        };
        self.pos += 1;
        if *self.peek() == Tok::Sym('^') {
            return self.fail("chained powers need parentheses", &[]);
        }
        Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.fail(format!("unclosed '(', found {}", self.describe()), &["')'"]);
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    if self.toks[self.pos + 1].tok == Tok::Sym('(') {
                        return self.call(func);
                    }
                }
                if name == "i" {
                    self.pos += 1;
                    return Ok(Expr::Imag);
                }
                let canonical = if self.ctx.primes { name.replace('\'', "") } else { name.clone() };
                if !self.ctx.knows(&canonical) {
                    let is_gen = canonical.len() > 1
                        && canonical.starts_with('X')
                        && canonical[1..].chars().all(|c| c.is_ascii_digit());
                    let what = if is_gen { "generator" } else { "identifier" };
                    return self.fail(format!("unknown {what} {name}"), &[]);
                }
                self.pos += 1;
                Ok(Expr::Ident(canonical))
            }
            _ => self.fail(format!("expected an operand, found {}", self.describe()), OPERAND_START),
        }
    }

    fn call(&mut self, func: Func) -> Result<Expr, Diagnostic> {
        self.pos += 2;
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        if !self.eat(')') {
            return self.fail(
                format!("expected ',' or ')' in {}(...), found {}", func.name(), self.describe()),
                &["','", "')'"],
            );
        }
        if args.len() != func.arity() {
            return self.fail(format!("{} takes {} arguments, got {}", func.name(), func.arity(), args.len()), &[]);
        }
        Ok(Expr::Call(func, args))
    }
}

/// Parses `src` against the names known to `ctx`.
pub fn parse(src: &str, ctx: &Context) -> Result<Expr, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, ctx };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(format!("unexpected {}", p.describe()), &["operator", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new((1..=8).map(|k| format!("X{k}")).chain(["T1".to_string(), "T12".to_string()]))
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("X1 + X2*X3^2 - -X4", &ctx()).unwrap();
        assert_eq!(e.to_string(), "X1 + X2*X3^2 - -X4");
        let e = parse("X1*X2*X3", &ctx()).unwrap();
        assert!(matches!(e, Expr::Mul(ref a, _) if matches!(**a, Expr::Mul(..))));
        let e = parse("X1 - (X2 - X3)", &ctx()).unwrap();
        assert_eq!(e.to_string(), "X1 - (X2 - X3)");
        let e = parse("-(X1*X2)^2", &ctx()).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(parse("X1*X2", &ctx()).unwrap()), 2))));
    }

    #[test]
    fn calls_and_diagnostics() {
        let e = parse("comm(X5,X6)", &ctx()).unwrap();
        assert_eq!(e.to_string(), "comm(X5, X6)");
        let d = parse("X9", &ctx()).unwrap_err();
        assert_eq!((d.line, d.col), (1, 1));
        assert!(d.message.contains("unknown generator X9"), "{d}");
        let d = parse("comm(X1)", &ctx()).unwrap_err();
        assert!(d.message.contains("takes 2 arguments"), "{d}");
        let d = parse("X1^-2", &ctx()).unwrap_err();
        assert!(d.message.contains("negative exponent"), "{d}");
        assert!(parse("X1^-2", &ctx().with_laurent(true)).is_ok());
        let d = parse("X1 +\n  * X2", &ctx()).unwrap_err();
        assert_eq!((d.line, d.col), (2, 3));
        assert!(d.expected.contains(&"identifier".to_string()));
        assert!(parse("X'3", &ctx()).is_err());
        assert_eq!(parse("X'3*X'4", &ctx().with_primes(true)).unwrap().to_string(), "X3*X4");
    }

    #[test]
    fn summands_track_signs() {
        let e = parse("X1 - 2*X2 + -(X3 - X4)", &ctx()).unwrap();
        let s: Vec<String> = e.summands().iter().map(|(p, t)| format!("{}{}", if *p { "+" } else { "-" }, t)).collect();
        assert_eq!(s, ["+X1", "-2*X2", "-X3", "+X4"]);
    }
}
