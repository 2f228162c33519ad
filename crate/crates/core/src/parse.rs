//! The ideal file format.
//!
//! ```text
//! ring x y
//! char 0
//! ideal
//! x^2*y - x*y^2, x^3,
//! y^3
//! ```
//!
//! Statements may also be separated by `;` on a single line.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{from_bigint, Field, Rational};
use crate::ideal::Ideal;
use crate::poly::{Exponent, Polynomial};

/// Parsed file, coefficients still integers.
#[derive(Clone, Debug)]
pub struct IdealFile {
    pub names: Vec<String>,
    pub characteristic: u64,
    pub generators: Vec<Polynomial<Rational>>,
}

impl IdealFile {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// Generators over the field of `template`.
    pub fn ideal<F: Field>(&self, template: &F) -> Ideal<F> {
        let gens = self
            .generators
            .iter()
            .map(|g| convert(g, template))
            .collect();
        Ideal::with_template(self.nvars(), gens, template.clone())
    }

    /// Canonical text; parsing it back gives the same file.
    pub fn to_text(&self) -> String {
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| g.to_string_with(&self.names))
            .collect();
        format!(
            "ring {}\nchar {}\nideal\n{}\n",
            self.names.join(" "),
            self.characteristic,
            gens.join(",\n")
        )
    }
}

pub fn convert<F: Field>(p: &Polynomial<Rational>, template: &F) -> Polynomial<F> {
    let terms = p
        .terms()
        .iter()
        .map(|(e, c)| {
            let num = from_bigint(template, c.numer());
            let den = from_bigint(template, c.denom());
            (e.clone(), num / den)
        })
        .collect();
    Polynomial::from_terms(p.nvars(), terms)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Sep,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let s: String = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .collect();
                i += s.len();
                toks.push((Tok::Ident(s), line_no, col));
            } else if c.is_ascii_digit() {
                let s: String = chars[i..].iter().take_while(|c| c.is_ascii_digit()).collect();
                i += s.len();
                toks.push((Tok::Int(s.parse().unwrap()), line_no, col));
            } else if "+-*^(),".contains(c) {
                toks.push((Tok::Sym(c), line_no, col));
                i += 1;
            } else if c == ';' {
                toks.push((Tok::Sep, line_no, col));
                i += 1;
            } else {
                return Err(Error::Parse {
                    line: line_no,
                    column: col,
                    message: format!("unexpected character '{c}'"),
                });
            }
        }
        toks.push((Tok::Sep, line_no, chars.len() + 1));
    }
    Ok(Lexer { toks })
}

struct Parser<'a> {
    toks: &'a [(Tok, usize, usize)],
    pos: usize,
    names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, column) = self
            .toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| (t.1, t.2))
            .unwrap_or((1, 1));
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }

    fn skip_seps(&mut self) {
        while self.peek() == Some(&Tok::Sep) {
            self.pos += 1;
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        self.skip_seps();
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{kw}'"))),
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn expr(&mut self) -> Result<Polynomial<Rational>> {
        let mut acc = Polynomial::zero(self.nvars());
        let mut sign = match self.peek() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Sym('+')) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Sym('+')) => sign = 1,
                Some(Tok::Sym('-')) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial<Rational>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Sym('*')) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(&Tok::Sym('^')) {
            return Ok(1);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                k.to_u32().ok_or_else(|| self.err("exponent too large"))
            }
            _ => Err(self.err("malformed exponent: expected integer after '^'")),
        }
    }

    fn factor(&mut self) -> Result<Polynomial<Rational>> {
        let n = self.nvars();
        let base = match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Polynomial::constant(n, Rational::from_integer(k))
            }
            Some(Tok::Ident(s)) => {
                let Some(i) = self.names.iter().position(|x| *x == s) else {
                    return Err(self.err(format!("unknown variable '{s}'")));
                };
                self.pos += 1;
                Polynomial::var(n, i, self.one())
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Sym(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                return Ok(self.factor()?.neg());
            }
            _ => return Err(self.err("expected a term")),
        };
        let k = self.exponent()?;
        Ok(if k == 1 { base } else { base.pow(k) })
    }
}

pub fn parse_ideal_file(text: &str) -> Result<IdealFile> {
    let lx = lex(text)?;
    let mut p = Parser {
        toks: &lx.toks,
        pos: 0,
        names: vec![],
    };
    p.keyword("ring")?;
    while let Some(Tok::Ident(s)) = p.peek().cloned() {
        if p.names.contains(&s) {
            return Err(p.err(format!("duplicate variable '{s}'")));
        }
        p.names.push(s);
        p.pos += 1;
    }
    if p.names.is_empty() {
        return Err(p.err("ring declares no variables"));
    }
    p.keyword("char")?;
    let characteristic = match p.peek().cloned() {
        Some(Tok::Int(k)) => {
            p.pos += 1;
            k.to_u64().ok_or_else(|| p.err("characteristic too large"))?
        }
        _ => return Err(p.err("expected characteristic")),
    };
    if characteristic != 0 && (!is_prime(characteristic) || characteristic >= 1 << 31) {
        return Err(p.err(format!("bad characteristic {characteristic}: need 0 or a prime below 2^31")));
    }
    p.keyword("ideal")?;
    let mut generators = Vec::new();
    loop {
        while matches!(p.peek(), Some(Tok::Sep) | Some(Tok::Sym(','))) {
            p.pos += 1;
        }
        if p.peek().is_none() {
            break;
        }
        let g = p.expr()?;
        match p.peek() {
            None | Some(Tok::Sep) | Some(Tok::Sym(',')) => {}
            _ => return Err(p.err("unexpected token after polynomial")),
        }
        if !g.is_zero() {
            generators.push(g);
        }
    }
    Ok(IdealFile {
        names: p.names,
        characteristic,
        generators,
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// Parses one polynomial over the given variable names.
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<Polynomial<Rational>> {
    let lx = lex(text)?;
    let mut p = Parser {
        toks: &lx.toks,
        pos: 0,
        names: names.to_vec(),
    };
    let e = p.expr()?;
    p.skip_seps();
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Exponent vector of a monomial written like `x^2*y`.
pub fn parse_monomial(text: &str, names: &[String]) -> Result<Exponent> {
    let p = parse_polynomial(text, names)?;
    match p.terms() {
        [(e, c)] if c.is_one() => Ok(e.clone()),
        _ if p.is_zero() && text.trim() == "0" => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "expected a monomial".into(),
        }),
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("'{text}' is not a monic monomial"),
        }),
    }
}
