//! Parser for the polynomial expression language.
//!
//! ```text
//! expr     := term { ("+"|"-") term } ;
//! term     := factor { "*" factor } ;
//! factor   := rational | variable [ "^" nat ] | "(" expr ")" ;
//! rational := [ "-" ] nat [ "/" nat ] ;
//! ```
//!
//! Whitespace is insignificant and there is no implicit multiplication.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ParseError;
use crate::poly::{default_names, Monomial, Polynomial};

/// Ordered variable names, plus optional aliases resolving to an index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variables {
    names: Vec<String>,
    aliases: Vec<(String, usize)>,
}

impl Variables {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ParseError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 3 {
            return Err(ParseError::TooFewVariables(names.len()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(ParseError::DuplicateVariable(a.clone()));
            }
        }
        Ok(Variables {
            names,
            aliases: Vec::new(),
        })
    }

    /// `x1..xn`, with `x, y, z, t` accepted as aliases when `n <= 4`.
    pub fn standard(n: usize) -> Result<Self, ParseError> {
        let mut vars = Self::new(default_names(n))?;
        if n <= 4 {
            vars.aliases = ["x", "y", "z", "t"]
                .iter()
                .take(n)
                .enumerate()
                .map(|(i, a)| (a.to_string(), i))
                .collect();
        }
        Ok(vars)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .or_else(|| self.aliases.iter().find(|(a, _)| a == name).map(|&(_, i)| i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Nat(n)));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a Variables,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn nat(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.syntax("expected a natural number"),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.pos += 1;
                if !matches!(self.peek(), Some(Tok::Nat(_))) {
                    return self.syntax("`-` inside a term must be followed by a number (write -1*x)");
                }
                let q = self.rational()?;
                Ok(Polynomial::constant(n, -q))
            }
            Some(Tok::Nat(_)) => {
                let q = self.rational()?;
                Ok(Polynomial::constant(n, q))
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                let index = self
                    .vars
                    .index_of(&name)
                    .ok_or(ParseError::UnknownVariable { name, pos: at })?;
                self.pos += 1;
                let mut exp = 1u32;
                if let Some(Tok::Caret) = self.peek() {
                    self.pos += 1;
                    let at = self.offset();
                    match self.peek() {
                        Some(Tok::Nat(e)) => {
                            exp = u32::try_from(e.clone())
                                .ok()
                                .filter(|&e| e > 0)
                                .ok_or(ParseError::BadExponent { pos: at })?;
                            self.pos += 1;
                        }
                        Some(Tok::Minus) => return Err(ParseError::BadExponent { pos: at }),
                        _ => return self.syntax("expected an exponent"),
                    }
                }
                let mut exps = vec![0; n];
                exps[index] = exp;
                Ok(Polynomial::term(
                    Monomial::from_exponents(exps),
                    BigRational::from_integer(1.into()),
                ))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.syntax("expected `)`"),
                }
            }
            Some(_) => self.syntax("expected a number, variable or `(`"),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let num = self.nat()?;
        if let Some(Tok::Slash) = self.peek() {
            self.pos += 1;
            let at = self.offset();
            let den = self.nat()?;
            if den.is_zero() {
                return Err(ParseError::Syntax {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }
}

/// Parses `text` over the declared variables.
pub fn parse_polynomial(text: &str, vars: &Variables) -> Result<Polynomial, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vars,
    };
    let p = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.syntax("unexpected trailing input");
    }
    Ok(p)
}
