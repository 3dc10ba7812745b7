//! Plain-text grammar shared by polynomials and operators.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := number ['i'] | 'i' | var ['^' int] | '(' expr ')'
//! number := int ['/' int] | int '.' int
//! var    := x | y | dx | dy
//! ```
//!
//! `3/2i` is the imaginary number `(3/2)·i`. For operators a product of
//! factors is read as composition left to right, so `dx*x` parses to
//! `x*dx + 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::gaussian::GaussianRational;
use super::poly::Poly2;
use super::weyl::WeylOp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{found}` at offset {pos}")]
    UnexpectedToken { found: String, pos: usize },
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("zero denominator at offset {pos}")]
    ZeroDenominator { pos: usize },
    #[error("exponent too large at offset {pos}")]
    ExponentOverflow { pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((Tok::Plus, pos));
                i += 1
            }
            '-' => {
                out.push((Tok::Minus, pos));
                i += 1
            }
            '*' => {
                out.push((Tok::Star, pos));
                i += 1
            }
            '^' => {
                out.push((Tok::Caret, pos));
                i += 1
            }
            '(' => {
                out.push((Tok::LParen, pos));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, pos));
                i += 1
            }
            c if c.is_ascii_digit() => {
                let digits = |i: &mut usize| {
                    let start = *i;
                    while *i < chars.len() && chars[*i].1.is_ascii_digit() {
                        *i += 1;
                    }
                    chars[start..*i].iter().map(|(_, c)| c).collect::<String>()
                };
                let int_part: BigInt = digits(&mut i).parse().expect("digits");
                let mut value = BigRational::from_integer(int_part.clone());
                if i < chars.len() && chars[i].1 == '/' {
                    let slash = chars[i].0;
                    i += 1;
                    if i >= chars.len() || !chars[i].1.is_ascii_digit() {
                        return Err(ParseError::UnexpectedChar { ch: '/', pos: slash });
                    }
                    let den: BigInt = digits(&mut i).parse().expect("digits");
                    if den.is_zero() {
                        return Err(ParseError::ZeroDenominator { pos: slash });
                    }
                    value = BigRational::new(int_part, den);
                } else if i < chars.len() && chars[i].1 == '.' {
                    i += 1;
                    let frac = digits(&mut i);
                    if frac.is_empty() {
                        return Err(ParseError::UnexpectedChar { ch: '.', pos: chars[i - 1].0 });
                    }
                    let scale = BigInt::from(10u32).pow(frac.len() as u32);
                    let f: BigInt = frac.parse().expect("digits");
                    value = BigRational::new(int_part * &scale + f, scale);
                }
                let imaginary = i < chars.len()
                    && chars[i].1 == 'i'
                    && !chars.get(i + 1).is_some_and(|(_, c)| c.is_ascii_alphanumeric());
                if imaginary {
                    i += 1;
                }
                out.push((Tok::Num(value, imaginary), pos));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push((Tok::Ident(name), pos));
            }
            ch => return Err(ParseError::UnexpectedChar { ch, pos }),
        }
    }
    Ok(out)
}

/// What the parser needs from a target algebra.
trait Algebra: Sized + Clone {
    fn scalar(c: GaussianRational) -> Self;
    fn variable(name: &str) -> Option<Self>;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Algebra for Poly2 {
    fn scalar(c: GaussianRational) -> Self {
        Poly2::constant(c)
    }
    fn variable(name: &str) -> Option<Self> {
        match name {
            "x" => Some(Poly2::x()),
            "y" => Some(Poly2::y()),
            _ => None,
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Algebra for WeylOp {
    fn scalar(c: GaussianRational) -> Self {
        WeylOp::scalar(c)
    }
    fn variable(name: &str) -> Option<Self> {
        match name {
            "x" => Some(WeylOp::x()),
            "y" => Some(WeylOp::y()),
            "dx" => Some(WeylOp::dx()),
            "dy" => Some(WeylOp::dy()),
            _ => None,
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.compose(rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const MAX_EXPONENT: u32 = 64;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, p)) => ParseError::UnexpectedToken { found: format!("{t:?}"), pos: *p },
            None => ParseError::UnexpectedEnd,
        }
    }

    fn expr<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let first: A = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term::<A>()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let mut acc: A = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor<A: Algebra>(&mut self) -> Result<A, ParseError> {
        let (tok, pos) = self.next().ok_or(ParseError::UnexpectedEnd)?;
        match tok {
            Tok::Num(v, imaginary) => {
                let c = if imaginary {
                    GaussianRational::new(BigRational::zero(), v)
                } else {
                    GaussianRational::from(v)
                };
                Ok(A::scalar(c))
            }
            Tok::Ident(name) if name == "i" => Ok(A::scalar(GaussianRational::i())),
            Tok::Ident(name) => {
                let base = A::variable(&name)
                    .ok_or(ParseError::UnknownVariable { name: name.clone(), pos })?;
                if let Some(Tok::Caret) = self.peek() {
                    self.pos += 1;
                    let epos = self.offset();
                    match self.next() {
                        Some((Tok::Num(v, false), _)) if v.is_integer() => {
                            let k: u32 = v
                                .to_integer()
                                .try_into()
                                .ok()
                                .filter(|k| *k <= MAX_EXPONENT)
                                .ok_or(ParseError::ExponentOverflow { pos: epos })?;
                            let mut out = A::scalar(GaussianRational::one());
                            for _ in 0..k {
                                out = out.mul(&base);
                            }
                            Ok(out)
                        }
                        _ => {
                            self.pos -= 1;
                            Err(self.unexpected())
                        }
                    }
                } else {
                    Ok(base)
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.next() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected())
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }
}

fn parse_with<A: Algebra>(input: &str) -> Result<A, ParseError> {
    let toks = lex(input)?;
    let mut parser = Parser { toks, pos: 0 };
    let out = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(parser.unexpected());
    }
    Ok(out)
}

pub fn parse_poly(input: &str) -> Result<Poly2, ParseError> {
    parse_with(input)
}

pub fn parse_weyl(input: &str) -> Result<WeylOp, ParseError> {
    parse_with(input)
}

impl std::str::FromStr for Poly2 {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

impl std::str::FromStr for WeylOp {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_weyl(s)
    }
}
