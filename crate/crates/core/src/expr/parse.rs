use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Expr, Monomial, Rational, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, msg: String },
    UnsupportedFunction { pos: usize, name: String },
    NonIntegerFrequency { pos: usize, func: String },
    NonConstantDivisor { pos: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, msg } => write!(f, "syntax error at {pos}: {msg}"),
            ParseError::UnsupportedFunction { pos, name } => {
                write!(f, "unsupported function `{name}` at {pos}")
            }
            ParseError::NonIntegerFrequency { pos, func } => write!(
                f,
                "argument of `{func}` at {pos} must be an integer multiple of w"
            ),
            ParseError::NonConstantDivisor { pos } => {
                write!(f, "division by a non-constant expression at {pos}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part = &text[start..i];
                let mut frac_part = "";
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let fs = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    frac_part = &text[fs..i];
                }
                if int_part.is_empty() && frac_part.is_empty() {
                    return Err(syntax(start, "malformed number"));
                }
                let mut digits = String::from(int_part);
                digits.push_str(frac_part);
                let numer: BigInt = digits
                    .parse()
                    .map_err(|_| syntax(start, "malformed number"))?;
                let denom = num_traits::pow(BigInt::from(10), frac_part.len());
                out.push((start, Tok::Num(Rational::new(numer, denom))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => return Err(syntax(start, "unexpected character")),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(at, alloc::format!("expected {what}"))),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.product()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    match rhs.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return Err(syntax(at, "division by zero")),
                        None => return Err(ParseError::NonConstantDivisor { pos: at }),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exp = self.unary()?;
        let k = exp
            .as_constant()
            .filter(|c| c.is_integer())
            .and_then(|c| c.to_integer().to_u32())
            .filter(|k| *k <= 64)
            .ok_or_else(|| syntax(at, "exponent must be an integer in 0..=64"))?;
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(q)) => Ok(Expr::constant(q)),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::var(Var::X)),
                "y" => Ok(Expr::var(Var::Y)),
                "w" => Ok(Expr::var(Var::W)),
                _ if self.peek() == Some(&Tok::LParen) => self.call(at, name),
                _ => Err(syntax(at, alloc::format!("unknown identifier `{name}`"))),
            },
            Some(_) => Err(syntax(at, "expected an operand")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }

    fn call(&mut self, at: usize, name: String) -> Result<Expr, ParseError> {
        if !matches!(name.as_str(), "cos" | "sin" | "cosh" | "sinh" | "exp") {
            return Err(ParseError::UnsupportedFunction { pos: at, name });
        }
        self.expect(Tok::LParen, "`(`")?;
        let arg = self.sum()?;
        self.expect(Tok::RParen, "`)`")?;

        // The argument must be q·w for a rational q.
        let q = if arg.is_zero() {
            Rational::zero()
        } else {
            let w = Monomial::poly(0, 0, 1);
            match (arg.len(), arg.terms().next()) {
                (1, Some((m, c))) if *m == w => c.clone(),
                _ => {
                    return Err(syntax(
                        at,
                        alloc::format!("argument of `{name}` must be a rational multiple of w"),
                    ))
                }
            }
        };
        if !q.is_integer() {
            return Err(ParseError::NonIntegerFrequency { pos: at, func: name });
        }
        let freq = q.to_integer();
        let too_large = || syntax(at, "frequency out of range");
        Ok(match name.as_str() {
            "cos" => Expr::cos(freq.to_i32().ok_or_else(too_large)?.into()),
            "sin" => Expr::sin(freq.to_i32().ok_or_else(too_large)?.into()),
            "exp" => Expr::exp(freq.to_i32().ok_or_else(too_large)?),
            "cosh" => Expr::cosh(freq.to_i32().ok_or_else(too_large)?),
            _ => Expr::sinh(freq.to_i32().ok_or_else(too_large)?),
        })
    }
}

/// Parses an expression over `x`, `y`, `w`.
///
/// Accepts integer, decimal and `p/q` literals, `+ - * / ^`, parentheses and
/// the functions `cos`, `sin`, `cosh`, `sinh`, `exp` applied to an integer
/// multiple of `w`. Division is only allowed by nonzero constants and
/// exponents must be non-negative integers.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}
