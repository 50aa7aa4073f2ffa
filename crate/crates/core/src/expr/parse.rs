//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' integer)?
//! base   := integer | ident | '(' expr ')' | func '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-y^2` is `-(y^2)`, and a
//! fraction literal `p/q` is the division `p / q`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{canon, Expr, Func, Var};
use crate::Rat;

/// Largest admissible `|k|` in `e^k`.
pub const MAX_EXPONENT: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("unknown identifier {0:?}")]
    UnknownIdent(String),
    #[error("exponent must be an integer")]
    NonIntegerExponent,
    #[error("exponent exceeds the bound 2^16")]
    ExponentTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError { offset, kind })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected<T>(&mut self) -> PResult<T> {
        match self.peek() {
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
            Some(_) => {
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('\u{fffd}');
                self.err(self.pos, ParseErrorKind::Unexpected(ch))
            }
        }
    }

    fn expect(&mut self, c: u8) -> PResult<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected()
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(self.term()?.neg());
                }
                _ => return Ok(canon::add(terms)),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        // signs are gathered into one product so `-(a)*b` and `-1*(a)*b`
        // canonicalize identically
        let mut neg = false;
        let mut factors = vec![self.signed_factor(&mut neg)?];
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    factors.push(self.signed_factor(&mut neg)?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let mut dneg = false;
                    let d = self.signed_factor(&mut dneg)?;
                    neg ^= dneg;
                    factors.push(canon::pow(d, -1));
                }
                _ => {
                    if neg {
                        factors.push(Expr::int(-1));
                    }
                    return Ok(canon::mul(factors));
                }
            }
        }
    }

    fn signed_factor(&mut self, neg: &mut bool) -> PResult<Expr> {
        while self.peek() == Some(b'-') {
            self.pos += 1;
            *neg = !*neg;
        }
        let b = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.exponent()?;
            return Ok(canon::pow(b, k));
        }
        Ok(b)
    }

    /// `integer`, `-integer` or a parenthesized signed integer.
    fn exponent(&mut self) -> PResult<i64> {
        let start = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let digits_at = {
            self.skip_ws();
            self.pos
        };
        let Some(n) = self.digits() else {
            return match self.peek() {
                None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
                Some(_) => self.err(start, ParseErrorKind::NonIntegerExponent),
            };
        };
        if matches!(self.src.get(self.pos), Some(b'.')) || (paren && self.peek() == Some(b'/')) {
            return self.err(start, ParseErrorKind::NonIntegerExponent);
        }
        if paren {
            if self.peek() != Some(b')') {
                return self.err(start, ParseErrorKind::NonIntegerExponent);
            }
            self.pos += 1;
        }
        let k: i64 = match i64::try_from(&n) {
            Ok(k) if k <= MAX_EXPONENT => k,
            _ => return self.err(digits_at, ParseErrorKind::ExponentTooLarge),
        };
        Ok(if neg { -k } else { k })
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        s.parse().ok()
    }

    fn base(&mut self) -> PResult<Expr> {
        match self.peek() {
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits().expect("digit present");
                if matches!(self.src.get(self.pos), Some(b'.')) {
                    return self.unexpected();
                }
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let id = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                let func = match id {
                    "x" => return Ok(Expr::Var(Var::X)),
                    "y" => return Ok(Expr::Var(Var::Y)),
                    "z" => return Ok(Expr::Var(Var::Z)),
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    other => {
                        return self.err(start, ParseErrorKind::UnknownIdent(other.to_string()))
                    }
                };
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(canon::func(func, arg))
            }
            Some(_) => self.unexpected(),
        }
    }
}

/// Parses `text` into a canonical expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.unexpected();
    }
    Ok(e)
}
