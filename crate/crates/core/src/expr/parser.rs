//! Recursive-descent parser.
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := VAR1 '[' nat ']' | VAR2 '[' nat ']' | 'h' | 'i' | nat ('/' nat)?
//!         | '(' expr ')' | 'D(' expr ';' expr ')'
//! ```
//!
//! `VAR1`/`VAR2` are `phi`/`pi` by default, `a`/`abar` for Wick variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::{Atom, Expr};
use crate::error::{Error, Result};
use crate::symbol::Var;

/// Names of the two variable families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dialect {
    pub first: &'static str,
    pub second: &'static str,
}

impl Dialect {
    pub const PHASE_SPACE: Dialect = Dialect {
        first: "phi",
        second: "pi",
    };
    pub const WICK: Dialect = Dialect {
        first: "a",
        second: "abar",
    };

    pub fn name(&self, var: Var) -> &'static str {
        match var {
            Var::Phi => self.first,
            Var::Pi => self.second,
        }
    }
}

impl Default for Dialect {
    fn default() -> Self {
        Dialect::PHASE_SPACE
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, Dialect::PHASE_SPACE)
}

pub fn parse_with(text: &str, dialect: Dialect) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        dialect,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected character '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    dialect: Dialect,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            message: message.into(),
        }
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

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self
                .chars
                .get(self.pos)
                .map(|c| format!("'{c}'"))
                .unwrap_or_else(|| "end of input".into());
            Err(self.error(format!("expected '{c}', found {found}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
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

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::mul(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let n = self.nat()?;
            let n = u32::try_from(n).map_err(|_| self.error("exponent too large"))?;
            return Ok(Expr::pow(base, n));
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn index(&mut self) -> Result<usize> {
        self.expect('[')?;
        self.skip_ws();
        let at = self.pos;
        let n = self.nat()?;
        self.expect(']')?;
        usize::try_from(n).map_err(|_| Error::Parse {
            pos: at,
            message: "mode index too large".into(),
        })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.nat()?;
                let den = if self.chars.get(self.pos) == Some(&'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.nat()?;
                    if d.is_zero() {
                        return Err(Error::Parse {
                            pos: at,
                            message: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Expr::atom(Atom::Rational(BigRational::new(num, den))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                if name == self.dialect.first || name == self.dialect.second {
                    let var = if name == self.dialect.first { Var::Phi } else { Var::Pi };
                    let mode = self.index()?;
                    return Ok(Expr::atom(Atom::Var { var, mode }));
                }
                match name.as_str() {
                    "h" => Ok(Expr::atom(Atom::H)),
                    "i" => Ok(Expr::atom(Atom::I)),
                    "D" => {
                        self.expect('(')?;
                        let f = self.expr()?;
                        self.expect(';')?;
                        let v = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::atom(Atom::Generator(Box::new(f), Box::new(v))))
                    }
                    _ => Err(Error::Parse {
                        pos: start,
                        message: format!("unknown identifier '{name}'"),
                    }),
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
        }
    }
}
