//! Text surface syntax: parsing into [`Symbol`]s and [`DiffWord`]s, and the
//! canonical printer.

pub mod ast;
pub mod parser;
mod print;

pub use ast::{Atom, Expr};
pub use parser::{parse, parse_with, Dialect};
pub use print::{canonical_terms, print_symbol, print_symbol_with, print_word};

use crate::enveloping::{word_product, DiffWord, Generator};
use crate::error::{Error, Result};
use crate::scalar::{HPoly, Scalar};
use crate::symbol::{ModeSpace, Symbol};

/// Evaluates an expression as a symbol; generator literals are rejected.
pub fn eval_symbol(e: &Expr, space: ModeSpace) -> Result<Symbol> {
    Ok(match e {
        Expr::Add(a, b) => &eval_symbol(a, space)? + &eval_symbol(b, space)?,
        Expr::Sub(a, b) => &eval_symbol(a, space)? - &eval_symbol(b, space)?,
        Expr::Neg(a) => -&eval_symbol(a, space)?,
        Expr::Mul(a, b) => &eval_symbol(a, space)? * &eval_symbol(b, space)?,
        Expr::Pow(a, n) => eval_symbol(a, space)?.pow(*n),
        Expr::Atom(atom) => match atom {
            Atom::Var { var, mode } => Symbol::var(space, *var, *mode)?,
            Atom::H => Symbol::h(space),
            Atom::I => Symbol::scalar(space, Scalar::i()),
            Atom::Rational(r) => Symbol::scalar(space, Scalar::real(r.clone())),
            Atom::Generator(..) => {
                return Err(Error::validation(
                    "generator literal D(...) is only allowed in word expressions",
                ))
            }
        },
    })
}

/// Evaluates an expression as an enveloping-algebra word. Bare `phi[i]` and
/// `pi[i]` stand for the generators `D(phi[i]; 0)` and `D(0; pi[i])`.
pub fn eval_word(e: &Expr, space: ModeSpace) -> Result<DiffWord> {
    Ok(match e {
        Expr::Add(a, b) => eval_word(a, space)?.add(&eval_word(b, space)?),
        Expr::Sub(a, b) => eval_word(a, space)?.add(&eval_word(b, space)?.neg()),
        Expr::Neg(a) => eval_word(a, space)?.neg(),
        Expr::Mul(a, b) => word_product(&eval_word(a, space)?, &eval_word(b, space)?)?,
        Expr::Pow(a, n) => eval_word(a, space)?.pow(*n),
        Expr::Atom(atom) => match atom {
            Atom::Var { var, mode } => {
                DiffWord::generator(Generator::from_symbol(&Symbol::var(space, *var, *mode)?)?)
            }
            Atom::H => DiffWord::scalar(space, HPoly::h()),
            Atom::I => DiffWord::scalar(space, HPoly::constant(Scalar::i())),
            Atom::Rational(r) => DiffWord::scalar(space, HPoly::constant(Scalar::real(r.clone()))),
            Atom::Generator(f, v) => {
                let f = eval_symbol(f, space)?;
                let v = eval_symbol(v, space)?;
                DiffWord::generator(Generator::new(f, v)?)
            }
        },
    })
}

pub fn parse_symbol(text: &str, space: ModeSpace) -> Result<Symbol> {
    eval_symbol(&parse(text)?, space)
}

pub fn parse_symbol_with(text: &str, space: ModeSpace, dialect: Dialect) -> Result<Symbol> {
    eval_symbol(&parse_with(text, dialect)?, space)
}

pub fn parse_word(text: &str, space: ModeSpace) -> Result<DiffWord> {
    eval_word(&parse(text)?, space)
}
