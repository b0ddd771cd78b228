use num_rational::BigRational;

use crate::symbol::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// Leading unary minus of a sum, `-t1 + t2`.
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Atom(Atom),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Var { var: Var, mode: usize },
    H,
    I,
    Rational(BigRational),
    /// `D(f; v)`, only meaningful in word expressions.
    Generator(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn atom(a: Atom) -> Self {
        Expr::Atom(a)
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: u32) -> Self {
        Expr::Pow(Box::new(a), n)
    }

    pub fn contains_generator(&self) -> bool {
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.contains_generator() || b.contains_generator()
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.contains_generator(),
            Expr::Atom(Atom::Generator(..)) => true,
            Expr::Atom(_) => false,
        }
    }
}
