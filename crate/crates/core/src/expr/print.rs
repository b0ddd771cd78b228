use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::parser::Dialect;
use crate::enveloping::{DiffWord, Generator};
use crate::scalar::{HPoly, Scalar};
use crate::symbol::{Monomial, Symbol, Var};

/// Canonical term order: higher total degree first, then `phi` exponent
/// vectors and `pi` exponent vectors compared lexicographically, larger first.
pub fn canonical_cmp(a: &Monomial, b: &Monomial, modes: usize) -> Ordering {
    b.degree()
        .cmp(&a.degree())
        .then_with(|| b.phi.dense(modes).cmp(&a.phi.dense(modes)))
        .then_with(|| b.pi.dense(modes).cmp(&a.pi.dense(modes)))
}

/// Terms in canonical order.
pub fn canonical_terms(s: &Symbol) -> Vec<(&Monomial, &HPoly)> {
    let modes = s.space().modes();
    let mut terms: Vec<_> = s.terms().collect();
    terms.sort_by(|a, b| canonical_cmp(a.0, b.0, modes));
    terms
}

fn scalar_text(c: &Scalar) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) if c.im.is_one() => "i".into(),
        (true, false) => format!("{}*i", c.im),
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            let mag = c.im.abs();
            if mag.is_one() {
                format!("({}{}i)", c.re, sign)
            } else {
                format!("({}{}{}*i)", c.re, sign, mag)
            }
        }
    }
}

/// Splits off an overall sign when the scalar is purely real or imaginary.
fn split_sign(c: &Scalar) -> (bool, Scalar) {
    let negative = if c.im.is_zero() {
        c.re.is_negative()
    } else if c.re.is_zero() {
        c.im.is_negative()
    } else {
        false
    };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn power(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

fn monomial_factors(m: &Monomial, dialect: Dialect) -> Vec<String> {
    let mut out = Vec::new();
    for (var, idx) in [(Var::Phi, &m.phi), (Var::Pi, &m.pi)] {
        for (mode, e) in idx.iter() {
            out.push(power(format!("{}[{}]", dialect.name(var), mode), e));
        }
    }
    out
}

/// One summand: `(negative, text)`.
fn summand(c: &Scalar, h_power: usize, mut rest: Vec<String>) -> (bool, String) {
    let (neg, mag) = split_sign(c);
    let mut factors = Vec::new();
    if h_power > 0 {
        factors.push(power("h".into(), h_power as u32));
    }
    factors.append(&mut rest);
    if !mag.is_one() || factors.is_empty() {
        factors.insert(0, scalar_text(&mag));
    }
    (neg, factors.join("*"))
}

fn join(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, text)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&text);
    }
    out
}

fn hpoly_summands(c: &HPoly, factors: &[String]) -> Vec<(bool, String)> {
    c.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(p, x)| summand(x, p, factors.to_vec()))
        .collect()
}

pub fn print_symbol_with(s: &Symbol, dialect: Dialect) -> String {
    let mut parts = Vec::new();
    for (m, c) in canonical_terms(s) {
        parts.extend(hpoly_summands(c, &monomial_factors(m, dialect)));
    }
    join(parts)
}

/// Deterministic text form; `parse` of the output gives back the same symbol.
pub fn print_symbol(s: &Symbol) -> String {
    print_symbol_with(s, Dialect::PHASE_SPACE)
}

fn generator_text(g: &Generator) -> String {
    format!("D({}; {})", print_symbol(g.f()), print_symbol(g.v()))
}

/// Words ordered by decreasing length, then by generator sequence.
pub fn print_word(w: &DiffWord) -> String {
    let mut terms: Vec<_> = w.terms().collect();
    terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
    let mut parts = Vec::new();
    for (gens, c) in terms {
        let factors: Vec<String> = gens.iter().map(generator_text).collect();
        parts.extend(hpoly_summands(c, &factors));
    }
    join(parts)
}
