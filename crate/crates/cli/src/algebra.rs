use fdq_core::expr::{parse_symbol, parse_symbol_with, parse_word, print_symbol, print_symbol_with, Dialect};
use fdq_core::json::{named_factor, symbol_to_json};
use fdq_core::{
    involution, normal_form, normal_star, ordering_transform, poisson_bracket, weyl_star, wick_inverse,
    wick_transform, DiffContext, Error, Frequencies, ModeSpace, OrderingDirection, Symbol, WickSymbol,
};

use crate::{in_input, Failure};

fn space(modes: usize) -> Result<ModeSpace, Failure> {
    Ok(ModeSpace::new(modes)?)
}

fn symbol(label: &str, text: &str, space: ModeSpace) -> Result<Symbol, Failure> {
    parse_symbol(text, space).map_err(|e| in_input(label, text, e))
}

/// Named forms first, then any constant expression in `h`.
fn context(lambda: &str, space: ModeSpace) -> Result<DiffContext, Failure> {
    if let Some(c) = named_factor(lambda) {
        return Ok(DiffContext::with_factor(space, c)?);
    }
    let s = symbol("lambda", lambda, space)?;
    let c = s
        .as_constant()
        .ok_or_else(|| Error::validation("lambda must not contain phi or pi"))?;
    Ok(DiffContext::new(space, c)?)
}

fn emit(s: &Symbol, json: bool) -> String {
    if json {
        symbol_to_json(s)
    } else {
        print_symbol(s)
    }
}

pub(crate) fn bracket(a: &str, b: &str, modes: usize, json: bool) -> Result<String, Failure> {
    let sp = space(modes)?;
    let (a, b) = (symbol("A", a, sp)?, symbol("B", b, sp)?);
    Ok(emit(&poisson_bracket(&a, &b)?, json))
}

pub(crate) fn star(weyl: bool, a: &str, b: &str, lambda: &str, modes: usize, json: bool) -> Result<String, Failure> {
    let sp = space(modes)?;
    let (a, b) = (symbol("A", a, sp)?, symbol("B", b, sp)?);
    let ctx = context(lambda, sp)?;
    let out = if weyl {
        weyl_star(&a, &b, &ctx)?
    } else {
        normal_star(&a, &b, &ctx)?
    };
    Ok(emit(&out, json))
}

pub(crate) fn renorm(a: &str, to_normal: bool, lambda: &str, modes: usize, json: bool) -> Result<String, Failure> {
    let sp = space(modes)?;
    let a = symbol("A", a, sp)?;
    let ctx = context(lambda, sp)?;
    let dir = if to_normal {
        OrderingDirection::WeylToNormal
    } else {
        OrderingDirection::NormalToWeyl
    };
    Ok(emit(&ordering_transform(&a, &ctx, dir)?, json))
}

pub(crate) fn nf(word: &str, lambda: &str, modes: usize, json: bool, involute: bool) -> Result<String, Failure> {
    let sp = space(modes)?;
    let w = parse_word(word, sp).map_err(|e| in_input("WORD", word, e))?;
    let ctx = context(lambda, sp)?;
    let w = if involute { involution(&w, &ctx) } else { w };
    Ok(emit(&normal_form(&w, &ctx)?.nf, json))
}

fn frequencies(text: &str, sp: ModeSpace) -> Result<Frequencies, Failure> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let s = symbol("omega", part.trim(), sp)?;
        let c = s
            .as_constant()
            .and_then(|c| c.as_constant())
            .filter(|c| c.is_real())
            .ok_or_else(|| Error::validation(format!("omega entry \"{part}\" is not a real number")))?;
        values.push(c.re);
    }
    if values.len() == 1 && sp.modes() > 1 {
        values = vec![values[0].clone(); sp.modes()];
    }
    Ok(Frequencies::new(sp, values)?)
}

pub(crate) fn wick(a: &str, omega: &str, inverse: bool, modes: usize, json: bool) -> Result<String, Failure> {
    let sp = space(modes)?;
    let omega = frequencies(omega, sp)?;
    let out = if inverse {
        let w = parse_symbol_with(a, sp, Dialect::WICK).map_err(|e| in_input("A", a, e))?;
        return Ok(emit(&wick_inverse(&WickSymbol(w), &omega)?, json));
    } else {
        wick_transform(&symbol("A", a, sp)?, &omega)?
    };
    Ok(if json {
        symbol_to_json(out.inner())
    } else {
        print_symbol_with(out.inner(), Dialect::WICK)
    })
}
