//! Canonical JSON interchange for symbols and deformation contexts.
//!
//! ```json
//! {"modes":1,"terms":[{"phi":[1],"pi":[1],"coeff":[[1,1,0,1]]},
//!                     {"phi":[0],"pi":[0],"coeff":[[0,1,0,1],[0,1,-1,1]]}]}
//! ```
//!
//! Terms follow the canonical printer order; `coeff` lists
//! `[re_num, re_den, im_num, im_den]` for ascending powers of `h`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::expr::canonical_terms;
use crate::scalar::{HPoly, Scalar};
use crate::star::DiffContext;
use crate::symbol::{ModeSpace, Monomial, MultiIndex, Symbol};

#[derive(Serialize, Deserialize)]
struct TermJson {
    phi: Vec<u32>,
    pi: Vec<u32>,
    coeff: Vec<[Number; 4]>,
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    modes: usize,
    terms: Vec<TermJson>,
}

fn num(n: &BigInt) -> Number {
    n.to_string().parse().expect("integers are valid JSON numbers")
}

fn big(n: &Number) -> Result<BigInt> {
    n.to_string()
        .parse()
        .map_err(|_| Error::validation(format!("expected an integer, found {n}")))
}

fn ratio(num: &Number, den: &Number) -> Result<BigRational> {
    let den = big(den)?;
    if den.is_zero() {
        return Err(Error::validation("zero denominator"));
    }
    Ok(BigRational::new(big(num)?, den))
}

pub fn scalar_quad(c: &Scalar) -> [Number; 4] {
    [num(c.re.numer()), num(c.re.denom()), num(c.im.numer()), num(c.im.denom())]
}

fn scalar_from_quad(q: &[Number; 4]) -> Result<Scalar> {
    Ok(Scalar::new(ratio(&q[0], &q[1])?, ratio(&q[2], &q[3])?))
}

pub fn symbol_to_value(s: &Symbol) -> serde_json::Value {
    let modes = s.space().modes();
    let terms = canonical_terms(s)
        .into_iter()
        .map(|(m, c)| TermJson {
            phi: m.phi.dense(modes),
            pi: m.pi.dense(modes),
            coeff: c.coeffs().iter().map(scalar_quad).collect(),
        })
        .collect();
    serde_json::to_value(SymbolJson { modes, terms }).expect("serializable")
}

pub fn symbol_to_json(s: &Symbol) -> String {
    serde_json::to_string(&symbol_to_value(s)).expect("serializable")
}

pub fn symbol_from_value(v: &serde_json::Value) -> Result<Symbol> {
    let raw: SymbolJson = serde_json::from_value(v.clone())
        .map_err(|e| Error::validation(format!("malformed symbol JSON: {e}")))?;
    let space = ModeSpace::new(raw.modes)?;
    let mut terms = Vec::with_capacity(raw.terms.len());
    for t in raw.terms {
        if t.phi.len() != raw.modes || t.pi.len() != raw.modes {
            return Err(Error::validation("exponent vector length differs from modes"));
        }
        let coeffs = t.coeff.iter().map(scalar_from_quad).collect::<Result<Vec<_>>>()?;
        terms.push((
            Monomial::new(MultiIndex::from_dense(&t.phi), MultiIndex::from_dense(&t.pi)),
            HPoly::from_coeffs(coeffs),
        ));
    }
    Symbol::from_terms(space, terms)
}

pub fn symbol_from_json(text: &str) -> Result<Symbol> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::validation(format!("invalid JSON: {e}")))?;
    symbol_from_value(&v)
}

pub fn context_to_value(ctx: &DiffContext) -> serde_json::Value {
    let c = ctx.factor();
    let named = if c == Scalar::one() {
        Some("h")
    } else if c == Scalar::i() {
        Some("ih")
    } else if c == -Scalar::i() {
        Some("-ih")
    } else {
        None
    };
    let lambda = match named {
        Some(n) => serde_json::Value::String(n.into()),
        None => serde_json::to_value(scalar_quad(&c)).expect("serializable"),
    };
    serde_json::json!({ "modes": ctx.space().modes(), "lambda": lambda })
}

pub fn context_from_value(v: &serde_json::Value) -> Result<DiffContext> {
    let modes = v
        .get("modes")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::validation("context needs integer \"modes\""))?;
    let space = ModeSpace::new(modes as usize)?;
    let lambda = v
        .get("lambda")
        .ok_or_else(|| Error::validation("context needs \"lambda\""))?;
    let factor = match lambda {
        serde_json::Value::String(s) => named_factor(s)
            .ok_or_else(|| Error::validation(format!("unknown lambda \"{s}\"")))?,
        other => {
            let q: [Number; 4] = serde_json::from_value(other.clone())
                .map_err(|e| Error::validation(format!("malformed lambda: {e}")))?;
            scalar_from_quad(&q)?
        }
    };
    DiffContext::with_factor(space, factor)
}

/// `h`, `-h`, `ih`, `-ih` as the factor multiplying `h`.
pub fn named_factor(s: &str) -> Option<Scalar> {
    match s.trim() {
        "h" => Some(Scalar::one()),
        "-h" => Some(Scalar::from_int(-1)),
        "ih" => Some(Scalar::i()),
        "-ih" => Some(-Scalar::i()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_symbol;

    #[test]
    fn canonical_layout() {
        let s = parse_symbol("phi[1]*pi[1] - i*h", ModeSpace::new(1).unwrap()).unwrap();
        assert_eq!(
            symbol_to_json(&s),
            r#"{"modes":1,"terms":[{"phi":[1],"pi":[1],"coeff":[[1,1,0,1]]},{"phi":[0],"pi":[0],"coeff":[[0,1,0,1],[0,1,-1,1]]}]}"#
        );
        assert_eq!(symbol_from_json(&symbol_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn big_coefficients_survive() {
        let s = parse_symbol("123456789012345678901234567891/2*phi[1]", ModeSpace::new(1).unwrap()).unwrap();
        let text = symbol_to_json(&s);
        assert!(text.contains("[123456789012345678901234567891,2,0,1]"));
        assert_eq!(symbol_from_json(&text).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(symbol_from_json(r#"{"modes":1,"terms":[{"phi":[1,0],"pi":[0],"coeff":[]}]}"#).is_err());
        assert!(symbol_from_json(r#"{"modes":1,"terms":[{"phi":[1],"pi":[0],"coeff":[[1,0,0,1]]}]}"#).is_err());
        assert!(symbol_from_json("not json").is_err());
    }

    #[test]
    fn context_forms() {
        let s = ModeSpace::new(2).unwrap();
        let ctx = DiffContext::schrodinger(s);
        let v = context_to_value(&ctx);
        assert_eq!(v.to_string(), r#"{"modes":2,"lambda":"-ih"}"#);
        assert_eq!(context_from_value(&v).unwrap(), ctx);
        let custom = serde_json::json!({"modes": 1, "lambda": [0, 1, 3, 2]});
        let ctx = context_from_value(&custom).unwrap();
        assert_eq!(ctx.factor(), Scalar::imag(BigRational::new(3.into(), 2.into())));
        assert!(context_from_value(&serde_json::json!({"modes": 1, "lambda": [1, 1, 1, 1]})).is_err());
    }
}
