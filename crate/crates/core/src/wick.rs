//! Creation/annihilation (Wick) variables.
//!
//! Per mode, with frequency `w > 0`:
//!
//! ```text
//! phi = a + abar,            pi = i w (abar - a)
//! a   = (phi + i pi / w)/2,  abar = (phi - i pi / w)/2
//! ```
//!
//! This is the usual `phi = (a + abar)/sqrt(2w)` normalization rescaled by
//! `sqrt(2w)`, which keeps every coefficient rational. The transported
//! bracket is `{a_i, abar_j} = delta_ij * i/(2 w_i)`, and the harmonic
//! Hamiltonian `(pi^2 + w^2 phi^2)/2` becomes `2 w^2 a abar`.

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::{HPoly, Scalar};
use crate::symbol::{ModeSpace, Monomial, Symbol, Var};

/// A symbol written in `(a, abar)`: the `phi` slot of each monomial holds the
/// `a` exponents and the `pi` slot the `abar` exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WickSymbol(pub Symbol);

impl WickSymbol {
    pub fn inner(&self) -> &Symbol {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frequencies(Vec<BigRational>);

impl Frequencies {
    pub fn new(space: ModeSpace, omega: Vec<BigRational>) -> Result<Self> {
        if omega.len() != space.modes() {
            return Err(Error::validation(format!(
                "expected {} frequencies, got {}",
                space.modes(),
                omega.len()
            )));
        }
        if let Some(bad) = omega.iter().find(|w| !w.is_positive()) {
            return Err(Error::validation(format!("frequency {bad} is not positive")));
        }
        Ok(Frequencies(omega))
    }

    pub fn get(&self, mode: usize) -> &BigRational {
        &self.0[mode - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `{a_mode, abar_mode}`.
    pub fn bracket_constant(&self, mode: usize) -> Scalar {
        let two_w = self.get(mode) * BigRational::from_integer(2.into());
        Scalar::imag(two_w.recip())
    }
}

fn substitute(a: &Symbol, phi_img: &[Symbol], pi_img: &[Symbol]) -> Symbol {
    let space = a.space();
    let mut out = Symbol::zero(space);
    for (mono, c) in a.terms() {
        let mut term = Symbol::constant(space, c.clone());
        for (m, e) in mono.phi.iter() {
            term = &term * &phi_img[m - 1].pow(e);
        }
        for (m, e) in mono.pi.iter() {
            term = &term * &pi_img[m - 1].pow(e);
        }
        out = &out + &term;
    }
    out
}

fn lin(space: ModeSpace, first: Scalar, second: Scalar, mode: usize) -> Symbol {
    let x = Symbol::var(space, Var::Phi, mode).expect("mode in range");
    let y = Symbol::var(space, Var::Pi, mode).expect("mode in range");
    &x.scale_scalar(&first) + &y.scale_scalar(&second)
}

/// Rewrites a `(phi, pi)` symbol in `(a, abar)`.
pub fn wick_transform(a: &Symbol, omega: &Frequencies) -> Result<WickSymbol> {
    let space = a.space();
    if omega.len() != space.modes() {
        return Err(Error::validation("frequency count does not match mode count"));
    }
    let one = Scalar::one();
    let phi_img: Vec<_> = space.iter().map(|m| lin(space, one.clone(), one.clone(), m)).collect();
    let pi_img: Vec<_> = space
        .iter()
        .map(|m| {
            let iw = Scalar::imag(omega.get(m).clone());
            lin(space, -&iw, iw, m)
        })
        .collect();
    Ok(WickSymbol(substitute(a, &phi_img, &pi_img)))
}

/// Rewrites an `(a, abar)` symbol back in `(phi, pi)`.
pub fn wick_inverse(w: &WickSymbol, omega: &Frequencies) -> Result<Symbol> {
    let space = w.0.space();
    if omega.len() != space.modes() {
        return Err(Error::validation("frequency count does not match mode count"));
    }
    let half = Scalar::from_ratio(1, 2);
    let mut a_img = Vec::new();
    let mut abar_img = Vec::new();
    for m in space.iter() {
        let k = Scalar::imag(omega.get(m).recip() / BigRational::from_integer(2.into()));
        a_img.push(lin(space, half.clone(), k.clone(), m));
        abar_img.push(lin(space, half.clone(), -&k, m));
    }
    Ok(substitute(&w.0, &a_img, &abar_img))
}

/// Poisson bracket expressed in Wick variables,
/// `sum_i {a_i, abar_i} (dF/da_i dG/dabar_i - dF/dabar_i dG/da_i)`.
pub fn wick_bracket(f: &WickSymbol, g: &WickSymbol, omega: &Frequencies) -> Result<WickSymbol> {
    let space = f.0.space();
    space.check_same(&g.0.space())?;
    let mut out = Symbol::zero(space);
    for m in space.iter() {
        let k = HPoly::constant(omega.bracket_constant(m));
        let fa = f.0.derivative(Var::Phi, m)?;
        let fb = f.0.derivative(Var::Pi, m)?;
        let ga = g.0.derivative(Var::Phi, m)?;
        let gb = g.0.derivative(Var::Pi, m)?;
        let term = &(&fa * &gb) - &(&fb * &ga);
        out = &out + &term.scale(&k);
    }
    Ok(WickSymbol(out))
}

/// True when every monomial has equal `a` and `abar` exponents per mode.
pub fn is_number_conserving(w: &WickSymbol) -> bool {
    w.0.terms().all(|(m, _): (&Monomial, _)| m.phi == m.pi)
}

pub fn frequencies_from_ints(space: ModeSpace, omega: &[i64]) -> Result<Frequencies> {
    Frequencies::new(
        space,
        omega.iter().map(|&w| BigRational::from_integer(w.into())).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_round_trip() {
        let s = ModeSpace::new(1).unwrap();
        let w = frequencies_from_ints(s, &[3]).unwrap();
        let phi = Symbol::phi(s, 1).unwrap();
        let t = wick_transform(&phi, &w).unwrap();
        assert_eq!(t.0, lin(s, Scalar::one(), Scalar::one(), 1));
        assert_eq!(wick_inverse(&t, &w).unwrap(), phi);
    }

    #[test]
    fn rejects_nonpositive() {
        let s = ModeSpace::new(2).unwrap();
        assert!(frequencies_from_ints(s, &[1, 0]).is_err());
        assert!(frequencies_from_ints(s, &[1, -2]).is_err());
        assert!(frequencies_from_ints(s, &[1]).is_err());
    }

    #[test]
    fn harmonic_diagonalizes() {
        let s = ModeSpace::new(1).unwrap();
        let w = frequencies_from_ints(s, &[1]).unwrap();
        let h = &Symbol::phi(s, 1).unwrap().pow(2) + &Symbol::pi(s, 1).unwrap().pow(2);
        let t = wick_transform(&h, &w).unwrap();
        assert!(is_number_conserving(&t));
        // 4 a abar
        let expected = (&Symbol::phi(s, 1).unwrap() * &Symbol::pi(s, 1).unwrap()).scale_scalar(&Scalar::from_int(4));
        assert_eq!(t.0, expected);
    }
}
