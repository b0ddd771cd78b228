//! Truncated classical symbols: polynomials in `phi_i`, `pi_i` (modes `1..=N`)
//! with coefficients in `Q(i)[h]`.
//!
//! Every symbol of a finite-mode truncation has polynomial kernels, so all of
//! them are regular; there is no singular case to represent.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{HPoly, Scalar};

/// Number of truncated field modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeSpace {
    modes: usize,
}

impl ModeSpace {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::validation("mode count must be positive"));
        }
        Ok(ModeSpace { modes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.modes {
            Err(Error::validation(format!(
                "mode index {mode} outside 1..={}",
                self.modes
            )))
        } else {
            Ok(())
        }
    }

    pub fn check_same(&self, other: &ModeSpace) -> Result<()> {
        if self != other {
            Err(Error::validation(format!(
                "mode spaces differ: {} vs {}",
                self.modes, other.modes
            )))
        } else {
            Ok(())
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        1..=self.modes
    }
}

/// Sparse exponent vector, mode -> exponent, never storing zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(BTreeMap<usize, u32>);

impl MultiIndex {
    pub fn one_hot(mode: usize, exp: u32) -> Self {
        let mut m = MultiIndex::default();
        m.set(mode, exp);
        m
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        let mut m = MultiIndex::default();
        for (idx, &e) in exps.iter().enumerate() {
            m.set(idx + 1, e);
        }
        m
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0.get(&mode).copied().unwrap_or(0)
    }

    pub fn set(&mut self, mode: usize, exp: u32) {
        if exp == 0 {
            self.0.remove(&mode);
        } else {
            self.0.insert(mode, exp);
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&m, &e)| (m, e))
    }

    pub fn dense(&self, modes: usize) -> Vec<u32> {
        (1..=modes).map(|m| self.get(m)).collect()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut out = self.clone();
        for (m, e) in other.iter() {
            out.set(m, out.get(m) + e);
        }
        out
    }

    /// `self - other`, or `None` if some exponent would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = self.clone();
        for (m, e) in other.iter() {
            let cur = out.get(m);
            if cur < e {
                return None;
            }
            out.set(m, cur - e);
        }
        Some(out)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &MultiIndex) -> MultiIndex {
        let mut out = MultiIndex::default();
        for (m, e) in self.iter() {
            out.set(m, e.min(other.get(m)));
        }
        out
    }

    /// All multi-indices `g` with `0 <= g <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::default()];
        for (m, e) in self.iter() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for base in &out {
                for k in 0..=e {
                    let mut g = base.clone();
                    g.set(m, k);
                    next.push(g);
                }
            }
            out = next;
        }
        out
    }

    /// `prod_m e_m!`.
    pub fn factorial(&self) -> BigInt {
        self.iter().fold(BigInt::one(), |acc, (_, e)| acc * factorial(e))
    }

    /// `prod_m e_m! / (e_m - g_m)!`, the coefficient of `d^g x^self`.
    pub fn falling(&self, g: &MultiIndex) -> BigInt {
        let mut acc = BigInt::one();
        for (m, k) in g.iter() {
            let e = self.get(m);
            for j in 0..k {
                acc *= BigInt::from(e - j);
            }
        }
        acc
    }

    /// Modes repeated by multiplicity, ascending.
    pub fn to_sorted_tuple(&self) -> Vec<usize> {
        self.iter()
            .flat_map(|(m, e)| std::iter::repeat_n(m, e as usize))
            .collect()
    }

    pub fn from_tuple(modes: &[usize]) -> Self {
        let mut m = MultiIndex::default();
        for &mode in modes {
            m.set(mode, m.get(mode) + 1);
        }
        m
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// A monomial `phi^phi * pi^pi`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub phi: MultiIndex,
    pub pi: MultiIndex,
}

impl Monomial {
    pub fn new(phi: MultiIndex, pi: MultiIndex) -> Self {
        Monomial { phi, pi }
    }

    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn degree(&self) -> u32 {
        self.phi.degree() + self.pi.degree()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.phi.add(&other.phi), self.pi.add(&other.pi))
    }
}

/// Which half of a canonical pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Phi,
    Pi,
}

/// Exact polynomial symbol over a fixed [`ModeSpace`].
///
/// Arithmetic operators panic when the operands live on different mode
/// spaces; the named operations (`poisson_bracket`, star products, ...)
/// report that case as a validation error instead.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    space: ModeSpace,
    terms: BTreeMap<Monomial, HPoly>,
}

impl Symbol {
    pub fn zero(space: ModeSpace) -> Self {
        Symbol {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: ModeSpace) -> Self {
        Symbol::constant(space, HPoly::one())
    }

    pub fn constant(space: ModeSpace, c: HPoly) -> Self {
        Symbol::monomial(space, Monomial::unit(), c)
    }

    pub fn scalar(space: ModeSpace, c: Scalar) -> Self {
        Symbol::constant(space, HPoly::constant(c))
    }

    pub fn h(space: ModeSpace) -> Self {
        Symbol::constant(space, HPoly::h())
    }

    /// Single monomial; modes are assumed valid (see [`Symbol::from_terms`]).
    fn monomial(space: ModeSpace, mono: Monomial, c: HPoly) -> Self {
        let mut s = Symbol::zero(space);
        s.add_term(mono, &c);
        s
    }

    pub fn var(space: ModeSpace, var: Var, mode: usize) -> Result<Self> {
        space.check_mode(mode)?;
        let idx = MultiIndex::one_hot(mode, 1);
        let mono = match var {
            Var::Phi => Monomial::new(idx, MultiIndex::default()),
            Var::Pi => Monomial::new(MultiIndex::default(), idx),
        };
        Ok(Symbol::monomial(space, mono, HPoly::one()))
    }

    pub fn phi(space: ModeSpace, mode: usize) -> Result<Self> {
        Symbol::var(space, Var::Phi, mode)
    }

    pub fn pi(space: ModeSpace, mode: usize) -> Result<Self> {
        Symbol::var(space, Var::Pi, mode)
    }

    pub fn from_terms<I>(space: ModeSpace, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, HPoly)>,
    {
        let mut s = Symbol::zero(space);
        for (mono, c) in terms {
            for idx in [&mono.phi, &mono.pi] {
                if let Some(m) = idx.max_mode() {
                    space.check_mode(m)?;
                }
            }
            s.add_term(mono, &c);
        }
        Ok(s)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: &HPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &HPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> HPoly {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Constant value if the symbol has no `phi`/`pi` dependence.
    pub fn as_constant(&self) -> Option<HPoly> {
        match self.terms.len() {
            0 => Some(HPoly::zero()),
            1 => self.terms.get(&Monomial::unit()).cloned(),
            _ => None,
        }
    }

    /// Largest total `phi`/`pi` degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn pi_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().map(|m| m.pi.degree())
    }

    pub fn is_pi_free(&self) -> bool {
        self.pi_degrees().all(|d| d == 0)
    }

    /// Maximum power of `h` appearing.
    pub fn h_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(HPoly::degree).max()
    }

    /// Smallest power of `h` appearing.
    pub fn h_valuation(&self) -> Option<usize> {
        self.terms.values().filter_map(HPoly::valuation).min()
    }

    /// Coefficient of `h^power`, as an `h`-free symbol.
    pub fn h_coeff(&self, power: usize) -> Symbol {
        let mut out = Symbol::zero(self.space);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &HPoly::constant(c.coeff(power)));
        }
        out
    }

    pub fn scale(&self, c: &HPoly) -> Symbol {
        let mut out = Symbol::zero(self.space);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &(x * c));
        }
        out
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Symbol {
        self.scale(&HPoly::constant(c.clone()))
    }

    pub fn map_coeffs(&self, f: impl Fn(&HPoly) -> HPoly) -> Symbol {
        let mut out = Symbol::zero(self.space);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &f(x));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Symbol {
        let mut acc = Symbol::one(self.space);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative `d/dphi_mode` or `d/dpi_mode`.
    pub fn derivative(&self, var: Var, mode: usize) -> Result<Symbol> {
        self.space.check_mode(mode)?;
        Ok(self.derivative_unchecked(var, mode))
    }

    pub(crate) fn derivative_unchecked(&self, var: Var, mode: usize) -> Symbol {
        let mut out = Symbol::zero(self.space);
        for (mono, c) in &self.terms {
            let idx = match var {
                Var::Phi => &mono.phi,
                Var::Pi => &mono.pi,
            };
            let e = idx.get(mode);
            if e == 0 {
                continue;
            }
            let mut lowered = mono.clone();
            match var {
                Var::Phi => lowered.phi.set(mode, e - 1),
                Var::Pi => lowered.pi.set(mode, e - 1),
            }
            out.add_term(lowered, &c.scale(&Scalar::from_int(e as i64)));
        }
        out
    }

    /// Multi-index derivative `d_phi^a d_pi^b`.
    pub fn derivative_multi(&self, phi: &MultiIndex, pi: &MultiIndex) -> Symbol {
        let d = Monomial::new(phi.clone(), pi.clone());
        let mut out = Symbol::zero(self.space);
        for (mono, c) in &self.terms {
            let (Some(p), Some(q)) = (mono.phi.checked_sub(phi), mono.pi.checked_sub(pi)) else {
                continue;
            };
            let factor = mono.phi.falling(&d.phi) * mono.pi.falling(&d.pi);
            out.add_term(
                Monomial::new(p, q),
                &c.scale(&Scalar::real(factor.into())),
            );
        }
        out
    }

    /// Homogeneous components `(k, l, H_kl)`; highest total degree first,
    /// then higher `phi` degree first. Zero components are omitted.
    pub fn bidegree_decompose(&self) -> Vec<(u32, u32, Symbol)> {
        let mut parts: BTreeMap<(u32, u32), Symbol> = BTreeMap::new();
        for (mono, c) in &self.terms {
            parts
                .entry((mono.phi.degree(), mono.pi.degree()))
                .or_insert_with(|| Symbol::zero(self.space))
                .add_term(mono.clone(), c);
        }
        let mut out: Vec<_> = parts.into_iter().map(|((k, l), s)| (k, l, s)).collect();
        out.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        out
    }

    /// The `(k, l)` homogeneous component.
    pub fn component(&self, k: u32, l: u32) -> Symbol {
        let mut out = Symbol::zero(self.space);
        for (mono, c) in &self.terms {
            if mono.phi.degree() == k && mono.pi.degree() == l {
                out.add_term(mono.clone(), c);
            }
        }
        out
    }

    /// Complex conjugation of every coefficient; `h` is real.
    pub fn conjugate(&self) -> Symbol {
        self.map_coeffs(HPoly::conj)
    }

    /// Numeric value at a phase point with `h` set to `hbar`.
    pub fn eval(&self, phi: &[f64], pi: &[f64], hbar: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (mono, c) in &self.terms {
            let (re, im) = c.eval(hbar);
            let mut v = 1.0;
            for (m, e) in mono.phi.iter() {
                v *= phi[m - 1].powi(e as i32);
            }
            for (m, e) in mono.pi.iter() {
                v *= pi[m - 1].powi(e as i32);
            }
            acc += Complex64::new(re, im) * v;
        }
        acc
    }
}

/// `{A, B} = sum_i (dA/dpi_i dB/dphi_i - dA/dphi_i dB/dpi_i)`, so `{pi, phi} = 1`.
pub fn poisson_bracket(a: &Symbol, b: &Symbol) -> Result<Symbol> {
    a.space.check_same(&b.space)?;
    let mut out = Symbol::zero(a.space);
    for i in a.space.iter() {
        let a_pi = a.derivative_unchecked(Var::Pi, i);
        let a_phi = a.derivative_unchecked(Var::Phi, i);
        if !a_pi.is_zero() {
            out = &out + &(&a_pi * &b.derivative_unchecked(Var::Phi, i));
        }
        if !a_phi.is_zero() {
            out = &out - &(&a_phi * &b.derivative_unchecked(Var::Pi, i));
        }
    }
    Ok(out)
}

impl<'a> Add<&'a Symbol> for &'a Symbol {
    type Output = Symbol;
    fn add(self, rhs: &Symbol) -> Symbol {
        assert_eq!(self.space, rhs.space, "mode spaces differ");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a Symbol> for &'a Symbol {
    type Output = Symbol;
    fn sub(self, rhs: &Symbol) -> Symbol {
        self + &(-rhs)
    }
}

impl Neg for &Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        Symbol {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Symbol> for &'a Symbol {
    type Output = Symbol;
    fn mul(self, rhs: &Symbol) -> Symbol {
        assert_eq!(self.space, rhs.space, "mode spaces differ");
        let mut out = Symbol::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_symbol(self))
    }
}
