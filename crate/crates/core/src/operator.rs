//! Differential operators with polynomial coefficients acting on polynomial
//! wavefunctions `psi(phi)`. This is the concrete model against which the
//! star products and the enveloping-algebra normal forms are checked.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use crate::error::Result;
use crate::scalar::{HPoly, Scalar};
use crate::star::{DiffContext, OrderingDirection};
use crate::symbol::{binomial, Monomial, ModeSpace, MultiIndex, Symbol};

/// `sum_alpha c_alpha(phi) d^alpha`, with `pi`-free coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    space: ModeSpace,
    terms: BTreeMap<MultiIndex, Symbol>,
}

impl DiffOperator {
    pub fn zero(space: ModeSpace) -> Self {
        DiffOperator {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(space: ModeSpace) -> Self {
        DiffOperator::multiplication(&Symbol::one(space))
    }

    /// Multiplication by a `pi`-free symbol.
    pub fn multiplication(f: &Symbol) -> Self {
        assert!(f.is_pi_free(), "multiplication operator needs a pi-free coefficient");
        let mut op = DiffOperator::zero(f.space());
        op.add_term(MultiIndex::default(), f);
        op
    }

    /// `c * d^alpha`.
    pub fn derivative(space: ModeSpace, alpha: MultiIndex, c: HPoly) -> Self {
        let mut op = DiffOperator::zero(space);
        op.add_term(alpha, &Symbol::constant(space, c));
        op
    }

    fn add_term(&mut self, alpha: MultiIndex, c: &Symbol) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&alpha) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Symbol)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &HPoly) -> DiffOperator {
        let mut out = DiffOperator::zero(self.space);
        for (a, x) in &self.terms {
            out.add_term(a.clone(), &x.scale(c));
        }
        out
    }

    /// `self ∘ other`, by the Leibniz rule
    /// `d^a q = sum_{g <= a} C(a, g) (d^g q) d^{a-g}`.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero(self.space);
        for (alpha, p) in &self.terms {
            let shifts = alpha.sub_indices();
            for (beta, q) in &other.terms {
                for g in &shifts {
                    let dq = q.derivative_multi(g, &MultiIndex::default());
                    if dq.is_zero() {
                        continue;
                    }
                    let choose = BigRational::new(alpha.falling(g), g.factorial());
                    let coeff = (p * &dq).scale_scalar(&Scalar::real(choose));
                    let order = alpha.checked_sub(g).unwrap().add(beta);
                    out.add_term(order, &coeff);
                }
            }
        }
        out
    }

    /// Exact action on a `pi`-free polynomial.
    pub fn apply(&self, psi: &Symbol) -> Result<Symbol> {
        self.space.check_same(&psi.space())?;
        if !psi.is_pi_free() {
            return Err(crate::Error::validation("wavefunction must not depend on pi"));
        }
        let mut out = Symbol::zero(self.space);
        for (alpha, c) in &self.terms {
            let d = psi.derivative_multi(alpha, &MultiIndex::default());
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        Ok(out)
    }

    /// Formal adjoint for the pairing `<f, g> = int conj(f) g`:
    /// `(c d^a)^† = (-d)^a ∘ conj(c)`, with `h` real.
    pub fn formal_adjoint(&self) -> DiffOperator {
        let mut out = DiffOperator::zero(self.space);
        for (alpha, c) in &self.terms {
            let sign = if alpha.degree() % 2 == 0 { 1 } else { -1 };
            let d = DiffOperator::derivative(self.space, alpha.clone(), HPoly::constant(Scalar::from_int(sign)));
            out = out.add(&d.compose(&DiffOperator::multiplication(&c.conjugate())));
        }
        out
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &DiffOperator) -> DiffOperator {
        self.compose(other).add(&other.compose(self).scale(&HPoly::constant(Scalar::from_int(-1))))
    }
}

/// `phi^a pi^b ↦ phi^a ∘ (lambda d)^b`: every derivative to the right.
pub fn quantize_normal(a: &Symbol, ctx: &DiffContext) -> Result<DiffOperator> {
    ctx.space().check_same(&a.space())?;
    let mut op = DiffOperator::zero(a.space());
    for (mono, c) in a.terms() {
        let coeff = c * &ctx.lambda().pow(mono.pi.degree());
        let f = Symbol::from_terms(a.space(), [(Monomial::new(mono.phi.clone(), MultiIndex::default()), coeff)])?;
        op.add_term(mono.pi.clone(), &f);
    }
    Ok(op)
}

/// Symmetric quantization: each monomial is averaged over every interleaving
/// of its `phi` and `pi` factors, with `pi ↦ lambda d`. Factors of different
/// modes commute, so the average factorizes over modes.
pub fn quantize_weyl(a: &Symbol, ctx: &DiffContext) -> Result<DiffOperator> {
    ctx.space().check_same(&a.space())?;
    let space = a.space();
    let mut cache: HashMap<(usize, u32, u32), DiffOperator> = HashMap::new();
    let mut op = DiffOperator::zero(space);
    for (mono, c) in a.terms() {
        let mut term = DiffOperator::multiplication(&Symbol::constant(space, c.clone()));
        for mode in space.iter() {
            let (p, q) = (mono.phi.get(mode), mono.pi.get(mode));
            if p + q == 0 {
                continue;
            }
            let sum = interleavings(space, ctx, mode, p, q, &mut cache);
            let avg = Scalar::real(BigRational::new(1.into(), binomial(p + q, p)));
            term = term.compose(&sum.scale(&HPoly::constant(avg)));
        }
        op = op.add(&term);
    }
    Ok(op)
}

/// Sum over all words with `p` factors `phi_mode` and `q` factors `lambda d_mode`.
fn interleavings(
    space: ModeSpace,
    ctx: &DiffContext,
    mode: usize,
    p: u32,
    q: u32,
    cache: &mut HashMap<(usize, u32, u32), DiffOperator>,
) -> DiffOperator {
    if let Some(op) = cache.get(&(mode, p, q)) {
        return op.clone();
    }
    let op = if p == 0 && q == 0 {
        DiffOperator::identity(space)
    } else {
        let mut acc = DiffOperator::zero(space);
        if p > 0 {
            let phi = DiffOperator::multiplication(&Symbol::phi(space, mode).expect("mode in range"));
            acc = acc.add(&phi.compose(&interleavings(space, ctx, mode, p - 1, q, cache)));
        }
        if q > 0 {
            let d = DiffOperator::derivative(space, MultiIndex::one_hot(mode, 1), ctx.lambda().clone());
            acc = acc.add(&d.compose(&interleavings(space, ctx, mode, p, q - 1, cache)));
        }
        acc
    };
    cache.insert((mode, p, q), op.clone());
    op
}

/// `quantize_normal ∘ R`, the identity that ties the two quantizations together.
pub fn quantize_weyl_via_transform(a: &Symbol, ctx: &DiffContext) -> Result<DiffOperator> {
    let normal = crate::star::ordering_transform(a, ctx, OrderingDirection::WeylToNormal)?;
    quantize_normal(&normal, ctx)
}

/// All monomials `phi^a` with `|a| <= degree`, used as test wavefunctions.
pub fn test_monomials(space: ModeSpace, degree: u32) -> Vec<Symbol> {
    let mut idx = vec![MultiIndex::default()];
    for mode in space.iter() {
        let mut next = Vec::new();
        for base in &idx {
            for e in 0..=(degree - base.degree()) {
                let mut m = base.clone();
                m.set(mode, e);
                next.push(m);
            }
        }
        idx = next;
    }
    idx.into_iter()
        .map(|phi| {
            Symbol::from_terms(space, [(Monomial::new(phi, MultiIndex::default()), HPoly::one())])
                .expect("modes in range")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> ModeSpace {
        ModeSpace::new(1).unwrap()
    }

    fn d1(c: HPoly) -> DiffOperator {
        DiffOperator::derivative(s1(), MultiIndex::one_hot(1, 1), c)
    }

    #[test]
    fn normal_quantization_examples() {
        let ctx = DiffContext::schrodinger(s1());
        let phi = Symbol::phi(s1(), 1).unwrap();
        let pi = Symbol::pi(s1(), 1).unwrap();
        assert_eq!(quantize_normal(&phi, &ctx).unwrap(), DiffOperator::multiplication(&phi));
        assert_eq!(quantize_normal(&pi, &ctx).unwrap(), d1(ctx.lambda().clone()));
        let expected = DiffOperator::multiplication(&phi).compose(&d1(ctx.lambda().clone()));
        assert_eq!(quantize_normal(&(&phi * &pi), &ctx).unwrap(), expected);
    }

    #[test]
    fn weyl_quantization_examples() {
        let ctx = DiffContext::schrodinger(s1());
        let phi = Symbol::phi(s1(), 1).unwrap();
        let pi = Symbol::pi(s1(), 1).unwrap();
        // -ih (phi d + 1/2)
        let expected = DiffOperator::multiplication(&phi)
            .compose(&d1(ctx.lambda().clone()))
            .add(&DiffOperator::multiplication(&Symbol::constant(s1(), ctx.lambda().scale(&Scalar::from_ratio(1, 2)))));
        assert_eq!(quantize_weyl(&(&phi * &pi), &ctx).unwrap(), expected);
        assert_eq!(quantize_weyl(&phi.pow(2), &ctx).unwrap(), DiffOperator::multiplication(&phi.pow(2)));
        // -h^2 d^2
        let dd = DiffOperator::derivative(s1(), MultiIndex::one_hot(1, 2), HPoly::monomial(Scalar::from_int(-1), 2));
        assert_eq!(quantize_weyl(&pi.pow(2), &ctx).unwrap(), dd);
    }

    #[test]
    fn apply_examples() {
        let ctx = DiffContext::schrodinger(s1());
        let phi = Symbol::phi(s1(), 1).unwrap();
        let op = d1(ctx.lambda().clone());
        let out = op.apply(&phi.pow(2)).unwrap();
        assert_eq!(out, phi.scale(&ctx.lambda().scale(&Scalar::from_int(2))));
        let mult = DiffOperator::multiplication(&phi);
        assert_eq!(mult.apply(&Symbol::one(s1())).unwrap(), phi);
        // (lambda phi d + lambda/2) phi = (3 lambda / 2) phi
        let lam = DiffContext::real(s1()).lambda().clone();
        let op = DiffOperator::multiplication(&phi)
            .compose(&d1(lam.clone()))
            .add(&DiffOperator::multiplication(&Symbol::constant(s1(), lam.scale(&Scalar::from_ratio(1, 2)))));
        assert_eq!(op.apply(&phi).unwrap(), phi.scale(&lam.scale(&Scalar::from_ratio(3, 2))));
    }

    #[test]
    fn canonical_commutator() {
        let ctx = DiffContext::schrodinger(s1());
        let phi = DiffOperator::multiplication(&Symbol::phi(s1(), 1).unwrap());
        let p = d1(ctx.lambda().clone());
        // [p, phi] = lambda
        assert_eq!(p.commutator(&phi), DiffOperator::multiplication(&Symbol::constant(s1(), ctx.lambda().clone())));
    }

    #[test]
    fn adjoint_of_momentum() {
        let ctx = DiffContext::schrodinger(s1());
        let p = d1(ctx.lambda().clone());
        assert_eq!(p.formal_adjoint(), p);
        let real = d1(DiffContext::real(s1()).lambda().clone());
        assert_eq!(real.formal_adjoint(), real.scale(&HPoly::constant(Scalar::from_int(-1))));
    }

    #[test]
    fn monomial_count() {
        let s = ModeSpace::new(2).unwrap();
        assert_eq!(test_monomials(s, 2).len(), 6);
    }
}
