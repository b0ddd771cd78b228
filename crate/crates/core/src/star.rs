//! Deformed products on symbols.
//!
//! Everything is parameterized by the deformation scalar `lambda = c*h`.
//! With `pi ↦ lambda d/dphi`, `lambda = -ih` is the Schrodinger representation
//! `pi = -ih d/dphi`; `lambda = ih` reproduces the exponential form
//! `exp(ih d/dpi_1 d/dphi_2)` literally; `lambda = h` is the real convention
//! used for the enveloping algebra bracket.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{HPoly, Scalar};
use crate::symbol::{Monomial, ModeSpace, Symbol};

/// Sign of the involution on vector-field generators, `v ↦ sign * conj(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvolutionSign {
    Plus,
    Minus,
}

impl InvolutionSign {
    pub fn as_scalar(self) -> Scalar {
        match self {
            InvolutionSign::Plus => Scalar::one(),
            InvolutionSign::Minus => Scalar::from_int(-1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffContext {
    space: ModeSpace,
    lambda: HPoly,
    sign: InvolutionSign,
}

impl DiffContext {
    /// `lambda` must be `c*h` with `c` nonzero and either real (sign -1)
    /// or purely imaginary (sign +1).
    pub fn new(space: ModeSpace, lambda: HPoly) -> Result<Self> {
        if lambda.degree() != Some(1) || !lambda.coeff(0).is_zero() {
            return Err(Error::validation(
                "lambda must be a nonzero multiple of h with no constant term",
            ));
        }
        let c = lambda.coeff(1);
        let sign = if c.is_real() {
            InvolutionSign::Minus
        } else if c.is_imaginary() {
            InvolutionSign::Plus
        } else {
            return Err(Error::validation(
                "lambda must be a real or purely imaginary multiple of h",
            ));
        };
        Ok(DiffContext { space, lambda, sign })
    }

    pub fn with_factor(space: ModeSpace, c: Scalar) -> Result<Self> {
        DiffContext::new(space, HPoly::monomial(c, 1))
    }

    /// `lambda = h`.
    pub fn real(space: ModeSpace) -> Self {
        DiffContext::with_factor(space, Scalar::one()).expect("h is valid")
    }

    /// `lambda = -ih`, the Schrodinger convention.
    pub fn schrodinger(space: ModeSpace) -> Self {
        DiffContext::with_factor(space, -Scalar::i()).expect("-ih is valid")
    }

    /// `lambda = ih`.
    pub fn imaginary(space: ModeSpace) -> Self {
        DiffContext::with_factor(space, Scalar::i()).expect("ih is valid")
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn lambda(&self) -> &HPoly {
        &self.lambda
    }

    /// The `c` in `lambda = c*h`.
    pub fn factor(&self) -> Scalar {
        self.lambda.coeff(1)
    }

    pub fn involution_sign(&self) -> InvolutionSign {
        self.sign
    }

    fn check(&self, a: &Symbol) -> Result<()> {
        self.space.check_same(&a.space())
    }
}

fn lambda_power_over(ctx_lambda: &HPoly, power: u32, weight: BigRational) -> HPoly {
    ctx_lambda.pow(power).scale(&Scalar::real(weight))
}

/// Normal-ordered product `sum_g lambda^|g|/g! (d_pi^g A)(d_phi^g B)`:
/// the symbol of the composition when every `pi` stands to the right.
pub fn normal_star(a: &Symbol, b: &Symbol, ctx: &DiffContext) -> Result<Symbol> {
    ctx.check(a)?;
    ctx.check(b)?;
    let mut out = Symbol::zero(ctx.space);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let cab = ca * cb;
            let reach = ma.pi.meet(&mb.phi);
            for g in reach.sub_indices() {
                let weight = BigRational::new(ma.pi.falling(&g) * mb.phi.falling(&g), g.factorial());
                let c = &cab * &lambda_power_over(&ctx.lambda, g.degree(), weight);
                let phi = ma.phi.add(&mb.phi.checked_sub(&g).unwrap());
                let pi = ma.pi.checked_sub(&g).unwrap().add(&mb.pi);
                out.add_term(Monomial::new(phi, pi), &c);
            }
        }
    }
    Ok(out)
}

/// Symmetric-ordering (Moyal) product
/// `sum_{r,s} (lambda/2)^{|r|+|s|} (-1)^|s| / (r! s!) (d_pi^r d_phi^s A)(d_phi^r d_pi^s B)`.
pub fn weyl_star(a: &Symbol, b: &Symbol, ctx: &DiffContext) -> Result<Symbol> {
    ctx.check(a)?;
    ctx.check(b)?;
    let half = ctx.lambda.scale(&Scalar::from_ratio(1, 2));
    let mut out = Symbol::zero(ctx.space);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let cab = ca * cb;
            let r_reach = ma.pi.meet(&mb.phi);
            let s_reach = ma.phi.meet(&mb.pi);
            let s_all = s_reach.sub_indices();
            for r in r_reach.sub_indices() {
                for s in &s_all {
                    let num = ma.pi.falling(&r) * mb.phi.falling(&r) * ma.phi.falling(s) * mb.pi.falling(s);
                    let mut weight = BigRational::new(num, r.factorial() * s.factorial());
                    if s.degree() % 2 == 1 {
                        weight = -weight;
                    }
                    let c = &cab * &lambda_power_over(&half, r.degree() + s.degree(), weight);
                    let phi = ma.phi.checked_sub(s).unwrap().add(&mb.phi.checked_sub(&r).unwrap());
                    let pi = ma.pi.checked_sub(&r).unwrap().add(&mb.pi.checked_sub(s).unwrap());
                    out.add_term(Monomial::new(phi, pi), &c);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingDirection {
    WeylToNormal,
    NormalToWeyl,
}

/// The ordering-transition map `R = exp((lambda/2) sum_i d^2/dphi_i dpi_i)`
/// (weyl-to-normal) and its inverse with `-lambda/2`.
///
/// `R` converts a symmetric-ordering symbol into the normal-ordered symbol of
/// the same operator, so it intertwines `weyl_star` with `normal_star`.
pub fn ordering_transform(a: &Symbol, ctx: &DiffContext, direction: OrderingDirection) -> Result<Symbol> {
    ctx.check(a)?;
    let sign = match direction {
        OrderingDirection::WeylToNormal => Scalar::from_ratio(1, 2),
        OrderingDirection::NormalToWeyl => Scalar::from_ratio(-1, 2),
    };
    let step = ctx.lambda.scale(&sign);
    let mut out = Symbol::zero(ctx.space);
    for (m, c) in a.terms() {
        for g in m.phi.meet(&m.pi).sub_indices() {
            let weight = BigRational::new(m.phi.falling(&g) * m.pi.falling(&g), g.factorial());
            if weight.is_zero() {
                continue;
            }
            let coeff = c * &lambda_power_over(&step, g.degree(), weight);
            let mono = Monomial::new(m.phi.checked_sub(&g).unwrap(), m.pi.checked_sub(&g).unwrap());
            out.add_term(mono, &coeff);
        }
    }
    Ok(out)
}

/// Commutator `A*B - B*A` for either product.
pub fn star_commutator(
    a: &Symbol,
    b: &Symbol,
    ctx: &DiffContext,
    product: fn(&Symbol, &Symbol, &DiffContext) -> Result<Symbol>,
) -> Result<Symbol> {
    Ok(&product(a, b, ctx)? - &product(b, a, ctx)?)
}
