//! Lattice Hamiltonian `sum_i [p_i^2/(2dx) + (dx/2)(m^2 phi_i^2 + ((phi_{i+1}-phi_i)/dx)^2)]
//! + sum_i dx [g_i(t) phi_i^k/k! + j_i(t) phi_i]` on a periodic chain.

use num_complex::Complex64;

use super::basis::{canonical_pairs, symmetrize, CMatrix, OperatorMatrix};
use super::config::LatticeConfig;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::symbol::{ModeSpace, Symbol};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn factorial_f64(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Time-independent pieces; the interaction at `t` is `g(t) G + j(t) J`.
#[derive(Clone, Debug)]
pub struct LatticeOperators {
    pub cfg: LatticeConfig,
    pub phi: Vec<CMatrix>,
    pub p: Vec<CMatrix>,
    pub free: CMatrix,
    /// `sum_i dx w_i phi_i^k / k!` with `g` site weights.
    pub g_part: CMatrix,
    /// `sum_i dx w_i phi_i` with `j` site weights.
    pub j_part: CMatrix,
}

#[derive(Clone, Debug)]
pub struct HamiltonianParts {
    pub free: OperatorMatrix,
    pub interaction: OperatorMatrix,
    pub total: OperatorMatrix,
}

impl LatticeOperators {
    pub fn new(cfg: &LatticeConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.sites;
        let dim = cfg.dim().expect("validated");
        let (phi, p) = canonical_pairs(cfg.cutoff, n, cfg.hbar);
        let dx = cfg.dx;
        let mut free = CMatrix::zeros(dim, dim);
        let mut g_part = CMatrix::zeros(dim, dim);
        let mut j_part = CMatrix::zeros(dim, dim);
        let kf = factorial_f64(cfg.k);
        for i in 0..n {
            free += &p[i] * &p[i] * c(1.0 / (2.0 * dx));
            free += &phi[i] * &phi[i] * c(dx * cfg.mass * cfg.mass / 2.0);
            let diff = &phi[(i + 1) % n] - &phi[i];
            free += &diff * &diff * c(1.0 / (2.0 * dx));
            if !cfg.g.is_zero() {
                let mut pow = phi[i].clone();
                for _ in 1..cfg.k {
                    pow = &pow * &phi[i];
                }
                g_part += pow * c(dx * cfg.g.weight(i) / kf);
            }
            if !cfg.j.is_zero() {
                j_part += &phi[i] * c(dx * cfg.j.weight(i));
            }
        }
        Ok(LatticeOperators {
            cfg: cfg.clone(),
            phi,
            p,
            free: symmetrize(&free),
            g_part: symmetrize(&g_part),
            j_part: symmetrize(&j_part),
        })
    }

    pub fn dim(&self) -> usize {
        self.free.nrows()
    }

    pub fn interaction(&self, t: f64) -> CMatrix {
        let mut v = CMatrix::zeros(self.dim(), self.dim());
        let g = self.cfg.g.value(t);
        let j = self.cfg.j.value(t);
        if g != 0.0 {
            v += &self.g_part * c(g);
        }
        if j != 0.0 {
            v += &self.j_part * c(j);
        }
        v
    }

    pub fn total(&self, t: f64) -> CMatrix {
        &self.free + self.interaction(t)
    }

    pub fn parts(&self, t: f64) -> Result<HamiltonianParts> {
        let interaction = self.interaction(t);
        let total = &self.free + &interaction;
        Ok(HamiltonianParts {
            free: OperatorMatrix::hermitian(self.free.clone())?,
            interaction: OperatorMatrix::hermitian(interaction)?,
            total: OperatorMatrix::hermitian(total)?,
        })
    }
}

pub fn build_hamiltonian(cfg: &LatticeConfig, t: f64) -> Result<HamiltonianParts> {
    LatticeOperators::new(cfg)?.parts(t)
}

fn real(x: f64) -> Scalar {
    Scalar::from_f64(x).expect("finite lattice parameter")
}

/// The same Hamiltonian as a classical symbol, `pi_i` standing for `p_i`.
/// Float parameters are converted exactly.
pub fn lattice_symbol(cfg: &LatticeConfig, t: f64) -> Result<Symbol> {
    cfg.validate()?;
    let space = ModeSpace::new(cfg.sites)?;
    let n = cfg.sites;
    let dx = cfg.dx;
    let phi: Vec<Symbol> = (1..=n).map(|i| Symbol::phi(space, i)).collect::<Result<_>>()?;
    let pi: Vec<Symbol> = (1..=n).map(|i| Symbol::pi(space, i)).collect::<Result<_>>()?;
    let mut h = Symbol::zero(space);
    let (g, j) = (cfg.g.value(t), cfg.j.value(t));
    let kf = factorial_f64(cfg.k);
    for i in 0..n {
        h = &h + &(&pi[i] * &pi[i]).scale_scalar(&real(1.0 / (2.0 * dx)));
        h = &h + &(&phi[i] * &phi[i]).scale_scalar(&real(dx * cfg.mass * cfg.mass / 2.0));
        let diff = &phi[(i + 1) % n] - &phi[i];
        h = &h + &(&diff * &diff).scale_scalar(&real(1.0 / (2.0 * dx)));
        if g != 0.0 {
            h = &h + &phi[i].pow(cfg.k).scale_scalar(&real(dx * g * cfg.g.weight(i) / kf));
        }
        if j != 0.0 {
            h = &h + &phi[i].scale_scalar(&real(dx * j * cfg.j.weight(i)));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::config::Profile;

    #[test]
    fn single_site_free_is_diagonal_below_cutoff() {
        let ops = LatticeOperators::new(&LatticeConfig::single_site(8)).unwrap();
        for n in 0..7 {
            assert!((ops.free[(n, n)].re - (n as f64 + 0.5)).abs() < 1e-13);
        }
        assert_eq!(ops.interaction(0.3), CMatrix::zeros(8, 8));
    }

    #[test]
    fn parts_are_hermitian_and_add_up() {
        let mut cfg = LatticeConfig::single_site(6);
        cfg.sites = 2;
        cfg.g = Profile::gauss(0.3, 0.7);
        cfg.j = Profile::const_window(0.2, 0.0, 1.0);
        let parts = build_hamiltonian(&cfg, 0.4).unwrap();
        assert!(parts.total.is_hermitian());
        let sum = parts.free.matrix() + parts.interaction.matrix();
        assert!((sum - parts.total.matrix()).norm() < 1e-14);
    }

    #[test]
    fn symbol_form_matches_single_site() {
        let mut cfg = LatticeConfig::single_site(4);
        cfg.j = Profile::const_window(0.5, 0.0, 1.0);
        let s = lattice_symbol(&cfg, 0.5).unwrap();
        assert_eq!(s.to_string(), "1/2*phi[1]^2 + 1/2*pi[1]^2 + 1/2*phi[1]");
    }
}
