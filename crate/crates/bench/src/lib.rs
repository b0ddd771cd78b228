//! Shared inputs for the benchmarks.

use fdq_core::dynamics::{LatticeConfig, Profile};
use fdq_core::expr::parse_symbol;
use fdq_core::{ModeSpace, Symbol};

/// A dense-ish pair of degree-4 symbols in two modes.
pub fn symbol_pair() -> (Symbol, Symbol) {
    let space = ModeSpace::new(2).expect("two modes");
    let a = parse_symbol("phi[1]^2*pi[2]^2 + 3/2*phi[1]*pi[1]*phi[2] - h*pi[1]^3 + phi[2]^4", space)
        .expect("valid symbol");
    let b = parse_symbol("pi[1]^2*phi[2]^2 - 1/3*pi[2]^3*phi[1] + i*h*phi[1]*pi[2] + pi[1]^4", space)
        .expect("valid symbol");
    (a, b)
}

/// Two sites, eight levels each: dimension 64.
pub fn small_lattice() -> LatticeConfig {
    let mut cfg = LatticeConfig::single_site(8);
    cfg.sites = 2;
    cfg.t0 = -2.0;
    cfg.t1 = 2.0;
    cfg.dt = 1e-2;
    cfg.g = Profile::gauss(0.05, 0.5);
    cfg
}
