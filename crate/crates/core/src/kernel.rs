//! Symmetric coefficient kernels `a_{k,l}` of a homogeneous component.
//!
//! The `(k, l)` component is written as
//! `(1/(k! l!)) sum a(x_1..x_k; y_1..y_l) phi_{x_1}..phi_{x_k} pi_{y_1}..pi_{y_l}`
//! with the sum running over all ordered mode tuples. A monomial with
//! multiplicities `alpha` (in `phi`) and `beta` (in `pi`) arises from
//! `k!/alpha! * l!/beta!` ordered tuples, so its coefficient is
//! `a / (alpha! beta!)` and the stored kernel value is `coeff * alpha! * beta!`.
//! Entries are keyed by sorted tuples, which makes the symmetry structural.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalar::{HPoly, Scalar};
use crate::symbol::{Monomial, MultiIndex, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTensor {
    pub k: u32,
    pub l: u32,
    entries: BTreeMap<(Vec<usize>, Vec<usize>), HPoly>,
}

impl KernelTensor {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Vec<usize>, Vec<usize>), &HPoly)> {
        self.entries.iter()
    }

    /// Kernel value at arbitrary (unsorted) mode tuples.
    pub fn get(&self, xs: &[usize], ys: &[usize]) -> HPoly {
        let mut xs = xs.to_vec();
        let mut ys = ys.to_vec();
        xs.sort_unstable();
        ys.sort_unstable();
        self.entries.get(&(xs, ys)).cloned().unwrap_or_default()
    }

    /// Rebuilds the homogeneous `(k, l)` symbol from the kernel.
    pub fn reconstruct(&self, space: crate::symbol::ModeSpace) -> Symbol {
        let terms = self.entries.iter().map(|((xs, ys), a)| {
            let phi = MultiIndex::from_tuple(xs);
            let pi = MultiIndex::from_tuple(ys);
            let weight: BigInt = phi.factorial() * pi.factorial();
            let c = a.scale(&Scalar::real(BigRational::new(1.into(), weight)));
            (Monomial::new(phi, pi), c)
        });
        Symbol::from_terms(space, terms).expect("kernel modes come from a valid symbol")
    }
}

/// Reads off `a_{k,l}` from the `(k, l)` component of `a`.
pub fn kernel_extract(a: &Symbol, k: u32, l: u32) -> KernelTensor {
    let mut entries = BTreeMap::new();
    for (mono, c) in a.terms() {
        if mono.phi.degree() != k || mono.pi.degree() != l {
            continue;
        }
        let weight: BigInt = mono.phi.factorial() * mono.pi.factorial();
        entries.insert(
            (mono.phi.to_sorted_tuple(), mono.pi.to_sorted_tuple()),
            c.scale(&Scalar::real(weight.into())),
        );
    }
    KernelTensor { k, l, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::ModeSpace;

    #[test]
    fn square_kernel_is_two() {
        let s = ModeSpace::new(1).unwrap();
        let a = Symbol::phi(s, 1).unwrap().pow(2);
        let ker = kernel_extract(&a, 2, 0);
        assert_eq!(ker.get(&[1, 1], &[]), HPoly::constant(Scalar::from_int(2)));
        assert_eq!(ker.reconstruct(s), a);
    }

    #[test]
    fn distinct_modes_symmetrized() {
        // (1/2!)(a(1,2) + a(2,1)) phi1 phi2 = phi1 phi2 forces a(1,2) = a(2,1) = 1
        let s = ModeSpace::new(2).unwrap();
        let a = &Symbol::phi(s, 1).unwrap() * &Symbol::phi(s, 2).unwrap();
        let ker = kernel_extract(&a, 2, 0);
        assert_eq!(ker.get(&[1, 2], &[]), HPoly::one());
        assert_eq!(ker.get(&[2, 1], &[]), HPoly::one());
        assert_eq!(ker.reconstruct(s), a);
    }

    #[test]
    fn absent_component_empty() {
        let s = ModeSpace::new(1).unwrap();
        let ker = kernel_extract(&Symbol::phi(s, 1).unwrap(), 2, 0);
        assert!(ker.is_empty());
    }
}
