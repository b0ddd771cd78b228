//! Seeded random symbols and words for property checks and benchmarks.

use num_rational::BigRational;
use rand::Rng;

use crate::enveloping::{DiffWord, Generator};
use crate::scalar::{HPoly, Scalar};
use crate::symbol::{Monomial, ModeSpace, MultiIndex, Symbol};

#[derive(Clone, Copy, Debug)]
pub struct SampleShape {
    pub max_degree: u32,
    pub max_terms: usize,
    pub max_h_power: usize,
    pub complex: bool,
}

impl Default for SampleShape {
    fn default() -> Self {
        SampleShape {
            max_degree: 4,
            max_terms: 4,
            max_h_power: 1,
            complex: true,
        }
    }
}

pub fn scalar<R: Rng>(rng: &mut R, complex: bool) -> Scalar {
    let part = |rng: &mut R| {
        let num = rng.random_range(-3i64..=3);
        let den = if rng.random_bool(0.25) { 2 } else { 1 };
        BigRational::new(num.into(), den.into())
    };
    let re = part(rng);
    let im = if complex && rng.random_bool(0.3) { part(rng) } else { BigRational::default() };
    let c = Scalar::new(re, im);
    if c.is_zero() {
        Scalar::one()
    } else {
        c
    }
}

fn index<R: Rng>(rng: &mut R, space: ModeSpace, budget: u32) -> MultiIndex {
    let mut idx = MultiIndex::default();
    let mut left = rng.random_range(0..=budget);
    while left > 0 {
        let mode = rng.random_range(1..=space.modes());
        idx.set(mode, idx.get(mode) + 1);
        left -= 1;
    }
    idx
}

pub fn hpoly<R: Rng>(rng: &mut R, shape: &SampleShape) -> HPoly {
    let power = rng.random_range(0..=shape.max_h_power);
    HPoly::monomial(scalar(rng, shape.complex), power)
}

pub fn symbol<R: Rng>(rng: &mut R, space: ModeSpace, shape: &SampleShape) -> Symbol {
    let n = rng.random_range(1..=shape.max_terms);
    let terms = (0..n).map(|_| {
        let total = rng.random_range(0..=shape.max_degree);
        let phi = index(rng, space, total);
        let pi = index(rng, space, total - phi.degree());
        (Monomial::new(phi, pi), hpoly(rng, shape))
    });
    Symbol::from_terms(space, terms.collect::<Vec<_>>()).expect("modes in range")
}

/// A `pi`-free symbol.
pub fn function<R: Rng>(rng: &mut R, space: ModeSpace, shape: &SampleShape) -> Symbol {
    let n = rng.random_range(1..=shape.max_terms);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let phi = index(rng, space, shape.max_degree);
            (Monomial::new(phi, MultiIndex::default()), hpoly(rng, shape))
        })
        .collect();
    Symbol::from_terms(space, terms).expect("modes in range")
}

pub fn generator<R: Rng>(rng: &mut R, space: ModeSpace, max_degree: u32) -> Generator {
    let shape = SampleShape {
        max_degree,
        max_terms: 2,
        max_h_power: 1,
        complex: true,
    };
    let f = if rng.random_bool(0.6) { function(rng, space, &shape) } else { Symbol::zero(space) };
    let mut v = Symbol::zero(space);
    if rng.random_bool(0.7) || f.is_zero() {
        let inner = SampleShape {
            max_degree: max_degree.saturating_sub(1),
            ..shape
        };
        for _ in 0..rng.random_range(1..=2) {
            let mode = rng.random_range(1..=space.modes());
            let g = function(rng, space, &inner);
            v = &v + &(&g * &Symbol::pi(space, mode).expect("mode in range"));
        }
    }
    if f.is_zero() && v.is_zero() {
        return Generator::pi(space, 1).expect("mode 1 exists");
    }
    Generator::new(f, v).expect("sampled generator is first order")
}

/// A combination of one or two generator sequences.
pub fn word<R: Rng>(rng: &mut R, space: ModeSpace, max_len: usize, max_degree: u32) -> DiffWord {
    let shape = SampleShape::default();
    let n = rng.random_range(1..=2);
    let terms: Vec<_> = (0..n)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            let gens = (0..len).map(|_| generator(rng, space, max_degree)).collect();
            (gens, hpoly(rng, &shape))
        })
        .collect();
    DiffWord::from_terms(space, terms).expect("single mode space")
}

pub fn space<R: Rng>(rng: &mut R, max_modes: usize) -> ModeSpace {
    ModeSpace::new(rng.random_range(1..=max_modes)).expect("positive")
}
