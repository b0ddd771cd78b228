use fdq_core::sample::{self, SampleShape};
use fdq_core::{kernel_extract, poisson_bracket, HPoly, ModeSpace, Monomial, MultiIndex, Scalar, Symbol, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CASES: usize = 200;

fn shape() -> SampleShape {
    SampleShape {
        max_degree: 4,
        max_terms: 4,
        max_h_power: 1,
        complex: true,
    }
}

fn triple(rng: &mut ChaCha8Rng) -> (Symbol, Symbol, Symbol) {
    let space = sample::space(rng, 3);
    (
        sample::symbol(rng, space, &shape()),
        sample::symbol(rng, space, &shape()),
        sample::symbol(rng, space, &shape()),
    )
}

#[test]
fn bracket_antisymmetry_jacobi_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..CASES {
        let (a, b, c) = triple(&mut rng);
        let ab = poisson_bracket(&a, &b).unwrap();
        assert_eq!(ab, -&poisson_bracket(&b, &a).unwrap());

        let jacobi = &(&poisson_bracket(&a, &poisson_bracket(&b, &c).unwrap()).unwrap()
            + &poisson_bracket(&b, &poisson_bracket(&c, &a).unwrap()).unwrap())
            + &poisson_bracket(&c, &ab).unwrap();
        assert!(jacobi.is_zero(), "Jacobi fails for {a} ; {b} ; {c}");

        let lhs = poisson_bracket(&a, &(&b * &c)).unwrap();
        let rhs = &(&ab * &c) + &(&b * &poisson_bracket(&a, &c).unwrap());
        assert_eq!(lhs, rhs);
    }
}

/// Direct coordinate formula, one monomial pair at a time.
fn bracket_by_hand(a: &Symbol, b: &Symbol) -> Symbol {
    let space = a.space();
    let mut out = Symbol::zero(space);
    for i in space.iter() {
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                // d/dpi on the left and d/dphi on the right, or the reverse
                let mut term = |left: Var, sign: i64| {
                    let (ea, eb) = match left {
                        Var::Pi => (ma.pi.get(i), mb.phi.get(i)),
                        Var::Phi => (ma.phi.get(i), mb.pi.get(i)),
                    };
                    if ea == 0 || eb == 0 {
                        return;
                    }
                    let mut m = ma.mul(mb);
                    m.pi.set(i, m.pi.get(i) - 1);
                    m.phi.set(i, m.phi.get(i) - 1);
                    let k = Scalar::from_int(sign * i64::from(ea) * i64::from(eb));
                    let c = (ca * cb).scale(&k);
                    out = &out + &Symbol::from_terms(space, [(m, c)]).unwrap();
                };
                term(Var::Pi, 1);
                term(Var::Phi, -1);
            }
        }
    }
    out
}

#[test]
fn bracket_matches_coordinate_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..CASES {
        let (a, b, _) = triple(&mut rng);
        assert_eq!(poisson_bracket(&a, &b).unwrap(), bracket_by_hand(&a, &b));
    }
}

#[test]
fn canonical_pairs() {
    let s = ModeSpace::new(2).unwrap();
    let one = Symbol::one(s);
    assert_eq!(poisson_bracket(&Symbol::pi(s, 1).unwrap(), &Symbol::phi(s, 1).unwrap()).unwrap(), one);
    assert!(poisson_bracket(&Symbol::pi(s, 2).unwrap(), &Symbol::phi(s, 1).unwrap()).unwrap().is_zero());
    assert!(poisson_bracket(&Symbol::h(s), &Symbol::phi(s, 1).unwrap()).unwrap().is_zero());
}

fn tuples(modes: usize, len: u32) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=modes).map(move |m| {
                    let mut t = t.clone();
                    t.push(m);
                    t
                })
            })
            .collect();
    }
    out
}

/// Sum over all ordered index tuples of `a(x; y)/(k! l!) phi_x... pi_y...`.
fn brute_force_component(a: &Symbol, k: u32, l: u32) -> Symbol {
    let space = a.space();
    let kernel = kernel_extract(a, k, l);
    let norm = BigRational::new(BigInt::from(1), fdq_core::symbol::factorial(k) * fdq_core::symbol::factorial(l));
    let mut out = Symbol::zero(space);
    for xs in tuples(space.modes(), k) {
        for ys in tuples(space.modes(), l) {
            let value = kernel.get(&xs, &ys);
            if value.is_zero() {
                continue;
            }
            let mono = Monomial::new(MultiIndex::from_tuple(&xs), MultiIndex::from_tuple(&ys));
            out = &out + &Symbol::from_terms(space, [(mono, value.scale(&Scalar::real(norm.clone())))]).unwrap();
        }
    }
    out
}

#[test]
fn kernels_reconstruct_by_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..CASES {
        let space = sample::space(&mut rng, 3);
        let a = sample::symbol(&mut rng, space, &shape());
        let mut total = Symbol::zero(space);
        for (k, l, part) in a.bidegree_decompose() {
            assert_eq!(brute_force_component(&a, k, l), part);
            assert_eq!(kernel_extract(&a, k, l).reconstruct(space), part);
            total = &total + &part;
        }
        assert_eq!(total, a);
    }
}

fn arb_symbol() -> impl Strategy<Value = Symbol> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample::symbol(&mut rng, ModeSpace::new(2).unwrap(), &shape())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutative_ring(a in arb_symbol(), b in arb_symbol(), c in arb_symbol()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Symbol::one(a.space()), a.clone());
    }

    #[test]
    fn derivative_is_a_derivation(a in arb_symbol(), b in arb_symbol()) {
        for var in [Var::Phi, Var::Pi] {
            let lhs = (&a * &b).derivative(var, 1).unwrap();
            let rhs = &(&a.derivative(var, 1).unwrap() * &b) + &(&a * &b.derivative(var, 1).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn h_grading(a in arb_symbol()) {
        let mut sum = Symbol::zero(a.space());
        for p in 0..=a.h_degree().unwrap_or(0) {
            sum = &sum + &a.h_coeff(p).scale(&HPoly::monomial(Scalar::one(), p));
        }
        prop_assert_eq!(sum, a);
    }
}
