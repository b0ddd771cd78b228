//! Words in first-order symbols `D(f; v)` (a function of `phi` plus a vector
//! field linear in `pi`) and their normal forms modulo
//!
//! ```text
//! v * f   = f v + (lambda/2) {v, f}
//! f1 * f2 = f1 f2
//! d1 * d2 - d2 * d1 = lambda {d1, d2}
//! ```
//!
//! A normal form is a [`Symbol`] read as `phi`-monomials standing to the left
//! of `pi`-monomials, so it quantizes through [`quantize_normal`].
//!
//! The rewriting system works on words over three kinds of letters:
//! unexpanded generators, functions `Fun(f)` and coordinate momenta `Mom(i)`.
//!
//! ```text
//! Gen(f; sum_i g_i pi_i) -> Fun(f) + sum_i ( Fun(g_i) Mom(i) + (lambda/2) Fun(dg_i/dphi_i) )
//! Fun(f1) Fun(f2)        -> Fun(f1 f2)
//! Mom(i) Fun(g)          -> Fun(g) Mom(i) + lambda Fun(dg/dphi_i)
//! Mom(j) Mom(i), j > i   -> Mom(i) Mom(j)
//! ```
//!
//! Constant functions are absorbed into the coefficient as soon as they
//! appear. Termination: every rule lowers, lexicographically, the number of
//! `Gen` letters, then the number of `Mom`-before-`Fun` inversions, then the
//! word length, then the number of unsorted `Mom` pairs.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::print_symbol;
use crate::operator::{quantize_normal, DiffOperator};
use crate::scalar::{HPoly, Scalar};
use crate::star::{normal_star, DiffContext};
use crate::symbol::{Monomial, ModeSpace, MultiIndex, Symbol, Var};

/// A first-order symbol `f(phi) + v(phi, pi)` with `v` linear in `pi`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    f: Symbol,
    v: Symbol,
}

impl Generator {
    pub fn new(f: Symbol, v: Symbol) -> Result<Self> {
        f.space().check_same(&v.space())?;
        for (mono, c) in f.terms() {
            if mono.pi.degree() != 0 {
                return Err(Error::validation(format!(
                    "function part depends on pi in term {}",
                    term_text(f.space(), mono, c)
                )));
            }
        }
        for (mono, c) in v.terms() {
            if mono.pi.degree() != 1 {
                return Err(Error::validation(format!(
                    "vector-field part has pi-degree {} in term {}",
                    mono.pi.degree(),
                    term_text(v.space(), mono, c)
                )));
            }
        }
        Ok(Generator { f, v })
    }

    /// Splits a symbol of `pi`-degree at most one into `f + v`.
    pub fn from_symbol(s: &Symbol) -> Result<Self> {
        let space = s.space();
        let mut f = Symbol::zero(space);
        let mut v = Symbol::zero(space);
        for (mono, c) in s.terms() {
            let single = Symbol::from_terms(space, [(mono.clone(), c.clone())])?;
            match mono.pi.degree() {
                0 => f = &f + &single,
                1 => v = &v + &single,
                d => {
                    return Err(Error::validation(format!(
                        "not a first-order symbol: term {} has pi-degree {d}",
                        term_text(space, mono, c)
                    )))
                }
            }
        }
        Ok(Generator { f, v })
    }

    pub fn phi(space: ModeSpace, mode: usize) -> Result<Self> {
        Generator::new(Symbol::phi(space, mode)?, Symbol::zero(space))
    }

    pub fn pi(space: ModeSpace, mode: usize) -> Result<Self> {
        Generator::new(Symbol::zero(space), Symbol::pi(space, mode)?)
    }

    pub fn f(&self) -> &Symbol {
        &self.f
    }

    pub fn v(&self) -> &Symbol {
        &self.v
    }

    pub fn space(&self) -> ModeSpace {
        self.f.space()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.v.is_zero()
    }

    /// `f + v` as a single symbol.
    pub fn symbol(&self) -> Symbol {
        &self.f + &self.v
    }

    /// Coefficient functions `g_i` of `v = sum_i g_i pi_i`.
    pub fn components(&self) -> Vec<(usize, Symbol)> {
        self.space()
            .iter()
            .filter_map(|i| {
                let g = self.v.derivative_unchecked(Var::Pi, i);
                (!g.is_zero()).then_some((i, g))
            })
            .collect()
    }

    fn involute(&self, sign: &Scalar) -> Generator {
        Generator {
            f: self.f.conjugate(),
            v: self.v.conjugate().scale_scalar(sign),
        }
    }
}

fn term_text(space: ModeSpace, mono: &Monomial, c: &HPoly) -> String {
    Symbol::from_terms(space, [(mono.clone(), c.clone())])
        .map(|s| print_symbol(&s))
        .unwrap_or_default()
}

/// Formal linear combination of generator sequences; the empty sequence is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffWord {
    space: ModeSpace,
    terms: BTreeMap<Vec<Generator>, HPoly>,
}

impl DiffWord {
    pub fn zero(space: ModeSpace) -> Self {
        DiffWord {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(space: ModeSpace) -> Self {
        DiffWord::scalar(space, HPoly::one())
    }

    pub fn scalar(space: ModeSpace, c: HPoly) -> Self {
        let mut w = DiffWord::zero(space);
        w.add_term(Vec::new(), &c);
        w
    }

    pub fn generator(g: Generator) -> Self {
        let mut w = DiffWord::zero(g.space());
        w.add_term(vec![g], &HPoly::one());
        w
    }

    /// A single product `g_1 * g_2 * ... * g_n`.
    pub fn sequence(space: ModeSpace, gens: Vec<Generator>) -> Result<Self> {
        for g in &gens {
            space.check_same(&g.space())?;
        }
        let mut w = DiffWord::zero(space);
        w.add_term(gens, &HPoly::one());
        Ok(w)
    }

    pub fn from_terms<I>(space: ModeSpace, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Generator>, HPoly)>,
    {
        let mut w = DiffWord::zero(space);
        for (gens, c) in terms {
            for g in &gens {
                space.check_same(&g.space())?;
            }
            w.add_term(gens, &c);
        }
        Ok(w)
    }

    fn add_term(&mut self, gens: Vec<Generator>, c: &HPoly) {
        if c.is_zero() || gens.iter().any(Generator::is_zero) {
            return;
        }
        let sum = match self.terms.get(&gens) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&gens);
        } else {
            self.terms.insert(gens, sum);
        }
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Generator>, &HPoly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &DiffWord) -> DiffWord {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &HPoly) -> DiffWord {
        let mut out = DiffWord::zero(self.space);
        for (g, x) in &self.terms {
            out.add_term(g.clone(), &(x * c));
        }
        out
    }

    pub fn neg(&self) -> DiffWord {
        self.scale(&HPoly::constant(Scalar::from_int(-1)))
    }

    pub fn pow(&self, n: u32) -> DiffWord {
        let mut acc = DiffWord::unit(self.space);
        for _ in 0..n {
            acc = word_product_unchecked(&acc, self);
        }
        acc
    }
}

fn word_product_unchecked(a: &DiffWord, b: &DiffWord) -> DiffWord {
    let mut out = DiffWord::zero(a.space);
    for (ga, ca) in &a.terms {
        for (gb, cb) in &b.terms {
            let mut seq = ga.clone();
            seq.extend(gb.iter().cloned());
            out.add_term(seq, &(ca * cb));
        }
    }
    out
}

/// Concatenation, extended bilinearly.
pub fn word_product(a: &DiffWord, b: &DiffWord) -> Result<DiffWord> {
    a.space.check_same(&b.space)?;
    Ok(word_product_unchecked(a, b))
}

/// `f ↦ conj(f)`, `v ↦ sign * conj(v)`, coefficients conjugated, sequences reversed.
pub fn involution(w: &DiffWord, ctx: &DiffContext) -> DiffWord {
    let sign = ctx.involution_sign().as_scalar();
    let mut out = DiffWord::zero(w.space);
    for (gens, c) in &w.terms {
        let seq: Vec<_> = gens.iter().rev().map(|g| g.involute(&sign)).collect();
        out.add_term(seq, &c.conj());
    }
    out
}

/// An element of the quotient algebra, identified by its normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffElement {
    pub nf: Symbol,
    pub ctx: DiffContext,
}

impl DiffElement {
    /// The involution evaluated directly on the normal form:
    /// `c phi^a pi^b ↦ conj(c) sign^|b| (pi^b * phi^a)`.
    pub fn involution(&self) -> Result<DiffElement> {
        let space = self.ctx.space();
        let sign = self.ctx.involution_sign().as_scalar();
        let mut out = Symbol::zero(space);
        for (mono, c) in self.nf.terms() {
            let left = Symbol::from_terms(space, [(Monomial::new(MultiIndex::default(), mono.pi.clone()), HPoly::one())])?;
            let right = Symbol::from_terms(space, [(Monomial::new(mono.phi.clone(), MultiIndex::default()), HPoly::one())])?;
            let coeff = c.conj().scale(&sign.pow(mono.pi.degree()));
            out = &out + &normal_star(&left, &right, &self.ctx)?.scale(&coeff);
        }
        Ok(DiffElement { nf: out, ctx: self.ctx.clone() })
    }
}

/// Order in which redexes are contracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// First pending word, leftmost redex.
    Leftmost,
    /// Uniformly random pending word and redex from a seeded generator.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Letter {
    Gen(Generator),
    Fun(Symbol),
    Mom(usize),
}

type Word = Vec<Letter>;

struct Rewriter<'a> {
    ctx: &'a DiffContext,
    half_lambda: HPoly,
    pending: BTreeMap<Word, HPoly>,
    done: BTreeMap<Word, HPoly>,
}

fn add_into(map: &mut BTreeMap<Word, HPoly>, w: Word, c: HPoly) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn redexes(w: &Word) -> Vec<usize> {
    let mut out = Vec::new();
    for (p, letter) in w.iter().enumerate() {
        if matches!(letter, Letter::Gen(_)) {
            out.push(p);
            continue;
        }
        if let Some(next) = w.get(p + 1) {
            let hit = match (letter, next) {
                (Letter::Fun(_), Letter::Fun(_)) => true,
                (Letter::Mom(_), Letter::Fun(_)) => true,
                (Letter::Mom(j), Letter::Mom(i)) => j > i,
                _ => false,
            };
            if hit {
                out.push(p);
            }
        }
    }
    out
}

impl<'a> Rewriter<'a> {
    fn new(ctx: &'a DiffContext) -> Self {
        Rewriter {
            ctx,
            half_lambda: ctx.lambda().scale(&Scalar::from_ratio(1, 2)),
            pending: BTreeMap::new(),
            done: BTreeMap::new(),
        }
    }

    /// Absorbs constant `Fun` letters into the coefficient and files the word.
    fn push(&mut self, word: Word, mut c: HPoly) {
        let mut clean = Vec::with_capacity(word.len());
        for letter in word {
            if let Letter::Fun(f) = &letter {
                if let Some(k) = f.as_constant() {
                    c = &c * &k;
                    continue;
                }
            }
            clean.push(letter);
        }
        if c.is_zero() {
            return;
        }
        if redexes(&clean).is_empty() {
            add_into(&mut self.done, clean, c);
        } else {
            add_into(&mut self.pending, clean, c);
        }
    }

    fn splice(word: &Word, at: usize, width: usize, middle: Vec<Letter>) -> Word {
        let mut out = word[..at].to_vec();
        out.extend(middle);
        out.extend_from_slice(&word[at + width..]);
        out
    }

    fn contract(&mut self, word: Word, c: HPoly, at: usize) {
        match (&word[at], word.get(at + 1)) {
            (Letter::Gen(g), _) => {
                let g = g.clone();
                if !g.f.is_zero() {
                    self.push(Self::splice(&word, at, 1, vec![Letter::Fun(g.f.clone())]), c.clone());
                }
                for (i, gi) in g.components() {
                    let div = gi.derivative_unchecked(Var::Phi, i);
                    self.push(
                        Self::splice(&word, at, 1, vec![Letter::Fun(gi), Letter::Mom(i)]),
                        c.clone(),
                    );
                    if !div.is_zero() {
                        self.push(
                            Self::splice(&word, at, 1, vec![Letter::Fun(div)]),
                            &c * &self.half_lambda,
                        );
                    }
                }
            }
            (Letter::Fun(a), Some(Letter::Fun(b))) => {
                let prod = a * b;
                self.push(Self::splice(&word, at, 2, vec![Letter::Fun(prod)]), c);
            }
            (Letter::Mom(i), Some(Letter::Fun(g))) => {
                let i = *i;
                let dg = g.derivative_unchecked(Var::Phi, i);
                let swapped = vec![Letter::Fun(g.clone()), Letter::Mom(i)];
                self.push(Self::splice(&word, at, 2, swapped), c.clone());
                if !dg.is_zero() {
                    let lam = self.ctx.lambda().clone();
                    self.push(Self::splice(&word, at, 2, vec![Letter::Fun(dg)]), &c * &lam);
                }
            }
            (Letter::Mom(j), Some(Letter::Mom(i))) => {
                let sorted = vec![Letter::Mom(*i), Letter::Mom(*j)];
                self.push(Self::splice(&word, at, 2, sorted), c);
            }
            _ => unreachable!("not a redex"),
        }
    }

    fn run(&mut self, strategy: RewriteStrategy) {
        let mut rng = match strategy {
            RewriteStrategy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            RewriteStrategy::Leftmost => None,
        };
        while !self.pending.is_empty() {
            let (word, c, at) = match rng.as_mut() {
                None => {
                    let (word, c) = self.pending.pop_first().unwrap();
                    let at = redexes(&word)[0];
                    (word, c, at)
                }
                Some(rng) => {
                    let pick = rng.random_range(0..self.pending.len());
                    let word = self.pending.keys().nth(pick).unwrap().clone();
                    let c = self.pending.remove(&word).unwrap();
                    let spots = redexes(&word);
                    let at = spots[rng.random_range(0..spots.len())];
                    (word, c, at)
                }
            };
            self.contract(word, c, at);
        }
    }

    fn into_symbol(self) -> Symbol {
        let space = self.ctx.space();
        let mut out = Symbol::zero(space);
        for (word, c) in self.done {
            let mut f = Symbol::one(space);
            let mut pi = MultiIndex::default();
            for letter in word {
                match letter {
                    Letter::Fun(g) => f = &f * &g,
                    Letter::Mom(i) => pi.set(i, pi.get(i) + 1),
                    Letter::Gen(_) => unreachable!("normal words carry no generators"),
                }
            }
            let mom = Symbol::from_terms(space, [(Monomial::new(MultiIndex::default(), pi), c)])
                .expect("modes in range");
            out = &out + &(&f * &mom);
        }
        out
    }
}

/// Normal form with the default (leftmost) strategy.
pub fn normal_form(w: &DiffWord, ctx: &DiffContext) -> Result<DiffElement> {
    normal_form_with(w, ctx, RewriteStrategy::Leftmost)
}

pub fn normal_form_with(w: &DiffWord, ctx: &DiffContext, strategy: RewriteStrategy) -> Result<DiffElement> {
    ctx.space().check_same(&w.space)?;
    let mut rw = Rewriter::new(ctx);
    for (gens, c) in &w.terms {
        rw.push(gens.iter().cloned().map(Letter::Gen).collect(), c.clone());
    }
    rw.run(strategy);
    Ok(DiffElement {
        nf: rw.into_symbol(),
        ctx: ctx.clone(),
    })
}

/// `rho(D(f; v)) = f + lambda (sum_i v_i d_i + (1/2) sum_i dv_i/dphi_i)`.
pub fn represent_generator(g: &Generator, ctx: &DiffContext) -> Result<DiffOperator> {
    ctx.space().check_same(&g.space())?;
    let space = g.space();
    let mut op = DiffOperator::multiplication(&g.f);
    let mut div = Symbol::zero(space);
    for (i, gi) in g.components() {
        div = &div + &gi.derivative_unchecked(Var::Phi, i);
        let d = DiffOperator::derivative(space, MultiIndex::one_hot(i, 1), ctx.lambda().clone());
        op = op.add(&DiffOperator::multiplication(&gi).compose(&d));
    }
    let half = ctx.lambda().scale(&Scalar::from_ratio(1, 2));
    Ok(op.add(&DiffOperator::multiplication(&div.scale(&half))))
}

/// The differential-operator representation, multiplicative on words.
pub fn represent(w: &DiffWord, ctx: &DiffContext) -> Result<DiffOperator> {
    ctx.space().check_same(&w.space)?;
    let mut out = DiffOperator::zero(w.space);
    for (gens, c) in &w.terms {
        let mut op = DiffOperator::identity(w.space);
        for g in gens {
            op = op.compose(&represent_generator(g, ctx)?);
        }
        out = out.add(&op.scale(c));
    }
    Ok(out)
}

/// `quantize_normal(nf)`: the operator an element stands for.
pub fn element_operator(e: &DiffElement) -> Result<DiffOperator> {
    quantize_normal(&e.nf, &e.ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> ModeSpace {
        ModeSpace::new(1).unwrap()
    }

    fn gen_pi() -> DiffWord {
        DiffWord::generator(Generator::pi(s1(), 1).unwrap())
    }

    fn gen_phi() -> DiffWord {
        DiffWord::generator(Generator::phi(s1(), 1).unwrap())
    }

    fn sym(s: &str, n: usize) -> Symbol {
        crate::expr::parse_symbol(s, ModeSpace::new(n).unwrap()).unwrap()
    }

    #[test]
    fn make_generator_validation() {
        let s = ModeSpace::new(2).unwrap();
        assert!(Generator::new(sym("phi[1]^2", 2), Symbol::zero(s)).is_ok());
        assert!(Generator::new(Symbol::zero(s), sym("phi[1]*pi[2]", 2)).is_ok());
        let err = Generator::new(Symbol::zero(s), sym("pi[1]^2", 2)).unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("pi[1]^2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Generator::new(sym("pi[1]", 2), Symbol::zero(s)).is_err());
    }

    #[test]
    fn pi_phi_word_real_lambda() {
        let ctx = DiffContext::real(s1());
        let w = word_product(&gen_pi(), &gen_phi()).unwrap();
        assert_eq!(normal_form(&w, &ctx).unwrap().nf, sym("phi[1]*pi[1] + h", 1));
    }

    #[test]
    fn vector_field_generator() {
        let ctx = DiffContext::real(s1());
        let g = Generator::new(Symbol::zero(s1()), sym("phi[1]*pi[1]", 1)).unwrap();
        let nf = normal_form(&DiffWord::generator(g.clone()), &ctx).unwrap();
        assert_eq!(nf.nf, sym("phi[1]*pi[1] + 1/2*h", 1));
        assert_eq!(represent_generator(&g, &ctx).unwrap(), element_operator(&nf).unwrap());
    }

    #[test]
    fn functions_multiply() {
        let s = ModeSpace::new(2).unwrap();
        let ctx = DiffContext::real(s);
        let w = DiffWord::sequence(s, vec![Generator::phi(s, 1).unwrap(), Generator::phi(s, 2).unwrap()]).unwrap();
        assert_eq!(normal_form(&w, &ctx).unwrap().nf, sym("phi[1]*phi[2]", 2));
    }

    #[test]
    fn commutator_value() {
        let ctx = DiffContext::schrodinger(s1());
        let a = word_product(&gen_pi(), &gen_phi()).unwrap();
        let b = word_product(&gen_phi(), &gen_pi()).unwrap();
        let nf = normal_form(&a.add(&b.neg()), &ctx).unwrap();
        assert_eq!(nf.nf, sym("-1*i*h", 1));
    }

    #[test]
    fn momenta_commute() {
        let s = ModeSpace::new(2).unwrap();
        let ctx = DiffContext::schrodinger(s);
        let p1 = Generator::pi(s, 1).unwrap();
        let p2 = Generator::pi(s, 2).unwrap();
        let a = DiffWord::sequence(s, vec![p1.clone(), p2.clone()]).unwrap();
        let b = DiffWord::sequence(s, vec![p2, p1]).unwrap();
        assert_eq!(normal_form(&a, &ctx).unwrap(), normal_form(&b, &ctx).unwrap());
    }

    #[test]
    fn unit_word() {
        let ctx = DiffContext::real(s1());
        let w = word_product(&DiffWord::unit(s1()), &gen_pi()).unwrap();
        assert_eq!(w, gen_pi());
        assert_eq!(normal_form(&DiffWord::unit(s1()), &ctx).unwrap().nf, Symbol::one(s1()));
    }

    #[test]
    fn involution_examples() {
        let real = DiffContext::real(s1());
        let inv = involution(&gen_pi(), &real);
        assert_eq!(inv, DiffWord::generator(Generator::new(Symbol::zero(s1()), sym("-1*pi[1]", 1)).unwrap()));

        let imag = DiffContext::schrodinger(s1());
        assert_eq!(involution(&gen_pi(), &imag), gen_pi());
        let rho = represent(&gen_pi(), &imag).unwrap();
        assert_eq!(rho.formal_adjoint(), rho);

        let w = word_product(&gen_pi(), &gen_phi()).unwrap().scale(&HPoly::constant(Scalar::i()));
        let expected = word_product(&gen_phi(), &involution(&gen_pi(), &real))
            .unwrap()
            .scale(&HPoly::constant(-Scalar::i()));
        assert_eq!(involution(&w, &real), expected);
        assert_eq!(involution(&involution(&w, &real), &real), w);
    }

    #[test]
    fn strategies_agree_on_small_word() {
        let s = ModeSpace::new(2).unwrap();
        let ctx = DiffContext::schrodinger(s);
        let g1 = Generator::new(sym("phi[2]^2", 2), sym("phi[1]^2*pi[1] + phi[2]*pi[2]", 2)).unwrap();
        let g2 = Generator::new(sym("phi[1]", 2), sym("phi[1]*phi[2]*pi[2]", 2)).unwrap();
        let w = DiffWord::sequence(s, vec![g1.clone(), g2.clone(), g1]).unwrap();
        let base = normal_form(&w, &ctx).unwrap();
        for seed in 0..5 {
            assert_eq!(normal_form_with(&w, &ctx, RewriteStrategy::Seeded(seed)).unwrap(), base);
        }
    }
}
