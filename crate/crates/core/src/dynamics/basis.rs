//! Truncated oscillator bases, operator matrices and state vectors.
//!
//! Sites are assembled by Kronecker products with site 1 as the most
//! significant factor, so basis index `n` has digits `(n_1, ..., n_N)` in base
//! `M`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Largest entry of `|A - A^dagger|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    matrix: CMatrix,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::validation("operator matrix must be square"));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::numeric("operator matrix has non-finite entries"));
        }
        Ok(OperatorMatrix {
            matrix,
            hermitian: false,
        })
    }

    /// Checks Hermiticity and records the flag.
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        let defect = hermiticity_defect(&op.matrix);
        if defect >= HERMITIAN_TOLERANCE {
            return Err(Error::numeric(format!(
                "matrix claimed Hermitian has defect {defect:e}"
            )));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix {
            matrix: CMatrix::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    vector: CVector,
    normalized: bool,
}

impl WaveState {
    pub fn new(vector: CVector) -> Result<Self> {
        if vector.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::numeric("state has non-finite entries"));
        }
        Ok(WaveState {
            vector,
            normalized: false,
        })
    }

    pub fn normalized(vector: CVector) -> Result<Self> {
        let mut s = Self::new(vector)?;
        let n = s.vector.norm();
        if (n - 1.0).abs() >= NORMALIZATION_TOLERANCE {
            return Err(Error::validation(format!("state norm {n} is not 1")));
        }
        s.normalized = true;
        Ok(s)
    }

    /// Basis vector `|n_1 ... n_N>`.
    pub fn basis(cutoff: usize, levels: &[usize]) -> Result<Self> {
        if levels.iter().any(|&n| n >= cutoff) {
            return Err(Error::validation("level beyond cutoff"));
        }
        let idx = levels.iter().fold(0, |acc, &n| acc * cutoff + n);
        let dim = cutoff.pow(levels.len() as u32);
        let mut v = CVector::zeros(dim);
        v[idx] = Complex64::new(1.0, 0.0);
        Self::normalized(v)
    }

    /// Product of truncated coherent states, renormalized after truncation.
    pub fn coherent(cutoff: usize, alphas: &[Complex64]) -> Result<Self> {
        let mut v = CVector::from_element(1, Complex64::new(1.0, 0.0));
        for &alpha in alphas {
            let mut site = CVector::zeros(cutoff);
            let mut term = Complex64::new(1.0, 0.0);
            for n in 0..cutoff {
                site[n] = term;
                term *= alpha / ((n + 1) as f64).sqrt();
            }
            v = v.kronecker(&site);
        }
        let n = v.norm();
        Self::normalized(v / Complex64::new(n, 0.0))
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn into_vector(self) -> CVector {
        self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn norm(&self) -> f64 {
        self.vector.norm()
    }

    pub fn inner(&self, other: &WaveState) -> Complex64 {
        self.vector.dotc(&other.vector)
    }

    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        self.vector.dotc(&(op * &self.vector))
    }
}

/// Single-site annihilator with `a|n> = sqrt(n)|n-1>`.
pub fn annihilator(cutoff: usize) -> CMatrix {
    let mut a = CMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `op` acting on `site` (0-based) of an `sites`-fold product.
pub fn embed(op: &CMatrix, site: usize, sites: usize) -> CMatrix {
    let m = op.nrows();
    let mut out = CMatrix::identity(1, 1);
    for s in 0..sites {
        out = if s == site {
            out.kronecker(op)
        } else {
            out.kronecker(&CMatrix::identity(m, m))
        };
    }
    out
}

/// Field and momentum matrices `phi = sqrt(hbar/2)(a + a^dagger)`,
/// `p = i sqrt(hbar/2)(a^dagger - a)` for every site.
pub fn canonical_pairs(cutoff: usize, sites: usize, hbar: f64) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let a = annihilator(cutoff);
    let ad = a.adjoint();
    let s = (hbar / 2.0).sqrt();
    let phi1 = (&a + &ad) * Complex64::new(s, 0.0);
    let p1 = (&ad - &a) * Complex64::new(0.0, s);
    let phi = (0..sites).map(|i| embed(&phi1, i, sites)).collect();
    let p = (0..sites).map(|i| embed(&p1, i, sites)).collect();
    (phi, p)
}

/// Basis indices whose every site level is below `ceil(M/2)`.
pub fn low_lying_indices(cutoff: usize, sites: usize) -> Vec<usize> {
    let keep = cutoff.div_ceil(2);
    let dim = cutoff.pow(sites as u32);
    (0..dim)
        .filter(|&n| {
            let mut x = n;
            (0..sites).all(|_| {
                let ok = x % cutoff < keep;
                x /= cutoff;
                ok
            })
        })
        .collect()
}

pub fn restrict(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Spectral norm of `U^dagger U - I` on the low-lying block.
pub fn unitarity_defect(u: &CMatrix, cutoff: usize, sites: usize) -> f64 {
    let idx = low_lying_indices(cutoff, sites);
    let g = restrict(&(u.adjoint() * u), &idx);
    spectral_norm(&(g - CMatrix::identity(idx.len(), idx.len())))
}

fn split(m: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Complex product through real matrix products, which take the fast
/// real GEMM path. Real left factors (every lattice Hamiltonian in this
/// basis) need only two of them.
pub fn zmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bi) = split(b);
    let (ar, ai) = split(a);
    let (re, im) = if ai.iter().all(|x| *x == 0.0) {
        (&ar * &br, &ar * &bi)
    } else {
        (&ar * &br - &ai * &bi, &ar * &bi + &ai * &br)
    };
    CMatrix::from_fn(re.nrows(), re.ncols(), |r, c| Complex64::new(re[(r, c)], im[(r, c)]))
}

/// Makes a matrix exactly Hermitian, to undo rounding in products.
pub(crate) fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_is_i_hbar_below_cutoff() {
        let (phi, p) = canonical_pairs(6, 2, 0.7);
        let c = &phi[1] * &p[1] - &p[1] * &phi[1];
        for n in low_lying_indices(6, 2) {
            assert!((c[(n, n)] - Complex64::new(0.0, 0.7)).norm() < 1e-14);
        }
        let cross = &phi[0] * &p[1] - &p[1] * &phi[0];
        assert!(cross.norm() < 1e-14);
    }

    #[test]
    fn split_product_matches() {
        let a = CMatrix::from_fn(3, 3, |r, c| Complex64::new(r as f64 - c as f64, (r * c) as f64 * 0.5));
        let b = CMatrix::from_fn(3, 2, |r, c| Complex64::new(1.0 + c as f64, r as f64));
        assert!((zmul(&a, &b) - &a * &b).norm() < 1e-13);
        let real = a.map(|z| Complex64::new(z.re, 0.0));
        assert!((zmul(&real, &b) - &real * &b).norm() < 1e-13);
    }

    #[test]
    fn low_lying_block() {
        assert_eq!(low_lying_indices(3, 2), vec![0, 1, 3, 4]);
        assert_eq!(low_lying_indices(4, 1), vec![0, 1]);
    }

    #[test]
    fn state_flags() {
        let s = WaveState::basis(4, &[1, 2]).unwrap();
        assert!(s.is_normalized());
        assert_eq!(s.vector()[6], Complex64::new(1.0, 0.0));
        assert!(WaveState::normalized(CVector::from_element(2, Complex64::new(1.0, 0.0))).is_err());
        let c = WaveState::coherent(30, &[Complex64::new(0.5, 0.2)]).unwrap();
        let a = annihilator(30);
        assert!((c.expectation(&a) - Complex64::new(0.5, 0.2)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_flag_checked() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(OperatorMatrix::hermitian(m.clone()).is_err());
        m[(1, 0)] = Complex64::new(0.0, -1.0);
        assert!(OperatorMatrix::hermitian(m).unwrap().is_hermitian());
    }
}
