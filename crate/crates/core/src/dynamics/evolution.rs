//! Fixed-step RK4 solutions of `i hbar dU/dt = H(t) U`, interaction-picture
//! Dyson terms and the windowed S-matrix.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::basis::{zmul, CMatrix, CVector, OperatorMatrix, WaveState};
use super::config::LatticeConfig;
use super::hamiltonian::LatticeOperators;
use crate::error::{Error, Result};

pub const MAX_DYSON_ORDER: usize = 4;
/// Relative norm growth treated as step-size instability.
pub const GROWTH_TOLERANCE: f64 = 1e-3;
pub const GROUND_STATE_RESIDUAL: f64 = 1e-8;
/// Edge of the RK4 stability interval on the imaginary axis, `2 sqrt 2`.
const RK4_IMAGINARY_BOUND: f64 = 2.828;

/// `H0 = V diag(E) V^dagger`.
#[derive(Clone, Debug)]
pub struct FreeSpectrum {
    pub energies: Vec<f64>,
    pub vectors: CMatrix,
}

impl FreeSpectrum {
    pub fn new(free: &CMatrix) -> Result<Self> {
        let eig = SymmetricEigen::try_new(free.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::numeric("eigensolver did not converge"))?;
        Ok(FreeSpectrum {
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    fn phases(&self, tau: f64, hbar: f64) -> CVector {
        CVector::from_iterator(
            self.energies.len(),
            self.energies
                .iter()
                .map(|e| Complex64::from_polar(1.0, -e * tau / hbar)),
        )
    }

    /// `exp(-i H0 tau / hbar)`.
    pub fn propagator(&self, tau: f64, hbar: f64) -> CMatrix {
        let v = &self.vectors;
        let d = self.phases(tau, hbar);
        let mut vd = v.clone();
        for (c, z) in d.iter().enumerate() {
            let mut col = vd.column_mut(c);
            col *= *z;
        }
        zmul(&vd, &v.adjoint())
    }

    fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        zmul(&zmul(&self.vectors.adjoint(), m), &self.vectors)
    }

    fn from_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        zmul(&zmul(&self.vectors, m), &self.vectors.adjoint())
    }
}

fn axpy(y: &[CMatrix], a: f64, k: &[CMatrix]) -> Vec<CMatrix> {
    y.iter().zip(k).map(|(y, k)| y + k * Complex64::new(a, 0.0)).collect()
}

fn finite(ms: &[CMatrix]) -> bool {
    ms.iter().all(|m| m.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
}

/// Classic RK4 over a tuple of matrices. `check` runs after every step.
fn rk4<F, C>(y0: Vec<CMatrix>, t0: f64, steps: usize, h: f64, mut rhs: F, mut check: C) -> Result<Vec<CMatrix>>
where
    F: FnMut(f64, &[CMatrix]) -> Result<Vec<CMatrix>>,
    C: FnMut(usize, f64, &[CMatrix]) -> Result<()>,
{
    let mut y = y0;
    for n in 0..steps {
        let t = t0 + n as f64 * h;
        let k1 = rhs(t, &y)?;
        let k2 = rhs(t + h / 2.0, &axpy(&y, h / 2.0, &k1))?;
        let k3 = rhs(t + h / 2.0, &axpy(&y, h / 2.0, &k2))?;
        let k4 = rhs(t + h, &axpy(&y, h, &k3))?;
        for (i, yi) in y.iter_mut().enumerate() {
            let incr = &k1[i] + (&k2[i] + &k3[i]) * Complex64::new(2.0, 0.0) + &k4[i];
            *yi += incr * Complex64::new(h / 6.0, 0.0);
        }
        if !finite(&y) {
            return Err(Error::numeric(format!(
                "non-finite values at t = {} (step {}, dt = {h:e})",
                t + h,
                n + 1
            )));
        }
        check(n, t + h, &y)?;
    }
    Ok(y)
}

fn growth_guard(initial: f64, h: f64) -> impl FnMut(usize, f64, &[CMatrix]) -> Result<()> {
    move |n, t, y| {
        let ratio = y[0].norm() / initial;
        if ratio - 1.0 > GROWTH_TOLERANCE {
            return Err(Error::numeric(format!(
                "norm grew by {:.3e} at t = {t} after {} steps of dt = {h:e}; reduce dt",
                ratio - 1.0,
                n + 1
            )));
        }
        Ok(())
    }
}

/// Precomputed lattice operators and free spectrum for one configuration.
#[derive(Clone, Debug)]
pub struct Propagator {
    ops: LatticeOperators,
    spectrum: FreeSpectrum,
    g_eig: CMatrix,
    j_eig: CMatrix,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub state: WaveState,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct SMatrix {
    pub series: OperatorMatrix,
    /// Interaction-picture Dyson terms `U^(0) ... U^(p)`.
    pub dyson: Vec<OperatorMatrix>,
}

impl Propagator {
    pub fn new(cfg: &LatticeConfig) -> Result<Self> {
        let ops = LatticeOperators::new(cfg)?;
        let spectrum = FreeSpectrum::new(&ops.free)?;
        let g_eig = spectrum.to_eigenbasis(&ops.g_part);
        let j_eig = spectrum.to_eigenbasis(&ops.j_part);
        Ok(Propagator {
            ops,
            spectrum,
            g_eig,
            j_eig,
        })
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.ops.cfg
    }

    pub fn operators(&self) -> &LatticeOperators {
        &self.ops
    }

    pub fn spectrum(&self) -> &FreeSpectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.ops.dim()
    }

    fn minus_i_over_hbar(&self) -> Complex64 {
        Complex64::new(0.0, -1.0 / self.ops.cfg.hbar)
    }

    fn schrodinger(&self, y0: CMatrix) -> Result<CMatrix> {
        let cfg = &self.ops.cfg;
        let (steps, h) = cfg.steps();
        let initial = y0.norm();
        if initial == 0.0 {
            return Err(Error::validation("initial value is zero"));
        }
        let k = self.minus_i_over_hbar();
        let out = rk4(
            vec![y0],
            cfg.t0,
            steps,
            h,
            |t, y| Ok(vec![zmul(&self.ops.total(t), &y[0]) * k]),
            growth_guard(initial, h),
        )?;
        Ok(out.into_iter().next().expect("one component"))
    }

    /// `U(t1, t0) U0`.
    pub fn evolve_operator(&self, u0: &OperatorMatrix) -> Result<OperatorMatrix> {
        if u0.dim() != self.dim() {
            return Err(Error::validation("initial operator has wrong dimension"));
        }
        OperatorMatrix::new(self.schrodinger(u0.matrix().clone())?)
    }

    pub fn evolve_state(&self, psi0: &WaveState) -> Result<WaveState> {
        if psi0.dim() != self.dim() {
            return Err(Error::validation("initial state has wrong dimension"));
        }
        let col = CMatrix::from_column_slice(self.dim(), 1, psi0.vector().as_slice());
        let out = self.schrodinger(col)?;
        WaveState::new(CVector::from_column_slice(out.as_slice()))
    }

    /// Interaction in the free eigenbasis, `e^{iH0 tau} V(t) e^{-iH0 tau}` with `tau = t - t0`.
    fn interaction_eigen(&self, t: f64) -> CMatrix {
        let cfg = &self.ops.cfg;
        let d = self.dim();
        let (g, j) = (cfg.g.value(t), cfg.j.value(t));
        let mut v = CMatrix::zeros(d, d);
        if g != 0.0 {
            v += &self.g_eig * Complex64::new(g, 0.0);
        }
        if j != 0.0 {
            v += &self.j_eig * Complex64::new(j, 0.0);
        }
        let ph = self.spectrum.phases(t - cfg.t0, cfg.hbar);
        for c in 0..d {
            for r in 0..d {
                // e^{i E_r tau} e^{-i E_c tau}
                v[(r, c)] *= ph[r].conj() * ph[c];
            }
        }
        v
    }

    fn check_interaction_step(&self, t: f64, v: &CMatrix, h: f64) -> Result<()> {
        let stiffness = h * v.norm() / self.ops.cfg.hbar;
        if stiffness > RK4_IMAGINARY_BOUND {
            return Err(Error::numeric(format!(
                "interaction too strong for dt = {h:e} at t = {t} (dt*|V|/hbar = {stiffness:.3})"
            )));
        }
        Ok(())
    }

    /// Graded system `dU^(n)/dt = (-i/hbar) H_I U^(n-1)`, all in the free eigenbasis.
    fn dyson_eigen(&self, order: usize) -> Result<Vec<CMatrix>> {
        if order > MAX_DYSON_ORDER {
            return Err(Error::validation(format!(
                "Dyson order {order} exceeds the cap {MAX_DYSON_ORDER}"
            )));
        }
        let cfg = &self.ops.cfg;
        let d = self.dim();
        let (steps, h) = cfg.steps();
        let mut y0 = vec![CMatrix::identity(d, d)];
        y0.extend((0..order).map(|_| CMatrix::zeros(d, d)));
        let k = self.minus_i_over_hbar();
        rk4(
            y0,
            cfg.t0,
            steps,
            h,
            |t, y| {
                let v = self.interaction_eigen(t);
                self.check_interaction_step(t, &v, h)?;
                let mut out = vec![CMatrix::zeros(d, d)];
                out.extend(y[..order].iter().map(|prev| zmul(&v, prev) * k));
                Ok(out)
            },
            |_, _, _| Ok(()),
        )
    }

    pub fn dyson(&self, order: usize) -> Result<Vec<OperatorMatrix>> {
        self.dyson_eigen(order)?
            .iter()
            .map(|m| OperatorMatrix::new(self.spectrum.from_eigenbasis(m)))
            .collect()
    }

    /// Full interaction-picture evolution `U_I(t1, t0)`.
    pub fn interaction_operator(&self) -> Result<OperatorMatrix> {
        let cfg = &self.ops.cfg;
        let d = self.dim();
        let (steps, h) = cfg.steps();
        let k = self.minus_i_over_hbar();
        let out = rk4(
            vec![CMatrix::identity(d, d)],
            cfg.t0,
            steps,
            h,
            |t, y| {
                let v = self.interaction_eigen(t);
                self.check_interaction_step(t, &v, h)?;
                Ok(vec![zmul(&v, &y[0]) * k])
            },
            growth_guard((d as f64).sqrt(), h),
        )?;
        OperatorMatrix::new(self.spectrum.from_eigenbasis(&out[0]))
    }

    pub fn free_propagator(&self, tau: f64) -> CMatrix {
        self.spectrum.propagator(tau, self.ops.cfg.hbar)
    }

    /// `e^{iH0 t0} X e^{-iH0 t0}`, taking interaction-picture operators to S-matrix form.
    pub fn conjugate_to_s(&self, x: &CMatrix) -> CMatrix {
        let t0 = self.ops.cfg.t0;
        self.free_propagator(-t0) * x * self.free_propagator(t0)
    }

    pub fn s_matrix(&self, order: usize) -> Result<SMatrix> {
        self.ops.cfg.check_switched_off()?;
        let dyson = self.dyson(order)?;
        let d = self.dim();
        let sum = dyson.iter().fold(CMatrix::zeros(d, d), |acc, u| acc + u.matrix());
        Ok(SMatrix {
            series: OperatorMatrix::new(self.conjugate_to_s(&sum))?,
            dyson,
        })
    }

    /// `e^{iH0 t1} U(t1, t0) e^{-iH0 t0}` from the Schrödinger-picture solution.
    pub fn exact_s_matrix(&self) -> Result<OperatorMatrix> {
        self.ops.cfg.check_switched_off()?;
        let cfg = &self.ops.cfg;
        let u = self.evolve_operator(&OperatorMatrix::identity(self.dim()))?;
        OperatorMatrix::new(self.free_propagator(-cfg.t1) * u.matrix() * self.free_propagator(cfg.t0))
    }

    pub fn free_ground_state(&self) -> Result<GroundState> {
        let (idx, &energy) = self
            .spectrum
            .energies
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::numeric("empty spectrum"))?;
        let v: CVector = self.spectrum.vectors.column(idx).into_owned();
        let v = &v / Complex64::new(v.norm(), 0.0);
        let residual = (&self.ops.free * &v - &v * Complex64::new(energy, 0.0)).norm();
        if residual > GROUND_STATE_RESIDUAL {
            return Err(Error::numeric(format!("ground-state residual {residual:e}")));
        }
        Ok(GroundState {
            energy,
            state: WaveState::normalized(v)?,
            residual,
        })
    }
}

pub fn evolve(cfg: &LatticeConfig, u0: &OperatorMatrix) -> Result<OperatorMatrix> {
    Propagator::new(cfg)?.evolve_operator(u0)
}

pub fn evolve_state(cfg: &LatticeConfig, psi0: &WaveState) -> Result<WaveState> {
    Propagator::new(cfg)?.evolve_state(psi0)
}

pub fn dyson(cfg: &LatticeConfig, order: usize) -> Result<Vec<OperatorMatrix>> {
    Propagator::new(cfg)?.dyson(order)
}

pub fn s_matrix(cfg: &LatticeConfig, order: usize) -> Result<SMatrix> {
    Propagator::new(cfg)?.s_matrix(order)
}

pub fn free_ground_state(cfg: &LatticeConfig) -> Result<GroundState> {
    Propagator::new(cfg)?.free_ground_state()
}
