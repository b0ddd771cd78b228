//! Hamiltonian flow `dphi/dt = dH/dpi`, `dpi/dt = -dH/dphi` of a real symbol.

use crate::error::{Error, Result};
use crate::symbol::Symbol;

pub const DEFAULT_FLOW_DT: f64 = 1e-3;
const BLOW_UP: f64 = 1e100;

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub phi: Vec<f64>,
    pub pi: Vec<f64>,
}

impl PhasePoint {
    pub fn new(phi: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        if phi.len() != pi.len() {
            return Err(Error::validation("phi and pi have different lengths"));
        }
        if phi.iter().chain(&pi).any(|x| !x.is_finite()) {
            return Err(Error::validation("phase point has non-finite entries"));
        }
        Ok(PhasePoint { phi, pi })
    }

    pub fn modes(&self) -> usize {
        self.phi.len()
    }

    pub fn distance(&self, other: &PhasePoint) -> f64 {
        self.phi
            .iter()
            .zip(&other.phi)
            .chain(self.pi.iter().zip(&other.pi))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// A real polynomial in dense exponent form.
#[derive(Clone, Debug)]
struct RealPoly {
    terms: Vec<(Vec<u32>, Vec<u32>, f64)>,
}

impl RealPoly {
    fn from_symbol(h: &Symbol, hbar: f64) -> Result<Self> {
        let n = h.space().modes();
        let mut terms = Vec::new();
        for (m, c) in h.terms() {
            let (re, im) = c.eval(hbar);
            if im.abs() > 1e-14 * (1.0 + re.abs()) {
                return Err(Error::validation(format!(
                    "Hamiltonian has a complex coefficient ({re} + {im} i) at h = {hbar}"
                )));
            }
            if re != 0.0 {
                terms.push((m.phi.dense(n), m.pi.dense(n), re));
            }
        }
        Ok(RealPoly { terms })
    }

    fn eval(&self, phi: &[f64], pi: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, b, c)| {
                let mut v = *c;
                for (x, &e) in phi.iter().zip(a).chain(pi.iter().zip(b)) {
                    if e > 0 {
                        v *= x.powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    fn derivative(&self, mode: usize, in_pi: bool) -> RealPoly {
        let mut terms = Vec::new();
        for (a, b, c) in &self.terms {
            let (mut a, mut b) = (a.clone(), b.clone());
            let e = if in_pi { &mut b[mode] } else { &mut a[mode] };
            if *e == 0 {
                continue;
            }
            let k = f64::from(*e);
            *e -= 1;
            terms.push((a, b, c * k));
        }
        RealPoly { terms }
    }

    fn is_separable(&self) -> bool {
        self.terms
            .iter()
            .all(|(a, b, _)| a.iter().all(|&e| e == 0) || b.iter().all(|&e| e == 0))
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    pub energies: Vec<f64>,
    pub symplectic: bool,
}

impl Trajectory {
    pub fn last(&self) -> &PhasePoint {
        self.points.last().expect("trajectory holds the initial point")
    }

    /// `|H(x(T)) - H(x0)|`.
    pub fn energy_drift(&self) -> f64 {
        (self.energies.last().expect("nonempty") - self.energies[0]).abs()
    }
}

struct Flow {
    h: RealPoly,
    dphi: Vec<RealPoly>,
    dpi: Vec<RealPoly>,
}

impl Flow {
    fn velocity(&self, phi: &[f64], pi: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let v: Vec<f64> = self.dpi.iter().map(|d| d.eval(phi, pi)).collect();
        let f: Vec<f64> = self.dphi.iter().map(|d| -d.eval(phi, pi)).collect();
        (v, f)
    }

    fn leapfrog(&self, x: &mut PhasePoint, dt: f64) {
        let (_, f) = self.velocity(&x.phi, &x.pi);
        for (p, f) in x.pi.iter_mut().zip(&f) {
            *p += 0.5 * dt * f;
        }
        let (v, _) = self.velocity(&x.phi, &x.pi);
        for (q, v) in x.phi.iter_mut().zip(&v) {
            *q += dt * v;
        }
        let (_, f) = self.velocity(&x.phi, &x.pi);
        for (p, f) in x.pi.iter_mut().zip(&f) {
            *p += 0.5 * dt * f;
        }
    }

    fn rk4(&self, x: &mut PhasePoint, dt: f64) {
        let shift = |x: &PhasePoint, k: &(Vec<f64>, Vec<f64>), s: f64| {
            let phi: Vec<f64> = x.phi.iter().zip(&k.0).map(|(a, b)| a + s * b).collect();
            let pi: Vec<f64> = x.pi.iter().zip(&k.1).map(|(a, b)| a + s * b).collect();
            (phi, pi)
        };
        let k1 = self.velocity(&x.phi, &x.pi);
        let y = shift(x, &k1, dt / 2.0);
        let k2 = self.velocity(&y.0, &y.1);
        let y = shift(x, &k2, dt / 2.0);
        let k3 = self.velocity(&y.0, &y.1);
        let y = shift(x, &k3, dt);
        let k4 = self.velocity(&y.0, &y.1);
        for i in 0..x.modes() {
            x.phi[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
            x.pi[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
        }
    }
}

/// Integrates to time `t` with steps no longer than `dt`; leapfrog when `H`
/// splits as `T(pi) + V(phi)`, RK4 otherwise.
pub fn classical_flow(h: &Symbol, x0: &PhasePoint, t: f64, dt: f64, hbar: f64) -> Result<Trajectory> {
    let n = h.space().modes();
    if x0.modes() != n {
        return Err(Error::validation(format!(
            "phase point has {} modes, Hamiltonian has {n}",
            x0.modes()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::validation("need dt > 0 and finite t >= 0"));
    }
    let poly = RealPoly::from_symbol(h, hbar)?;
    let flow = Flow {
        dphi: (0..n).map(|i| poly.derivative(i, false)).collect(),
        dpi: (0..n).map(|i| poly.derivative(i, true)).collect(),
        h: poly,
    };
    let symplectic = flow.h.is_separable();
    let steps = (t / dt).ceil().max(if t > 0.0 { 1.0 } else { 0.0 }) as usize;
    let step = if steps > 0 { t / steps as f64 } else { 0.0 };
    let mut x = x0.clone();
    let mut out = Trajectory {
        times: vec![0.0],
        points: vec![x.clone()],
        energies: vec![flow.h.eval(&x.phi, &x.pi)],
        symplectic,
    };
    for k in 1..=steps {
        if symplectic {
            flow.leapfrog(&mut x, step);
        } else {
            flow.rk4(&mut x, step);
        }
        if x.phi.iter().chain(&x.pi).any(|v| !v.is_finite() || v.abs() > BLOW_UP) {
            return Err(Error::numeric(format!(
                "trajectory blew up at t = {} (step {k}, dt = {step:e})",
                k as f64 * step
            )));
        }
        out.times.push(k as f64 * step);
        out.energies.push(flow.h.eval(&x.phi, &x.pi));
        out.points.push(x.clone());
    }
    Ok(out)
}
