use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative size below which a switching profile counts as switched off.
pub const ENDPOINT_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_CAP_DIM: usize = 20_000;

fn default_cap() -> usize {
    DEFAULT_CAP_DIM
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
}

/// Time profile of a coupling, `amp * shape(t) * site_weight`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub enum Profile {
    #[default]
    Zero,
    /// `amp * exp(-((t - center)/width)^2)`.
    Gauss {
        amp: f64,
        width: f64,
        center: f64,
        site_weights: Option<Vec<f64>>,
    },
    /// `amp` on `[from, to]`, zero elsewhere.
    ConstWindow {
        amp: f64,
        from: f64,
        to: f64,
        site_weights: Option<Vec<f64>>,
    },
}

// Flat wire form. Internally tagged enums buffer numbers in a way that
// breaks with arbitrary-precision JSON numbers, so the tag is handled here.
#[derive(Serialize, Deserialize)]
struct RawProfile {
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    from: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    site_weights: Option<Vec<f64>>,
}

impl TryFrom<RawProfile> for Profile {
    type Error = String;

    fn try_from(r: RawProfile) -> std::result::Result<Self, String> {
        let need = |x: Option<f64>, name: &str| x.ok_or_else(|| format!("{} profile needs \"{name}\"", r.shape));
        match r.shape.as_str() {
            "zero" => Ok(Profile::Zero),
            "gauss" => Ok(Profile::Gauss {
                amp: need(r.amp, "amp")?,
                width: need(r.width, "width")?,
                center: r.center.unwrap_or(0.0),
                site_weights: r.site_weights,
            }),
            "const_window" => Ok(Profile::ConstWindow {
                amp: need(r.amp, "amp")?,
                from: need(r.from, "from")?,
                to: need(r.to, "to")?,
                site_weights: r.site_weights,
            }),
            other => Err(format!("unknown profile shape \"{other}\"")),
        }
    }
}

impl From<Profile> for RawProfile {
    fn from(p: Profile) -> Self {
        let mut r = RawProfile {
            shape: String::new(),
            amp: None,
            width: None,
            center: None,
            from: None,
            to: None,
            site_weights: None,
        };
        match p {
            Profile::Zero => r.shape = "zero".into(),
            Profile::Gauss {
                amp,
                width,
                center,
                site_weights,
            } => {
                r.shape = "gauss".into();
                (r.amp, r.width, r.center, r.site_weights) = (Some(amp), Some(width), Some(center), site_weights);
            }
            Profile::ConstWindow {
                amp,
                from,
                to,
                site_weights,
            } => {
                r.shape = "const_window".into();
                (r.amp, r.from, r.to, r.site_weights) = (Some(amp), Some(from), Some(to), site_weights);
            }
        }
        r
    }
}

impl Profile {
    pub fn gauss(amp: f64, width: f64) -> Self {
        Profile::Gauss {
            amp,
            width,
            center: 0.0,
            site_weights: None,
        }
    }

    pub fn const_window(amp: f64, from: f64, to: f64) -> Self {
        Profile::ConstWindow {
            amp,
            from,
            to,
            site_weights: None,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Gauss {
                amp, width, center, ..
            } => {
                let x = (t - center) / width;
                amp * (-x * x).exp()
            }
            Profile::ConstWindow { amp, from, to, .. } => {
                if t >= *from && t <= *to {
                    *amp
                } else {
                    0.0
                }
            }
        }
    }

    pub fn amplitude(&self) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Gauss { amp, .. } | Profile::ConstWindow { amp, .. } => *amp,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude() == 0.0
    }

    pub fn weight(&self, site: usize) -> f64 {
        match self {
            Profile::Gauss { site_weights, .. } | Profile::ConstWindow { site_weights, .. } => {
                site_weights.as_ref().map_or(1.0, |w| w[site])
            }
            Profile::Zero => 0.0,
        }
    }

    /// Same shape with the amplitude multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Profile {
        let mut p = self.clone();
        match &mut p {
            Profile::Zero => {}
            Profile::Gauss { amp, .. } | Profile::ConstWindow { amp, .. } => *amp *= s,
        }
        p
    }

    fn validate(&self, name: &str, sites: usize) -> Result<()> {
        let weights = match self {
            Profile::Zero => return Ok(()),
            Profile::Gauss {
                amp,
                width,
                center,
                site_weights,
            } => {
                if !(width.is_finite() && *width > 0.0) || !amp.is_finite() || !center.is_finite() {
                    return Err(Error::config(format!("{name}: gauss needs finite amp/center and width > 0")));
                }
                site_weights
            }
            Profile::ConstWindow {
                amp,
                from,
                to,
                site_weights,
            } => {
                if !amp.is_finite() || !from.is_finite() || !to.is_finite() || from > to {
                    return Err(Error::config(format!("{name}: const_window needs finite amp and from <= to")));
                }
                site_weights
            }
        };
        if let Some(w) = weights {
            if w.len() != sites {
                return Err(Error::config(format!(
                    "{name}: {} site weights for {sites} sites",
                    w.len()
                )));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::config(format!("{name}: site weights must be finite")));
            }
        }
        Ok(())
    }
}

/// A periodic 1-D lattice truncation of the self-interacting scalar field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub sites: usize,
    pub dx: f64,
    pub mass: f64,
    pub hbar: f64,
    pub k: u32,
    pub cutoff: usize,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    #[serde(default)]
    pub g: Profile,
    #[serde(default)]
    pub j: Profile,
    #[serde(default = "default_cap")]
    pub cap_dim: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

impl LatticeConfig {
    /// One free site, unit mass and `hbar`, no couplings.
    pub fn single_site(cutoff: usize) -> Self {
        LatticeConfig {
            sites: 1,
            dx: 1.0,
            mass: 1.0,
            hbar: 1.0,
            k: 4,
            cutoff,
            t0: 0.0,
            t1: 1.0,
            dt: 1e-3,
            g: Profile::Zero,
            j: Profile::Zero,
            cap_dim: DEFAULT_CAP_DIM,
            boundary: Boundary::Periodic,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: LatticeConfig =
            serde_json::from_str(text).map_err(|e| Error::config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Hilbert-space dimension `cutoff^sites`, `None` on overflow.
    pub fn dim(&self) -> Option<usize> {
        let mut d: usize = 1;
        for _ in 0..self.sites {
            d = d.checked_mul(self.cutoff)?;
        }
        Some(d)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.dx, self.mass, self.hbar, self.t0, self.t1, self.dt];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("non-finite parameter"));
        }
        if self.sites == 0 {
            return Err(Error::config("sites must be at least 1"));
        }
        if self.dx <= 0.0 || self.hbar <= 0.0 || self.dt <= 0.0 {
            return Err(Error::config("dx, hbar and dt must be positive"));
        }
        if self.mass < 0.0 {
            return Err(Error::config("mass must be nonnegative"));
        }
        if self.k < 2 {
            return Err(Error::config("interaction power k must be at least 2"));
        }
        if self.cutoff < 2 {
            return Err(Error::config("cutoff must be at least 2"));
        }
        if self.t1 <= self.t0 {
            return Err(Error::config("t1 must exceed t0"));
        }
        match self.dim() {
            Some(d) if d <= self.cap_dim => {}
            _ => {
                return Err(Error::config(format!(
                    "dimension {}^{} exceeds cap {}",
                    self.cutoff, self.sites, self.cap_dim
                )))
            }
        }
        self.g.validate("g", self.sites)?;
        self.j.validate("j", self.sites)?;
        Ok(())
    }

    /// Both couplings negligible at `t0` and `t1`, relative to their amplitudes.
    pub fn check_switched_off(&self) -> Result<()> {
        for (name, p) in [("g", &self.g), ("j", &self.j)] {
            let amp = p.amplitude().abs();
            if amp == 0.0 {
                continue;
            }
            for t in [self.t0, self.t1] {
                if p.value(t).abs() > ENDPOINT_TOLERANCE * amp {
                    return Err(Error::validation(format!(
                        "{name} does not vanish at t = {t} (|{name}| = {:e})",
                        p.value(t).abs()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of fixed steps and the step actually used.
    pub fn steps(&self) -> (usize, f64) {
        let n = ((self.t1 - self.t0) / self.dt).round().max(1.0) as usize;
        (n, (self.t1 - self.t0) / n as f64)
    }

    /// Couplings multiplied by `s`.
    pub fn with_amplitude_scale(&self, s: f64) -> Self {
        LatticeConfig {
            g: self.g.scaled(s),
            j: self.j.scaled(s),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"sites":2,"dx":1.0,"mass":1.0,"hbar":1.0,"k":4,"cutoff":12,"t0":-5.0,"t1":5.0,"dt":1e-3,"g":{"shape":"gauss","amp":0.01,"width":1.0,"site_weights":[1.0,1.0]},"j":{"shape":"const_window","amp":0.0,"from":-1.0,"to":1.0},"cap_dim":20000}"#;

    #[test]
    fn parses_documented_example() {
        let cfg = LatticeConfig::from_json(EXAMPLE).unwrap();
        assert_eq!(cfg.dim(), Some(144));
        assert_eq!(cfg.g.weight(1), 1.0);
        assert!(cfg.j.is_zero());
        // exp(-25) ~ 1.4e-11 stays above the switch-off tolerance
        assert!(cfg.check_switched_off().is_err());
        assert_eq!(LatticeConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn unknown_shape_is_config_error() {
        let text = EXAMPLE.replace("const_window", "sawtooth");
        assert!(matches!(LatticeConfig::from_json(&text), Err(Error::Config(_))));
    }

    #[test]
    fn cap_enforced() {
        let mut cfg = LatticeConfig::single_site(10);
        cfg.sites = 5;
        cfg.cap_dim = 1000;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_bad_weights() {
        let mut cfg = LatticeConfig::single_site(4);
        cfg.g = Profile::Gauss {
            amp: 1.0,
            width: 1.0,
            center: 0.0,
            site_weights: Some(vec![1.0, 2.0]),
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn profile_values() {
        let g = Profile::gauss(2.0, 0.5);
        assert_eq!(g.value(0.0), 2.0);
        assert!((g.value(0.5) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        let j = Profile::const_window(3.0, -1.0, 1.0);
        assert_eq!(j.value(0.0), 3.0);
        assert_eq!(j.value(1.5), 0.0);
        assert_eq!(j.scaled(0.5).amplitude(), 1.5);
    }
}
