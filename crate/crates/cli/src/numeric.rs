use std::fs;
use std::path::Path;

use fdq_core::dynamics::{
    classical_flow, low_lying_indices, matrix_to_value, restrict, spectral_norm, unitarity_defect, CMatrix,
    LatticeConfig, OperatorMatrix, PhasePoint, Propagator, DEFAULT_FLOW_DT,
};
use fdq_core::expr::parse_symbol;
use fdq_core::{Error, ModeSpace};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{in_input, Failure};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io("read", path, e))
}

fn load(path: &Path) -> Result<LatticeConfig, Failure> {
    let cfg = LatticeConfig::from_json(&read(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Hash of the normalized config, so reordered or reformatted files agree.
fn config_hash(cfg: &LatticeConfig) -> String {
    hex::encode(Sha256::digest(cfg.to_json().as_bytes()))
}

fn meta(cfg: &LatticeConfig, dim: usize) -> serde_json::Map<String, Value> {
    let (steps, h) = cfg.steps();
    let mut m = serde_json::Map::new();
    m.insert("config_hash".into(), json!(config_hash(cfg)));
    m.insert("dim".into(), json!(dim));
    m.insert("steps".into(), json!(steps));
    m.insert("dt".into(), json!(h));
    m
}

/// `|| sum_{n<=k} U^(n) - U_I ||` on the low-lying block, for each k.
fn residual_norms(prop: &Propagator, dyson: &[OperatorMatrix]) -> Result<Vec<f64>, Failure> {
    let cfg = prop.config();
    let ui = prop.interaction_operator()?;
    let idx = low_lying_indices(cfg.cutoff, cfg.sites);
    let d = prop.dim();
    let mut partial = CMatrix::zeros(d, d);
    Ok(dyson
        .iter()
        .map(|u| {
            partial += u.matrix();
            spectral_norm(&restrict(&(&partial - ui.matrix()), &idx))
        })
        .collect())
}

fn finish(doc: Value, out: Option<&Path>, summary: String) -> Result<String, Failure> {
    let text = serde_json::to_string(&doc).expect("serializable");
    match out {
        Some(path) => {
            fs::write(path, text + "\n").map_err(|e| Failure::io("write", path, e))?;
            Ok(summary)
        }
        None => Ok(text),
    }
}

fn summary_line(meta: &serde_json::Map<String, Value>) -> String {
    meta.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn evolve(config: &Path, order: Option<usize>, out: Option<&Path>, _json: bool) -> Result<String, Failure> {
    let cfg = load(config)?;
    let prop = Propagator::new(&cfg)?;
    let d = prop.dim();
    let u = prop.evolve_operator(&OperatorMatrix::identity(d))?;
    let mut m = meta(&cfg, d);
    m.insert(
        "unitarity_defect".into(),
        json!(unitarity_defect(u.matrix(), cfg.cutoff, cfg.sites)),
    );
    let mut doc = serde_json::Map::new();
    if let Some(p) = order {
        let terms = prop.dyson(p)?;
        m.insert("residual_norms".into(), json!(residual_norms(&prop, &terms)?));
        doc.insert(
            "dyson".into(),
            Value::Array(terms.iter().map(|t| matrix_to_value(t.matrix())).collect()),
        );
    }
    let summary = summary_line(&m);
    let mut full = serde_json::Map::new();
    full.insert("meta".into(), Value::Object(m));
    full.insert("evolution".into(), matrix_to_value(u.matrix()));
    full.extend(doc);
    finish(Value::Object(full), out, summary)
}

pub(crate) fn smatrix(config: &Path, order: usize, out: Option<&Path>, _json: bool) -> Result<String, Failure> {
    let cfg = load(config)?;
    let prop = Propagator::new(&cfg)?;
    let s = prop.s_matrix(order)?;
    let d = prop.dim();
    let mut m = meta(&cfg, d);
    m.insert(
        "unitarity_defect".into(),
        json!(unitarity_defect(s.series.matrix(), cfg.cutoff, cfg.sites)),
    );
    m.insert("residual_norms".into(), json!(residual_norms(&prop, &s.dyson)?));
    let summary = summary_line(&m);
    let doc = json!({
        "meta": Value::Object(m),
        "s_matrix": matrix_to_value(s.series.matrix()),
        "dyson": s.dyson.iter().map(|t| matrix_to_value(t.matrix())).collect::<Vec<_>>(),
    });
    finish(doc, out, summary)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowConfig {
    phi: Vec<f64>,
    pi: Vec<f64>,
    #[serde(default)]
    dt: Option<f64>,
    #[serde(default)]
    hbar: Option<f64>,
}

pub(crate) fn flow(config: &Path, hamiltonian: &str, t: f64, json: bool) -> Result<String, Failure> {
    let fc: FlowConfig =
        serde_json::from_str(&read(config)?).map_err(|e| Error::config(format!("flow config: {e}")))?;
    let x0 = PhasePoint::new(fc.phi, fc.pi)?;
    let space = ModeSpace::new(x0.modes())?;
    let h = parse_symbol(hamiltonian, space).map_err(|e| in_input("H", hamiltonian, e))?;
    let traj = classical_flow(&h, &x0, t, fc.dt.unwrap_or(DEFAULT_FLOW_DT), fc.hbar.unwrap_or(1.0))?;
    let end = traj.last();
    if json {
        let doc = json!({
            "t": traj.times.last().copied().unwrap_or(0.0),
            "phi": end.phi,
            "pi": end.pi,
            "energy_drift": traj.energy_drift(),
            "symplectic": traj.symplectic,
        });
        Ok(serde_json::to_string(&doc).expect("serializable"))
    } else {
        let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.12e}")).collect::<Vec<_>>().join(" ");
        Ok(format!(
            "phi {}\npi {}\nenergy_drift {:.3e}",
            fmt(&end.phi),
            fmt(&end.pi),
            traj.energy_drift()
        ))
    }
}
