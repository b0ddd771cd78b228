use fdq_cli::{run, CliResult};
use fdq_core::dynamics::{matrix_from_value, LatticeConfig, Profile};
use std::path::PathBuf;

fn fdq(args: &[&str]) -> CliResult {
    let mut argv = vec!["fdq"];
    argv.extend_from_slice(args);
    run(&argv)
}

fn ok(args: &[&str]) -> String {
    let res = fdq(args);
    assert_eq!(res.code, 0, "{args:?}: {}", res.stderr);
    res.stdout.trim_end().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fdq-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["bracket", "pi[1]", "phi[1]", "--modes", "1"]), "1");
    assert_eq!(
        ok(&["star", "--kind", "normal", "pi[1]", "phi[1]", "--lambda", "-ih", "--modes", "1"]),
        "phi[1]*pi[1] - i*h"
    );
    assert_eq!(
        ok(&["nf", "D(0; pi[1]) * D(phi[1]; 0)", "--lambda", "h", "--modes", "1"]),
        "phi[1]*pi[1] + h"
    );
}

#[test]
fn lambda_spellings_agree() {
    let base = ["star", "--kind", "weyl", "phi[1]^2", "pi[1]^2", "--modes", "1", "--lambda"];
    let run_with = |l: &str| {
        let mut a = base.to_vec();
        a.push(l);
        ok(&a)
    };
    assert_eq!(run_with("-ih"), run_with("-i*h"));
    assert_eq!(run_with("ih"), run_with("i*h"));
    assert_eq!(run_with("-h"), run_with("-1*h"));
    // default is the Schrodinger convention
    assert_eq!(ok(&base[..7]), run_with("-ih"));
}

#[test]
fn hyphenated_expressions_are_values() {
    assert_eq!(ok(&["bracket", "-phi[1]", "pi[1]", "--modes", "1"]), "1");
    assert_eq!(ok(&["star", "--kind", "normal", "-h", "1", "--modes", "1"]), "-h");
}

#[test]
fn renorm_directions_invert() {
    let a = "phi[1]^2*pi[1]^2 + pi[2]*phi[1]";
    let n = ok(&["renorm", a, "--direction", "weyl-to-normal", "--modes", "2"]);
    let back = ok(&["renorm", &n, "--direction", "normal-to-weyl", "--modes", "2"]);
    assert_eq!(back, ok(&["star", "--kind", "normal", a, "1", "--modes", "2"]));
}

#[test]
fn involution_reverses_order() {
    // phi pi reversed is pi phi, whose normal form carries the commutator
    assert_eq!(
        ok(&["involution", "D(phi[1]; 0) * D(0; pi[1])", "--lambda", "-ih", "--modes", "1"]),
        "phi[1]*pi[1] - i*h"
    );
}

#[test]
fn wick_round_trip() {
    let w = ok(&["wick", "phi[1]^2 + pi[1]^2", "--omega", "1", "--modes", "1"]);
    assert!(w.contains("abar[1]"), "{w}");
    let back = ok(&["wick", &w, "--omega", "1", "--modes", "1", "--inverse"]);
    assert_eq!(back, "phi[1]^2 + pi[1]^2");
    let two = ok(&["wick", "phi[1]*phi[2]", "--omega", "1,3", "--modes", "2"]);
    assert_eq!(ok(&["wick", &two, "--omega", "1,3", "--modes", "2", "--inverse"]), "phi[1]*phi[2]");
}

#[test]
fn json_output_parses() {
    let out = ok(&["bracket", "phi[1]^2", "pi[1]", "--modes", "1", "--json"]);
    let s = fdq_core::json::symbol_from_json(&out).unwrap();
    assert_eq!(fdq_core::expr::print_symbol(&s), "-2*phi[1]");
}

#[test]
fn parse_errors_exit_2_with_caret() {
    let res = fdq(&["bracket", "phi[1]^-2", "pi[1]", "--modes", "1"]);
    assert_eq!(res.code, 2);
    let lines: Vec<&str> = res.stderr.lines().collect();
    assert!(lines[0].contains("position 7"), "{}", res.stderr);
    let caret = lines[2].find('^').unwrap();
    assert_eq!(&lines[1][caret..caret + 1], "-");
    assert!(res.stdout.is_empty());

    assert_eq!(fdq(&["bracket", "phi[1]", "--modes", "1"]).code, 2);
    assert_eq!(fdq(&["frobnicate"]).code, 2);
    assert_eq!(fdq(&["star", "--kind", "moyal", "1", "1", "--modes", "1"]).code, 2);
}

#[test]
fn validation_errors_exit_3() {
    assert_eq!(fdq(&["bracket", "phi[2]", "pi[1]", "--modes", "1"]).code, 3);
    assert_eq!(fdq(&["bracket", "1", "1", "--modes", "0"]).code, 3);
    assert_eq!(fdq(&["star", "--kind", "normal", "1", "1", "--modes", "1", "--lambda", "phi[1]"]).code, 3);
    assert_eq!(fdq(&["wick", "phi[1]", "--omega", "-1", "--modes", "1"]).code, 3);
    assert_eq!(fdq(&["nf", "D(pi[1]; 0)", "--modes", "1"]).code, 3);
    assert_eq!(fdq(&["evolve", "--config", "/nonexistent/cfg.json"]).code, 3);

    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"sites": 1}"#).unwrap();
    assert_eq!(fdq(&["evolve", "--config", bad.to_str().unwrap()]).code, 3);
}

#[test]
fn numeric_failure_exits_4() {
    let cfg = scratch("blowup.json");
    std::fs::write(&cfg, r#"{"phi":[3.0],"pi":[2.0],"dt":0.01}"#).unwrap();
    let res = fdq(&["flow", "--config", cfg.to_str().unwrap(), "--hamiltonian", "1/2*pi[1]^2 - phi[1]^4", "--t", "50"]);
    assert_eq!(res.code, 4, "{}", res.stderr);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(fdq(&["--help"]).code, 0);
    assert_eq!(fdq(&["--version"]).code, 0);
    assert_eq!(fdq(&["smatrix", "--help"]).code, 0);
}

fn small_config() -> LatticeConfig {
    let mut cfg = LatticeConfig::single_site(6);
    cfg.t0 = -4.0;
    cfg.t1 = 4.0;
    cfg.dt = 1e-2;
    cfg.g = Profile::gauss(0.01, 0.5);
    cfg
}

#[test]
fn evolve_and_smatrix_write_json() {
    let cfg_path = scratch("small.json");
    std::fs::write(&cfg_path, small_config().to_json()).unwrap();
    let cfg = cfg_path.to_str().unwrap();

    let out = scratch("evolve.json");
    let summary = ok(&["evolve", "--config", cfg, "--order", "2", "--out", out.to_str().unwrap()]);
    assert!(summary.contains("config_hash="), "{summary}");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let u = matrix_from_value(&doc["evolution"]).unwrap();
    assert_eq!(u.nrows(), 6);
    assert_eq!(doc["dyson"].as_array().unwrap().len(), 3);
    assert_eq!(doc["meta"]["residual_norms"].as_array().unwrap().len(), 3);
    assert!(doc["meta"]["unitarity_defect"].as_f64().unwrap() < 1e-6);

    let printed = ok(&["smatrix", "--config", cfg, "--order", "1"]);
    let doc: serde_json::Value = serde_json::from_str(&printed).unwrap();
    let s = matrix_from_value(&doc["s_matrix"]).unwrap();
    assert!((s[(0, 0)].norm() - 1.0).abs() < 1e-2);
    let norms = doc["meta"]["residual_norms"].as_array().unwrap();
    assert!(norms[1].as_f64().unwrap() < norms[0].as_f64().unwrap());
}

#[test]
fn config_hash_ignores_formatting() {
    let cfg = small_config();
    let compact = scratch("compact.json");
    let pretty = scratch("pretty.json");
    std::fs::write(&compact, cfg.to_json()).unwrap();
    let value: serde_json::Value = serde_json::from_str(&cfg.to_json()).unwrap();
    std::fs::write(&pretty, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let hash = |p: &PathBuf| {
        let s = ok(&["evolve", "--config", p.to_str().unwrap(), "--out", scratch("h.json").to_str().unwrap()]);
        s.split_whitespace().next().unwrap().to_string()
    };
    assert_eq!(hash(&compact), hash(&pretty));
}

#[test]
fn smatrix_refuses_unswitched_coupling() {
    let mut cfg = small_config();
    cfg.g = Profile::const_window(0.1, -5.0, 5.0);
    let p = scratch("on.json");
    std::fs::write(&p, cfg.to_json()).unwrap();
    let res = fdq(&["smatrix", "--config", p.to_str().unwrap()]);
    assert_eq!(res.code, 3, "{}", res.stderr);
}

#[test]
fn flow_reports_final_point() {
    let cfg = scratch("flow.json");
    std::fs::write(&cfg, r#"{"phi":[1.0],"pi":[0.0]}"#).unwrap();
    let out = ok(&[
        "flow",
        "--config",
        cfg.to_str().unwrap(),
        "--hamiltonian",
        "1/2*pi[1]^2 + 1/2*phi[1]^2",
        "--t",
        "3.141592653589793",
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let phi = doc["phi"][0].as_f64().unwrap();
    assert!((phi + 1.0).abs() < 1e-6, "{phi}");
}

#[test]
fn output_is_deterministic() {
    let args = ["renorm", "phi[1]^3*pi[1]^3 + 2/3*i*phi[2]*pi[2]^2", "--direction", "normal-to-weyl", "--modes", "2"];
    let first = fdq(&args);
    for _ in 0..3 {
        assert_eq!(fdq(&args), first);
    }
}
