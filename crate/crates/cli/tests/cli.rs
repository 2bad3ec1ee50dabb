use std::process::{Command, Output};

use serde_json::Value;

const SCHEMA: &str = include_str!("../schema/report-1.0.schema.json");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlrl")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_report(o: &Output) -> Value {
    let v: Value = serde_json::from_str(&stdout(o)).expect("valid JSON");
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    v
}

fn statuses(v: &Value) -> Vec<(String, String)> {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let key = r.get("identity").or_else(|| r.get("level")).unwrap();
            (key.as_str().unwrap().to_string(), r["status"].as_str().unwrap().to_string())
        })
        .collect()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn repcheck_passes_and_lists_dimensions() {
    let o = run(&["repcheck", "--dmax", "8"]);
    assert_eq!(code(&o), 0);
    let v = json_report(&o);
    assert!(statuses(&v).iter().all(|(_, s)| s == "pass"));
    for d in 2..=8u32 {
        let dims =
            v["results"].as_array().unwrap().iter().find(|r| r["identity"] == format!("d{d}/dimensions")).unwrap();
        assert_eq!(dims["values"]["spinor_dim"], 1u64 << (d / 2));
    }
}

#[test]
fn repcheck_rejects_empty_range() {
    let o = run(&["repcheck", "--dmax", "0"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_spinor_and_vector_pass() {
    for args in [["verify", "--d", "4", "--spin", "half"], ["verify", "--d", "3", "--spin", "one"]] {
        let o = run(&args);
        assert_eq!(code(&o), 0, "{args:?}");
        let v = json_report(&o);
        let st = statuses(&v);
        assert!(!st.is_empty());
        assert!(st.iter().all(|(_, s)| s == "pass"));
    }
}

#[test]
fn tampered_runge_lenz_fails_with_witness() {
    let o = run(&["verify", "--d", "3", "--spin", "scalar", "--tamper-lrl-alpha", "2"]);
    assert_eq!(code(&o), 2);
    let v = json_report(&o);
    let failed: Vec<&Value> = v["results"].as_array().unwrap().iter().filter(|r| r["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|r| r.get("witness").is_some()));
}

#[test]
fn verify_is_deterministic() {
    let a = stdout(&run(&["verify", "--d", "3", "--spin", "half", "--seed", "7"]));
    let b = stdout(&run(&["verify", "--d", "3", "--spin", "half", "--seed", "7"]));
    assert_eq!(a, b);
}

#[test]
fn scalar_spectrum_csv() {
    let o = run(&["spectrum", "--d", "3", "--spin", "scalar", "--l", "0", "--nmax", "2"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["d", "spin", "l_or_j", "n", "N_or_k", "E_analytic", "E_numeric", "rel_dev"]);
    let e: Vec<f64> = rows[1..].iter().map(|r| r[5].parse().unwrap()).collect();
    for (x, want) in e.iter().zip([-0.5, -0.125, -1.0 / 18.0]) {
        assert!((x - want).abs() < 1e-14);
    }
    // 15 significant digits
    assert_eq!(rows[3][5], "-5.55555555555556e-2");
}

#[test]
fn spinor_spectrum_with_numeric_column() {
    let o = run(&["spectrum", "--d", "2", "--spin", "half", "--j", "1/2", "--nmax", "1", "--numeric"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 3);
    let e: Vec<f64> = rows[1..].iter().map(|r| r[5].parse().unwrap()).collect();
    assert_eq!(e, [-0.5, -0.125]);
    for r in &rows[1..] {
        let dev: f64 = r[7].parse().unwrap();
        assert!(dev < 1e-6);
    }
}

#[test]
fn vector_spectrum_json() {
    let o = run(&[
        "spectrum",
        "--d",
        "4",
        "--spin",
        "one",
        "--l",
        "1",
        "--nmax",
        "1",
        "--numeric",
        "--format",
        "json",
        "--tol",
        "1e-5",
    ]);
    assert_eq!(code(&o), 0);
    let v = json_report(&o);
    assert_eq!(v["results"][0]["values"]["E_exact"], "-9/50");
    assert_eq!(v["results"][0]["values"]["N_or_k"], "5/3");
}

#[test]
fn spectrum_needs_quantum_numbers() {
    assert_eq!(code(&run(&["spectrum", "--d", "3", "--spin", "scalar"])), 1);
    assert_eq!(code(&run(&["spectrum", "--d", "3", "--spin", "half", "--j", "1"])), 1);
    assert_eq!(code(&run(&["spectrum", "--d", "3", "--spin", "one", "--l", "0"])), 1);
    assert_eq!(code(&run(&["spectrum", "--d", "3", "--spin", "scalar", "--l", "0", "--m", "x"])), 1);
}

#[test]
fn radial_scalar_has_one_node() {
    let o = run(&["radial", "--d", "3", "--spin", "scalar", "--l", "0", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# d=3 spin=scalar n=1 nodes=1"));
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["r", "chi"]);
    let vals: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    // the node sits exactly on a sample point (r = 2), so skip zeros
    let signs: Vec<bool> = vals.iter().filter(|v| **v != 0.0).map(|v| *v > 0.0).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(changes, 1);
}

#[test]
fn radial_spinor_and_vector_columns() {
    let o = run(&["radial", "--d", "3", "--spin", "half", "--j", "1/2", "--samples", "500"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_rows(&o)[0], ["r", "phi_up", "phi_down"]);

    let o = run(&["radial", "--d", "4", "--spin", "one", "--l", "1", "--n", "1", "--samples", "500"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows[0], ["r", "phi1", "phi2", "constraint_residual"]);
    let worst = rows[1..].iter().map(|r| r[3].parse::<f64>().unwrap().abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10);
}

#[test]
fn radial_coarse_grid_is_a_numerical_failure() {
    let o = run(&["radial", "--d", "3", "--spin", "scalar", "--l", "0", "--n", "2", "--samples", "12"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn radial_writes_output_file() {
    let path = std::env::temp_dir().join(format!("spinlrl-radial-{}.csv", std::process::id()));
    let o = run(&["radial", "--d", "3", "--spin", "scalar", "--l", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1) == Some("r,chi"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn forbidden_needs_d_at_least_four() {
    let o = run(&["forbidden", "--d", "3"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no Coulomb term"));
}

#[test]
fn forbidden_reports_bound_transverse_states() {
    // the transverse channel binds for d > 3, so the check fails with the closed-form witness
    let o = run(&["forbidden", "--d", "4", "--lmax", "1"]);
    assert_eq!(code(&o), 2);
    let v = json_report(&o);
    let st = statuses(&v);
    assert!(st.contains(&("d4/casimir_spectra_disjoint".into(), "pass".into())));
    assert!(st.contains(&("d4/phi3_no_bound_state_l0".into(), "fail".into())));
    let l0 = v["results"].as_array().unwrap().iter().find(|r| r["identity"] == "d4/phi3_no_bound_state_l0").unwrap();
    assert_eq!(l0["witness"][1], "-1/18");
}

#[test]
fn eval_specfun_values() {
    let o = run(&["eval-specfun", "bessel-k", "--order", "0", "--x", "1"]);
    assert_eq!(code(&o), 0);
    let v = json_report(&o);
    let k0 = v["results"][0]["values"]["value"].as_f64().unwrap();
    assert!((k0 - 0.421_024_438_240_708_3).abs() < 1e-15);

    let o = run(&["eval-specfun", "kummer", "--n", "2", "--b", "3", "--z", "2"]);
    assert_eq!(code(&o), 0);
    assert!(json_report(&o)["results"][0]["values"]["value"].as_f64().unwrap().abs() < 1e-15);

    assert_eq!(code(&run(&["eval-specfun", "bessel-k", "--order", "0", "--x", "0"])), 1);
    assert_eq!(code(&run(&["eval-specfun", "bessel-i", "--order", "2", "--x", "1"])), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["bogus"])), 1);
    assert_eq!(code(&run(&["verify", "--d", "1", "--spin", "scalar"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
