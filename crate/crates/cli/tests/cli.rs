use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tomita::udw::j_ab;

const BIN: &str = env!("CARGO_BIN_EXE_tomita");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_in(dir: &Path, args: &[&str], config: Option<&str>, envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args).current_dir(dir);
    if let Some(text) = config {
        let path = dir.join("config.toml");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn run(args: &[&str], config: Option<&str>) -> Run {
    let dir = TempDir::new().unwrap();
    run_in(dir.path(), args, config, &[])
}

/// Rows of a CSV table as header-keyed records.
fn records(csv_text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| headers.iter().map(String::from).zip(r.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn num(row: &std::collections::HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap_or_else(|_| panic!("{key} = {:?}", row[key]))
}

#[test]
fn verify_default_config_passes() {
    let r = run(&["verify"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    assert!(rows.len() > 20);
    assert!(rows.iter().all(|row| row["status"] != "FAIL"));
    assert!(rows.iter().all(|row| row["provenance"] == "numeric" || row["provenance"] == "analytic"));
}

#[test]
fn verify_with_floor_tolerance_fails() {
    let r = run(&["verify"], Some("[tolerances]\nmodular = 1e-16\nconcurrence = 1e-16\n"));
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("failing properties"), "{}", r.stderr);
    assert!(r.stderr.contains("modular.random_j_delta_j"), "{}", r.stderr);
    let rows = records(&r.stdout);
    assert!(rows.iter().any(|row| row["status"] == "FAIL"));
}

#[test]
fn verify_records_truncation_warning() {
    let config = "[verify]\nudw_n_max = 4\nudw_r = [1.0]\nudw_hh = [2.0]\n";
    let r = run(&["verify"], Some(config));
    assert!(r.stderr.contains("TruncationWarning"), "{}", r.stderr);
    let rows = records(&r.stdout);
    let warn = rows.iter().find(|row| row["property"] == "TruncationWarning").expect("warning row");
    assert_eq!(warn["status"], "WARN");
    assert!(num(warn, "value") > 1e-8);
}

#[test]
fn malformed_config_exits_two_without_output() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.csv");
    let out_arg = out.to_str().unwrap();
    for bad in ["seed = \"x\"", "sed = 4", "[udw]\nn_max = 2", "[tolerances]\nudw = -1.0", "[udw]\ndetector_gap = 0.5"] {
        let r = run_in(dir.path(), &["udw", "--out", out_arg], Some(bad), &[]);
        assert_eq!(r.code, 2, "{bad}: {}", r.stderr);
        assert!(r.stdout.is_empty());
        assert!(r.stderr.starts_with("error:"), "{}", r.stderr);
        assert!(!out.exists());
    }
    let missing = run(&["susy", "--config", "/nonexistent/config.toml"], None);
    assert_eq!(missing.code, 2);
}

#[test]
fn modular_phi_plus_has_identity_delta() {
    let r = run(&["modular"], Some("[modular]\ncase = \"bell-phi-plus\"\n"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    let dev = rows.iter().find(|row| row["quantity"] == "delta_identity_deviation").unwrap();
    assert!(num(dev, "abs") <= 1e-10);
    for row in rows.iter().filter(|row| row["quantity"].starts_with("residual.")) {
        assert!(num(row, "abs") <= 1e-9, "{row:?}");
    }
}

#[test]
fn modular_psi_plus_reproduces_j_ab() {
    let r = run(&["modular"], Some("[modular]\ncase = \"bell-psi-plus\"\n"));
    assert_eq!(r.code, 0);
    let expected = j_ab();
    let rows = records(&r.stdout);
    let entries: Vec<_> = rows.iter().filter(|row| row["quantity"] == "j").collect();
    assert_eq!(entries.len(), 16);
    for row in entries {
        let (i, j) = (row["i"].parse::<usize>().unwrap(), row["j"].parse::<usize>().unwrap());
        let z = expected.matrix()[(i, j)];
        assert!((num(row, "re") - z.re).abs() <= 1e-10 && (num(row, "im") - z.im).abs() <= 1e-10);
    }
}

#[test]
fn modular_custom_case_from_file() {
    // B(C²) ⊗ I generated by σˣ⊗I and σᶻ⊗I, Ω = (|00⟩ + |11⟩)/√2
    let config = r#"
[modular]
case = "custom"
generators = [
  [[[0,0],[0,0],[1,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]], [[1,0],[0,0],[0,0],[0,0]], [[0,0],[1,0],[0,0],[0,0]]],
  [[[1,0],[0,0],[0,0],[0,0]], [[0,0],[1,0],[0,0],[0,0]], [[0,0],[0,0],[-1,0],[0,0]], [[0,0],[0,0],[0,0],[-1,0]]],
]
omega = [[1,0],[0,0],[0,0],[1,0]]
"#;
    let r = run(&["modular"], Some(config));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    let dev = rows.iter().find(|row| row["quantity"] == "delta_identity_deviation").unwrap();
    assert!(num(dev, "abs") <= 1e-10);

    let non_square = "[modular]\ncase = \"custom\"\ngenerators = [[[[1,0]]]]\nomega = [[1,0],[0,0]]\n";
    assert_eq!(run(&["modular"], Some(non_square)).code, 2);
}

#[test]
fn modular_non_separating_vector_is_a_precondition_error() {
    let config = "[modular]\ncase = \"custom\"\ngenerators = [[[[0,0],[1,0]],[[0,0],[0,0]]]]\nomega = [[1,0],[0,0]]\n";
    let r = run(&["modular"], Some(config));
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
}

#[test]
fn susy_rows_match_two_alpha_beta() {
    let config = format!("[susy]\nalpha = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, {FRAC_1_SQRT_2}]\n");
    let r = run(&["susy"], Some(&config));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().map(|row| num(row, "residual")).fold(0.0, f64::max) <= 1e-10);
    let bell = rows.iter().find(|row| (num(row, "alpha") - FRAC_1_SQRT_2).abs() < 1e-15).unwrap();
    assert!((num(bell, "c_modular") - 1.0).abs() <= 1e-12);
    let product = rows.iter().find(|row| num(row, "alpha") == 1.0).unwrap();
    assert_eq!(num(product, "c_modular"), 0.0);
    assert_eq!(run(&["susy"], Some("[susy]\nalpha = [1.5]\n")).code, 2);
    assert_eq!(run(&["susy"], Some("[susy]\nk = 8\n")).code, 2);
}

#[test]
fn udw_grid_three_way_agreement() {
    let r = run(&["udw"], None);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    assert_eq!(rows.len(), 25);
    for row in &rows {
        let f = num(row, "c_formula");
        assert!((num(row, "c_j_numeric") - f).abs() <= 1e-6, "{row:?}");
        assert!((num(row, "c_wootters_reduced") - f).abs() <= 1e-6, "{row:?}");
        assert!((num(row, "chsh_max") - num(row, "tsirelson_c")).abs() <= 1e-4);
        assert!(num(row, "chsh_max") <= num(row, "chsh_bound") + 1e-9);
        assert_eq!(row["provenance"], "numeric");
        if num(row, "r") == 0.0 {
            assert_eq!(f, 0.0);
            assert!(num(row, "c_j_numeric").abs() <= 1e-12);
        }
    }
    let tsirelson = rows.iter().find(|row| num(row, "r") == 1.0 && num(row, "hh") == 0.0).unwrap();
    for key in ["c_formula", "c_j_numeric", "c_wootters_reduced"] {
        assert!((num(tsirelson, key) - 1.0).abs() <= 1e-12, "{key}");
    }
    assert!((num(tsirelson, "chsh_max") - 2.0 * SQRT_2).abs() <= 1e-6);
}

#[test]
fn udw_abstract_mode_omits_numeric_columns() {
    let r = run(&["udw"], Some("[udw]\nmode = \"abstract\"\nr = [0.5]\nhh = [0.25]\n"));
    assert_eq!(r.code, 0);
    let header = r.stdout.lines().next().unwrap();
    assert_eq!(header, "r,hh,c_formula,chsh_max,tsirelson_c,chsh_bound,provenance");
    let rows = records(&r.stdout);
    assert_eq!(rows[0]["provenance"], "analytic");
    assert!((num(&rows[0], "c_formula") - 0.8 * (-0.5f64).exp()).abs() < 1e-15);
}

#[test]
fn udw_test_functions_use_the_quadrature() {
    let config = r#"
[udw]
r = [1.0]
[udw.test_functions]
f_a = { amplitude = 0.2, t0 = 0.0, x0 = [-3.0, 0.0, 0.0], sigma_t = 1.0, sigma_x = 1.0 }
f_b = { amplitude = 0.2, t0 = 0.0, x0 = [3.0, 0.0, 0.0], sigma_t = 1.0, sigma_x = 1.0 }
"#;
    let r = run(&["udw"], Some(config));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    assert_eq!(rows.len(), 1);
    let hh = num(&rows[0], "hh");
    assert!(hh > 0.0 && hh < 0.5);
    assert!((num(&rows[0], "c_j_numeric") - (-2.0 * hh).exp()).abs() <= 1e-6);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let config = "[sweep]\nmode = \"numeric\"\nn_max = 6\nr = { start = 0.0, stop = 1.0, steps = 3 }\nhh = { start = 0.0, stop = 0.2, steps = 3 }\n";
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        for format in ["csv", "json"] {
            let r = run_in(dir.path(), &["sweep", "--format", format], Some(config), &[("RAYON_NUM_THREADS", threads)]);
            assert_eq!(r.code, 0, "{}", r.stderr);
            outputs.push(r.stdout);
        }
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[1], outputs[3]);
    assert!(!outputs[0].contains('\r'));
}

#[test]
fn json_rows_share_keys() {
    let r = run(&["udw", "--format", "json"], Some("[udw]\nr = [0.0, 1.0]\nhh = [0.1]\nn_max = 8\n"));
    assert_eq!(r.code, 0);
    let value: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let keys: Vec<Vec<&String>> = rows.iter().map(|row| row.as_object().unwrap().keys().collect()).collect();
    assert_eq!(keys[0], keys[1]);
    assert!(r.stdout.contains("e-1"), "scientific notation");
}

#[test]
fn out_flag_writes_file_and_seed_changes_random_instance() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("modular.csv");
    let config = Some("[modular]\ncase = \"random\"\nblocks = [2, 1]\n");
    let a = run_in(dir.path(), &["modular", "--out", out.to_str().unwrap()], config, &[]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert!(a.stdout.is_empty());
    let first = std::fs::read_to_string(&out).unwrap();
    let same = run_in(dir.path(), &["modular", "--seed", "42"], config, &[]);
    assert_eq!(same.stdout, first);
    let other = run_in(dir.path(), &["modular", "--seed", "7"], config, &[]);
    assert_ne!(other.stdout, first);
}

#[test]
fn sweep_over_separations() {
    let config = "[sweep]\nseparations = [4.0, 8.0]\nr = { start = 1.0, stop = 1.0, steps = 1 }\n";
    let r = run(&["sweep"], Some(config));
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = records(&r.stdout);
    assert_eq!(rows.len(), 2);
    assert_eq!(num(&rows[0], "separation"), 4.0);
    // overlap of the two smearings fades with distance
    assert!(num(&rows[0], "hh") > num(&rows[1], "hh"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"], None).code, 2);
    assert_eq!(run(&["udw", "--format", "xml"], None).code, 2);
}
