use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_dephaselab");

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("DEPHASELAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

/// Header and numeric rows of a CSV, skipping `#` lines.
fn table(csv: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn figure_and_table_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    assert_eq!(stdout(&["figure", "1"]), fs::read_to_string(dir.join("figure1.csv")).unwrap());
    assert_eq!(stdout(&["table", "1"]), fs::read_to_string(dir.join("table1.csv")).unwrap());
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["figure", "5", "--theta-deg", "17"];
    let one = run_env(&args, &[("DEPHASELAB_THREADS", "1")]);
    let four = run_env(&args, &[("DEPHASELAB_THREADS", "4")]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run_env(&args, &[("DEPHASELAB_THREADS", "zero")]).status.code(), Some(2));
}

#[test]
fn figure_1_values() {
    let (h, rows) = table(&stdout(&["figure", "1"]));
    let row = rows.iter().find(|r| (r[0] - 0.8).abs() < 1e-9).unwrap();
    assert!((row[col(&h, "gamma_t_c")] - 1.0397).abs() < 1e-4);
    assert!((row[col(&h, "gamma_t_c_bell")] - 0.143841).abs() < 1e-6);
    assert!(rows[0][col(&h, "gamma_t_c_bell")].is_nan());
}

#[test]
fn figure_6_has_three_fidelity_curves() {
    let csv = stdout(&["figure", "6", "--r", "0.99"]);
    assert!(csv.contains("# r: 0.99"));
    let (h, rows) = table(&csv);
    assert_eq!(h, ["gamma_t", "F_phi+", "F_phi-", "F_psi+"]);
    assert_eq!(rows.len(), 601);
    for row in &rows[1..=50] {
        assert!(row[2] > row[1], "phi- above phi+ at short times");
    }
}

#[test]
fn table_limits() {
    let (h, rows) = table(&stdout(&["table", "1", "--theta-deg", "0", "--r", "0,0.3,0.9"]));
    for row in &rows {
        assert_eq!(row[col(&h, "F3_psi+")], 1.0);
        assert_eq!(row[col(&h, "F4_psi-")], 1.0);
    }
    assert!(rows[0][1..].iter().all(|&f| f == 1.0));
    assert_eq!(run(&["table", "2"]).status.code(), Some(2));
    assert_eq!(run(&["table", "1", "--r", "0.5,1.5"]).status.code(), Some(2));
}

#[test]
fn threshold_json() {
    let v = json(&["threshold", "--state", "werner:phi+:0.8"]);
    assert_eq!(v["method"], "analytic");
    assert!((v["t_c"].as_f64().unwrap() - 1.0397).abs() < 1e-4);

    let v = json(&["threshold", "--state", "bell:phi+"]);
    assert!(v["t_c"].is_null());
    assert_eq!(v["note"], "never");

    let v = json(&["threshold", "--state", "werner:phi+:0.3"]);
    assert!(v["t_c"].is_null() && v["t_c_bell"].is_null());

    let v = json(&["threshold", "--model", "sym-drive", "--omega", "1", "--state", "bell:phi-", "--t-max", "5"]);
    assert_eq!(v["method"], "bisection");
    assert!((v["t_c"].as_f64().unwrap() - 1.167).abs() < 1e-2);

    // Numeric path agrees with the closed form when forced through a file state.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.txt");
    let csv = stdout(&["evolve", "--state", "werner:phi+:0.8", "--t-end", "0", "--full-state"]);
    let (_, rows) = table(&csv);
    let body: Vec<String> = rows[0][5..].iter().map(|x| format!("{x:e}")).collect();
    fs::write(&path, body.join(" ")).unwrap();
    let state = format!("file:{}", path.display());
    let v = json(&["threshold", "--state", &state, "--t-max", "3"]);
    assert_eq!(v["method"], "bisection");
    assert!((v["t_c"].as_f64().unwrap() - 1.0397).abs() < 1e-3);
}

#[test]
fn evolve_decoherence_free_state() {
    let (h, rows) = table(&stdout(&[
        "evolve",
        "--model",
        "pure-dephasing",
        "--gamma",
        "1",
        "--state",
        "werner:psi-:0.7",
        "--t-end",
        "5",
        "--stride",
        "250",
    ]));
    assert_eq!(h, ["t", "C", "B", "M", "purity"]);
    assert_eq!(rows.len(), 21);
    assert_eq!(rows.last().unwrap()[0], 5.0);
    assert!(rows.iter().all(|r| (r[1] - 0.55).abs() < 1e-9));
}

#[test]
fn evolve_driven_state_disentangles() {
    let (h, rows) = table(&stdout(&[
        "evolve",
        "--model",
        "sym-drive",
        "--omega",
        "1",
        "--state",
        "bell:phi-",
        "--t-end",
        "5",
        "--stride",
        "100",
        "--fidelity",
    ]));
    assert_eq!(h.last().unwrap(), "F");
    let c = col(&h, "C");
    let t_dead = rows.iter().position(|r| r[c] == 0.0).unwrap();
    assert!(rows[t_dead..].iter().all(|r| r[c] == 0.0));
    assert!(rows[0][col(&h, "F")] == 1.0);
}

#[test]
fn evolve_at_zero_time_is_one_row() {
    let (h, rows) = table(&stdout(&["evolve", "--state", "bell:psi+", "--t-end", "0", "--full-state"]));
    assert_eq!(h.len(), 37);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 0.0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# decoherence-free check\nstate = werner:psi-:0.7\nt_end = 2   # short\nstride = 1000\ngamma = 3\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    // gamma = 3 sets the default step to 1e-3/3, so rows are 1/3 apart
    let (_, rows) = table(&stdout(&["evolve", "--config", cfg]));
    assert_eq!(rows.len(), 7);
    let (_, rows) = table(&stdout(&["evolve", "--config", cfg, "--t-end", "1", "--gamma", "1"]));
    assert_eq!(rows.len(), 2);

    fs::write(dir.path().join("bad.cfg"), "frobnicate = 1\n").unwrap();
    let bad = dir.path().join("bad.cfg");
    assert_eq!(run(&["evolve", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--config", "/nonexistent/x.cfg"]).status.code(), Some(3));
}

#[test]
fn out_file_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig1.csv");
    let out_s = out.to_str().unwrap();
    let o = run(&["figure", "1", "--out", out_s]);
    assert!(o.status.success() && o.stdout.is_empty());
    let first = fs::read(&out).unwrap();
    assert_eq!(first, stdout(&["figure", "1"]).into_bytes());

    // a failing run leaves the previous file untouched and no temporaries behind
    assert_eq!(run(&["evolve", "--state", "werner:phi+:2", "--out", out_s]).status.code(), Some(2));
    assert_eq!(fs::read(&out).unwrap(), first);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);

    let missing = dir.path().join("no/such/dir.csv");
    assert_eq!(run(&["figure", "1", "--out", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["figure", "7"][..],
        &["figure", "0"],
        &["figure", "6", "--r", "1.5"],
        &["figure", "5", "--theta-deg", "-5"],
        &["evolve", "--state", "werner:phi+:0.5", "--gamma", "0"],
        &["evolve", "--state", "werner:phi+:0.5", "--t-end", "-1"],
        &["evolve", "--state", "werner:phi+:0.5", "--dt", "0.5"],
        &["evolve", "--state", "werner:phi+:0.5", "--stride", "0"],
        &["evolve", "--state", "ghz"],
        &["evolve"],
        &["evolve", "--model", "teleport", "--state", "bell:psi-"],
        &["threshold", "--state", "bell:phi+", "--t-max", "0"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn invalid_matrix_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.txt");
    fs::write(&short, "1 0 0 0").unwrap();
    let notpsd = dir.path().join("notpsd.txt");
    // diag(1.5, -0.5, 0, 0)
    let mut v = vec![0.0; 32];
    v[0] = 1.5;
    v[10] = -0.5;
    fs::write(&notpsd, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).unwrap();
    for p in [&short, &notpsd] {
        let state = format!("file:{}", p.display());
        assert_eq!(run(&["evolve", "--state", &state]).status.code(), Some(2));
    }
    assert_eq!(run(&["evolve", "--state", "file:/nonexistent/rho.txt"]).status.code(), Some(3));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args =
        ["evolve", "--model", "asym-drive", "--omega1", "1", "--state", "bell:psi-", "--t-end", "2", "--stride", "50"];
    assert_eq!(stdout(&args), stdout(&args));
}
