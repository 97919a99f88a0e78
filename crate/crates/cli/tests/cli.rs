use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn catnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = catnet(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    catnet(args).status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn field(json: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {json}"))
}

#[test]
fn monotones() {
    assert_eq!(stdout(&["monotones", "0.5,0.5"]), "1,0.5\n");
    assert_eq!(stdout(&["monotones", "0.64,0.16,0.16,0.04"]), "1,0.36,0.2,0.04\n");
    assert_eq!(stdout(&["monotones", "0.4,0.4,0.1,0.1"]), "1,0.6,0.2,0.1\n");
    assert_eq!(code(&["monotones", "0.5,x"]), 1);
    assert_eq!(code(&["monotones", "-0.5,1.5"]), 1);
}

#[test]
fn prob() {
    assert_eq!(stdout(&["prob", "--initial", "0.75,0.25", "--final", "0.5,0.5"]), "0.5\n");
    let with_catalyst = [
        "prob", "--initial", "0.4,0.4,0.1,0.1", "--final", "0.5,0.25,0.25", "--catalyst", "0.6,0.4",
    ];
    assert_eq!(stdout(&with_catalyst), "1\n");
    let same = ["prob", "--initial", "0.3,0.3,0.4", "--final", "0.4,0.3,0.3"];
    assert_eq!(stdout(&same), "1\n");
    assert_eq!(code(&["prob", "--initial", "0.5,0.5"]), 1);
}

#[test]
fn catalyst() {
    let two = stdout(&["catalyst", "--n", "2", "--alpha", "0.8"]);
    let (coeffs, p) = two.trim().split_once("  p=").unwrap();
    let c: Vec<f64> = coeffs.split(',').map(|x| x.parse().unwrap()).collect();
    assert!((c[0] - 0.59196).abs() < 5e-5 && (c[1] - 0.40804).abs() < 5e-5);
    assert!((p.parse::<f64>().unwrap() - 0.88227).abs() < 5e-5);

    let four = stdout(&["catalyst", "--n", "2", "--alpha", "0.8", "--dim", "4"]);
    let p4: f64 = four.trim().split_once("  p=").unwrap().1.parse().unwrap();
    assert!(p4 >= 0.88227);

    assert_eq!(code(&["catalyst", "--n", "5", "--alpha", "0.8"]), 1);
    assert_eq!(code(&["catalyst", "--n", "2", "--alpha", "1.2"]), 1);
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn sweep_defaults_shape() {
    let csv = stdout(&["sweep"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "alpha,mode,catalyst_dim,p_locc,p_cat,c0,n_cat,eta_p,z_locc,z_cat,t_edge_cycle_s,rate_locc_hz,rate_cat_hz,eta_r,window_flag"
    );
    assert_eq!(lines.len(), 201);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 15));

    let eta: Vec<f64> = column(&csv, "eta_r").iter().map(|x| x.parse().unwrap()).collect();
    let n = eta.len();
    assert!(eta[n - 1] > 100.0);
    assert!(eta[n - 20..].windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_no_aux_jumps() {
    let csv = stdout(&["sweep", "--mode", "none"]);
    let flags = column(&csv, "window_flag");
    let n_cat = column(&csv, "n_cat");
    let eta: Vec<f64> = column(&csv, "eta_r").iter().map(|x| x.parse().unwrap()).collect();
    let rows: Vec<(u32, f64)> = (0..flags.len())
        .filter(|&i| flags[i] == "ok")
        .map(|i| (n_cat[i].parse().unwrap(), eta[i]))
        .collect();
    assert!(rows.len() > 100);
    assert!(rows.windows(2).all(|w| w[1].0 >= w[0].0));
    // Discontinuities (drops of more than 2%) sit on n_cat increments.
    for w in rows.windows(2) {
        if w[1].1 < 0.98 * w[0].1 {
            assert!(w[1].0 > w[0].0, "{w:?}");
        }
    }
    // Where a grid step spans a single jump, the jump is downward.
    for w in rows[..100].windows(2) {
        if w[1].0 > w[0].0 {
            assert!(w[1].1 < w[0].1, "{w:?}");
        }
    }
    // Where the grid is fine enough to resolve them, increments are single.
    let early: Vec<u32> = rows.iter().take(100).map(|r| r.0).collect();
    assert!(early.windows(2).all(|w| w[1] - w[0] <= 1));
    assert!(early.windows(2).any(|w| w[1] - w[0] == 1));
}

#[test]
fn sweep_to_file_and_finite_mode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "aux.cfg", "aux.1.alpha = 0.8\naux.1.P = 0.5\naux.1.T_s = 1e-3\n");
    let out = dir.path().join("fig2.csv");
    let args = [
        "sweep", "--mode", "finite,aux_rich", "--dim", "2", "--steps", "10", "--config", &cfg, "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(stdout(&args), "");
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 21);
    assert!(csv.contains(",finite,"));
    assert_eq!(code(&["sweep", "--mode", "finite"]), 1);
    assert_eq!(code(&["sweep", "--mode", "sometimes"]), 1);
    assert_eq!(code(&["sweep", "--dim", "3"]), 1);
}

#[test]
fn simulate_abstract_two_edges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "abstract.cfg",
        "n_edges = 2\nn = 2\nalpha = 0.8\nmode = abstract\np_cat = 0.5\n",
    );
    let line = stdout(&["simulate", "--config", &cfg, "--trials", "100000", "--seed", "3"]);
    let t = field(&line, "t_edge_cycle_s");
    let mean = field(&line, "mean_completion_s") / t;
    let se = field(&line, "std_error_s") / t;
    assert!((mean - 8.0 / 3.0).abs() < 3.0 * se, "{mean} +- {se}");
    assert_eq!(field(&line, "seed"), 3.0);
}

#[test]
fn simulate_starved_chain_times_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "starve.cfg",
        "n_edges = 3\nn = 2\nalpha = 0.8\nmode = detailed\naux_mode = none\ninitial_stock = 0\nmax_slots = 2000\n",
    );
    let line = stdout(&["simulate", "--config", &cfg]);
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v["rate_hz"].as_f64(), Some(0.0));
    assert_eq!(v["timeout"].as_bool(), Some(true));
    assert!(v["counters"].as_array().unwrap().iter().all(|c| c["catalysis_attempts"] == 0));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "det.cfg",
        "# detailed, finite supply\nn_edges = 3\nn = 2\nalpha = 0.8\nmode = detailed\nmax_slots = 20000\ntrials = 3\n\
         aux.1.alpha = 0.9\naux.1.P = 0.6\naux.1.T_s = 7e-4\nstock_capacity = 2\n",
    );
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for out in [&a, &b] {
        stdout(&["simulate", "--config", &cfg, "--seed", "99", "--out", out.to_str().unwrap()]);
    }
    let (a, b) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let other = stdout(&["simulate", "--config", &cfg, "--seed", "100"]);
    assert_ne!(other.as_bytes(), &a[..]);
}

#[test]
fn simulate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.cfg", "n_edges = 2\nn = 2\nalpha = 0.8\nmode = abstract\nspeed = 3\n");
    assert_eq!(code(&["simulate", "--config", &unknown]), 1);
    let missing = write(dir.path(), "m.cfg", "n = 2\nalpha = 0.8\nmode = abstract\n");
    assert_eq!(code(&["simulate", "--config", &missing]), 1);
    assert_eq!(code(&["simulate", "--config", "/nonexistent/catnet.cfg"]), 1);
}

#[test]
fn validate_z() {
    let line = stdout(&["validate-z", "--edges", "2", "--p", "0.5", "--trials", "100000", "--seed", "4"]);
    assert!((field(&line, "analytic") - 8.0 / 3.0).abs() < 1e-12);
    assert!(line.contains("\"pass\":true"));
    assert_eq!(code(&["validate-z", "--edges", "0", "--p", "0.5"]), 1);
}
