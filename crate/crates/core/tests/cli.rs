use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavepacket-rabi"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = r#"
[meta]
name = "small"

[params]
rabi = 20.0
detuning = 0.0

[grid]
half_width = 12.0
n_points = 513

[ground]
kind = "gaussian"
center = 0.0
sigma = 1.0

[excited]
kind = "tabulated"
path = "excited.txt"
weight = [0.0, 1.0]

[schedule]
tau_max = 2.0
n_samples = 21
snapshot_taus = [0.0, 1.0]

[output]
dir = "results"
"#;

fn write_small(dir: &Path) {
    fs::write(dir.join("scenario.toml"), SMALL).unwrap();
    let mut table = String::from("# p re im\n");
    for k in 0..=200 {
        let p = 2.0 + 0.05 * k as f64;
        table.push_str(&format!("{p} {} 0\n", (-(p - 7.0) * (p - 7.0) / 2.0).exp()));
    }
    fs::write(dir.join("excited.txt"), table).unwrap();
}

#[test]
fn presets_listing() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["presets"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("fig7: general superpositional case (CAMEL)"));
    assert!(text.contains("fig5: one-state case with definite momentum"));
}

#[test]
fn preset_emit_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["preset", "fig5", "--emit", "--output", "fig5.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("fig5.toml")).unwrap();
    assert!(text.contains("kind = \"definite\""));
    let o = bin(&["run", "fig5.toml", "--out", "o5"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("o5/series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1001);

    let o = bin(&["preset", "fig3", "--emit"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn run_writes_series_snapshots_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    write_small(dir.path());
    let o = bin(&["run", "scenario.toml"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("results");

    let csv = fs::read_to_string(out.join("series.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "tau,n_g,n_e,p_mean_g,p_mean_e,p_norm_g,p_norm_e,e_kin_g,e_kin_e,e_kin_total,e_norm_g,e_norm_e"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 21);
    for row in &rows {
        assert_eq!(row.len(), 12);
        let n: f64 = row[1].parse::<f64>().unwrap() + row[2].parse::<f64>().unwrap();
        assert!((n - 1.0).abs() < 1e-10);
    }

    for k in 0..2 {
        for level in ["ground", "excited"] {
            let snap = fs::read_to_string(out.join(format!("snapshot_{k:03}_{level}.txt"))).unwrap();
            let data: Vec<&str> = snap.lines().filter(|l| !l.starts_with('#')).collect();
            assert_eq!(data.len(), 513);
            assert!(data.iter().all(|l| l.split_whitespace().count() == 3));
        }
    }

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["scenario"]["meta"]["name"], "small");
    assert_eq!(summary["n_records"], 21);
    assert!(summary["residuals"]["norm_drift"].as_f64().unwrap() < 1e-12);
    assert_eq!(summary["final_record"]["tau"], 2.0);
}

#[test]
fn run_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    write_small(dir.path());
    for (threads, out) in [("1", "a"), ("3", "b")] {
        let o = bin(&["--threads", threads, "run", "scenario.toml", "--out", out], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a/series.csv")).unwrap();
    let b = fs::read(dir.path().join("b/series.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_scenarios_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write_small(dir.path());
    let long = SMALL.replace("tau_max = 2.0", "tau_max = 100.0");
    fs::write(dir.path().join("long.toml"), long).unwrap();
    let o = bin(&["run", "long.toml"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("time validity"), "{}", stderr(&o));
    let o = bin(&["run", "long.toml", "--override-validity", "--out", "forced"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));

    let empty = SMALL.replace("n_points = 513", "n_points = 0");
    fs::write(dir.path().join("empty.toml"), empty).unwrap();
    let o = bin(&["run", "empty.toml"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("n_points"));

    fs::write(dir.path().join("broken.toml"), "[params]\nrabi = \n").unwrap();
    let o = bin(&["run", "broken.toml"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn verify_reports_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    write_small(dir.path());
    let o = bin(&["verify", "scenario.toml"], dir.path());
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("PASS"));

    let free = SMALL.replace("rabi = 20.0", "rabi = 0.0");
    fs::write(dir.path().join("free.toml"), free).unwrap();
    let o = bin(&["verify", "free.toml"], dir.path());
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.starts_with("max |analytic")).unwrap().to_string();
    let err: f64 = line.split_whitespace().nth(4).unwrap().parse().unwrap();
    assert!(err <= 1e-12, "{line}");

    let o = bin(&["verify", "scenario.toml", "--step", "0.2"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("smaller step"), "{}", stderr(&o));

    let o = bin(&["verify", "scenario.toml", "--step", "0.004"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}
