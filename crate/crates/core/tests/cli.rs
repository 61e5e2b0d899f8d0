use std::fs;
use std::process::Command;

fn vqeforge(out: &std::path::Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_vqeforge"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn summary_value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .to_string()
}

#[test]
fn h2_reaches_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = vqeforge(dir.path(), &["h2", "--depth", "2", "--mode", "exact", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = fs::read_to_string(dir.path().join("h2_summary.txt")).unwrap();
    let err: f64 = summary_value(&s, "energy_error").parse().unwrap();
    assert!(err.abs() < 1e-3, "{err}");
    assert_eq!(summary_value(&s, "seed"), "7");
}

#[test]
fn maxcut_on_bundled_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = concat!(env!("CARGO_MANIFEST_DIR"), "/data/diamond.edges");
    let out = vqeforge(dir.path(), &["maxcut", "--graph", graph, "--depth", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = String::from_utf8(out.stdout).unwrap();
    let p: f64 = summary_value(&s, "success_probability").parse().unwrap();
    assert!(p > 0.95, "{p}");
    let hist = fs::read_to_string(dir.path().join("maxcut_histogram.csv")).unwrap();
    assert_eq!(hist.lines().count(), 2 + 16);
}

#[test]
fn qv_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = vqeforge(
        dir.path(),
        &["qv", "--connectivity", "all-to-all", "--eps", "1e-4", "--n", "1000"],
    );
    assert!(out.status.success());
    let table = fs::read_to_string(dir.path().join("qv.csv")).unwrap();
    assert!(table
        .lines()
        .any(|l| l.starts_with("1000,") && l.split(',').nth(2) == Some("10")));
    assert!(dir.path().join("qv_heatmap.csv").exists());
}

#[test]
fn every_output_names_hash_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = vqeforge(dir.path(), &["mitigate", "--seed", "4", "--scale-factors", "1,2,3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = fs::read_to_string(dir.path().join("mitigate_summary.txt")).unwrap();
    let hash = summary_value(&summary, "config_hash");
    assert_eq!(hash.len(), 64);
    let csv = fs::read_to_string(dir.path().join("mitigate.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), format!("# config_hash={hash} seed=4"));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("mitigate_meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config_hash"], hash.as_str());
    assert_eq!(meta["seed"], 4);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for args in [
        &["h2", "--mode", "shots", "--shots", "256", "--max-iter", "30"][..],
        &["qaoa-scan", "--points", "9"],
        &["selftest"],
    ] {
        assert!(vqeforge(a.path(), args).status.success());
        assert!(vqeforge(b.path(), args).status.success());
    }
    for entry in fs::read_dir(a.path()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "csv" || e == "txt") {
            let other = b.path().join(p.file_name().unwrap());
            assert_eq!(fs::read(&p).unwrap(), fs::read(&other).unwrap(), "{}", p.display());
        }
    }
}

#[test]
fn failures_use_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ham");
    fs::write(&bad, "1.0 ZZ\n0.5 ZZZ\n").unwrap();
    let cases: [(&[&str], i32, &str); 5] = [
        (&["frobnicate"], 2, "frobnicate"),
        (&["h2", "--optimizer", "adam"], 2, "optimizer"),
        (&["qv", "--eps", "2"], 2, "eps"),
        (
            &["h2", "--hamiltonian", bad.to_str().unwrap()],
            3,
            "--hamiltonian: line 2",
        ),
        (&["mitigate", "--scale-factors", "2,2"], 4, "--scale-factors"),
    ];
    for (args, code, needle) in cases {
        let out = vqeforge(dir.path(), args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {stderr}");
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
    }
}

#[test]
fn curve_over_bundled_directory() {
    let dir = tempfile::tempdir().unwrap();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_curve");
    let out = vqeforge(dir.path(), &["curve", "--dir", data, "--depth", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(table.lines().nth(2).unwrap().starts_with("0.74,"));
}
