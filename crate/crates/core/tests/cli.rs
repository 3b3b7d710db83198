use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qssamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qssamp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn gen_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = qssamp(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path.to_str().unwrap().to_string()
}

#[test]
fn gen_analyze_interp_simulate_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let chain = gen_to(dir.path(), "bd.json", &["--family", "birth-death", "--p", "0.4", "--q", "0.25", "--n", "4"]);
    let before = fs::read(&chain).unwrap();
    for args in [
        vec!["analyze", "--chain", &chain, "--eps-mix", "0.01"],
        vec!["analyze", "--chain", &chain, "--format", "csv"],
        vec!["interp", "--chain", &chain, "--j", "0", "--s", "0.5"],
        vec!["simulate", "--chain", &chain, "--j", "0"],
        vec!["simulate", "--chain", &chain, "--j", "0", "--mode", "sampled", "--seed", "3"],
    ] {
        let a = qssamp(&args);
        let b = qssamp(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    assert_eq!(fs::read(&chain).unwrap(), before);

    let sim: serde_json::Value = serde_json::from_str(&stdout(&qssamp(&["simulate", "--chain", &chain, "--j", "0"]))).unwrap();
    assert_eq!(sim["s_prime_source"], "oracle-assisted");
    assert!(sim["fidelity_sq"].as_f64().unwrap() >= 0.95);
    for key in ["success_prob", "total_evolution_time", "stage1", "stage2", "leakage"] {
        assert!(sim.get(key).is_some(), "{key}");
    }

    let an: serde_json::Value = serde_json::from_str(&stdout(&qssamp(&["analyze", "--chain", &chain]))).unwrap();
    assert!((an["s_star"].as_f64().unwrap() - (1.0 - an["pi"][0].as_f64().unwrap() / (1.0 - an["pi"][0].as_f64().unwrap()))).abs() < 1e-12);
}

#[test]
fn seeded_generation_is_reproducible() {
    let a = qssamp(&["gen", "--family", "random-reversible", "--n", "6", "--seed", "42"]);
    let b = qssamp(&["gen", "--family", "random-reversible", "--n", "6", "--seed", "42"]);
    let c = qssamp(&["gen", "--family", "random-reversible", "--n", "6", "--seed", "43"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n": 2, "P": [[0.5, 0.6], [0.5, 0.5]]}"#).unwrap();
    let o = qssamp(&["analyze", "--chain", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(&bad, r#"{"n": 2, "Q": [[0.5, 0.5], [0.5, 0.5]]}"#).unwrap();
    let o = qssamp(&["analyze", "--chain", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('P'), "{}", stderr(&o));

    let periodic = dir.path().join("periodic.json");
    fs::write(&periodic, r#"{"n": 2, "P": [[0, 1], [1, 0]]}"#).unwrap();
    assert_eq!(qssamp(&["analyze", "--chain", periodic.to_str().unwrap()]).status.code(), Some(2));

    let sym = gen_to(dir.path(), "sym.json", &["--family", "two-state", "--p", "0.1", "--q", "0.1", "--n", "2"]);
    let o = qssamp(&["simulate", "--chain", &sym, "--j", "0"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let missing = dir.path().join("missing.json");
    assert_eq!(qssamp(&["analyze", "--chain", missing.to_str().unwrap()]).status.code(), Some(5));

    let o = qssamp(&["sensitivity", "--c", "1.5,2,2.5"]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stderr(&o).contains("2, 2.5"), "{}", stderr(&o));

    assert_eq!(qssamp(&["gen", "--family", "two-state", "--n", "3"]).status.code(), Some(7));
    assert_eq!(qssamp(&["sweep", "--pi-j", "0.1", "--eps", "0.01", "--bogus"]).status.code(), Some(2));
    assert_eq!(qssamp(&["--help"]).status.code(), Some(0));
}

#[test]
fn figure1_files_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = qssamp(&["figure1", "--out", a.path().to_str().unwrap()]);
    let ob = qssamp(&["figure1", "--out", b.path().to_str().unwrap()]);
    assert_eq!(oa.status.code(), Some(0));
    let summary = stdout(&oa);
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.contains("argmin_A=") && summary.contains("s_star="));
    for name in ["sweep_eps0.01_pij0.1.csv", "sweep_eps0.05_pij0.5.csv"] {
        let fa = fs::read(a.path().join(name)).unwrap();
        assert_eq!(fa, fs::read(b.path().join(name)).unwrap());
        let text = String::from_utf8(fa).unwrap();
        assert!(text.starts_with("s_prime,alpha,beta,A,B\n"));
        assert_eq!(text.lines().count(), 1 + 512);
    }
    assert_eq!(ob.stdout.len(), oa.stdout.len());
}

#[test]
fn sweep_and_sensitivity_output() {
    let o = qssamp(&["sweep", "--pi-j", "0.1", "--eps", "0.01", "--grid", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    let b0: f64 = first.split(',').nth(4).unwrap().parse().unwrap();
    assert_eq!(b0, (2.0f64 / 0.01).ln());

    let o = qssamp(&["sensitivity", "--c", "1,1.5", "--eps", "0.05"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].split(',').nth(1).unwrap() == "7");
    assert!(rows[2].split(',').nth(1).unwrap() == "16");
}

#[test]
fn hitbound_audit_archives_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("audit.csv");
    let archive = dir.path().join("failures.json");
    let args = [
        "hitbound", "--family", "random-reversible", "--n-min", "3", "--n-max", "8", "--count", "2",
        "--archive", archive.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ];
    let o = qssamp(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 12);
    let failing: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap() < 1.0)
        .collect();
    if failing.is_empty() {
        assert!(!archive.exists());
    } else {
        let archived: serde_json::Value = serde_json::from_str(&fs::read_to_string(&archive).unwrap()).unwrap();
        assert_eq!(archived.as_array().unwrap().len(), failing.len());
        assert!(archived[0]["chain"]["P"].is_array());
    }

    let o = qssamp(&["hitbound", "--family", "complete", "--n-min", "5", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "chain,n,j,s_prime,delta_s,t_hit,alpha,ratio\n");
}
