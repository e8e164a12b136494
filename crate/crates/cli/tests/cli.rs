use std::path::Path;
use std::process::{Command, Output};

const EIGHT_SENSORS: &str = r#"{"length": 8, "range": 0.5, "positions": [0.3, 2.6, 2.7, 3.6, 4.3, 5.2, 7.3, 7.3]}"#;

fn barrier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_barrier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gaps_lists_uncovered_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "eight.json", EIGHT_SENSORS);
    let out = barrier(&["--format", "csv", "gaps", "--instance", &inst]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "start,end\n0.8,2.1\n5.7,6.8\n7.8,8\n");
}

#[test]
fn offline_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "eight.json", EIGHT_SENSORS);
    let traj = dir.path().join("t.json");
    let svg = dir.path().join("t.svg");
    let out = barrier(&[
        "solve-offline",
        "--instance",
        &inst,
        "--emit-trajectory",
        traj.to_str().unwrap(),
        "--emit-svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("length: 11.1"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let out = barrier(&["verify", "--instance", &inst, "--trajectory", traj.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("covered: true"));
}

#[test]
fn verify_flags_uncovered_result() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "eight.json", EIGHT_SENSORS);
    let traj = write(
        dir.path(),
        "short.json",
        r#"{"start": 0, "turns": [], "terminal": 1.5, "length": 1.5}"#,
    );
    let out = barrier(&["verify", "--instance", &inst, "--trajectory", &traj]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("covered: false"));
}

#[test]
fn online_reports_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "eight.json", EIGHT_SENSORS);
    let out = barrier(&["solve-online", "--instance", &inst, "--algo", "adaptive"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("length: 11.7"), "{text}");
    assert!(text.contains("ratio: 1.054"), "{text}");

    let out = barrier(&["solve-online", "--instance", &inst, "--algo", "adaptive", "--hide-length"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_matches_offline_and_refuses_large() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "eight.json", EIGHT_SENSORS);
    let out = barrier(&["oracle", "--instance", &inst]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("length: 11.1"));

    let big = write(
        dir.path(),
        "big.json",
        &format!(r#"{{"length": 13, "range": 0.5, "positions": {:?}}}"#, vec![0.5; 13]),
    );
    let out = barrier(&["oracle", "--instance", &big]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limited to 12"));
}

#[test]
fn malformed_instances_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("missing.json", r#"{"length": 8, "range": 0.5}"#),
        ("extra.json", r#"{"length": 8, "range": 0.5, "positions": [1], "n": 1}"#),
        ("short.json", r#"{"length": 8, "range": 0.5, "positions": [1]}"#),
    ] {
        let p = write(dir.path(), name, text);
        let out = barrier(&["gaps", "--instance", &p]);
        assert_eq!(out.status.code(), Some(1), "{name}");
    }
}

#[test]
fn generate_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = barrier(&["--seed", "7", "generate", "--kind", "random", "--n", "12", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    for kind in ["known-l-adv", "unknown-l-adv", "fixed-switch-adv"] {
        let out = barrier(&["generate", "--kind", kind, "--length", "1000", "--out", a.to_str().unwrap()]);
        assert!(out.status.success(), "{kind}");
        let out = barrier(&["gaps", "--instance", a.to_str().unwrap()]);
        assert!(out.status.success(), "{kind}");
    }
}

#[test]
fn bench_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = barrier(&["--seed", "3", "bench", "--random", "40", "--no-adversaries", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let strip_ms = |p: &Path| -> Vec<String> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    let rows = strip_ms(&a);
    assert_eq!(rows[0], "instance_id,algo,n,L,r,online_len,offline_len,ratio,triples,epochs");
    assert_eq!(rows.len(), 1 + 40 * 3);
    assert_eq!(rows, strip_ms(&b));
}

#[test]
fn bench_assert_reports_ceiling_breaches() {
    // the frozen stack-1 unknown-length instance pushes the adaptive robot past 5/4
    let out = barrier(&["bench", "--random", "0", "--assert"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("adaptive"));
}

#[test]
fn scale_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = barrier(&["--format", "csv", "scale", "--sizes", "100,1000", "--trials", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("n,median_ms\n100,"));

    let inst = write(dir.path(), "eight.json", EIGHT_SENSORS);
    let svg = dir.path().join("f.svg");
    let out = barrier(&["render", "--instance", &inst, "--out", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="pass""#).count(), 6);
}
