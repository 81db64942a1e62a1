use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bridgekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bridgekit")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bridgekit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const TREFOIL: &str = "O1U2O3U1O2U3";

#[test]
fn exit_codes() {
    assert_eq!(bridgekit(&["wirtinger", TREFOIL]).status.code(), Some(0));
    assert_eq!(bridgekit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bridgekit(&["wirtinger"]).status.code(), Some(1));
    assert_eq!(bridgekit(&["--jobs", "0", "wirtinger", TREFOIL]).status.code(), Some(1));
    assert_eq!(bridgekit(&["--help"]).status.code(), Some(0));
    assert_eq!(bridgekit(&["parse", "O1U2O1"]).status.code(), Some(2));
    assert_eq!(bridgekit(&["batch", "/nonexistent/census.txt"]).status.code(), Some(2));
}

#[test]
fn wirtinger_text_and_jsonl() {
    let o = bridgekit(&["wirtinger", TREFOIL]);
    assert!(stdout(&o).starts_with("omega = 2 (exact"));
    let o = bridgekit(&["--format", "jsonl", "wirtinger", "U1O2U3O4U5O1U6O3U4O7U8O5U2O6U7O8"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["omega"], 3);
    assert_eq!(v["omega_status"], "exact");
    assert!(v.get("certificate").is_none());
}

#[test]
fn max_k_reports_lower_bound() {
    let o = bridgekit(&["--max-k", "2", "wirtinger", "U1O2U3O4U5O1U6O3U4O7U8O5U2O6U7O8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("omega >= 3 (lower_bound"));
}

#[test]
fn certificate_round_trip_and_tamper() {
    let o = bridgekit(&["--format", "jsonl", "--emit-certificate", "wirtinger", TREFOIL]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let cert = v["certificate"].to_string();
    let ok = with_stdin(&["verify", TREFOIL, "-"], &cert);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let mut bad = v["certificate"].clone();
    bad["trace"][0]["color"] = serde_json::json!(9);
    let o = with_stdin(&["verify", TREFOIL, "-"], &bad.to_string());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 0"));

    let o = with_stdin(&["verify", TREFOIL, "-"], "{not json");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn batch_csv_from_stdin() {
    let census = "# demo\n3_1\tO1U2O3U1O2U3\nbad\tO1O1\n4_1\tU1O2U3O1U4O3U2O4\nunknot\t.\n";
    let o = with_stdin(&["batch", "-", "--jobs", "2"], census);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,code,n,omega,omega_status,overpass,composite,summands,elapsed_ms");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("3_1,O1U2O3U1O2U3,3,2,exact,3,false,1,"));
    assert!(lines[2].starts_with("bad,O1O1,,,skipped,"));
    assert!(lines[4].starts_with("unknot,.,0,1,exact,1,false,1,"));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("records=4") && err.contains("skipped=1"), "{err}");
}

#[test]
fn batch_warm_cache_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let census = dir.path().join("census.txt");
    std::fs::write(&census, "3_1\tO1U2O3U1O2U3\n8_17\tU1O2U3O4U5O1U6O3U4O7U8O5U2O6U7O8\nrotated\tU1O2U3O1U2O3\n").unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = |out: &str| {
        vec![
            "--format".to_string(),
            "jsonl".into(),
            "--cache".into(),
            cache.to_str().unwrap().into(),
            "batch".into(),
            census.to_str().unwrap().into(),
            "-o".into(),
            dir.path().join(out).to_str().unwrap().into(),
        ]
    };
    let run = |out: &str| {
        let a = args(out);
        let a: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        bridgekit(&a)
    };
    let cold = run("cold.jsonl");
    assert_eq!(cold.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&cold.stderr).contains("cache_hits=0"));
    // the rotated reading re-encodes the trefoil, so all three hit
    let warm = run("warm.jsonl");
    assert!(String::from_utf8_lossy(&warm.stderr).contains("cache_hits=3"));
    let a = std::fs::read_to_string(dir.path().join("cold.jsonl")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("warm.jsonl")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn batch_oracle_check_passes_on_table() {
    let census = "3_1\tO1U2O3U1O2U3\n5_2\tO1U2O3U1O4U5O2U3O5U4\n";
    let o = with_stdin(&["--oracle-check", "--format", "text", "batch", "-"], census);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle_mismatches=0"));
}

#[test]
fn other_subcommands() {
    let o = bridgekit(&["consum", TREFOIL, TREFOIL]);
    assert_eq!(stdout(&o).trim(), "O1U2O3U1O2U3O4U5O6U4O5U6");
    let o = bridgekit(&["decompose", "O1U2O3U1O2U3O4U5O6U4O5U6"]);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), vec![TREFOIL, TREFOIL]);
    let o = bridgekit(&["--format", "jsonl", "passes", TREFOIL]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["overpass"], 3);
    let o = bridgekit(&["--reduce", "parse", "O1U2O3U1O2U3O4U4"]);
    assert!(stdout(&o).contains("n 3"));
    let o = bridgekit(&["consum", TREFOIL, TREFOIL, "--edge1", "6"]);
    assert_eq!(o.status.code(), Some(2));
}
