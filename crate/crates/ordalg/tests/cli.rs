//! End-to-end tests of the command-line interface: JSON in, JSON out,
//! exit codes 0/1/2.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ordalg"))
}

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ordalg-cli-{name}-{}", std::process::id()));
        fs::create_dir_all(&dir).expect("fixture dir");
        Fixtures { dir }
    }

    fn write(&self, name: &str, contents: &str) -> String {
        let path = self.dir.join(name);
        fs::write(&path, contents).expect("fixture write");
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn dyadic_coords(max_denominator: u32, extra: &[&str]) -> String {
    let mut coords: Vec<String> = (1..max_denominator)
        .map(|j| {
            let g = gcd(j, max_denominator);
            format!("\"{}/{}\"", j / g, max_denominator / g)
        })
        .collect();
    coords.extend(extra.iter().map(|e| format!("\"{e}\"")));
    format!("[{}]", coords.join(","))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn kernel_of_the_five_point_chain_is_empty() {
    let fx = Fixtures::new("kernel");
    let space = fx.write("space.json", r#"{"space":{"kind":"chain","n":5}}"#);
    let out = bin().args(["kernel", &space]).output().unwrap();
    let json = stdout_json(&out);
    assert_eq!(json, serde_json::json!({"components": []}));
}

#[test]
fn kernel_drops_isolated_points() {
    let fx = Fixtures::new("kernel2");
    let input = fx.write(
        "in.json",
        r#"{
          "space": {"kind": "full"},
          "set": {"components": [
            {"type": "interval", "a": {"x":"0","side":"+"}, "b": {"x":"1/2","side":"-"}},
            {"type": "point", "p": {"x":"3/4","side":"-"}}
          ]}
        }"#,
    );
    let out = bin().args(["kernel", &input]).output().unwrap();
    let json = stdout_json(&out);
    assert_eq!(json["components"].as_array().unwrap().len(), 1);
    assert_eq!(json["components"][0]["type"], "interval");
}

#[test]
fn cantor_detection_over_the_cli() {
    let fx = Fixtures::new("cantor");
    let solid = fx.write(
        "solid.json",
        r#"{"space":{"kind":"full"},"set":{"components":[{"type":"solid","l":"1/4","r":"1/2"}]}}"#,
    );
    let out = bin().args(["cantor", &solid]).output().unwrap();
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"containsCantor": true})
    );

    let full = fx.write("full.json", r#"{"space":{"kind":"full"}}"#);
    let out = bin().args(["cantor", &full]).output().unwrap();
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"containsCantor": false})
    );
}

#[test]
fn jmp_counts_the_pair() {
    let fx = Fixtures::new("jmp");
    let f = fx.write(
        "f.json",
        r#"{"breaks":["1/3"],"values":[{"re":"-1","im":"0"},{"re":"1","im":"0"}]}"#,
    );
    let out = bin()
        .args(["jmp", "--f", &f, "--eps", "1/3"])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out), serde_json::json!({"coords": ["1/3"]}));
}

#[test]
fn match_subcommand() {
    let fx = Fixtures::new("match");
    let d = fx.write(
        "delta.json",
        r#"{"z":[{"re":"-1","im":"0"},{"re":"1","im":"0"}],"pairs":["5/16","3/8"]}"#,
    );
    let tau = fx.write(
        "tau.json",
        r#"{"breaks":["21/64"],"values":[{"re":"-1","im":"0"},{"re":"1","im":"0"}]}"#,
    );
    let out = bin()
        .args(["match", "--descriptor", &d, "--tau", &tau])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out), serde_json::json!({"matches": true}));
}

#[test]
fn extract_reports_the_named_clause_on_exit_1() {
    let fx = Fixtures::new("extract");
    let h = fx.write(
        "h.json",
        r#"{"breaks":["21/64","1/3"],"values":[{"re":"0","im":"0"},{"re":"-2","im":"0"},{"re":"0","im":"0"}]}"#,
    );
    let ok = bin()
        .args(["extract", "--h", &h, "--b", "-1"])
        .output()
        .unwrap();
    let cert = stdout_json(&ok);
    assert_eq!(cert["nontrivial"], serde_json::json!(true));
    assert_eq!(cert["b"], serde_json::json!("-1"));

    // b on the range: exit 1 with the clause on stderr.
    let bad = bin()
        .args(["extract", "--h", &h, "--b", "0/1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("b hits the range"));
}

#[test]
fn malformed_input_exits_2() {
    let fx = Fixtures::new("parse");
    let bad = fx.write("bad.json", "{ not json");
    let out = bin().args(["kernel", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    // Structurally valid JSON with decreasing breaks is rejected on parse.
    let invalid = fx.write(
        "invalid.json",
        r#"{"breaks":["1/2","1/3"],"values":[{"re":"0","im":"0"},{"re":"1","im":"0"},{"re":"2","im":"0"}]}"#,
    );
    let out = bin()
        .args(["jmp", "--f", &invalid, "--eps", "1/3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly increasing"));
}

#[test]
fn ntip_run_produces_the_reference_trace() {
    let fx = Fixtures::new("ntip");
    let oracle = fx.write(
        "oracle.json",
        &format!(
            r#"{{"kind":"breakpoints","coords":{}}}"#,
            dyadic_coords(64, &["1/3"])
        ),
    );
    let nice = fx.write(
        "nice.json",
        &format!(r#"{{"coords":{}}}"#, dyadic_coords(64, &[])),
    );
    let out = bin()
        .args([
            "ntip-run", "--oracle", &oracle, "--nice", &nice, "--q", "1/3",
        ])
        .output()
        .unwrap();
    let trace = stdout_json(&out);
    assert_eq!(trace["r"], serde_json::json!(1));
    assert_eq!(trace["eps"], serde_json::json!("1/6"));
    assert_eq!(trace["w0"], serde_json::json!({"re": "-2", "im": "0"}));
    assert_eq!(trace["b"], serde_json::json!("-1"));
    assert_eq!(trace["delta"]["pairs"], serde_json::json!(["5/16", "3/8"]));
    assert_eq!(
        trace["result"]["h"]["components"][0]["a"],
        serde_json::json!({"x": "21/64", "side": "+"})
    );
    assert_eq!(trace["result"]["nontrivial"], serde_json::json!(true));

    // The emitted trace verifies.
    let trace_path = fx.write("trace.json", &serde_json::to_string(&trace).unwrap());
    let verify = bin()
        .args(["verify-trace", "--trace", &trace_path, "--oracle", &oracle])
        .output()
        .unwrap();
    assert_eq!(stdout_json(&verify), serde_json::json!({"verified": true}));

    // Round-trip: parse → serialize → parse is the identity.
    let reparsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(reparsed, trace);
}

#[test]
fn ntip_run_error_paths() {
    let fx = Fixtures::new("ntip-err");
    let oracle = fx.write(
        "oracle.json",
        &format!(
            r#"{{"kind":"breakpoints","coords":{}}}"#,
            dyadic_coords(64, &[])
        ),
    );
    let nice = fx.write(
        "nice.json",
        &format!(r#"{{"coords":{}}}"#, dyadic_coords(64, &[])),
    );
    // q inside S.
    let out = bin()
        .args([
            "ntip-run", "--oracle", &oracle, "--nice", &nice, "--q", "1/2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // The oracle cannot jump at 1/5.
    let out = bin()
        .args([
            "ntip-run", "--oracle", &oracle, "--nice", &nice, "--q", "1/5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot jump"));
}

#[test]
fn nice_chain_stays_dyadic() {
    let fx = Fixtures::new("chain");
    let oracle = fx.write(
        "oracle.json",
        &format!(
            r#"{{"kind":"breakpoints","coords":{}}}"#,
            dyadic_coords(64, &["1/3"])
        ),
    );
    let out = bin()
        .args([
            "nice-chain",
            "--oracle",
            &oracle,
            "--max-denominator",
            "8",
            "--max-jumps",
            "1",
            "--max-value-height",
            "1",
            "--stages",
            "1",
        ])
        .output()
        .unwrap();
    let json = stdout_json(&out);
    let coords = json["coords"].as_array().unwrap();
    assert!(!coords.iter().any(|c| c == "1/3"));
}

#[test]
fn psi_round_trip_over_the_cli() {
    let fx = Fixtures::new("psi");
    let f = fx.write(
        "f.json",
        r#"{"breaks":["1/3"],"values":[{"re":"0","im":"0"},{"re":"4","im":"0"}]}"#,
    );
    let out = bin().args(["psi", "--f", &f]).output().unwrap();
    let circle = stdout_json(&out);
    assert_eq!(circle["cuts"], serde_json::json!(["1/3"]));
    assert_eq!(
        circle["pointValues"][1],
        serde_json::json!({"re": "2", "im": "0"})
    );

    let g = fx.write("g.json", &serde_json::to_string(&circle).unwrap());
    let back = bin().args(["psi", "--inv", "--g", &g]).output().unwrap();
    let step = stdout_json(&back);
    assert_eq!(step["breaks"], serde_json::json!(["1/3"]));
}

#[test]
fn integrate_over_the_cli() {
    let fx = Fixtures::new("integrate");
    let f = fx.write(
        "f.json",
        r#"{"breaks":["1/3"],"values":[{"re":"0","im":"0"},{"re":"4","im":"0"}]}"#,
    );
    let mu = fx.write(
        "mu.json",
        r#"{"atoms":[],"density":[{"l":"0","r":"1","d":"1"}]}"#,
    );
    let out = bin()
        .args(["integrate", "--f", &f, "--mu", &mu])
        .output()
        .unwrap();
    assert_eq!(
        stdout_json(&out),
        serde_json::json!({"re": "8/3", "im": "0"})
    );
}

#[test]
fn indicator_poly_over_the_cli() {
    let fx = Fixtures::new("poly");
    let k0 = fx.write(
        "k0.json",
        r#"{"discs":[{"c":{"re":"0","im":"0"},"r":"0"}]}"#,
    );
    let k1 = fx.write(
        "k1.json",
        r#"{"discs":[{"c":{"re":"3","im":"0"},"r":"0"}]}"#,
    );
    let out = bin()
        .args([
            "indicator-poly",
            "--k0",
            &k0,
            "--k1",
            &k1,
            "--tol-sq",
            "1/10000",
        ])
        .output()
        .unwrap();
    let w = stdout_json(&out);
    assert_eq!(w["degree"], serde_json::json!(1));
    assert_eq!(w["certifiedErrSq"], serde_json::json!("0"));
    assert_eq!(
        w["coefficients"],
        serde_json::json!([{"re":"1","im":"0"},{"re":"-1/3","im":"0"}])
    );
}

#[test]
fn no_floats_in_exact_track_outputs() {
    // Regression scan: every number in emitted JSON is a string rational.
    let fx = Fixtures::new("floats");
    let oracle = fx.write(
        "oracle.json",
        &format!(
            r#"{{"kind":"breakpoints","coords":{}}}"#,
            dyadic_coords(64, &["1/3"])
        ),
    );
    let nice = fx.write(
        "nice.json",
        &format!(r#"{{"coords":{}}}"#, dyadic_coords(64, &[])),
    );
    let out = bin()
        .args([
            "ntip-run", "--oracle", &oracle, "--nice", &nice, "--q", "1/3",
        ])
        .output()
        .unwrap();
    let trace = stdout_json(&out);
    fn scan(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => {
                assert!(n.is_u64() || n.is_i64(), "float found: {n}");
            }
            serde_json::Value::Array(a) => a.iter().for_each(scan),
            serde_json::Value::Object(o) => o.values().for_each(scan),
            _ => {}
        }
    }
    scan(&trace);
}

#[test]
fn selftest_quick_passes() {
    let out = bin()
        .args(["selftest", "--level", "quick"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let fixture_count = text.lines().filter(|l| l.starts_with("PASS: ")).count();
    assert!(fixture_count >= 40, "only {fixture_count} fixtures");
    assert!(!text.contains("FAIL"));
}
