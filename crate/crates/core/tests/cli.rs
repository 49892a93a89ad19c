use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn netrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netrep")).args(args).output().expect("spawn netrep")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixtures(dir: &Path) -> String {
    let out = netrep(&["fixtures", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    dir.display().to_string()
}

#[test]
fn decide_bisub3_pair_is_infeasible_and_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let out = netrep(&[
        "decide",
        "--function",
        &format!("{fx}/functions/bisub3.json"),
        "--encoding",
        &format!("{fx}/encodings/pair.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["verdict"], "infeasible");
    assert!(!doc["certificate"]["farkas"].as_array().unwrap().is_empty());

    let cert = tmp.path().join("cert.json");
    fs::write(&cert, &out.stdout).unwrap();
    let check = netrep(&["--verify-certificate", cert.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["valid"], true);
}

#[test]
fn tampered_certificate_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let out = netrep(&["decide", "--function", "builtin:and3", "--encoding", "builtin:star1"]);
    assert_eq!(out.status.code(), Some(1));
    let mut doc = json(&out);
    let rows = doc["certificate"]["farkas"].as_array_mut().unwrap();
    rows.pop();
    let cert = tmp.path().join("bad.json");
    fs::write(&cert, serde_json::to_vec(&doc).unwrap()).unwrap();
    let check = netrep(&["--verify-certificate", cert.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(1));
    assert_eq!(json(&check)["valid"], false);
}

#[test]
fn feasible_witness_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let out = netrep(&["decide", "--function", "builtin:and2", "--encoding", "builtin:star1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = tmp.path().join("w.json");
    fs::write(&cert, &out.stdout).unwrap();
    let check = netrep(&["--verify-certificate", cert.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn wpol_refute_omega2() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let out = netrep(&["wpol-refute", "--omega", "omega2", "--function", &format!("{fx}/functions/bisub3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["total"], "1");
    let cert = tmp.path().join("w.json");
    fs::write(&cert, &out.stdout).unwrap();
    assert_eq!(netrep(&["--verify-certificate", cert.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn wpol_refute_omega_k_flags_wide_encoding() {
    let out = netrep(&["wpol-refute", "--omega", "omega_k(4)"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["total"], "1");
    assert!(doc["note"].is_string());
}

#[test]
fn closure_query_member() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let out = netrep(&["closure", "--points", &format!("{fx}/points/closure_seven.json"), "--query", "101010"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["member"], true);
}

#[test]
fn closure_query_non_member() {
    let tmp = tempfile::tempdir().unwrap();
    let pts = tmp.path().join("p.json");
    fs::write(&pts, r#"[["1","1","0"],["0","1","1"]]"#).unwrap();
    let out = netrep(&["closure", "--points", pts.to_str().unwrap(), "--query", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["size"], 4);
}

#[test]
fn check_and2_submodular_fails_with_witness() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    let out = netrep(&["check", "--property", "submodular", "--function", &format!("{fx}/functions/and2.json")]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["violation"]["lhs"], "0");
    assert_eq!(doc["violation"]["rhs"], "1");
}

#[test]
fn malformed_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    let out = netrep(&["decide", "--function", bad.to_str().unwrap(), "--encoding", "builtin:pair"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string());
    assert!(out.stdout.is_empty());

    assert_eq!(netrep(&["decide"]).status.code(), Some(2));
    assert_eq!(netrep(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(netrep(&[]).status.code(), Some(2));
    let mismatch = netrep(&["decide", "--function", "builtin:bisub3", "--encoding", "builtin:star1"]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["decide", "--function", "builtin:bisub3", "--encoding", "builtin:pair"][..],
        &["wpol-refute", "--omega", "omega_k(3)"][..],
        &["rays", "--n", "1"][..],
    ] {
        let a = netrep(args);
        let b = netrep(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn gadgets_round_trip_through_eval_rep() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = fixtures(tmp.path());
    for g in ["h0", "h1", "h2", "halfpair"] {
        let gadget: Value = serde_json::from_str(&fs::read_to_string(format!("{fx}/gadgets/{g}.json")).unwrap()).unwrap();
        let enc = tmp.path().join(format!("{g}_enc.json"));
        fs::write(&enc, serde_json::to_vec(&gadget["encoding"]).unwrap()).unwrap();
        let out = netrep(&[
            "eval-rep",
            "--network",
            &format!("{fx}/gadgets/{g}.json"),
            "--encoding",
            enc.to_str().unwrap(),
            "--kappa",
            gadget["kappa"].as_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{g}");
        let want = if g == "halfpair" { "and2" } else { g };
        let expected: Value =
            serde_json::from_str(&fs::read_to_string(format!("{fx}/functions/{want}.json")).unwrap()).unwrap();
        assert_eq!(json(&out)["function"], expected, "{g}");
    }
}

#[test]
fn mincut_with_pin() {
    let out = netrep(&["mincut", "--network", "builtin:halfpair", "--pin", "1010"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1");
}

#[test]
fn rays_export_and_decompose() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("rays");
    let out = netrep(&["rays", "--n", "2", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let count = doc["ray_count"].as_u64().unwrap() as usize;
    let manifest: Value = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), count);
    assert_eq!(manifest["cone_hash"], doc["cone_hash"]);

    let rays_file = tmp.path().join("rays.json");
    fs::write(&rays_file, &out.stdout).unwrap();
    let first = dir.join("ray_001.json");
    let dec = netrep(&["decompose", "--network", first.to_str().unwrap(), "--rays", rays_file.to_str().unwrap()]);
    assert_eq!(dec.status.code(), Some(0));
    let coeffs = json(&dec)["coefficients"].clone();
    assert_eq!(coeffs, serde_json::json!([{ "ray": 0, "coefficient": "1" }]));

    let cert = tmp.path().join("dec.json");
    fs::write(&cert, &dec.stdout).unwrap();
    assert_eq!(netrep(&["--verify-certificate", cert.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn decompose_outside_cone_gives_verifiable_certificate() {
    let tmp = tempfile::tempdir().unwrap();
    // (s, 1+) alone is not retractable: pinning 11 costs 0, its retraction 00 costs 1.
    let net = tmp.path().join("net.json");
    fs::write(
        &net,
        r#"{"n": 1, "k": 2, "nodes": ["s", "t", "1^1", "1^2"], "edges": [{"from": "s", "to": "1^1", "cap": "1"}]}"#,
    )
    .unwrap();
    let dec = netrep(&["decompose", "--network", net.to_str().unwrap()]);
    if dec.status.code() == Some(2) {
        panic!("{}", String::from_utf8_lossy(&dec.stderr));
    }
    assert_eq!(dec.status.code(), Some(1));
    let cert = tmp.path().join("dec.json");
    fs::write(&cert, &dec.stdout).unwrap();
    assert_eq!(netrep(&["--verify-certificate", cert.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn timing_flag_adds_wall_time() {
    let out = netrep(&["--timing", "check", "--property", "bisubmodular", "--function", "builtin:bisub3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["wall_time_ms"].is_number());
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = netrep_core::cli::run(["netrep", "rays", "--n", "1"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, netrep(&["rays", "--n", "1"]).stdout);
}
