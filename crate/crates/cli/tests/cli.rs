use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_weylcode"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn family(args: &[&str]) -> Vec<u8> {
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    let out = run(&full, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

#[test]
fn d2_family_verifies() {
    let bundle = family(&["--name", "d2", "--n", "5", "--q", "2"]);
    let out = run(&["verify", "--d", "2"], Some(&bundle));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["K"], "6");
    assert_eq!(v["params"]["n"], 5);
    assert_eq!(v["params"]["d"], 2);
}

#[test]
fn subspace33_verifies() {
    let bundle = family(&["--name", "subspace33"]);
    let out = run(&["verify", "--d", "3"], Some(&bundle));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["params"]["K"], "155");
    assert_eq!(v["params"]["n"], 33);
}

#[test]
fn family_outputs_against_verify() {
    let cases: [&[&str]; 6] = [
        &["--name", "d2", "--n", "3", "--q", "2"],
        &["--name", "d2", "--n", "7", "--q", "2"],
        &["--name", "d2", "--n", "5", "--q", "3"],
        &["--name", "15_8_3"],
        &["--name", "subspace33"],
        &["--name", "subspace31"],
    ];
    for args in cases {
        let bundle = family(args);
        let out = run(&["verify"], Some(&bundle));
        let v = json(&out.stdout);
        // (3, 2) claims K = 4 at d = 2, which no code of length 3 can reach
        let expect = args != ["--name", "d2", "--n", "3", "--q", "2"];
        assert_eq!(v["pass"], expect, "{args:?}: {v}");
        assert_eq!(out.status.code(), Some(if expect { 0 } else { 1 }));
    }
}

#[test]
fn mutated_description_fails_with_witness() {
    let mut bundle = json(&family(&["--name", "d2"]));
    // 11111 differs from 01111 by the weight-1 shift e_0, which lies in F_2
    bundle["B"][1] = serde_json::json!([1, 1, 1, 1, 1]);
    let text = serde_json::to_vec(&bundle).unwrap();
    let out = run(&["verify"], Some(&text));
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out.stdout);
    assert_eq!(v["pass"], false);
    assert_eq!(v["report"]["witness"]["kind"], "forbidden");

    let out = run(&["oracle"], Some(&text));
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out.stdout)["failure"].is_object());
}

#[test]
fn wrong_claimed_dimension_is_rejected() {
    let mut bundle = json(&family(&["--name", "d2"]));
    bundle["claimed"]["K"] = "7".into();
    let out = run(&["verify"], Some(&serde_json::to_vec(&bundle).unwrap()));
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out.stdout);
    assert_eq!(v["witness"]["kind"], "claimed_parameters");
    assert_eq!(v["witness"]["computed"]["K"], "6");
}

#[test]
fn output_is_byte_stable() {
    let a = family(&["--name", "15_8_3"]);
    let b = family(&["--name", "15_8_3", "--threads", "1"]);
    assert_eq!(a, b);
    let first = run(&["oracle"], Some(&a));
    let second = run(&["--threads", "2", "oracle"], Some(&a));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(run(&["table"], None).stdout, run(&["table"], None).stdout);
}

#[test]
fn oracle_confirms_d2() {
    let bundle = family(&["--name", "d2"]);
    let out = run(&["oracle"], Some(&bundle));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["errors_checked"], 15);
    assert_eq!(v["pairs"], 36);
}

#[test]
fn greedy_output_verifies() {
    let bundle = family(&["--name", "d2"]);
    let out = run(&["greedy", "--d", "2"], Some(&bundle));
    assert!(out.status.success());
    let g = json(&out.stdout);
    assert!(g["B"].as_array().unwrap().len() >= 2);
    let out = run(&["verify"], Some(&out.stdout));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn encoder_matches_closed_form() {
    let bundle = family(&["--name", "d2"]);
    let members = json(&bundle)["B"].as_array().unwrap().clone();
    for u in members {
        let u: Vec<String> = u.as_array().unwrap().iter().map(|x| x.to_string()).collect();
        let out = run(&["encode-sim", "--u", &u.join(",")], Some(&bundle));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out.stdout);
        assert_eq!(v["fidelity_to_closed_form"], 1.0);
        assert_eq!(v["support"], 16);
    }
}

#[test]
fn decoder_recovers_single_errors() {
    let bundle = family(&["--name", "15_8_3"]);
    let u = "1,1,1,1,0,0,0,0,0,0,0,0,1,0,0";
    let mut e = vec!["0"; 15];
    e[6] = "1";
    let e = e.join(",");
    let out = run(&["decode-sim", "--u", u, "--a", &e, "--b", &e], Some(&bundle));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["recovered_u"], json(format!("[{u}]").as_bytes()));
    assert_eq!(v["fidelity"], 1.0);

    let two = "1,1,0,0,0,0,0,0,0,0,0,0,0,0,0";
    let out = run(&["decode-sim", "--u", u, "--a", two], Some(&bundle));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stdout)["witness"]["kind"], "no_solution");
}

#[test]
fn usage_and_cap_errors_exit_2() {
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(run(&["verify"], Some(b"not json")).status.code(), Some(2));
    assert_eq!(run(&["alpha-good", "--n", "6", "--alpha", "1/6"], None).status.code(), Some(2));
    let bundle = family(&["--name", "15_8_3"]);
    let out = run(&["--max-errors", "100", "verify"], Some(&bundle));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn table_lists_every_code() {
    let out = run(&["table"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,q,K,d,lower_bound,upper_bound,source"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().any(|r| r[..4] == ["5", "2", "6", "2"]));
    assert!(rows.iter().any(|r| r[..4] == ["15", "2", "8", "3"]));
    assert!(rows.iter().any(|r| r[..4] == ["33", "2", "155", "3"]));
    assert!(rows.iter().any(|r| r[..4] == ["31", "2", "155", "3"]));
}

#[test]
fn alpha_good_search_is_seeded() {
    let args = ["alpha-good", "--n", "8", "--alpha", "1/8", "--seed", "7"];
    let a = run(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args, None).stdout);
    let v = json(&a.stdout);
    if v["found"] == true {
        let k = v["k"].as_u64().unwrap();
        let at_least = v["purity_radius"]["at_least"].as_u64();
        let exact = v["purity_radius"]["exact"].as_u64();
        assert!(at_least.or(exact).unwrap() >= k);
    }
}
