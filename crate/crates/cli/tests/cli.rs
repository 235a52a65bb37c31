use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twobridge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn classify_examples() {
    let o = run(&["classify", "3/8", "1/6", "3/10"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("Homotopic (Whitehead pair)"));

    let o = run(&["classify", "5/12", "2/5", "3/7", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "not_homotopic");
    assert_eq!(v["rule"], "main_theorem");

    let o = run(&["classify", "1/3", "3/4", "3/5", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["rule"], "torus_family");
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["classify", "5/12", "2/x", "3/7"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 2"));
    assert_eq!(code(&run(&["classify", "5/12", "3/2", "3/7"])), 2);
    // 5/12 lies strictly between its Farey parents.
    let o = run(&["classify", "5/12", "5/12", "3/7", "--json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["error"]["kind"], "usage");
    assert_eq!(code(&run(&["peripheral", "1/3", "1/5"])), 2);
    assert_eq!(code(&run(&["selftest", "nope"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn single_loop_tables() {
    let o = run(&["peripheral", "2/5", "1/5"]);
    assert_eq!((code(&o), stdout(&o).lines().next()), (0, Some("Peripheral (case 1)")));
    assert_eq!(code(&run(&["peripheral", "5/12", "1/5"])), 1);
    let o = run(&["primitive", "3/7", "2/7", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["exponent"], 2);
    assert_eq!(code(&run(&["primitive", "5/12", "1/5"])), 0);
}

#[test]
fn inspect_five_twelfths() {
    let o = run(&["inspect", "5/12"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for needle in ["[2,2,2]", "2/5, 3/7", "<3,2,3,2,2,3,2,3,2,2>", "(3,2,3)", "(2,2)"] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
    let v = json(&run(&["inspect", "5/12", "--json"]));
    assert_eq!(v["s1"], serde_json::json!([3, 2, 3]));
    assert_eq!(v["parents"], serde_json::json!(["2/5", "3/7"]));
    // No S1/S2 for 1/p.
    assert!(json(&run(&["inspect", "1/4", "--json"])).get("s1").is_none());
}

#[test]
fn reduce_chains() {
    let o = run(&["reduce", "7/19"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("[2,1,2,2] -> [2,2]") && text.contains("ok"), "{text}");

    let v = json(&run(&["reduce", "8/21", "--json"]));
    assert_eq!(v["identities_hold"], true);
    assert_eq!(v["last_cf"], serde_json::json!([2, 2]));

    let v = json(&run(&["reduce", "[2,3,2,2,3]", "--loop", "[2,4,3]", "--json"]));
    let steps = v["steps"].as_array().unwrap();
    let kinds: Vec<&str> = steps.iter().map(|s| s["type"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["A(2)", "A(2)", "mirror"]);
    assert_eq!(steps[0]["loop_identity"], true);
    assert_eq!(v["last"], "3/10");
    let v = json(&run(&["reduce", "[2,3,2,2,3]", "--steps", "1", "--json"]));
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
}

fn certify_to(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut full = vec!["certify"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", path.to_str().unwrap()]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn certify_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (i, triple) in [["1/3", "3/4", "3/5"], ["3/8", "1/6", "3/10"]].iter().enumerate() {
        let path = certify_to(dir.path(), &format!("d{i}.json"), triple);
        let o = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains("PASS (i) faces in relator set"));
    }
    let path = certify_to(dir.path(), "t.json", &["5/12", "2/5", "3/7", "--method", "trace"]);
    let v = json(&run(&["verify", path.to_str().unwrap(), "--json"]));
    assert_eq!((v["kind"].as_str(), v["valid"].as_bool()), (Some("trace"), Some(true)));
}

#[test]
fn verify_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = certify_to(dir.path(), "d.json", &["1/3", "3/4", "3/5"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["loops"][1] = "2/5".into();
    std::fs::write(&path, v.to_string()).unwrap();
    let o = run(&["verify", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["valid"], false);

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(code(&run(&["verify", path.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["verify", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn inconclusive_certify_exits_one() {
    let o = run(&["certify", "1/3", "3/4", "3/5", "--method", "trace", "--json"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["certificate"].is_null());
    let o = run(&["certify", "5/12", "2/5", "3/7", "--max-faces", "2", "--max-layers", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn json_is_deterministic() {
    let cases: [&[&str]; 5] = [
        &["classify", "5/12", "2/5", "3/7", "--json"],
        &["inspect", "8/21", "--json"],
        &["reduce", "8/21", "--json"],
        &["certify", "3/8", "1/6", "3/10"],
        &["selftest", "tseq", "--cases", "30", "--seed", "9", "--json"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        json(&a);
    }
    // The thread-count override must not change results.
    let one = Command::new(env!("CARGO_BIN_EXE_twobridge"))
        .args(["certify", "3/8", "1/6", "3/10"])
        .env("TWOBRIDGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.stdout, run(&["certify", "3/8", "1/6", "3/10"]).stdout);
}

#[test]
fn selftest_runs() {
    let o = run(&["selftest", "classify", "--cases", "20", "--seed", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&run(&["selftest", "slopes", "--cases", "20", "--json"]));
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["failures"] == 0));
    assert_eq!(code(&run(&["selftest", "words", "--cases", "0"])), 2);
}
