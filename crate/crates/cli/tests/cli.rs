use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partition-topology"))
        .args(args)
        .env_remove("PARTITION_TOPOLOGY_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn beta_values() {
    for (c, want) in [("1,2,1", "5"), ("4", "1"), ("1,1,0", "0"), ("2,2", "5")] {
        let o = run(&["beta", "--composition", c]);
        assert!(o.status.success(), "{c}");
        assert_eq!(stdout(&o).trim(), want, "{c}");
    }
}

#[test]
fn beta_list_prints_the_permutations() {
    let o = run(&["beta", "--composition", "2,1", "--list"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "2");
    let mut perms = lines[1..].to_vec();
    perms.sort();
    assert_eq!(perms, ["132", "231"]);
}

#[test]
fn homology_of_small_complexes() {
    let o = run(&["homology", "--complex", "delta", "--composition", "1,2,1"]);
    assert_eq!(stdout(&o).trim(), "betti [0,5]");
    let o = run(&["homology", "--complex", "lambda", "--lambda", "2,1", "--m", "1"]);
    assert_eq!(stdout(&o).trim(), "betti [0,11]");
    let o = run(&["homology", "--complex", "order-complex", "--lambda", "2,1", "--m", "1"]);
    assert_eq!(stdout(&o).trim(), "betti [0,11]");
}

#[test]
fn trailing_zero_delta_is_acyclic() {
    let o = run(&["homology", "--complex", "delta", "--composition", "2,1,0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["betti"].as_array().unwrap().iter().all(|b| b == 0), "{v}");
    assert_eq!(v["betti_minus_one"], 0);
}

#[test]
fn verify_small_passes() {
    let o = run(&["verify", "--suite", "all", "--max-n", "3", "--format", "json", "--rng-seed", "7", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let claims = v["claims"].as_array().unwrap();
    assert!(!claims.is_empty());
    for c in claims {
        assert!(c["claim_id"].is_string() && c["anchor"].is_string() && c["wall_time"].is_number());
        assert_eq!(c["status"], "pass", "{c}");
    }
}

#[test]
fn verify_csv_has_one_row_per_claim() {
    let o = run(&["verify", "--suite", "mobius", "--max-n", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["claim_id", "anchor", "status", "wall_time", "witness"]);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|x| &x[2] == "pass"));
}

#[test]
fn failing_claims_exit_with_one() {
    // Ψ is not an isomorphism onto the cycle span for {2,1,_1}.
    let o = run(&["verify", "--suite", "specht", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("psi/{2,1,_1}"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["beta", "--composition", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["beta", "--composition", "0,2"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--complex", "delta"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn caps_are_honoured() {
    let o = run(&["verify", "--suite", "mobius", "--max-n", "12"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_partition-topology"))
        .args(["beta", "--composition", "2,2"])
        .env("PARTITION_TOPOLOGY_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
