use std::process::{Command, Output};

use serde_json::Value;

fn wfusion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfusion"))
        .args(args)
        .env_remove("WFUSION_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn spr_labels() {
    let out = wfusion(&["walg", "irr", "--family", "spr", "--n", "2", "--r", "2", "--format", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["schema"], "wfusion.w-labels/v1");
    assert_eq!(v["labels"].as_array().unwrap().len(), 6);
    assert_eq!(v["central_charge"], "3/2");
}

#[test]
fn level_zero_table() {
    let out = wfusion(&["fusion", "dump", "--algebra", "sl2", "--level", "0"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["basis"], serde_json::json!(["[0,0]"]));
    assert_eq!(v["constants"], serde_json::json!([[0, 0, [[0, 1]]]]));
}

#[test]
fn fusion_table_round_trips() {
    let out = wfusion(&["fusion", "dump", "--algebra", "sl3", "--level", "2"]);
    let ring = wfusion_core::FusionRing::from_json_value(json_of(&out)).unwrap();
    let direct = wfusion_core::fusion::fusion_ring_affine(3, 2).unwrap();
    assert_eq!(&ring, direct.as_ref());
}

#[test]
fn exit_codes() {
    assert_eq!(wfusion(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(wfusion(&["walg", "irr", "--family", "sb", "--n", "3"]).status.code(), Some(2));
    let bad = wfusion(&["walg", "irr", "--family", "sb", "--n", "3", "--r", "1"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("gcd(n-1, r+1) = 1"));
    let bad = wfusion(&["sicoh", "--lambda", "1", "--mu", "-1", "--norm", "0", "--maxweight", "2"]);
    assert_eq!(bad.status.code(), Some(3));
    let bad = wfusion(&["char", "--family", "sb", "--n", "2", "--r", "2", "--lambda", "[2,0]", "--a", "1"]);
    assert_eq!(bad.status.code(), Some(3));
    let bad = wfusion(&["weights", "--algebra", "so5", "--level", "1"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let args = ["walg", "fusion", "--family", "sb", "--n", "3", "--r", "2", "--format", "json"];
    let a = wfusion(&args);
    let b = wfusion(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn quick_suite_passes() {
    let out = wfusion(&["verify", "--suite", "all", "--quick"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert_eq!(text.matches("[PASS]").count(), 10);
}

#[test]
fn selected_criteria_as_json() {
    let out = wfusion(&["verify", "--suite", "2,6", "--format", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(wfusion(&["verify", "--suite", "12"]).status.code(), Some(3));
}

#[test]
fn levelrank_report() {
    let out = wfusion(&["levelrank", "verify", "--n", "2", "--m", "4"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["branching"]["total"], 20);
}

#[test]
fn hrel_map_json() {
    let out = wfusion(&["walg", "hrelmap", "--family", "spr", "--n", "2", "--r", "2", "--xi", "0", "--format", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["target"], "sb");
    let images = v["images"].as_array().unwrap();
    assert_eq!(images.len(), 6);
    assert!(images.iter().any(|i| i["target"].is_null()));
}

#[test]
fn smatrix_csv_and_json() {
    let out = wfusion(&["walg", "smatrix", "--family", "spr", "--n", "2", "--r", "2", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1 + 36);
    let out = wfusion(&["walg", "smatrix", "--family", "sb", "--n", "2", "--r", "2", "--format", "json"]);
    let v = json_of(&out);
    let re: f64 = v["re"][0][0].as_str().unwrap().parse().unwrap();
    assert!((re - 0.5).abs() < 1e-12);
}

#[test]
fn character_json() {
    let out = wfusion(&[
        "char", "--family", "prinW", "--n", "2", "--r", "2", "--lambda", "[2,0]", "--order", "6", "--format", "json",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["schema"], "wfusion.qseries/v1");
    assert_eq!(v["terms"][0], serde_json::json!(["-1/48", "0", "1"]));
}

#[test]
fn sicoh_json() {
    let out = wfusion(&["sicoh", "--lambda", "-3/2", "--mu", "3/2", "--norm", "1/2", "--maxweight", "3", "--format", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let total: u64 = v["cohomology"].as_array().unwrap().iter().map(|e| e[2].as_u64().unwrap()).sum();
    assert_eq!(total, 1);
}

#[test]
fn cache_dir_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("table.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_wfusion"))
            .args(["fusion", "dump", "--algebra", "sl2", "--level", "3", "--output"])
            .arg(&out_path)
            .env("WFUSION_CACHE_DIR", dir.path().join("cache"))
            .output()
            .unwrap()
    };
    assert!(run().status.success());
    let cached = dir.path().join("cache").join("fusion-sl2-level3.json");
    assert!(cached.exists());
    let first = std::fs::read(&out_path).unwrap();
    assert!(run().status.success());
    assert_eq!(std::fs::read(&out_path).unwrap(), first);
    assert_eq!(std::fs::read(&cached).unwrap(), first);
}

#[test]
fn jobs_flag_is_accepted() {
    let out = wfusion(&["--jobs", "1", "walg", "irr", "--family", "sb", "--n", "2", "--r", "3"]);
    assert!(out.status.success());
}
