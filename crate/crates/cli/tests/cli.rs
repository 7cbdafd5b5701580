use std::path::Path;
use std::process::{Command, Output};

use cluster_reduce::algebra::BirationalMap;
use cluster_reduce::fixtures::{fixture, fixtures, seven_node, Fixture};
use cluster_reduce::geometry::ReducedSystemRepr;
use cluster_reduce::quiver::{cluster_map, detect_period};
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster-reduce"))
        .args(args)
        .env_remove("CLUSTER_REDUCE_PRECISION")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixture_list_and_documents_round_trip() {
    let list = json_of(&cli(&["fixtures"]));
    assert_eq!(list["schema"], "v1");
    let names: Vec<&str> = list["fixtures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), fixtures().len());
    for name in names {
        let doc = json_of(&cli(&["fixtures", name]));
        let parsed: Fixture = serde_json::from_value(doc).unwrap();
        assert_eq!(parsed, fixture(name).unwrap());
    }
}

#[test]
fn quiver_periods_use_one_based_nodes() {
    let doc = json_of(&cli(&["period", "--matrix", "fixture:five-node-1-2"]));
    assert_eq!(doc["period"], 2);
    assert_eq!(doc["mutation_sequence"], serde_json::json!([1, 2]));
    let doc = json_of(&cli(&["period", "--matrix", "fixture:seven-node", "--max-m", "8"]));
    assert_eq!(doc["period"], 1);
}

#[test]
fn map_document_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let phi_path = dir.path().join("phi.json");
    let out = cli(&["map", "--matrix", "fixture:seven-node", "--out", path_str(&phi_path)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&phi_path).unwrap();
    let phi: BirationalMap = serde_json::from_str(&text).unwrap();
    let b = seven_node();
    assert_eq!(phi, cluster_map(&b, &detect_period(&b, 8).unwrap().unwrap()).unwrap());
    assert_eq!(serde_json::to_string_pretty(&phi).unwrap() + "\n", text);
}

#[test]
fn reduce_itinerary_and_verify_chain() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let (phi, hat, t1) = (p("phi.json"), p("hat.json"), p("t1.json"));
    assert!(cli(&["map", "--matrix", "fixture:seven-node", "--out", &phi]).status.success());
    for (structure, out) in [("fixture:seven-node", &hat), ("fixture:c7-pair#1", &t1)] {
        let o = cli(&["reduce", "--map", &phi, "--structure", structure, "--align", "fixture:seven-node-y", "--out", out]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(&hat).unwrap();
    let repr: ReducedSystemRepr = serde_json::from_str(&text).unwrap();
    assert!(repr.verified);
    assert_eq!(
        BirationalMap::parse(&repr.psi, None).unwrap(),
        BirationalMap::parse(&["y2", "(1+y2)/y1"], None).unwrap()
    );
    assert_eq!(serde_json::to_string_pretty(&repr).unwrap() + "\n", text);

    let it = json_of(&cli(&[
        "itinerary", "--map", &phi, "--submersions", &hat, &t1, "--start", "2,3/2,1,5,7,1/3,2", "--steps", "25",
    ]));
    assert_eq!(it["summaries"][0]["period"], 5);
    assert_eq!(it["summaries"][1]["period"], 10);

    let v = json_of(&cli(&[
        "verify", "--map", &phi, "--presymplectic", "fixture:seven-node", "--poisson", "fixture:c7-pair#1",
        "fixture:c7-pair#2", "--system", &t1, "--first-integral", &t1, "--period", "10",
    ]));
    assert_eq!(v["verified"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);

    let psi_period = json_of(&cli(&["period", "--map", &hat, "--max", "12"]));
    assert_eq!(psi_period["period"]["kind"], "global");
    assert_eq!(psi_period["period"]["period"], 5);
}

#[test]
fn flag_with_map_verifies_every_chain() {
    let doc = json_of(&cli(&[
        "flag", "--structures", "fixture:c7-pair#2", "fixture:seven-node", "fixture:c7-pair#1", "--kinds",
        "casimir,null,casimir", "--align", "fixture:seven-node-y", "--map", "fixture:seven-node",
    ]));
    let order: Vec<u64> = doc["levels"].as_array().unwrap().iter().map(|l| l["structure"].as_u64().unwrap()).collect();
    assert_eq!(order, vec![2, 3, 1]);
    assert!(doc["chains"].as_array().unwrap().iter().all(|c| c["verified"] == true));
    assert_eq!(doc["reduced"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    assert_eq!(cli(&["period", "--matrix", "missing.json"]).status.code(), Some(3));
    assert_eq!(cli(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(cli(&["period"]).status.code(), Some(3));
    assert_eq!(cli(&["orbit", "--map", "fixture:somos5", "--start", "1,x,1,1,1"]).status.code(), Some(3));
    assert_eq!(cli(&["fixtures", "nope"]).status.code(), Some(3));

    let failed = cli(&["verify", "--map", "fixture:somos5", "--poisson", "fixture:somos5"]);
    assert_eq!(failed.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&failed.stdout).unwrap();
    assert_eq!(doc["verified"], false);

    let b1 = dir.path().join("b1.json");
    let b2 = dir.path().join("b2.json");
    std::fs::write(&b1, "[[0,1,0,0],[-1,0,0,0],[0,0,0,0],[0,0,0,0]]").unwrap();
    std::fs::write(&b2, "[[0,0,0,0],[0,0,0,0],[0,0,0,1],[0,0,-1,0]]").unwrap();
    let out = cli(&["flag", "--structures", path_str(&b1), path_str(&b2), "--kinds", "null,null"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("structures 1 and 2"));
}

#[test]
fn precision_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cluster-reduce"))
        .args(["orbit", "--map", "fixture:somos5", "--start", "1,1,1,1,1", "--steps", "2", "--mode", "float"])
        .env("CLUSTER_REDUCE_PRECISION", "30")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["mode"]["digits"], 30);
    let doc = json_of(&cli(&["orbit", "--map", "fixture:somos5", "--start", "1,1,1,1,1", "--steps", "2", "--mode", "float"]));
    assert_eq!(doc["mode"]["digits"], 64);
}

#[test]
fn pipeline_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "pipeline", "--matrix", "fixture:somos5", "--poisson", "fixture:somos5-poisson", "--align", "fixture:somos5-y",
        "--seed", "7", "--output-dir", path_str(dir.path()),
    ];
    let first = cli(&args);
    let second = cli(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["schema"], "v1");
    assert_eq!(report["config"]["seed"], 7);
    assert_eq!(std::fs::read(dir.path().join("report.json")).unwrap(), first.stdout);
    let text = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.starts_with("period: m = 1"));
}
