use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobstrat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn enumerate_default_regime() {
    let v = json(&["enumerate", "--d", "0"]);
    let polys = v["polygons"].as_array().unwrap();
    assert_eq!(polys.len(), 4);
    let mut labels: Vec<&str> = polys.iter().map(|p| p["label"].as_str().unwrap()).collect();
    labels.sort();
    assert_eq!(labels, ["Psi1", "Psi2", "Psi3", "Psi4"]);
    assert_eq!(
        polys[1]["vertices"],
        serde_json::json!([[0, 0], [1, 1], [3, 0]])
    );
}

#[test]
fn enumerate_other_regime_and_negative_degree() {
    let v = json(&["enumerate", "--p", "2", "--r", "2", "--d", "0", "--verify"]);
    assert_eq!(v["polygons"].as_array().unwrap().len(), 1);
    assert!(v["polygons"][0]["label"].is_null());
    assert_eq!(v["verify"], "PASS");

    let v = json(&["enumerate", "--d", "-4"]);
    assert_eq!(v["params"]["d"], -4);
    assert_eq!(v["polygons"].as_array().unwrap().len(), 4);
}

#[test]
fn parameter_errors_exit_2() {
    for args in [
        &["enumerate", "--g", "1"][..],
        &["enumerate", "--p", "4"],
        &["localmodel", "--q", "5"],
        &["localmodel", "--q", "3", "--M", "2"],
        &["certify", "--g", "1"],
        &["dual", "--vertices", "[[0,0],[1,0],[2,1]]"],
        &["strata", "--d", "x"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn localmodel_census() {
    let v = json(&["localmodel", "--q", "3"]);
    assert_eq!(
        v["census"],
        serde_json::json!({"Psi2": 9, "Psi3": 3, "Psi4": 1})
    );
    assert_eq!(v["claims"], "PASS");
    assert_eq!(v["points"].as_array().unwrap().len(), 13);
    assert_eq!(v["points"][0]["point"], serde_json::json!([[1], [0], [0]]));

    let v = json(&["localmodel", "--q", "9", "--verify"]);
    assert_eq!(
        v["census"],
        serde_json::json!({"Psi2": 81, "Psi3": 9, "Psi4": 1})
    );
    assert_eq!(v["verify"], "PASS");
}

#[test]
fn strata_tables() {
    for args in [
        &["strata", "--d", "0"][..],
        &["strata", "--d", "7"],
        &["strata"],
    ] {
        let v = json(args);
        let dims: Vec<i64> = v["strata"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["stratum_dim"].as_i64().unwrap())
            .collect();
        assert_eq!(dims, [5, 5, 4, 2]);
        assert_eq!(v["codimension"], 5);
        assert_eq!(v["top_components"], 2);
    }
    assert_eq!(json(&["strata"])["d"], 0);
    let text = run(&["strata", "--verify"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8(text.stdout)
        .unwrap()
        .contains("codimension of destabilized locus = 5"));
}

#[test]
fn certificates() {
    let v = json(&["certify", "--d", "0", "--t", "-1", "--verify"]);
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    for c in certs {
        assert_eq!(c["verdict"], true);
        assert_eq!(
            c["witnesses"][0]["bound"],
            serde_json::json!({"num": -1, "den": 3})
        );
        assert_eq!(
            c["witnesses"][1]["bound"],
            serde_json::json!({"num": 0, "den": 1})
        );
    }
    assert_eq!(
        json(&["certify", "--d", "4", "--t", "3"])["certificates"][1]["verdict"],
        true
    );
    // deg L = d + 1 is too large for the embedding argument
    assert_eq!(
        run(&["certify", "--d", "0", "--t", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn duality() {
    let v = json(&["dual", "--d", "3", "--verify"]);
    assert_eq!(v["verify"], "PASS");
    for pair in v["pairs"].as_array().unwrap() {
        let (l, dl) = (
            pair["label"].as_str().unwrap(),
            pair["dual_label"].as_str().unwrap(),
        );
        let swapped = match l {
            "Psi1" => "Psi2",
            "Psi2" => "Psi1",
            x => x,
        };
        assert_eq!(dl, swapped);
    }
    let v = json(&["dual", "--vertices", "[[0,0],[1,1],[3,0]]"]);
    assert_eq!(
        v["pairs"][0]["dual"],
        serde_json::json!([[0, 0], [2, 1], [3, 0]])
    );
    assert_eq!(v["pairs"][0]["dual_label"], "Psi2");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["enumerate", "--d", "2"][..],
        &["localmodel", "--q", "9"],
        &["strata", "--format", "json"],
        &["certify", "--d", "-3"],
        &["dual", "--format", "json"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
