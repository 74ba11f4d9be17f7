use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn kadjoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kadjoint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn malformed_inputs_exit_2_without_panicking() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/malformed");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = kadjoint(&["lattice", "--input", path.to_str().unwrap()]);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{}: {stderr}", path.display());
        assert!(
            stderr.starts_with("error: invalid `input"),
            "{}: {stderr}",
            path.display()
        );
        assert!(!stderr.contains("panicked"));
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn parameter_errors_exit_2() {
    let b4 = data("b4.json");
    let b4 = b4.to_str().unwrap();
    for (args, field) in [
        (vec!["adjoint", "--input", b4, "--k", "5"], "`k`"),
        (
            vec!["verify-equivalence", "--input", b4, "--k", "2"],
            "`seed`",
        ),
        (
            vec![
                "verify-equivalence",
                "--input",
                b4,
                "--k",
                "2",
                "--seed",
                "1",
                "--bound",
                "0",
            ],
            "`bound`",
        ),
        (
            vec!["stratum", "--input", b4, "--subspace", b4],
            "`subspace",
        ),
        (
            vec!["stratum", "--input", b4, "--subspace", "/nonexistent.json"],
            "`subspace`",
        ),
        (vec!["lattice", "--input", "/nonexistent.json"], "`input`"),
    ] {
        let out = kadjoint(&args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {stderr}");
        assert!(stderr.contains(field), "{args:?}: {stderr}");
    }

    let diag = data("diagonal_plane.json");
    let out = kadjoint(&[
        "matroid",
        "--input",
        b4,
        "--subspace",
        diag.to_str().unwrap(),
        "--nbc-order",
        "1,1,2,3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`nbc-order`"));
}

#[test]
fn chain_budget_is_an_input_error_for_single_subspaces() {
    let out = kadjoint(&[
        "stratum",
        "--input",
        data("b4.json").to_str().unwrap(),
        "--subspace",
        data("diagonal_plane.json").to_str().unwrap(),
        "--chain-cap",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`chain-cap`"));
}

#[test]
fn adjoint_of_b4_is_boolean() {
    let out = kadjoint(&[
        "adjoint",
        "--input",
        data("b4.json").to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["dim"], 6);
    let hs = v["hyperplanes"].as_array().unwrap();
    assert_eq!(hs.len(), 6);
    for h in hs {
        let nonzero: Vec<&Value> = h["coeffs"]
            .as_object()
            .unwrap()
            .values()
            .filter(|c| *c != "0")
            .collect();
        assert_eq!(nonzero, vec!["1"]);
    }
}

#[test]
fn boolean_self_check() {
    let out = kadjoint(&["boolean", "--n", "5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["checks"][0]["dim"], 10);
}

#[test]
fn stratum_and_matroid_of_the_diagonal_plane() {
    let b4 = data("b4.json");
    let diag = data("diagonal_plane.json");
    let args = [
        "--input",
        b4.to_str().unwrap(),
        "--subspace",
        diag.to_str().unwrap(),
    ];

    let out = kadjoint(&[&["stratum"], &args[..]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(
        v["plucker"],
        serde_json::json!(["1", "0", "1", "-1", "0", "1"])
    );
    assert_eq!(v["stratum_rank"], 2);
    assert_eq!(v["schubert"].as_object().unwrap().len(), 24);
    assert_eq!(v["l_lower"].as_array().unwrap().len(), 4);

    let out = kadjoint(&[&["matroid"], &args[..]].concat());
    let v = json_of(&out);
    assert_eq!(v["I"], serde_json::json!([1, 4, 4]));
    assert_eq!(v["I_restricted"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["parallel_classes"], serde_json::json!([[1, 3], [2, 4]]));
    assert_eq!(v["nbc"], serde_json::json!([1, 2, 1]));
}

#[test]
fn product_formula_and_tensor() {
    let b2 = data("b2.json");
    let b2 = b2.to_str().unwrap();
    let out = kadjoint(&["product", "--input", b2, "--other", b2, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["equal"], true);
    let out = kadjoint(&["tensor", "--input", b2, "--other", b2]);
    assert_eq!(json_of(&out)["hyperplanes"].as_array().unwrap().len(), 4);
}

#[test]
fn verification_commands_pass_and_are_reproducible() {
    let b4 = data("b4.json");
    let args = [
        "--input",
        b4.to_str().unwrap(),
        "--k",
        "2",
        "--samples",
        "200",
        "--seed",
        "1",
    ];
    let first = kadjoint(&[&["verify-equivalence"], &args[..]].concat());
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let v = json_of(&first);
    assert_eq!(v["violations"], serde_json::json!([]));
    assert_eq!(v["partitions"]["identical"], true);
    let second = kadjoint(&[&["verify-equivalence"], &args[..]].concat());
    assert_eq!(first.stdout, second.stdout);

    let mono = kadjoint(&[&["verify-monotonicity"], &args[..]].concat());
    assert_eq!(mono.status.code(), Some(0));
    assert_eq!(json_of(&mono)["violations"], serde_json::json!([]));
}
