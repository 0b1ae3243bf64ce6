use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gdalg-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn gdalg(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_gdalg")).args(args).output().unwrap();
    let body: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), body)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

#[test]
fn worked_example_round_trip() {
    let dir = scratch("example");
    let (code, body) = gdalg(&["construct", "sl2-example", "--out-dir", p(&dir)]);
    assert_eq!(code, 0, "{body}");
    assert_eq!(body["status"], "passed");
    let (alg, op, prod) = (dir.join("sl2.json"), dir.join("sl2_operator.json"), dir.join("sl2_product.json"));

    for args in [
        vec!["verify", "lie", p(&alg)],
        vec!["verify", "rmatrix", p(&alg), p(&op)],
        vec!["verify", "strong", p(&alg), p(&op)],
        vec!["verify", "novikov", p(&prod)],
        vec!["verify", "gd", p(&alg), p(&prod)],
        vec!["affine", "jacobi", p(&alg), p(&prod), "--window", "2"],
    ] {
        let (code, body) = gdalg(&args);
        assert_eq!(code, 0, "{args:?}: {body}");
        assert_eq!(body["exit_code"], 0);
    }

    let rebuilt = dir.join("rebuilt.json");
    assert_eq!(gdalg(&["build", "novikov", p(&alg), p(&op), "--out", p(&rebuilt)]).0, 0);
    assert_eq!(std::fs::read_to_string(&rebuilt).unwrap(), std::fs::read_to_string(&prod).unwrap());
}

#[test]
fn zero_operator_gives_zero_product() {
    let dir = scratch("zero");
    let alg = dir.join("aff2.json");
    assert_eq!(gdalg(&["catalog", "aff2", "--out", p(&alg)]).0, 0);
    let op = dir.join("zero.json");
    write(
        &op,
        &json!({"field": {"type": "Q"}, "dim": 2, "convention": "T(b_j)=sum_i M[i][j] b_i",
                "matrix": [["0", "0"], ["0", "0"]]}),
    );
    let out = dir.join("product.json");
    assert_eq!(gdalg(&["build", "novikov", p(&alg), p(&op), "--out", p(&out)]).0, 0);
    let product: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(product["products"], json!([]));
}

#[test]
fn failing_check_exits_one_with_witness() {
    let dir = scratch("failing");
    assert_eq!(gdalg(&["construct", "sl2-example", "--out-dir", p(&dir)]).0, 0);
    let prod = dir.join("sl2_product.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&prod).unwrap()).unwrap();
    v["products"].as_array_mut().unwrap().push(json!({"i": 0, "j": 0, "terms": [{"k": 0, "c": "1"}]}));
    let bad = dir.join("bad.json");
    write(&bad, &v);
    let (code, body) = gdalg(&["verify", "gd", p(&dir.join("sl2.json")), p(&bad)]);
    assert_eq!(code, 1, "{body}");
    assert_eq!(body["status"], "failed");
    assert!(!body["failed_axioms"].as_array().unwrap().is_empty());
    assert!(body["report"]["witness_count"].as_u64().unwrap() > 0);

    let (code, body) = gdalg(&["affine", "jacobi", p(&dir.join("sl2.json")), p(&bad)]);
    assert_eq!(code, 1, "{body}");
}

#[test]
fn malformed_input_exits_two_with_path() {
    let dir = scratch("schema");
    let alg = dir.join("bad.json");
    write(
        &alg,
        &json!({"field": {"type": "Q"}, "dim": 2, "basis": ["x", "y"],
                "brackets": [{"i": 1, "j": 0, "terms": [{"k": 0, "c": "1"}]}]}),
    );
    let (code, body) = gdalg(&["verify", "lie", p(&alg)]);
    assert_eq!(code, 2, "{body}");
    assert_eq!(body["status"], "error");
    assert!(body["error"]["message"].as_str().unwrap().contains("$.brackets"), "{body}");

    std::fs::write(&alg, "{ not json").unwrap();
    assert_eq!(gdalg(&["verify", "lie", p(&alg)]).0, 2);
    assert_eq!(gdalg(&["verify", "lie", p(&dir.join("missing.json"))]).0, 2);
}

#[test]
fn search_failure_exits_three() {
    let dir = scratch("search");
    let alg = dir.join("so3.json");
    assert_eq!(gdalg(&["catalog", "so3", "--out", p(&alg)]).0, 0);
    let (code, body) = gdalg(&["construct", "existence", p(&alg), "--budget", "50"]);
    assert_eq!(code, 3, "{body}");
    assert_eq!(body["status"], "not_found");
}

#[test]
fn enumeration_counts_match_golden() {
    let dir = scratch("enumerate");
    let alg = dir.join("aff2.json");
    assert_eq!(gdalg(&["catalog", "aff2", "--field", "gf:2", "--out", p(&alg)]).0, 0);
    let (code, body) = gdalg(&["enumerate", p(&alg)]);
    assert_eq!(code, 0, "{body}");
    let golden: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/aff2_gf2_rmatrix_strong.json"))
            .unwrap(),
    )
    .unwrap();
    assert_eq!(body["count"], golden["count"], "{body}");
    assert_eq!(body["sha256"], golden["sha256"], "{body}");
}

#[test]
fn cybe_commands_on_zero_tensor() {
    let dir = scratch("cybe");
    let alg = dir.join("so3.json");
    assert_eq!(gdalg(&["catalog", "so3", "--field", "gf:3", "--out", p(&alg)]).0, 0);
    let tensor = dir.join("zero.json");
    let zero = vec![vec!["0"; 3]; 3];
    write(&tensor, &json!({"field": {"type": "GF", "p": 3}, "dim": 3, "r": zero}));
    for args in [
        vec!["cybe", "defect", p(&alg), p(&tensor)],
        vec!["cybe", "rep-defect", p(&alg), p(&tensor)],
        vec!["cybe", "tmap", p(&tensor)],
    ] {
        let (code, body) = gdalg(&args);
        assert_eq!(code, 0, "{args:?}: {body}");
    }
}
