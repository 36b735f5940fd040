//! Command behaviour through `run` and through the installed binary.

use std::path::PathBuf;
use std::process::Command;

use gradet_cli::run;
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(std::iter::once("gradet").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{args:?}: {:?}", out.stderr);
    serde_json::from_str(out.stdout.as_deref().expect("a report")).unwrap()
}

#[test]
fn chromatic_of_the_four_cycle() {
    let r = ok_json(&["chromatic", "--graph", &data("c4.json")]);
    assert_eq!(r["command"], "chromatic");
    assert_eq!(r["status"], "ok");
    assert_eq!(r["result"]["chromatic"], serde_json::json!([0, -3, 6, -4, 1]));
    assert_eq!(r["result"]["reduced"], serde_json::json!([0, 3, -3, 1]));
    assert_eq!(r["result"]["multidegree"], serde_json::json!([1, 3, 3]));
    assert_eq!(r["engine"], serde_json::json!(["combinatorial"]));
}

#[test]
fn edge_lists_are_accepted() {
    let r = ok_json(&["chromatic", "--graph", &data("p3.edges")]);
    assert_eq!(r["result"]["chromatic"], serde_json::json!([0, 1, -2, 1]));
}

#[test]
fn numeric_multidegree_of_the_four_cycle() {
    let r = ok_json(&["multidegree", "--graph", &data("c4.json"), "--map", "restricted"]);
    assert_eq!(r["result"]["entries"], serde_json::json!([1, 3, 3]));
    assert_eq!(r["result"]["map"], "restricted-gradient");
    assert_eq!(r["engine"], serde_json::json!(["numeric"]));
    // The master seed, then the three derived ones.
    assert_eq!(r["seeds"].as_array().unwrap().len(), 4);
    assert_eq!(r["seeds"][0], 1729);
    let combinatorial = ok_json(&["multidegree", "--graph", &data("c4.json"), "--engine", "combinatorial"]);
    assert_eq!(combinatorial["result"]["entries"], r["result"]["entries"]);
}

#[test]
fn dump_poly_prints_the_restricted_determinant() {
    let r = ok_json(&["multidegree", "--n", "2", "--kind", "diagonal", "--dump-poly"]);
    assert_eq!(r["result"]["entries"], serde_json::json!([1, 1]));
    assert_eq!(r["result"]["determinant"], "1*x0*x1");
}

#[test]
fn euler_of_the_full_two_by_two_space() {
    let r = ok_json(&["euler", "--n", "2", "--kind", "general"]);
    assert_eq!(r["result"]["hypersurface"], 4);
    assert_eq!(r["result"]["complement"], 0);
}

#[test]
fn conic_counts() {
    assert_eq!(ok_json(&["phi", "--n", "3", "--codim", "4"])["result"]["count"], 2);
    let r = ok_json(&["quadric-count", "--n", "3", "--points", "0"]);
    assert_eq!(r["result"]["count"], 1);
    assert_eq!(r["result"]["tangent_hyperplanes"], 5);
}

#[test]
fn triangle_model_degree_carries_the_formula() {
    let dir = std::env::temp_dir().join(format!("gradet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c3.json");
    std::fs::write(&path, r#"{"vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]]}"#).unwrap();
    let r = ok_json(&["model-degree", "--graph", path.to_str().unwrap()]);
    assert_eq!(r["result"]["count"], 1);
    assert_eq!(r["result"]["formula"], "1");
    assert_eq!(r["result"]["agrees_with_formula"], true);
    let ml = ok_json(&["ml-degree", "--graph", path.to_str().unwrap()]);
    assert_eq!(ml["result"]["count"], 1);
    let refs = ml["conjecture_refs"].as_array().unwrap();
    assert_eq!(refs[0]["status"], "conjectural");
    assert_eq!(refs[0]["expected"], "1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mle_fit_from_samples_and_from_a_covariance() {
    let r = ok_json(&["mle-fit", "--graph", &data("p3.edges"), "--samples", &data("samples.csv")]);
    assert_eq!(r["status"], "ok");
    assert!(r["result"]["count"].as_u64().unwrap() >= 1);
    // The saturated model reproduces the sample covariance.
    let cov = "[[2.0, 0.5, 0.1], [0.5, 1.0, 0.2], [0.1, 0.2, 1.5]]";
    let full = ok_json(&["mle-fit", "--n", "3", "--kind", "symmetric", "--covariance", cov]);
    assert_eq!(full["result"]["count"], 1);
    let sigma = &full["result"]["maximizer"];
    assert!((sigma[0][1].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((sigma[2][2].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["frobnicate"],
        vec!["chromatic"],
        vec!["chromatic", "--graph", "/nonexistent/graph.json"],
        vec!["chromatic", "--graph", &data("loop.json")],
        vec!["multidegree", "--graph", &data("two_components.json")],
        vec!["multidegree", "--n", "2", "--graph", &data("c4.json")],
        vec!["mle-fit", "--n", "2", "--covariance", "[[1, 2], [3, 4]]"],
        vec!["mle-fit", "--n", "2", "--covariance", "[[1, 0], [0"],
    ] {
        let out = run(std::iter::once("gradet").chain(args.iter().copied()));
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_none(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_goes_to_stdout() {
    let out = run(["gradet", "--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.unwrap().contains("verify"));
}

#[test]
fn compact_output_is_one_line() {
    let out = run(["gradet", "--json", "chromatic", "--graph", &data("c4.json")]);
    assert_eq!(out.stdout.unwrap().lines().count(), 1);
}

#[test]
fn binary_separates_results_from_diagnostics() {
    let bin = env!("CARGO_BIN_EXE_gradet");
    let ok = Command::new(bin).args(["chromatic", "--graph", &data("c4.json")]).output().unwrap();
    assert!(ok.status.success());
    assert!(ok.stderr.is_empty());
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["result"]["reduced"], serde_json::json!([0, 3, -3, 1]));

    let bad = Command::new(bin).args(["chromatic", "--graph", &data("loop.json")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("loop"));
}

#[test]
fn timings_appear_only_on_request() {
    let plain = ok_json(&["chromatic", "--graph", &data("c4.json")]);
    assert!(plain.get("timings").is_none());
    let timed = ok_json(&["--timings", "chromatic", "--graph", &data("c4.json")]);
    assert!(timed["timings"]["total_s"].as_f64().is_some());
}
