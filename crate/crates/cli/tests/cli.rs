use std::process::{Command, Output};

fn tsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--json", "-", "--quiet"]);
    let o = tsv(&all);
    serde_json::from_str(&stdout(&o)).expect("one JSON object")
}

#[test]
fn verify_all_passes_on_u22() {
    let o = tsv(&["verify", "all", "--matroid", "catalog:U(2,2)"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS theorem2"));
    assert!(!text.contains("FAIL"));
    let report = json(&["verify", "all", "--matroid", "catalog:U(2,2)"]);
    assert_eq!(report["cohomology"]["dims"][1][1], 2);
    assert_eq!(report["strata"], 9);
    assert!(report["timing"].is_null());
}

#[test]
fn reports_are_byte_stable() {
    let args = ["verify", "all", "--matroid", "catalog:ex82", "--json", "-", "--quiet"];
    let a = tsv(&args);
    let b = tsv(&args);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["strata"], 12);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for name in ["offdiagonal_vanishing", "diagonal_whitney", "theorem2", "stratification", "product_behaviour"] {
        assert!(names.contains(&name), "{name} missing");
    }
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(tsv(&["info", "--matroid", "catalog:nope"]).status.code(), Some(2));
    assert_eq!(tsv(&["info", "--matroid", "/nonexistent/m.json"]).status.code(), Some(2));
    assert_eq!(tsv(&["info"]).status.code(), Some(2));
    assert_eq!(tsv(&["verify", "no_such_check", "--matroid", "catalog:U(1,1)"]).status.code(), Some(2));
}

#[test]
fn document_input_and_bad_document() {
    let dir = std::env::temp_dir().join(format!("tsv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("ex82.json");
    std::fs::write(&good, r#"{"name":"ex82","ground_set":["1","2","3"],"bases":[["1","3"],["2","3"]]}"#).unwrap();
    let info = json(&["info", "--matroid", good.to_str().unwrap()]);
    assert_eq!(info["whitney_numbers"], serde_json::json!([1, 2, 1]));
    assert_eq!(info["admissible_pairs"], 12);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","ground_set":["1"],"bases":[]}"#).unwrap();
    assert_eq!(tsv(&["info", "--matroid", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn size_guard() {
    let o = tsv(&["cohomology", "--matroid", "catalog:vamos"]);
    assert_eq!(o.status.code(), Some(2));
    let report = json(&["verify", "all", "--matroid", "catalog:vamos"]);
    let status =
        |name: &str| report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["status"].clone();
    assert_eq!(status("whitney_identity"), "pass");
    assert_eq!(status("offdiagonal_vanishing"), "skipped");
    assert_eq!(tsv(&["verify", "all", "--matroid", "catalog:vamos"]).status.code(), Some(0));
}

#[test]
fn dot_export() {
    let u11 = stdout(&tsv(&["export-dot", "--matroid", "catalog:U(1,1)"]));
    assert!(u11.starts_with("digraph"));
    assert_eq!(u11.matches("[label=").count(), 3);
    assert_eq!(u11.matches(" -> ").count(), 2);
    let u22 = stdout(&tsv(&["export-dot", "--matroid", "catalog:U(2,2)"]));
    assert_eq!(u22.matches("[label=").count(), 9);
    let ex82 = stdout(&tsv(&["export-dot", "--matroid", "catalog:ex82"]));
    for label in ["M(∅,∅)", "M(∅,123)", "M(13,123)", "M(23,123)", "M(3,3)", "M(2,12)"] {
        assert!(ex82.contains(&format!("\"{label}\"")), "{label}");
    }
}

#[test]
fn other_verbs() {
    let coh = json(&["cohomology", "--matroid", "catalog:ex82"]);
    assert_eq!(coh["cohomology"], serde_json::json!([[1, 0, 0], [0, 2, 0], [0, 0, 1]]));
    let sp = json(&["spectral", "--matroid", "catalog:U(2,2)", "--max-p", "1"]);
    assert_eq!(sp["pages"].as_array().unwrap().len(), 2);
    assert_eq!(sp["pages"][1]["e2"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>(), 2);
    let alg = json(&["algebra", "--matroid", "catalog:ex82"]);
    assert_eq!(alg["mobius_dims"], serde_json::json!([1, 2, 1]));
    assert_eq!(alg["theorem2"], true);
    let faces = json(&["faces", "--matroid", "catalog:U(1,1)"]);
    assert_eq!(faces["strata"].as_array().unwrap().len(), 3);
    let fan = json(&["fan", "--matroid", "catalog:U(2,2)"]);
    assert_eq!(fan["f_vector"], serde_json::json!([1, 5, 5]));
    let cat = json(&["catalog"]);
    assert!(cat["checks"].as_array().unwrap().len() == 11);
}
