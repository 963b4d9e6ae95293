use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use smcount_cli::{run, EXIT_CAP, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn smcount(args: &[&str]) -> (u8, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("smcount").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (u8, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, _) = smcount(&full);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn count_text_and_json() {
    let diag = fixture("diag.fml");
    let (code, out, _) = smcount(&["count", &diag]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("q^2 - q"), "{out}");
    let (code, v) = json(&["count", &diag]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["command"], "count");
    assert_eq!(v["theory"], "pure_set");
    assert_eq!(ints(&v["poly_coeffs"]), [0, -1, 1]);
    assert_eq!(v["poly_display"], "q^2 - q");
    assert_eq!((v["morley_rank"].as_i64(), v["morley_degree"].as_i64()), (Some(2), Some(1)));
    assert_eq!(v["threshold_q0"].as_i64(), Some(0));
    assert_eq!(v["leading_coefficient"].as_i64(), Some(1));
}

#[test]
fn pattern_flag_overrides_generic() {
    let f = fixture("twoexcl.fml");
    let (_, generic) = json(&["count", &f]);
    assert_eq!(ints(&generic["poly_coeffs"]), [-2, 1]);
    let (_, equal) = json(&["count", &f, "--pattern", "y1,y2"]);
    assert_eq!(ints(&equal["poly_coeffs"]), [-1, 1]);
    let (_, selected) = json(&["partition", &f, "--pattern", "y1,y2"]);
    assert_eq!(selected["partition"].as_array().unwrap().len(), 1);
}

#[test]
fn partition_of_two_exclusions() {
    let (code, v) = json(&["partition", &fixture("twoexcl.fml")]);
    assert_eq!(code, EXIT_OK);
    let entries: Vec<(String, Vec<i64>)> = v["partition"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["pattern"].as_str().unwrap().to_owned(), ints(&e["poly_coeffs"])))
        .collect();
    assert_eq!(
        entries,
        [("y1 = y2".to_owned(), vec![-1, 1]), ("y1 != y2".to_owned(), vec![-2, 1])]
    );
}

#[test]
fn verify_matches_oracle() {
    let (code, v) = json(&["verify", &fixture("diag.fml"), "--sizes", "3,4,5,6"]);
    assert_eq!(code, EXIT_OK);
    let oracle = v["oracle"].as_array().unwrap();
    let actual: Vec<i64> = oracle.iter().map(|e| e["actual"].as_i64().unwrap()).collect();
    assert_eq!(actual, [6, 12, 20, 30]);
    assert!(oracle.iter().all(|e| e["match"] == true && e["expected"] == e["actual"]));
}

#[test]
fn verify_skips_sizes_below_threshold() {
    let (code, v) = json(&["verify", &fixture("twoexcl.fml"), "--sizes", "1,3"]);
    assert_eq!(code, EXIT_OK);
    let oracle = v["oracle"].as_array().unwrap();
    assert!(oracle[0]["skipped"].is_string());
    assert_eq!(oracle[1]["actual"].as_i64(), Some(1));
}

#[test]
fn verify_graphs_and_correspondences() {
    let (code, v) = json(&["verify", &fixture("two_planes.fml"), "--sizes", "4,8", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    let oracle = v["oracle"].as_array().unwrap();
    assert_eq!(oracle.len(), 4);
    assert!(oracle.iter().all(|e| e["match"] == true && e["violations"].as_i64() == Some(0)));

    let (code, v) = json(&["verify", &fixture("cosets.fml"), "--sizes", "4,8"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["oracle"].as_array().unwrap().len(), 6);
}

#[test]
fn unimod_report() {
    let (code, v) = json(&["unimod", &fixture("cosets.fml")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!((v["k"].as_i64(), v["ell"].as_i64()), (Some(2), Some(2)));
    assert_eq!(ints(&v["Z"]["poly_coeffs"]), [0, 2]);
    assert_eq!(ints(&v["X"]["poly_coeffs"]), [0, 1]);
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["k_equals_ell"], true);
    assert_eq!(v["generic_surrogate"], true);

    let (code, _, err) = smcount(&["unimod", &fixture("infinite.fml")]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error[rejected]:") && err.contains("fibers not finite"), "{err}");
}

#[test]
fn regularity_cases() {
    let (code, v) = json(&["regularity", &fixture("complement.fml")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["case"], "dense");
    assert_eq!(ints(&v["R_coeffs"]), [0, 1]);

    let planes = fixture("two_planes.fml");
    let (code, _, err) = smcount(&["regularity", &planes]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("split"), "{err}");
    let (code, v) = json(&["regularity", &planes, "--split"]);
    assert_eq!(code, EXIT_OK);
    let cases: Vec<&str> = v["pieces"].as_array().unwrap().iter().map(|p| p["case"].as_str().unwrap()).collect();
    assert_eq!(cases, ["dense", "sparse"]);
}

#[test]
fn decompose_lists_disjoint_cells() {
    let (code, v) = json(&["decompose", &fixture("twoexcl.fml")]);
    assert_eq!(code, EXIT_OK);
    let cells = v["cells"].as_array().unwrap();
    let total: i64 = cells.iter().map(|c| ints(&c["poly_coeffs"]).first().copied().unwrap_or(0)).sum();
    assert_eq!(total, -2);
    assert!(cells.iter().all(|c| c["rank"].as_i64() == Some(1)));
}

#[test]
fn json_round_trips_exactly() {
    // 8 distinct elements: q(q-1)...(q-7)
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("distinct.fml");
    let vars: Vec<String> = (0..8).map(|i| format!("x{i}")).collect();
    let mut atoms = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            atoms.push(format!("x{i} != x{j}"));
        }
    }
    std::fs::write(&path, format!("theory pure_set\nvar {}; {}\n", vars.join(", "), atoms.join(" & "))).unwrap();
    let path = path.display().to_string();
    let (code, out, _) = smcount(&["count", &path, "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap(), out.trim_end());
    assert_eq!(
        ints(&v["poly_coeffs"]),
        [0, -5040, 13068, -13132, 6769, -1960, 322, -28, 1]
    );
}

#[test]
fn errors_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fml");
    std::fs::write(&bad, "theory pure_set\nvar x; x = \n").unwrap();
    let (code, _, err) = smcount(&["count", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error[parse]:"), "{err}");
    assert_eq!(err.lines().count(), 1);

    let (code, v) = json(&["count", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert_eq!(v["error"], "parse");

    let (code, _, err) = smcount(&["count", "/nonexistent.fml"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error[io]:"));

    assert_eq!(smcount(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(smcount(&["verify", &fixture("diag.fml")]).0, EXIT_USAGE);
    assert_eq!(smcount(&["--help"]).0, EXIT_OK);

    let space = dir.path().join("space.fml");
    std::fs::write(&space, "theory vector_space p=2\nvar x, y, z; true\n").unwrap();
    let (code, _, err) = smcount(&["verify", space.to_str().unwrap(), "--sizes", "1048576"]);
    assert_eq!(code, EXIT_CAP);
    assert!(err.starts_with("error[budget_exceeded]:"), "{err}");
    let (code, _, _) = smcount(&["verify", space.to_str().unwrap(), "--sizes", "6"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn binary_reports_cap_through_exit_status() {
    let status = Command::new(env!("CARGO_BIN_EXE_smcount"))
        .args(["count", &fixture("nested.fml")])
        .env("SMCOUNT_CELL_CAP", "0")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_CAP as i32));
    assert!(String::from_utf8_lossy(&status.stderr).starts_with("error[cap_exceeded]"));

    let ok = Command::new(env!("CARGO_BIN_EXE_smcount"))
        .args(["verify", &fixture("diag.fml"), "--sizes", "3,4,5,6"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK as i32));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("all match"));
}
