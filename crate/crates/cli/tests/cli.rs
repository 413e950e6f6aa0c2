use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn frolicher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frolicher")).args(args).output().expect("the binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json_ok(args: &[&str]) -> Value {
    let out = frolicher(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("JSON output")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

/// Asserts exit code `code` and a JSON error object on stderr, returning its kind.
fn expect_error(out: &Output, code: i32) -> String {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let err: Value = serde_json::from_slice(&out.stderr).expect("error object on stderr");
    assert_eq!(err["error"]["exit_code"], code);
    assert!(err["error"]["message"].as_str().is_some_and(|m| !m.is_empty()));
    err["error"]["kind"].as_str().unwrap().to_string()
}

fn cells(grid: &Value) -> Vec<u64> {
    grid.as_array().unwrap().iter().flat_map(|row| row.as_array().unwrap().iter().map(|x| x.as_u64().unwrap())).collect()
}

fn ce11(dir: &std::path::Path) -> PathBuf {
    let file = dir.join("ce11.json");
    let out = frolicher(&["example", "calabi-eckmann", "--u", "1", "--v", "1", "-o", path_str(&file)]);
    assert!(out.status.success());
    file
}

#[test]
fn dot_report_is_all_ones() {
    let r = json_ok(&["report", "example://dot", "--format", "json"]);
    assert_eq!(r["format_version"], 1);
    for page in r["pages"]["pages"].as_array().unwrap() {
        assert_eq!(cells(&page["e"]), vec![1]);
        assert_eq!(cells(&page["ebar"]), vec![1]);
    }
    for page in r["bca"]["pages"].as_array().unwrap() {
        assert_eq!(cells(&page["bott_chern"]), vec![1]);
        assert_eq!(cells(&page["aeppli"]), vec![1]);
    }
    for page in r["hodge"]["pages"].as_array().unwrap() {
        assert_eq!(cells(&page["harmonic"]), vec![1]);
    }
    let verdicts = r["verdicts"].as_array().unwrap();
    assert!(!verdicts.is_empty());
    for v in verdicts {
        assert_eq!(v["verdict"], true);
        assert!(v["criteria"].as_array().unwrap().iter().all(|c| c["holds"] == true));
    }
    assert_eq!(r["decomposition"]["status"], "unique");
    assert_eq!(r["einfty"]["holds"], true);
}

#[test]
fn calabi_eckmann_is_not_page_one_ddbar() {
    let dir = scratch("ce_verdict");
    let file = ce11(&dir);
    let r = json_ok(&["check-pageddbar", path_str(&file), "--r", "2", "--explain", "--format", "json"]);
    let v = &r["verdicts"][0];
    assert_eq!(v["r"], 2);
    assert_eq!(v["verdict"], false);
    assert_eq!(v["consistent"], true);
    let exactness = v["criteria"].as_array().unwrap().iter().find(|c| c["name"] == "E").unwrap();
    assert_eq!(exactness["holds"], false);
    let witness = &v["witness"];
    assert_eq!(witness["kind"], "ErExactNotDExact");
    assert!(witness["vector"].as_array().unwrap().iter().any(|x| x != "0"));

    let md = stdout(&frolicher(&["check-pageddbar", path_str(&file), "--r", "2", "--explain"]));
    assert!(md.contains("d-closed and E_r-exact but not d-exact"));
}

#[test]
fn calabi_eckmann_pages_lose_the_top_class() {
    let dir = scratch("ce_pages");
    let file = ce11(&dir);
    let r = json_ok(&["pages", path_str(&file), "--rmax", "3", "--format", "json"]);
    let pages = r["pages"]["pages"].as_array().unwrap();
    assert_eq!(pages[0]["e"][3][2], 1);
    assert_eq!(pages[1]["e"][3][2], 0);
    assert_eq!(pages[2]["e"][3][2], 0);

    let md = stdout(&frolicher(&["pages", path_str(&file), "--rmax", "3"]));
    assert!(md.contains("### E_2"));
    assert!(md.contains("Certified columns p ≤ 5"));
}

#[test]
fn uri_and_file_inputs_agree() {
    let dir = scratch("uri_file");
    let file = dir.join("zigzag.json");
    let out = frolicher(&["example", "zigzag", "--start", "1,1", "--gens", "2", "--left", "1", "--right", "0", "-o", path_str(&file)]);
    assert!(out.status.success());
    let from_file = json_ok(&["pages", path_str(&file), "--format", "json"]);
    let from_uri = json_ok(&["pages", "example://zigzag?start=1,1&gens=2&left=1&right=0", "--format", "json"]);
    assert_eq!(from_file["pages"], from_uri["pages"]);
}

#[test]
fn report_is_byte_identical_across_runs() {
    let args = ["report", "example://calabi-eckmann?u=0&v=1", "--rmax", "3", "--explain"];
    let first = frolicher(&args);
    let second = frolicher(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let json = ["report", "example://zigzag?start=0,1&gens=3&left=0&right=1", "--format", "json", "--constructive", "--seed", "5"];
    assert_eq!(frolicher(&json).stdout, frolicher(&json).stdout);
}

#[test]
fn json_round_trip_and_markdown_from_json() {
    let dir = scratch("render");
    let json_file = dir.join("report.json");
    let args = ["report", "example://square?at=1,0", "--rmax", "3", "--explain"];
    let out = frolicher(&[&args[..], &["--format", "json", "-o", path_str(&json_file)]].concat());
    assert!(out.status.success());

    let again = frolicher(&["render", path_str(&json_file), "--format", "json"]);
    assert!(again.status.success());
    assert_eq!(again.stdout, std::fs::read(&json_file).unwrap());

    let rendered = frolicher(&["render", path_str(&json_file)]);
    let direct = frolicher(&args);
    assert!(rendered.status.success());
    assert_eq!(rendered.stdout, direct.stdout);
}

#[test]
fn dual_sum_pairing_is_perfect() {
    let dir = scratch("duality");
    let complex = dir.join("sum.json");
    let pairing = dir.join("pairing.json");
    let out = frolicher(&[
        "example",
        "zigzag",
        "--start",
        "1,1",
        "--gens",
        "2",
        "--with-dual",
        "--pairing-out",
        path_str(&pairing),
        "-o",
        path_str(&complex),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_ok(&["duality", path_str(&complex), "--pairing", path_str(&pairing), "--rmax", "3", "--format", "json"]);
    let d = &r["duality"];
    assert_eq!(d["valid"], true);
    assert_eq!(d["perfect"], true);
    for page in d["pages"].as_array().unwrap() {
        assert!(page["page"].as_array().unwrap().iter().all(|e| e["nondegenerate"] == true && e["well_defined"] == true));
        assert_eq!(page["bott_chern_self_nondegenerate"], page["page_verdict"]);
        assert_eq!(page["exact_closed_orthogonal"], true);
    }
}

#[test]
fn constructive_certificate_is_written_and_accepted() {
    let dir = scratch("certificate");
    let cert = dir.join("cert.json");
    let r = json_ok(&[
        "decompose",
        "example://calabi-eckmann?u=0&v=1",
        "--constructive",
        "--certificate",
        path_str(&cert),
        "--seed",
        "11",
        "--format",
        "json",
    ]);
    let d = &r["decomposition"];
    assert_eq!(d["status"], "unique");
    assert_eq!(d["certificate"]["accepted"], true);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(written["blocks"].as_array().is_some_and(|b| !b.is_empty()));
}

#[test]
fn hodge_with_random_metric_matches_pages() {
    let r = json_ok(&["hodge", "example://zigzag?start=1,3&gens=3&left=1&right=1", "--gram", "random", "--seed", "2", "--format", "json"]);
    let h = &r["hodge"];
    assert_eq!(h["laplacian_route_agrees"], true);
    assert!(h["pages"].as_array().unwrap().iter().all(|p| p["matches_pages"] == true && p["decomposition_checked"] == true));
}

#[test]
fn gram_file_is_read() {
    let dir = scratch("gram");
    let gram = dir.join("gram.json");
    std::fs::write(&gram, r#"{"0,0": [["2"]], "1,1": [["1/3"]]}"#).unwrap();
    let r = json_ok(&["hodge", "example://square", "--gram", path_str(&gram), "--format", "json"]);
    assert!(r["hodge"]["metric"].as_str().unwrap().starts_with("gram file"));

    std::fs::write(&gram, r#"{"0,0": [["-1"]]}"#).unwrap();
    assert_eq!(expect_error(&frolicher(&["hodge", "example://square", "--gram", path_str(&gram)]), 1), "gram");
}

#[test]
fn invalid_complex_is_reported() {
    let dir = scratch("invalid");
    let file = dir.join("bad.json");
    let square = frolicher(&["example", "square"]);
    let mut data: Value = serde_json::from_slice(&square.stdout).unwrap();
    data["d2"]["1,0"] = serde_json::json!([["1"]]);
    std::fs::write(&file, data.to_string()).unwrap();

    let out = frolicher(&["validate", path_str(&file), "--format", "json"]);
    assert_eq!(expect_error(&out, 1), "check");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["validation"]["valid"], false);
    assert_eq!(report["validation"]["violations"][0]["at"], "0,0");
    assert_eq!(report["validation"]["violations"][0]["product"], serde_json::json!([["2"]]));

    assert_eq!(expect_error(&frolicher(&["pages", path_str(&file)]), 1), "validation");
}

#[test]
fn failure_paths_exit_nonzero_with_an_error_object() {
    let dir = scratch("failures");
    let malformed = dir.join("malformed.json");
    std::fs::write(&malformed, "{\"grid\": [1,\n  oops").unwrap();
    let out = frolicher(&["pages", path_str(&malformed)]);
    assert_eq!(expect_error(&out, 1), "parse");
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    assert_eq!(expect_error(&frolicher(&["pages", path_str(&dir.join("missing.json"))]), 2), "io");
    assert_eq!(expect_error(&frolicher(&["pages", "example://nothing"]), 2), "usage");
    assert_eq!(expect_error(&frolicher(&["pages"]), 2), "usage");
    assert_eq!(expect_error(&frolicher(&["frobnicate"]), 2), "usage");
    assert_eq!(expect_error(&frolicher(&["check-pageddbar", "example://dot", "--r", "0"]), 2), "usage");
    assert_eq!(expect_error(&frolicher(&["example", "zigzag", "--left", "2"]), 2), "usage");
    assert_eq!(expect_error(&frolicher(&["example", "calabi-eckmann", "--u", "2", "--v", "1"]), 2), "usage");
    assert_eq!(expect_error(&frolicher(&["example", "calabi-eckmann", "--u", "1", "--v", "1", "--w", "2"]), 1), "model");
}

#[test]
fn broken_pairing_is_rejected() {
    let dir = scratch("bad_pairing");
    let complex = dir.join("sum.json");
    let pairing = dir.join("pairing.json");
    let out = frolicher(&["example", "zigzag", "--start", "0,1", "--gens", "1", "--with-dual", "--pairing-out", path_str(&pairing), "-o", path_str(&complex)]);
    assert!(out.status.success());
    let mut p: Value = serde_json::from_str(&std::fs::read_to_string(&pairing).unwrap()).unwrap();
    let first = p["pairs"].as_object().unwrap().keys().next().unwrap().clone();
    p["pairs"][&first] = serde_json::json!([["5"]]);
    std::fs::write(&pairing, p.to_string()).unwrap();
    let out = frolicher(&["duality", path_str(&complex), "--pairing", path_str(&pairing), "--rmax", "2", "--format", "json"]);
    assert_eq!(expect_error(&out, 1), "check");
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["duality"]["valid"], false);

    std::fs::write(&pairing, r#"{"n": [1, 2], "pairs": {}}"#).unwrap();
    assert_eq!(expect_error(&frolicher(&["duality", path_str(&complex), "--pairing", path_str(&pairing)]), 1), "pairing");
}

#[test]
fn show_reps_lists_classes() {
    let r = json_ok(&["pages", "example://zigzag?start=0,1&gens=1&left=0&right=0", "--rmax", "1", "--show-reps", "--format", "json"]);
    let reps = r["pages"]["pages"][0]["representatives"].as_array().unwrap();
    assert_eq!(reps.len(), 1);
    assert_eq!(reps[0]["at"], "0,1");
    assert_eq!(reps[0]["classes"], serde_json::json!(["e0"]));
}
