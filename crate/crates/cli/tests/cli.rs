use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const P3: &str = "n 3 mode rational\n1 2 1\n2 3 1\n";
const DEMO_SCRIPT: &str = include_str!("fixtures/demo_script.json");
const LADDER: &str = "n 6 mode rational\n1 2 1\n1 4 1\n2 3 1\n2 5 1\n3 6 1\n4 5 1\n5 6 1\n";

fn walkmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkmult"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Fixtures {
    _dir: tempfile::TempDir,
    root: PathBuf,
    p3: String,
    ladder: String,
}

fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let p3 = write(&root, "p3.txt", P3).display().to_string();
    let ladder = write(&root, "ladder.txt", LADDER).display().to_string();
    Fixtures { _dir: dir, root, p3, ladder }
}

impl Fixtures {
    fn file(&self, name: &str, text: &str) -> String {
        write(&self.root, name, text).display().to_string()
    }
}

#[test]
fn analyze_p3_lists_the_end_pair_and_even_middle_singlet() {
    let f = fixtures();
    let o = walkmult(&["analyze", &f.p3]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["pairs"].as_array().unwrap().len(), 1);
    assert_eq!(r["pairs"][0]["pair"], serde_json::json!([1, 3]));
    assert_eq!(r["pairs"][0]["singlets"], serde_json::json!([{"vertex": 2, "parity": "even"}]));
    assert_eq!(r["automorphisms"]["order"], 2);
}

#[test]
fn analyze_ladder_lists_the_central_pair() {
    let f = fixtures();
    let r = json(&walkmult(&["analyze", &f.ladder]));
    let pairs = r["pairs"].as_array().unwrap();
    assert!(pairs.iter().any(|p| p["pair"] == serde_json::json!([2, 5])));
}

#[test]
fn exit_code_matrix() {
    let f = fixtures();
    let malformed = f.file("bad.txt", "n 3 mode rational\n1 2 x\n");
    let remove = f.file("remove.json", r#"{"pair":[2,5],"steps":[{"op":"remove-vertex","vertex":1}]}"#);
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["analyze", f.p3.as_str()], 0),
        (vec!["analyze", malformed.as_str()], 2),
        (vec!["multiplets", f.ladder.as_str(), "--max-size", "0"], 2),
        (vec!["generate", "bogus"], 2),
        (vec!["multiplets", f.ladder.as_str(), "--pair", "2", "5", "--budget", "3"], 3),
        (vec!["apply", f.ladder.as_str(), remove.as_str()], 4),
        (vec!["eigen", f.ladder.as_str(), "--pair", "1", "2"], 5),
        (vec!["--force", "apply", f.ladder.as_str(), remove.as_str()], 5),
    ];
    for (args, expected) in cases {
        let o = walkmult(&args);
        assert_eq!(code(&o), expected, "{args:?}: {}", stderr(&o));
        assert!(json(&o).is_object(), "{args:?} writes a JSON report");
    }
}

#[test]
fn malformed_file_reports_a_location() {
    let f = fixtures();
    let bad = f.file("bad.txt", "n 3 mode rational\n1 2 x\n");
    let o = walkmult(&["analyze", &bad]);
    assert!(stderr(&o).contains("parse error at line 2"), "{}", stderr(&o));
}

#[test]
fn ladder_multiplets_include_the_pair_and_even_doublets() {
    let f = fixtures();
    let o = walkmult(&["multiplets", &f.ladder, "--pair", "2", "5", "--max-size", "2", "--parity", "even"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let notations: Vec<&str> = r["multiplets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["notation"].as_str().unwrap())
        .collect();
    for expected in ["{(2,5)_a}+", "{(1,4)_a}+", "{(3,6)_a}+", "{(1,6)_a}+", "{(3,4)_a}+"] {
        assert!(notations.contains(&expected), "{expected} missing from {notations:?}");
    }
}

#[test]
fn p3_has_no_odd_multiplet_of_size_one() {
    let f = fixtures();
    let r = json(&walkmult(&["multiplets", &f.p3, "--parity", "odd", "--max-size", "1"]));
    assert_eq!(r["multiplets"], serde_json::json!([]));
}

#[test]
fn cone_step_adds_an_even_tip() {
    let f = fixtures();
    let script = f.file("cone.json", r#"{"pair":[2,5],"steps":[{"op":"cone","subset":[2,5],"parity":"even","weights":["1","1"]}]}"#);
    let out = f.root.join("coned.txt");
    let o = walkmult(&["apply", &f.ladder, &script, "--out-graph", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["graph"]["n"], 7);
    let checks = &r["chain"][0]["certificate"]["checks"];
    assert!(checks
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "tip singlet even" && c["passed"] == true));
    assert!(std::fs::read_to_string(out).unwrap().starts_with("n 7 mode rational"));
}

#[test]
fn scripted_interconnection_creates_the_2ab_loop() {
    let f = fixtures();
    // Indices 9 and 3 are {3,6}+ and {1,6}+ in the size-2 enumeration for {2,5}.
    let script = f.file(
        "inter.json",
        r#"{"pair":[2,5],"steps":[{"op":"interconnect","x":9,"gamma":["3"],"y":3,"delta":["5"]}]}"#,
    );
    let o = walkmult(&["apply", &f.ladder, &script, "--max-size", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let edges = r["graph"]["edges"].as_array().unwrap();
    assert!(edges.contains(&serde_json::json!([6, 6, "30"])), "{edges:?}");
}

#[test]
fn readme_script_is_accepted() {
    let f = fixtures();
    let script = f.file("demo.json", DEMO_SCRIPT);
    let o = walkmult(&["--max-size", "2", "apply", &f.ladder, &script]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    let chain = r["chain"].as_array().unwrap();
    assert_eq!(chain.len(), 6);
    assert!(chain.iter().all(|rec| rec["certificate"]["accepted"] == true));
    assert_eq!(r["graph"]["n"], 10);
}

#[test]
fn refusal_names_the_rule() {
    let f = fixtures();
    let script = f.file("remove.json", r#"{"steps":[{"op":"remove-vertex","vertex":1}]}"#);
    let o = walkmult(&["apply", &f.ladder, &script, "--pair", "2", "5"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("singlet removal criterion"), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["failed_step"], 1);
}

#[test]
fn eigen_p3_counts_and_odd_zero() {
    let f = fixtures();
    let o = walkmult(&["eigen", &f.p3]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["counts"]["even"], 2);
    assert_eq!(r["counts"]["odd"], 1);
    let odd: Vec<&Value> = r["clusters"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["vectors"].as_array().unwrap())
        .filter(|v| v["parity"] == "odd")
        .collect();
    assert_eq!(odd.len(), 1);
    assert!(odd[0]["zero_set"].as_array().unwrap().contains(&serde_json::json!(2)));
    assert_eq!(r["all_zero_sums_hold"], true);
}

#[test]
fn generate_ladder_seed_1_breaks_all_symmetry() {
    let o = walkmult(&["generate", "ladder", "--seed", "1", "--steps", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["automorphisms"]["verdict"], "trivial");
    assert_eq!(r["automorphisms"]["order"], 1);
}

#[test]
fn generate_with_no_steps_passes_the_template_through() {
    let f = fixtures();
    let r = json(&walkmult(&["generate", "ladder:3", "--steps", "0"]));
    assert_eq!(r["chain"], serde_json::json!([]));
    let analyzed = json(&walkmult(&["analyze", &f.ladder]));
    assert_eq!(r["graph"]["edges"], analyzed["graph"]["edges"]);
}

#[test]
fn generate_writes_a_content_addressed_bundle() {
    let f = fixtures();
    let r = json(&walkmult(&["generate", "prism:3", "--seed", "4", "--out-dir", f.root.to_str().unwrap()]));
    let dir = f.root.join(r["directory"].as_str().unwrap());
    for name in ["graph.json", "pairs.json", "chain.json", "bundle.json"] {
        assert!(dir.join(name).is_file(), "{name} missing");
    }
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let f = fixtures();
    let runs: Vec<Vec<&str>> = vec![
        vec!["generate", "two-lobe", "--seed", "7", "--weights", "random", "--steps", "3"],
        vec!["multiplets", f.ladder.as_str(), "--max-size", "3"],
        vec!["eigen", f.ladder.as_str(), "--pair", "2", "5"],
        vec!["analyze", f.ladder.as_str()],
    ];
    for args in runs {
        let a = walkmult(&args).stdout;
        let b = walkmult(&args).stdout;
        let single = Command::new(env!("CARGO_BIN_EXE_walkmult"))
            .args(&args)
            .env("WALKMULT_THREADS", "1")
            .output()
            .unwrap()
            .stdout;
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a, single, "{args:?} with one thread");
    }
}

#[test]
fn pretty_tables_are_plain_text() {
    let f = fixtures();
    let o = walkmult(&["--pretty", "analyze", &f.p3]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("{1,3}  2+"), "{text}");
}

#[test]
fn plot_p3_highlights_the_pair() {
    let f = fixtures();
    let report = f.root.join("p3.json");
    let o = walkmult(&["analyze", &f.p3, "-o", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let svg = String::from_utf8(walkmult(&["plot", report.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(svg.matches(r#"r="16""#).count(), 3);
    assert_eq!(svg.matches("#d62728").count(), 2 + 1, "two pair vertices and the legend swatch");
}

#[test]
fn plot_of_an_empty_report_draws_only_the_legend() {
    let f = fixtures();
    let empty = f.file("empty.json", "{}");
    let o = walkmult(&["plot", &empty]);
    assert_eq!(code(&o), 0);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.contains(r#"<g id="legend""#));
    assert!(!svg.contains(r#"r="16""#));
}

#[test]
fn plot_ladder_multiplets_matches_snapshot() {
    let f = fixtures();
    let report = f.root.join("m.json");
    let o = walkmult(&[
        "multiplets",
        &f.ladder,
        "--pair",
        "2",
        "5",
        "--max-size",
        "2",
        "--parity",
        "even",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    // Multiplet 2 is the even doublet {1,6}+.
    let svg = String::from_utf8(walkmult(&["plot", report.to_str().unwrap(), "--multiplet", "2"]).stdout).unwrap();
    assert!(svg.contains(">a</text>"));
    let snapshot = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots/ladder_multiplet.svg");
    let expected = std::fs::read_to_string(&snapshot).expect("snapshot present");
    assert_eq!(svg, expected);
}
