use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tait(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tait")).args(args).output().expect("run tait")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("JSON on stdout")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tait-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn count_k4_all_methods_agree() {
    let out = tait(&["count", "--family", "k4", "--method", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["tait0"], 2);
    assert_eq!(report["agreement"], true);
    assert_eq!(report["graph"]["vertices"], 4);
    assert_eq!(report["results"].as_array().unwrap().len(), 3);
}

#[test]
fn threaded_alpha_matches_brute() {
    let alpha = json(&tait(&["count", "--family", "octahedron", "--threads", "4"]));
    let brute = json(&tait(&["count", "--family", "octahedron", "--method", "brute"]));
    assert_eq!(alpha["tait0"], brute["tait0"]);
    assert_eq!(alpha["threads"], 4);
    assert_eq!(alpha["results"][0]["terms"], 256);
}

#[test]
fn sign_symmetry_reports_the_same_count() {
    let full = json(&tait(&["count", "--family", "bipyramid", "--size", "5"]));
    let half = json(&tait(&["count", "--family", "bipyramid", "--size", "5", "--sign-symmetry"]));
    assert_eq!(full["tait0"], half["tait0"]);
    assert_eq!(full["results"][0]["rank_histogram"], half["results"][0]["rank_histogram"]);
}

#[test]
fn quadrangulation_is_invalid_input() {
    // the 4-cycle drawn in the plane: two quadrilateral faces
    let path = scratch("c4.txt", "4\n0: 1 3\n1: 2 0\n2: 3 1\n3: 0 2\n");
    let out = tait(&["count", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn missing_file_and_garbage_are_invalid_input() {
    assert_eq!(tait(&["count", "--graph", "/nonexistent/graph.txt"]).status.code(), Some(2));
    let path = scratch("garbage.txt", "four\n0: 1 2\n");
    assert_eq!(tait(&["count", "--graph", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(tait(&[]).status.code(), Some(1));
    assert_eq!(tait(&["count"]).status.code(), Some(1));
    assert_eq!(tait(&["count", "--family", "dodecahedron"]).status.code(), Some(1));
    assert_eq!(tait(&["count", "--family", "bipyramid"]).status.code(), Some(1));
    assert_eq!(tait(&["count", "--family", "bipyramid", "--size", "2"]).status.code(), Some(1));
    assert_eq!(tait(&["count", "--family", "k4", "--method", "magic"]).status.code(), Some(1));
    assert_eq!(tait(&["--help"]).status.code(), Some(0));
}

#[test]
fn budgets_exit_with_code_3() {
    let out = tait(&["count", "--family", "icosahedron", "--max-faces", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = tait(&["count", "--family", "icosahedron", "--method", "brute", "--max-vertices", "8"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_output_shapes() {
    let k4 = stdout(&tait(&["gen", "--family", "k4"]));
    let lines: Vec<&str> = k4.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "4");

    let apollonian = stdout(&tait(&["gen", "--family", "apollonian", "--depth", "2"]));
    assert_eq!(apollonian.lines().next(), Some("20"));

    let bipyramid = json(&tait(&["count", "--family", "bipyramid", "--size", "6", "--method", "heawood"]));
    assert_eq!(bipyramid["graph"]["vertices"], 8);
    assert_eq!(bipyramid["graph"]["faces"], 12);
}

#[test]
fn gen_round_trips_through_count() {
    for family in [["--family", "icosahedron"], ["--family", "octahedron"]] {
        let text = stdout(&tait(&["gen", family[0], family[1]]));
        let path = scratch(&format!("{}.txt", family[1]), &text);
        let from_file = json(&tait(&["count", "--graph", path.to_str().unwrap(), "--method", "heawood"]));
        let generated = json(&tait(&["count", family[0], family[1], "--method", "heawood"]));
        assert_eq!(from_file["tait0"], generated["tait0"]);
        assert_eq!(from_file["graph"]["edges"], generated["graph"]["edges"]);
        let again = stdout(&tait(&["gen", "--graph", path.to_str().unwrap()]));
        assert_eq!(again, text);
    }
}

#[test]
fn verify_subcommands() {
    let out = tait(&["verify", "--lemma", "minor-tree", "--family", "k4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS [minor-tree] k4"));

    let out = tait(&["verify", "--lemma", "heawood", "--family", "bipyramid", "--size", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["failures"], 0);

    let out = tait(&["verify", "--lemma", "gauss", "--order", "2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));

    let out = tait(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 10);
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn bench_rows() {
    let out = tait(&["bench", "--family", "apollonian:0..1", "--family", "icosahedron", "--method", "brute", "--max-vertices", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][0], "apollonian(0)");
    assert_eq!(&rows[0][8], "ok");
    assert_eq!(&rows[2][0], "icosahedron");
    assert_eq!(&rows[2][8], "skipped");
    assert_eq!(&rows[2][7], "");

    let out = tait(&["bench", "--family", "bipyramid:3..4", "--threads", "1,2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    // per graph: alpha x 2 thread counts, brute, heawood
    let rows: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["status"] == "ok"));
}
