use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn scene(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "scenes", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropikit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn temp_scene(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn diagonal_of_the_three_simplex_has_four_pairs() {
    let out = run(&["diagonal", &scene("pn.json"), "--eta", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pairs = v["items"][0]["detail"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 4);
    for p in pairs {
        assert_eq!(p["multiplicity"], 1);
    }
}

#[test]
fn malformed_scene_exits_two_with_a_pointer() {
    let f = temp_scene(r#"{ "version": 1, "polytopes": [ { "id": "p", "dim": "three" } ] }"#);
    let out = run(&["diagonal", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["pointer"], "/polytopes/0/dim");
}

#[test]
fn unknown_fields_and_bad_references_are_input_errors() {
    let f = temp_scene(r#"{ "version": 1, "fibers": [], "extra": 0 }"#);
    assert_eq!(run(&["validate", f.path().to_str().unwrap()]).status.code(), Some(2));
    let f = temp_scene(r#"{ "version": 2 }"#);
    let out = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["pointer"], "/version");
    let text = std::fs::read_to_string(scene("triangle.json")).unwrap().replace("\"C3\"", "\"nowhere\"");
    let f = temp_scene(&text);
    let out = run(&["graph", "symmetry", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["pointer"].as_str().unwrap().starts_with("/graphs/0/graph/vertices/1"));
}

#[test]
fn missing_file_is_an_input_error() {
    assert_eq!(run(&["index", "/nonexistent/scene.json"]).status.code(), Some(2));
}

#[test]
fn golden_examples_match() {
    let out = run(&["examples"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn golden_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["examples", "--goldens", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["examples", "--goldens", dir.path().to_str().unwrap(), "--bless"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["examples", "--goldens", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["graph", "symmetry", &scene("triangle.json") as &str],
        vec!["diagonal", &scene("pn.json")],
        vec!["split", "cone", &scene("cross.json"), "--seed", "3", "--samples", "10"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn graph_commands() {
    let out = run(&["graph", "symmetry", &scene("triangle.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["items"][0]["detail"]["component_count"], 3);
    for op in ["weights", "rigidity"] {
        assert_eq!(run(&["graph", op, &scene("cross.json")]).status.code(), Some(0), "{op}");
    }
    assert_eq!(run(&["graph", "balance", &scene("triangle.json")]).status.code(), Some(0));
    // The elbow's slopes at the center sum to (-2,0) with no Chern class to absorb it.
    assert_eq!(run(&["graph", "balance", &scene("cross.json")]).status.code(), Some(1));
}

#[test]
fn split_commands() {
    let out = run(&["split", "cone", &scene("cross.json")]);
    // The single bend violates the cone condition, the double bend does not.
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["items"][0]["pass"], false);
    assert_eq!(v["items"][1]["pass"], true);
    let out = run(&["split", "cone", &scene("cross.json"), "--id", "double-bend"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["split", "check", &scene("cross.json")]).status.code(), Some(0));
    assert_eq!(run(&["split", "multiplicity", &scene("cross.json")]).status.code(), Some(0));
}

#[test]
fn index_and_algebra_commands() {
    let out = run(&["index", &scene("index.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["ainfty", "check", &scene("algebra.json")]).status.code(), Some(0));
    assert_eq!(run(&["ainfty", "mc", &scene("algebra.json")]).status.code(), Some(0));
    let text = std::fs::read_to_string(scene("index.json")).unwrap().replace("\"expected\": 3", "\"expected\": 4");
    let f = temp_scene(&text);
    assert_eq!(run(&["index", f.path().to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn potential_command() {
    let out = run(&["potential", &scene("fibers.json"), "--id", "projective-plane", "--holonomy", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["items"].as_array().unwrap().len(), 1);
    assert_eq!(v["items"][0]["detail"]["terms"].as_array().unwrap().len(), 3);
    let out = run(&["potential", &scene("fibers.json"), "--flip-sign"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_and_validate() {
    let out = run(&["--format", "text", "validate", &scene("cross.json")]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("validate: PASS"));
}
