use std::path::PathBuf;

use serde_json::Value;
use tdlc::cli::{self, Output, EXIT_NOT_APPLICABLE, EXIT_OK, EXIT_PARSE};

fn file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    cli::run(std::iter::once("tdlc").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn scales_of_the_sample_files() {
    for (name, s) in [
        ("c4_doubling.json", "1"),
        ("c2c4_tidying.json", "1"),
        ("companion_p5.json", "1"),
        ("diag_equal_slopes.json", "25"),
        ("diag_three_slopes.json", "3"),
        ("shift_one_sided.json", "1"),
        ("shift_two_sided.json", "1"),
    ] {
        let out = run(&["scale", &file(name)]);
        assert_eq!(out.code, EXIT_OK, "{name}: {}", out.stderr);
        assert!(out.stdout.contains(&format!("s = {s},")), "{name}: {}", out.stdout);
    }
}

#[test]
fn tidy_reports_displacement_equal_to_scale() {
    for name in ["c2c4_tidying.json", "companion_p5.json", "diag_three_slopes.json", "shift_one_sided.json"] {
        let out = run(&["tidy", &file(name)]);
        assert_eq!(out.code, EXIT_OK, "{name}: {}", out.stderr);
        let line = out.stdout.lines().find(|l| l.starts_with("displacement")).unwrap();
        let (d, s) = line.split_once(" = s = ").unwrap();
        assert_eq!(d.trim_start_matches("displacement "), s, "{name}");
    }
}

#[test]
fn tidying_a_finite_subgroup() {
    let out = run(&["tidy", &file("c2c4_tidying.json")]);
    assert!(out.stdout.contains("tidy above at stage 1"), "{}", out.stdout);
    assert!(out.stdout.contains("tidy subgroup: {(0,0)}"));
}

#[test]
fn decompose_three_slopes() {
    let v = json(&["decompose", &file("diag_three_slopes.json")]);
    let dim = |f: &str| v["fields"][f]["dim"].as_u64().unwrap();
    assert_eq!(["con", "con-", "par", "par-", "lev", "nub", "bik", "omega"].map(dim), [1, 1, 2, 2, 1, 0, 0, 3]);
}

#[test]
fn two_sided_nub_is_not_computed() {
    let v = json(&["decompose", &file("shift_two_sided.json")]);
    assert_eq!(v["fields"]["nub"]["kind"], "not-computed");
    assert_eq!(v["fields"]["con"]["closed"], false);
}

#[test]
fn verify_a_file() {
    let v = json(&["verify", &file("c4_doubling.json")]);
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["summary"]["records"], 19);
    let v = json(&["verify", &file("c4_doubling.json"), "--theorem", "C"]);
    let tags: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["tag"].as_str().unwrap()).collect();
    assert_eq!(tags, ["C.a", "C.b", "C.c"]);
}

#[test]
fn verify_a_shift_never_fails() {
    for name in ["shift_one_sided.json", "shift_two_sided.json"] {
        let v = json(&["verify", &file(name)]);
        assert_eq!(v["summary"]["fail"], 0, "{name}");
    }
}

#[test]
fn entropy_on_vector_groups_and_shifts() {
    let v = json(&["entropy", &file("diag_equal_slopes.json")]);
    assert_eq!(v["h"], "2·ln 5");
    assert_eq!(v["addition"]["h_H"], "ln 5");
    let out = run(&["entropy", &file("shift_one_sided.json")]);
    assert_eq!(out.code, EXIT_NOT_APPLICABLE);
    assert!(out.stderr.contains("not closed"));
}

#[test]
fn bad_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("tdlc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("missing.json", r#"{"backend": "padic"}"#),
        ("unknown.json", r#"{"backend": "lie", "group": {}}"#),
        (
            "not_subgroup.json",
            r#"{"backend": "finite", "group": {"abelian": [4]}, "endomorphism": {"power": 1}, "subgroups": {"H": [0, 1]}}"#,
        ),
        (
            "singular_u.json",
            r#"{"backend": "padic", "group": {"prime": 3, "dim": 2}, "endomorphism": {"matrix": [["1", "0"], ["0", "1"]]}, "subgroups": {"U": [["1", "0"]]}}"#,
        ),
        ("not_json", "scale"),
    ];
    for (name, text) in cases {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let out = run(&["scale", path.to_str().unwrap()]);
        assert_eq!(out.code, EXIT_PARSE, "{name}: {}{}", out.stdout, out.stderr);
    }
    assert_eq!(run(&["scale", "/nonexistent/file.json"]).code, EXIT_PARSE);
    assert_eq!(run(&["frobnicate"]).code, EXIT_PARSE);
    assert_eq!(run(&["verify", "--theorem", "Z", &file("c4_doubling.json")]).code, EXIT_PARSE);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}
