//! The command-line surface: exit codes, documents, rendering and oracles,
//! run against the shipped fixtures.

use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigInt;
use tropfan::minimal::{minimal_fan, minimal_set_member};
use tropfan::trop::av_complete;
use tropfan::{ivec, Cone, IntVector, Sublattice};
use tropfan_cli::document::{parse, to_json, Document};
use tropfan_cli::oracle::box_points;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tropfan")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn f(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn load(name: &str) -> Document {
    parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn all_fixtures() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

#[test]
fn documents_round_trip() {
    let names = all_fixtures();
    assert!(names.len() >= 15);
    for name in names {
        let doc = load(&name);
        let text = to_json(&doc);
        let again = parse(&text).unwrap();
        assert_eq!(again, doc, "{name}");
        assert_eq!(to_json(&again), text, "{name}");
    }
}

#[test]
fn integers_are_arbitrary_precision() {
    let big = "123456789012345678901234567890";
    let text = format!(
        r#"{{"schema_version": "1", "kind": "stacky_fan",
            "payload": {{"ambient_rank": 2, "cones": [{{"rays": [["{big}", "1"], ["0", "1"]]}}]}}}}"#
    );
    let doc = parse(&text).unwrap();
    assert!(to_json(&doc).contains(big));
}

#[test]
fn parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema_version\": \"1\",\n \"kind\": ").unwrap();
    let r = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    for text in [
        r#"{"schema_version": "2", "kind": "stacky_fan", "payload": {}}"#,
        r#"{"schema_version": "1", "kind": "polytope", "payload": {}}"#,
        r#"{"schema_version": "1", "kind": "stacky_fan", "payload": {"ambient_rank": 2, "cones": [{"rays": [["1", "x"]]}]}}"#,
        r#"{"schema_version": "1", "kind": "stacky_fan", "payload": {"ambient_rank": 2, "cones": [{"rays": [["1"]]}]}}"#,
        r#"{"schema_version": "1", "kind": "stacky_fan", "payload": {"ambient_rank": 2, "cones": [{"rays": [["1", "0"], ["-1", "0"]]}]}}"#,
        r#"{"schema_version": "1", "kind": "quotient_complex", "payload": {}}"#,
    ] {
        std::fs::write(&bad, text).unwrap();
        assert_eq!(run(&["validate", bad.to_str().unwrap()]).code, 2, "{text}");
    }
    assert_eq!(run(&["validate", "/nonexistent.json"]).code, 2);
}

#[test]
fn validate_examples() {
    for name in ["delta_fig.json", "p2.json", "two_arc.json", "theta.json", "tree.json", "loop.json", "trivial.json"] {
        let r = run(&["validate", &f(name)]);
        assert_eq!((r.code, r.stdout.as_str()), (0, "ok\n"), "{name}");
    }
    let r = run(&["validate", &f("red_mismatch.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("ray((0,1))"), "{}", r.stdout);
    let r = run(&["validate", &f("one_arc.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("ray (1,1)"), "{}", r.stdout);
    let r = run(&["validate", &f("theta_degenerate.json")]);
    assert_eq!(r.code, 1);
}

#[test]
fn minimal_examples() {
    let r = run(&["minimal", &f("delta_fig.json")]);
    assert_eq!(r.code, 0);
    let Document::Coloring(m) = parse(&r.stdout).unwrap() else { panic!("coloring expected") };
    let colors = m.colors();
    let cone = |rays: &[&[i64]]| Cone::from_rays(&rays.iter().map(|r| ivec(r)).collect::<Vec<_>>(), 2).unwrap();
    let red = Sublattice::canonicalize(&[ivec(&[2, 0]), ivec(&[0, 1])], 2).unwrap();
    assert_eq!(colors.len(), 2);
    assert_eq!(colors[&red], vec![cone(&[&[0, 1], &[-2, -1]])]);
    assert_eq!(colors[&Sublattice::full(2)].len(), 2);

    // P² and the Hirzebruch fans all give the trivial coloring, byte for byte
    let trivial = std::fs::read_to_string(fixture("trivial.json")).unwrap();
    for name in ["p2.json", "hirzebruch1.json", "hirzebruch2.json"] {
        assert_eq!(run(&["minimal", &f(name)]).stdout, trivial, "{name}");
    }

    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    assert_eq!(run(&["minimal", &f("delta_fig.json"), "--out", once.to_str().unwrap()]).code, 0);
    let twice = run(&["minimal", once.to_str().unwrap()]);
    assert_eq!(twice.stdout, std::fs::read_to_string(&once).unwrap());

    let three = run(&["minimal", &f("three_arc.json")]);
    assert_eq!(three.code, 0);
    assert_eq!(parse(&three.stdout).unwrap(), parse(&run(&["minimal", &f("two_arc.json")]).stdout).unwrap());

    assert_eq!(run(&["minimal", &f("red_mismatch.json")]).code, 1);
    assert_eq!(run(&["minimal", &f("one_arc.json")]).code, 1);
    assert_eq!(run(&["minimal", &f("theta.json")]).code, 4);
}

#[test]
fn equiv_examples() {
    let r = run(&["equiv", &f("p2.json"), &f("hirzebruch1.json")]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "equivalent\n"));
    let r = run(&["equiv", &f("delta_fig.json"), &f("delta_fig.json")]);
    assert_eq!(r.code, 0);
    for other in ["trivial.json", "p2.json"] {
        let r = run(&["equiv", &f("delta_fig.json"), &f(other)]);
        assert_eq!((r.code, r.stdout.as_str()), (1, "inequivalent\nwitness (-1, 0)\n"), "{other}");
    }
    assert_eq!(run(&["equiv", &f("trivial.json"), &f("hirzebruch2.json")]).code, 0);
    assert_eq!(run(&["equiv", &f("two_arc.json"), &f("three_arc.json")]).code, 0);
    assert_eq!(run(&["equiv", &f("two_arc.json"), &f("two_arc_index2.json")]).code, 1);
    assert_eq!(run(&["equiv", &f("p2.json"), &f("two_arc.json")]).code, 3);
    assert_eq!(run(&["equiv", &f("theta.json"), &f("tree.json")]).code, 3);
}

#[test]
fn relation_examples() {
    let yes = |args: &[&str]| run(args).code;
    assert_eq!(yes(&["subdivision", &f("split_quadrant.json"), &f("quadrant.json")]), 0);
    assert_eq!(yes(&["subdivision", &f("quadrant.json"), &f("split_quadrant.json")]), 1);
    assert_eq!(yes(&["proper", &f("split_quadrant.json"), &f("quadrant.json")]), 0);
    assert_eq!(yes(&["representable", &f("split_quadrant.json"), &f("quadrant.json")]), 0);
    assert_eq!(yes(&["proper", &f("quadrant.json"), &f("p2.json")]), 1);
    assert_eq!(yes(&["representable", &f("quadrant.json"), &f("p2.json")]), 0);
    assert_eq!(yes(&["subdivision", &f("p2.json"), &f("two_arc.json")]), 3);
}

#[test]
fn complete_agrees_with_the_library() {
    for name in all_fixtures() {
        let r = run(&["complete", &f(&name)]);
        let expected = match load(&name) {
            Document::StackyFan(x) => Some(x.is_complete()),
            Document::Coloring(m) => Some(m.is_complete()),
            Document::AvFan(x) => Some(av_complete(&x).unwrap()),
            _ => None,
        };
        match expected {
            Some(true) => assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"), "{name}"),
            Some(false) => assert_eq!((r.code, r.stdout.as_str()), (1, "false\n"), "{name}"),
            None => assert_eq!(r.code, 4, "{name}"),
        }
    }
    assert_eq!(run(&["complete", &f("quadrant.json")]).code, 1);
    assert_eq!(run(&["complete", &f("delta_fig.json")]).code, 0);
}

#[test]
fn quotient_and_jacobian() {
    let r = run(&["quotient", &f("two_arc.json")]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["kind"], "quotient_complex");
    assert_eq!(v["payload"]["cells"].as_array().unwrap().len(), 5);
    assert_eq!(run(&["quotient", &f("one_arc.json")]).code, 1);

    let r = run(&["jacobian", &f("theta.json")]);
    assert_eq!(r.code, 0);
    let Document::PolarizedBase(b) = parse(&r.stdout).unwrap() else { panic!("base expected") };
    assert_eq!(b.m_rank(), 2);
    assert!(b.is_definite());
    let Document::PolarizedBase(t) = parse(&run(&["jacobian", &f("tree.json")]).stdout).unwrap() else {
        panic!("base expected")
    };
    assert_eq!(t.m_rank(), 0);
}

#[test]
fn refine_is_a_common_subdivision() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let out_s = out.to_str().unwrap();
    assert_eq!(run(&["refine", &f("p2.json"), &f("hirzebruch2.json"), "--out", out_s]).code, 0);
    assert_eq!(run(&["subdivision", out_s, &f("p2.json")]).code, 0);
    assert_eq!(run(&["subdivision", out_s, &f("hirzebruch2.json")]).code, 0);
    assert_eq!(run(&["refine", &f("p2.json"), &f("quadrant.json")]).code, 3);
}

#[test]
fn render_matches_golden_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    assert_eq!(run(&["render", &f("delta_fig.json"), "--out", a.to_str().unwrap()]).code, 0);
    assert_eq!(run(&["render", &f("delta_fig.json"), "--out", b.to_str().unwrap()]).code, 0);
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/delta_fig.svg");
    assert_eq!(svg, std::fs::read_to_string(golden).unwrap());

    // the trivial coloring is a uniform grid in one color
    assert_eq!(run(&["render", &f("trivial.json"), "--out", a.to_str().unwrap()]).code, 0);
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg.matches("<circle").count(), 81);
    assert_eq!(svg.matches(r##"fill="#1f4e9c"/>"##).count(), 81 + 1);

    let rank3 = dir.path().join("r3.json");
    std::fs::write(
        &rank3,
        r#"{"schema_version": "1", "kind": "stacky_fan", "payload": {"ambient_rank": 3, "cones": [{"rays": [["1", "0", "0"]]}]}}"#,
    )
    .unwrap();
    assert_eq!(run(&["render", rank3.to_str().unwrap(), "--out", a.to_str().unwrap()]).code, 4);
    assert_eq!(run(&["render", &f("theta.json"), "--out", a.to_str().unwrap()]).code, 4);
}

fn parse_point(s: &str) -> IntVector {
    s.trim_matches(|c| c == '(' || c == ')').split(", ").map(|x| x.parse::<BigInt>().unwrap()).collect()
}

#[test]
fn s_enumerate_matches_minimal_membership() {
    for name in ["delta_fig.json", "p2.json", "trivial.json", "split_quadrant.json"] {
        let r = run(&["oracle", "s-enumerate", &f(name), "--radius", "3"]);
        assert_eq!(r.code, 0);
        let mut lines: Vec<&str> = r.stdout.lines().collect();
        let count: usize = lines.pop().unwrap().strip_prefix("count ").unwrap().parse().unwrap();
        let listed: Vec<IntVector> = lines.iter().map(|l| parse_point(l)).collect();
        assert_eq!(listed.len(), count);
        let m = match load(name) {
            Document::StackyFan(x) => minimal_fan(&x).unwrap(),
            Document::Coloring(m) => m,
            _ => unreachable!(),
        };
        let symbolic: Vec<IntVector> =
            box_points(2, 3).into_iter().filter(|p| minimal_set_member(p, &m).unwrap()).collect();
        assert_eq!(listed, symbolic, "{name}");
    }
}

#[test]
fn translation_and_cover_oracles() {
    let r = run(&["oracle", "translations-bruteforce", &f("two_arc.json"), "--bound", "10"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("cell 0 cone((1,0), (2,1))\ncell 1 cone((1,1), (2,1))\n"), "{}", r.stdout);
    assert!(r.stdout.contains("0 1: (-1) (0)\n"), "{}", r.stdout);

    let a = run(&["oracle", "cover-sample", &f("two_arc.json"), "--count", "300", "--seed", "5"]);
    assert_eq!((a.code, a.stdout.as_str()), (0, "covered 300/300\n"));
    let b = run(&["oracle", "cover-sample", &f("two_arc.json"), "--count", "300", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);

    // only the base cone: nothing at positive height is covered
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("base.json");
    let Document::AvFan(two) = load("two_arc.json") else { unreachable!() };
    let base_only = tropfan::AVStackyFan::new(two.base().clone(), vec![two.base().base_cone()]).unwrap();
    std::fs::write(&p, to_json(&Document::AvFan(base_only))).unwrap();
    let r = run(&["oracle", "cover-sample", p.to_str().unwrap(), "--count", "50"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("uncovered"));
}
