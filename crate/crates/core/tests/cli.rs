use std::path::PathBuf;
use std::process::Command;

use rigidform::cli::{run_cli, Scenario, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};
use rigidform::galois::check_place_conditions;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rigidform").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rigidform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bundled_sign_torus_has_component_group_z4() {
    let (code, out, err) = cli(&["run", "--bundled", "c2-sign-torus"]);
    assert_eq!(code, EXIT_PASS, "{err}");
    let report: toml::Value = toml::from_str(&out).unwrap();
    assert_eq!(report["passed"].as_bool(), Some(true));
    let first = &report["results"][0];
    assert_eq!(first["kind"].as_str(), Some("component_group"));
    assert_eq!(first["groups"][0]["invariants"][0].as_str(), Some("4"));
    assert_eq!(first["groups"][0]["order"].as_str(), Some("4"));
}

#[test]
fn empty_scenario_gives_empty_report() {
    let path = scratch("empty.toml", "");
    let (code, out, _) = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(!out.contains("[[results]]"), "{out}");
    assert!(out.contains("passed = true"));
}

#[test]
fn invalid_table_is_an_input_error() {
    // A loop of order 5 in which every element is its own inverse: not a group.
    let text = "[group]\ntable = [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]\n";
    let path = scratch("loop.toml", text);
    let (code, _, err) = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("associativity violated at ("), "{err}");
    assert!(err.contains("group.table"), "{err}");
}

#[test]
fn parse_errors_name_the_line() {
    let path = scratch("typo.toml", "name = \"x\"\n\n[[modules]]\nid = \"M\"\nrank = 1\ncolour = 3\n");
    let (code, _, err) = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn failing_verification_exits_one() {
    // Ψ on a system violating condition (4) is not onto Ĥ^{-1}.
    let text = "group = { name = \"C2\" }\n\n[[places]]\nid = \"S\"\nmodulus = \"2\"\ndecomposition = [[0]]\nnegative_control = true\n\n[[modules]]\nid = \"A\"\nrank = 1\nmoduli = [\"2\"]\n\n[[operations]]\nkind = \"psi\"\nplaces = \"S\"\nmodule = \"A\"\n";
    let path = scratch("negative.toml", text);
    let (code, out, _) = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    assert!(out.contains("status = \"fail\""));
    assert!(out.contains("witness = "));
}

#[test]
fn generated_scenario_round_trips_through_run() {
    let (code, text, err) = cli(&["generate", "--seed", "1"]);
    assert_eq!(code, EXIT_PASS, "{err}");
    let scenario = Scenario::parse(&text).unwrap();
    assert_eq!(scenario.to_toml(), text);
    let path = scratch("generated.toml", &text);
    let (code, report, err) = cli(&["run", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{err}{report}");
}

#[test]
fn generation_is_byte_identical() {
    for seed in ["1", "2", "99"] {
        assert_eq!(cli(&["generate", "--seed", seed]).1, cli(&["generate", "--seed", seed]).1);
    }
    assert_ne!(cli(&["generate", "--seed", "1"]).1, cli(&["generate", "--seed", "2"]).1);
}

#[test]
fn runs_are_byte_identical() {
    let (_, text, _) = cli(&["generate", "--seed", "5"]);
    let path = scratch("repeat.toml", &text);
    let a = cli(&["run", path.to_str().unwrap(), "--seed", "3"]);
    let b = cli(&["run", path.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(a, b);
}

#[test]
fn negative_control_flag_violates_condition_four() {
    let (code, text, _) = cli(&["generate", "--seed", "1", "--negative-control"]);
    assert_eq!(code, EXIT_PASS);
    let built = Scenario::parse(&text).unwrap().build().unwrap();
    assert!(built.places.values().any(|p| !check_place_conditions(&p.level.system).every_element_fixes_dotted));
}

#[test]
fn bounds_above_the_caps_are_rejected() {
    for args in [["--max-order", "13"], ["--max-rank", "5"], ["--max-places", "9"], ["--max-modulus", "13"]] {
        let (code, _, err) = cli(&["generate", args[0], args[1]]);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(err.contains("outside"), "{err}");
    }
}

#[test]
fn report_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("rigidform-report-{}.toml", std::process::id()));
    let (code, out, _) = cli(&["run", "--bundled", "c2-sign-torus", "--report", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("c2-sign-torus: pass"));
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("scenario = \"c2-sign-torus\""));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rigidform");
    let ok = Command::new(bin).args(["run", "--bundled", "c2-sign-torus"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS));
    let missing = Command::new(bin).args(["run", "/nonexistent/scenario.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_INPUT));
    let bad_flag = Command::new(bin).args(["run", "--no-such-flag"]).output().unwrap();
    assert_eq!(bad_flag.status.code(), Some(EXIT_INPUT));
}
