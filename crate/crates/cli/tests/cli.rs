use std::io::Write;
use std::process::{Command, Output, Stdio};

use lsfactors::exactalg::{parse_rf, RationalFunction};
use lsfactors::localfactors::{l_factor, UnramifiedRep};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsfactors"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lsfactors"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bc_u4_lift() {
    let out = run(&["bc", "--group", "U4", "--satake", "a1,a2", "--place", "inert", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(
        v["lift"]["lift"]["satake"],
        serde_json::json!(["a1", "a2", "a2^-1", "a1^-1"])
    );
    assert_eq!(v["holds"], Value::Bool(true));
    assert!(v["unitary_side"]["gamma"].is_object());
    assert!(v["general_linear_side"]["gamma"].is_object());
}

#[test]
fn bc_split_place() {
    let out = run(&[
        "bc", "--group", "U3", "--satake", "a,b,c", "--place", "split", "--tau", "x", "--tau-second", "y",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("factors agree: true"), "{text}");
}

#[test]
fn verify_multiplicativity_for_u3_lists_both_sides() {
    let out = run(&["verify", "--suite", "multiplicativity", "--group", "U3", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let suite = &v["suites"][0];
    assert_eq!(suite["suite"], "multiplicativity");
    assert_eq!(suite["passed"], Value::Bool(true));
    let level = &suite["details"][0]["report"]["levels"][0];
    let det: RationalFunction = serde_json::from_value(level["determinant_side"].clone()).unwrap();
    let rank_one: RationalFunction = serde_json::from_value(level["rank_one_side"].clone()).unwrap();
    assert_eq!(det, rank_one);
}

#[test]
fn unknown_flag_is_an_input_error() {
    let out = run(&["l-factor", "--bad-json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_names_the_field() {
    let cases = [
        (r#"{"group":"U3","satake":["a"],"thetta":[1]}"#, "thetta"),
        (r#"{"group":{"kind":"U","n":3},"satake":["a"]}"#, "group"),
        (r#"{"group":"U3","satake":[3.5]}"#, "satake[0]"),
        (r#"{"group":"U3","satake":["a"],"place":"nowhere"}"#, "place"),
        (r#"{"group":"U3","satake":["a","b"]}"#, "satake"),
        (r#"{"group":"U3","satake":["a"],"psi_conductor":"x"}"#, "psi_conductor"),
        (r#"{"group":"U3","satake":["a"#, "satake"),
    ];
    for (input, field) in cases {
        let out = run_stdin(&["l-factor", "--input", "-"], input);
        assert_eq!(out.status.code(), Some(2), "{input}");
        assert!(stderr(&out).contains(field), "{input}: {}", stderr(&out));
    }
}

#[test]
fn missing_input_file_is_an_input_error() {
    let out = run(&["gamma", "--input", "/nonexistent/rep.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_level_is_an_input_error() {
    let out = run(&["l-factor", "--group", "U4", "--satake", "a,b", "--theta", "1", "--level", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("level"), "{}", stderr(&out));
}

#[test]
fn json_output_round_trips() {
    let out = run(&["l-factor", "--group", "U5", "--satake", "a,b", "--theta", "2", "--level", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let rep: UnramifiedRep = serde_json::from_value(v["representation"].clone()).unwrap();
    let l: RationalFunction = serde_json::from_value(v["l"].clone()).unwrap();
    assert_eq!(l, l_factor(&rep, 2).unwrap());
    assert_eq!(serde_json::to_value(&rep).unwrap(), v["representation"]);
    assert_eq!(serde_json::to_value(&l).unwrap(), v["l"]);

    let out = run(&["gamma", "--group", "resGL2", "--satake", "a,b", "--psi-conductor", "2", "--json"]);
    let v = json(&out);
    for key in ["gamma", "l", "epsilon"] {
        let f: RationalFunction = serde_json::from_value(v["factors"][key].clone()).unwrap();
        assert_eq!(serde_json::to_value(&f).unwrap(), v["factors"][key]);
    }
}

#[test]
fn pretty_mode_prints_factored_forms() {
    let out = run(&["l-factor", "--group", "resGL2", "--satake", "a,b", "--place", "base"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(1 - a*t)") && text.contains("(1 - b*t)"), "{text}");
    let expected = parse_rf("1/((1 - a*t)*(1 - b*t))").unwrap();
    let out = run(&["l-factor", "--group", "resGL2", "--satake", "a,b", "--place", "base", "--json"]);
    let l: RationalFunction = serde_json::from_value(json(&out)["l"].clone()).unwrap();
    assert_eq!(l, expected);
}

#[test]
fn gamma_reports_the_functional_equation() {
    let out = run(&["gamma", "--group", "U3", "--satake", "a", "--q", "9", "--psi-conductor", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("functional equation: holds"));
}

#[test]
fn local_coefficient_checks_multiplicativity() {
    let out = run(&["local-coeff", "--group", "U5", "--satake", "a,b", "--theta", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["multiplicativity"]["holds"], Value::Bool(true));
    let out = run(&["local-coeff", "--group", "U3", "--satake", "a"]);
    assert_eq!(out.status.code(), Some(2), "no Levi given");
}

#[test]
fn complex_satake_values_from_stdin() {
    let input = r#"{"group":"U3","satake":[{"re":"0.6","im":"0.8"}],"q":"9"}"#;
    let out = run_stdin(&["l-factor", "--input", "-", "--json"], input);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["temperedness"]["tempered"], Value::Bool(true));
    assert!(v["placeholders"]["%z0"].is_string());
    let out = run_stdin(&["bc", "--input", "-"], input);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn zeta_matches_closed_form() {
    let out = run(&["zeta", "--q", "2", "--depth", "8", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matches"], Value::Bool(true));
    assert_eq!(v["coefficients"][8], "511");
    assert_eq!(run(&["zeta", "--q", "6"]).status.code(), Some(2));
}

#[test]
fn decompose_emits_chain_and_levels() {
    let out = run(&["decompose", "--group", "U3", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["chain_check"]["passed"], Value::Bool(true));
    assert_eq!(v["level_partition"]["m_r"], 2);
    for key in ["thetas", "alphas", "factors", "blocks"] {
        assert!(v["chain"][key].is_array(), "{key}");
    }
    assert_eq!(run(&["decompose", "--group", "U4", "--theta", "5"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let a = run(&["verify", "--suite", "round-trip", "--seed", "7", "--json"]);
    let b = run(&["verify", "--suite", "round-trip", "--seed", "7", "--json"]);
    let strip = |mut v: Value| {
        v["suites"][0]["elapsed_ms"] = Value::Null;
        v
    };
    assert_eq!(strip(json(&a)), strip(json(&b)));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
