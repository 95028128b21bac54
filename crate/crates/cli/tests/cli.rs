use std::process::{Command, Output};

use detrep::decomp::decompose;
use detrep::hyperbolic::is_hyperbolic_at;
use detrep::linearize::sym_linearize;
use detrep::matrix::{adjugate, determinant};
use detrep::parser::{parse_matrix, parse_polynomial};
use detrep::{LinearMatrix, ProjectivePoint};
use serde_json::Value;

fn detrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = detrep(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

/// The `verdict:` line of the text output, or `ok` when it is absent.
fn text_verdict(args: &[&str]) -> String {
    let out = stdout(&detrep(args));
    out.lines()
        .find_map(|l| l.strip_prefix("verdict: "))
        .unwrap_or("ok")
        .to_string()
}

#[test]
fn determinant_of_the_conic() {
    let o = detrep(&["det", "[[x0,x1],[x1,x2]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x0*x2 - x1^2\n");
}

#[test]
fn certified_non_decomposability_exits_zero() {
    let args = ["decompose", "--f1", "x0", "--f2", "x2", "[[x0,x1],[0,x2]]"];
    let o = detrep(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("verdict: NotDecomposable\n"), "{text}");
    assert!(text.contains("witness: (1,2)"), "{text}");
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NotDecomposable");
    assert_eq!(v["data"]["witness"], serde_json::json!([1, 2]));
}

#[test]
fn lorentz_cone_is_hyperbolic_on_samples() {
    let args = ["hyperbolic", "--point", "1,0,0", "--trials", "100", "--seed", "7", "x0^2 - x1^2 - x2^2"];
    assert_eq!(text_verdict(&args), "hyperbolic-on-samples");
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "hyperbolic-on-samples");
    assert_eq!(v["data"]["records"].as_array().unwrap().len(), 100);
    assert_eq!(v["inputs"]["seed"], "7");
}

#[test]
fn structured_schema() {
    let (v, _) = json(&["det", "[[x0,x1],[x1,x2]]"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["assertions_checked", "command", "data", "inputs", "verdict"]);
    assert_eq!(v["command"], "det");
    assert_eq!(v["inputs"]["matrix"], "[[x0, x1], [x1, x2]]");
    assert_eq!(v["data"]["determinant"], "x0*x2 - x1^2");
    assert_eq!(v["verdict"], "ok");
}

#[test]
fn text_and_structured_verdicts_agree() {
    let cases: &[&[&str]] = &[
        &["decompose", "--f1", "x0", "--f2", "x2", "[[x0,x1],[0,x2]]"],
        &["decompose", "--factors", "x0; x2", "[[x0,0],[0,x2]]"],
        &["maxgen", "--factors", "x0^2", "[[x0,x1],[0,x0]]"],
        &["maxgen", "--factors", "x0^2", "[[x0,0],[0,x0]]"],
        &["mf", "--factors", "x0^2", "[[x0,x1],[0,x0]]"],
        &["mf", "--factors", "x0^2", "[[x0,0],[0,x0]]"],
        &["hyperbolic", "--point", "1,0,0", "--trials", "20", "x0^2 + x1^2 + x2^2"],
        &["det", "[[x0]]"],
    ];
    for args in cases {
        let (v, code) = json(args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(v["verdict"], text_verdict(args), "{args:?}");
    }
}

#[test]
fn cli_reports_library_results() {
    let a = parse_matrix("[[x0, x1, 0], [x1, x2, x0], [0, x0, x1]]").unwrap();
    let text = "[[x0, x1, 0], [x1, x2, x0], [0, x0, x1]]";
    let (v, _) = json(&["det", text]);
    assert_eq!(v["data"]["determinant"], determinant(&a).to_string());
    let (v, _) = json(&["adj", text]);
    assert_eq!(v["data"]["adjugate"], adjugate(&a).to_string());

    let sym = sym_linearize(&parse_matrix("[[x1^2, x0*x1], [x0*x1, x2^2]]").unwrap()).unwrap();
    let (v, _) = json(&["linearize", "--symmetric", "[[x1^2, x0*x1], [x0*x1, x2^2]]"]);
    assert_eq!(v["data"]["matrix"], sym.matrix.to_string());
    assert_eq!(v["data"]["unit"], sym.unit.to_string());
    assert_eq!(v["data"]["steps"], sym.step_count);

    let text = "[[x0 + x1, x1], [x1, x1]]";
    let m = LinearMatrix::new(parse_matrix(text).unwrap()).unwrap();
    let (f1, f2) = (parse_polynomial("x0").unwrap(), parse_polynomial("x1").unwrap());
    let r = decompose(&m, &f1, &f2).unwrap();
    let (v, _) = json(&["decompose", "--f1", "x0", "--f2", "x1", text]);
    assert_eq!(v["verdict"], "Decomposable");
    assert_eq!(v["data"]["u1"], r.u1.to_string());
    assert_eq!(v["data"]["u2"], r.u2.to_string());
    assert_eq!(v["data"]["blocks"][0], r.blocks[0].as_poly().to_string());

    let f = parse_polynomial("x0*x1*x2").unwrap();
    let e = ProjectivePoint::parse("1,1,1").unwrap();
    let report = is_hyperbolic_at(&f, &e, 30, 5).unwrap();
    let (v, _) = json(&["hyperbolic", "--point", "1,1,1", "--trials", "30", "--seed", "5", "x0*x1*x2"]);
    assert_eq!(v["verdict"], report.verdict.as_str());
    for (rec, lib) in v["data"]["records"].as_array().unwrap().iter().zip(&report.records) {
        assert_eq!(rec["restricted"], lib.restricted.to_string());
    }
}

#[test]
fn inputs_from_files() {
    let dir = std::env::temp_dir().join(format!("detrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("conic.txt");
    std::fs::write(&path, "[[x0, x1],\n [x1, x2]]\n").unwrap();
    let arg = format!("@{}", path.display());
    let o = detrep(&["det", &arg]);
    assert_eq!(stdout(&o), "x0*x2 - x1^2\n");
    let missing = format!("@{}", dir.join("absent.txt").display());
    assert_eq!(detrep(&["det", &missing]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(detrep(&["det", "[[x0,"]).status.code(), Some(1));
    assert_eq!(detrep(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(detrep(&["reduce", "[[x0]]"]).status.code(), Some(1));
    assert_eq!(detrep(&["--help"]).status.code(), Some(0));
    assert_eq!(detrep(&["det", "--help"]).status.code(), Some(0));
    // not a matrix of linear forms
    assert_eq!(detrep(&["decompose", "--factors", "x0^2", "[[x0^2]]"]).status.code(), Some(1));
    // singular matrix
    assert_eq!(detrep(&["reduce", "--point", "1,0", "[[x0, x0], [x0, x0]]"]).status.code(), Some(1));
    // point on the hypersurface
    let o = detrep(&["--json", "hyperbolic", "--point", "1,1,0", "x0^2 - x1^2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "error");
    assert_eq!(v["data"]["kind"], "input");
}

#[test]
fn usage_errors_show_the_grammar() {
    let o = detrep(&["decompose", "[[x0]]"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("Usage: detrep decompose"), "{err}");
}

#[test]
fn leading_minus_is_an_expression() {
    let o = detrep(&["hyperbolic", "--point", "1,0,0", "--trials", "10", "-x0^2 + x1^2 + x2^2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("verdict: hyperbolic-on-samples"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["--json", "hyperbolic", "--point", "1,0,0", "--trials", "64", "--seed", "9", "x0^2 - x1^2 - x2^2"];
    let default = detrep(&args).stdout;
    for threads in ["0", "1", "3"] {
        let o = Command::new(env!("CARGO_BIN_EXE_detrep"))
            .args(args)
            .env("DETREP_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.stdout, default, "DETREP_THREADS={threads}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_detrep"))
        .args(args)
        .env("DETREP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
