use ncrr::catalog;
use ncrr::io::*;

fn args(pos: &[&str]) -> CommandArgs {
    CommandArgs { positional: pos.iter().map(|s| s.to_string()).collect(), ..CommandArgs::default() }
}

const A2_WORKSPACE: &str = r#"{
  "format": 1,
  "use_catalog": ["A2"],
  "modules": {
    "P1": {"algebra": "A2", "shifts": [0], "idempotent": [{"row": 0, "col": 0, "value": "e1"}]},
    "P2": {"algebra": "A2", "shifts": [0], "idempotent": [{"row": 0, "col": 0, "value": "e2"}]},
    "C": {
      "algebra": "A2",
      "shifts": [1, 0],
      "twist": [{"row": 1, "col": 0, "value": "α"}],
      "idempotent": [{"row": 0, "col": 0, "value": "e1"}, {"row": 1, "col": 1, "value": "e2"}]
    },
    "N": {"algebra": "A2^op", "shifts": [0]}
  },
  "maps": {
    "three": {"source": "C", "target": "C", "entries": [{"row": 0, "col": 0, "value": "3*e1"}, {"row": 1, "col": 1, "value": "3*e2"}]},
    "idN": {"source": "N", "target": "N", "entries": [{"row": 0, "col": 0, "value": [1, 1, 0]}]}
  },
  "resolutions": {"R": "A2"}
}"#;

#[test]
fn catalog_stub() {
    let ws = parse_workspace(r#"{"use_catalog": ["A2"]}"#).unwrap();
    assert_eq!(ws.algebras["A2"].dim(), 3);
}

#[test]
fn malformed_triple_is_named() {
    let text = r#"{"algebras": {"bad": {"labels": ["1"], "mult": [[0, 0, 5, 1]], "unit": [1]}}}"#;
    let err = parse_workspace(text).unwrap_err().to_string();
    assert!(err.contains("algebras.bad"), "{err}");
    assert!(err.contains("(0, 0, 5)"), "{err}");
    assert!(parse_workspace("{not json").unwrap_err().to_string().contains("syntax"));
    let unresolved = r#"{"modules": {"M": {"algebra": "Nope", "shifts": [0]}}}"#;
    assert!(parse_workspace(unresolved).unwrap_err().to_string().contains("modules.M"));
}

#[test]
fn full_algebra_round_trip() {
    let a2 = catalog::path_algebra_a(2);
    let mut file = parse_workspace(A2_WORKSPACE).unwrap().file;
    file.algebras.insert("A2full".into(), describe_algebra(&a2));
    let text = file.to_json();
    let ws = parse_workspace(&text).unwrap();
    assert_eq!(ws.file, file);
    assert_eq!(ws.file.to_json(), text);
    assert_eq!(*ws.algebras["A2full"], a2);
    assert_eq!(ws.algebras["A2full"].idempotents(), a2.idempotents());
}

#[test]
fn commands_on_workspace() {
    let ws = parse_workspace(A2_WORKSPACE).unwrap();
    let r = run_command(&ws, "validate", &args(&[])).unwrap();
    assert!(r.pass, "{}", r.to_text());
    let r = run_command(&ws, "cohomology", &args(&["C"])).unwrap();
    assert_eq!(r.results["dims"]["0"], 1);
    let r = run_command(&ws, "class", &args(&["C", "three"])).unwrap();
    assert_eq!(r.results["class"], "-3*[e1] + 3*[e2]");
    let r = run_command(&ws, "class", &args(&["P2"])).unwrap();
    assert_eq!(r.results["class"], "[e2]");
    let r = run_command(&ws, "verify-rr", &args(&["C", "three", "N", "idN"])).unwrap();
    assert!(r.pass);
    assert_eq!(r.results["lhs"], "3/1");
    assert!(run_command(&ws, "class", &args(&["missing"])).is_err());
    assert!(run_command(&ws, "frobnicate", &args(&[])).is_err());
}

#[test]
fn catalog_commands() {
    let ws = Workspace::catalog_only();
    let r = run_command(&ws, "hh0", &args(&["A2"])).unwrap();
    assert_eq!(r.results["dim"], 2);
    assert_eq!(r.results["basis"][0], "[e1]");
    let r = run_command(&ws, "pair", &args(&["A2", "[e1]", "[e2]"])).unwrap();
    assert_eq!(r.results["value"], "1/1");
    let r = run_command(&ws, "hh0", &args(&["A3"])).unwrap();
    assert_eq!(r.results["dim"], 3);
    let r = run_command(&ws, "verify-serre", &args(&["A2"])).unwrap();
    assert!(r.pass, "{}", r.to_text());
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn randomized_reports_are_reproducible() {
    let ws = Workspace::catalog_only();
    let a = CommandArgs { random: Some(5), algebras: vec!["A2".into(), "M2".into()], ..CommandArgs::default() };
    let r1 = run_command(&ws, "verify-rr", &a).unwrap().to_json();
    let r2 = run_command(&ws, "verify-rr", &CommandArgs { jobs: 3, ..a.clone() }).unwrap().to_json();
    assert_eq!(r1, r2);
    assert!(r1.contains("\"seed\": 42"));
}

#[test]
fn element_expressions() {
    let a = catalog::path_algebra_a(2);
    let x = parse_element(&a, "2*e1 - 1/2*α + e2").unwrap();
    assert_eq!(x, vec![ncrr::linalg::q(2), ncrr::linalg::q(1), ncrr::linalg::qf(-1, 2)]);
    assert_eq!(parse_element(&a, "[e1]").unwrap(), a.basis(0));
    assert_eq!(parse_element(&a, "1").unwrap(), a.unit().to_vec());
    assert!(parse_element(&a, "zz").is_err());
}
