use eudoxus::ConeSpec;
use eudoxus_cli::{emit_cone_spec, load_cone, parse_cone_spec, run_command};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (String, i32) {
    run_command(std::iter::once("eudoxus").chain(args.iter().copied()))
}

fn check_lines(out: &str) -> Vec<&str> {
    out.lines().filter(|l| l.starts_with("CHECK ")).collect()
}

#[test]
fn parses_the_basic_kinds() {
    assert_eq!(parse_cone_spec("kind = orthant\ndim = 3").unwrap(), ConeSpec::Orthant(3));
    let psd = load_cone("kind = psd_real\nk = 2").unwrap();
    assert_eq!(psd.dim(), 3);
    let wedge = load_cone("kind = polyhedral\ndim = 2\ngen = 1,0\ngen = 1,1").unwrap();
    assert!(!wedge.is_self_dual());
    let commented = load_cone("# header\n  kind = lorentz   # trailing\n\ndim = 4\n").unwrap();
    assert_eq!(commented.dim(), 4);
}

#[test]
fn errors_name_line_and_column() {
    let e = parse_cone_spec("kind = cube\ndim = 3").unwrap_err();
    assert_eq!((e.line, e.column), (1, 8));
    assert!(e.message.contains("cube"));

    let e = parse_cone_spec("kind = orthant\ndim = zero").unwrap_err();
    assert_eq!((e.line, e.column), (2, 7));

    let e = parse_cone_spec("kind = psd_real\ndim = 2").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(e.message.contains("`k`"));

    let e = parse_cone_spec("kind = polyhedral\ndim = 2\ngen = 1,0\ngen = 1, x").unwrap_err();
    assert_eq!((e.line, e.column), (4, 10));

    let e = parse_cone_spec("kind = orthant\nsize 3").unwrap_err();
    assert_eq!((e.line, e.column), (2, 1));

    let e = load_cone("kind = polyhedral\ndim = 2\ngen = 1,0\ngen = 0,0").unwrap_err();
    assert_eq!(e.line, 4);

    let e = load_cone("kind = polyhedral\ndim = 2\ngen = 1,0\ngen = 2,0").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(e.message.contains("dependent"));

    let e = parse_cone_spec("kind = orthant\ndim = 2\ngen = 1,0").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(parse_cone_spec("dim = 2").is_err());
}

#[test]
fn emitter_round_trips_fixtures() {
    for name in ["orthant3.cone", "psd2.cone", "wedge.cone", "lorentz3.cone"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let spec = parse_cone_spec(&text).unwrap();
        let emitted = emit_cone_spec(&spec);
        let without_comments: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).map(|l| format!("{l}\n")).collect();
        assert_eq!(emitted, without_comments, "{name}");
        assert_eq!(parse_cone_spec(&emitted).unwrap(), spec);
    }
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(gens in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..6)) {
        let spec = ConeSpec::Polyhedral { dim: 3, generators: gens.into_iter().map(eudoxus::Vector::from_vec).collect() };
        let text = emit_cone_spec(&spec);
        prop_assert_eq!(parse_cone_spec(&text).unwrap(), spec.clone());
        prop_assert_eq!(emit_cone_spec(&parse_cone_spec(&text).unwrap()), text);
    }
}

#[test]
fn analyze_reports() {
    let (out, code) = run(&["analyze", &fixture("orthant3.cone")]);
    assert_eq!(code, 0);
    assert!(out.contains("Riesz: true"));
    assert!(out.contains("Der dimension: 3"));
    assert!(out.contains("CHECK property.orientability PASS Orientable"));

    let (out, code) = run(&["analyze", &fixture("psd2.cone")]);
    assert_eq!(code, 0);
    assert!(out.contains("Riesz: false"));
    assert!(out.contains("Der dimension: 4"));
    assert!(out.contains("NotOrientable (odd quotient dimension 3)"));

    let (out, _) = run(&["analyze", &fixture("wedge.cone")]);
    assert!(out.contains("self-dual: false"));
}

#[test]
fn check_lines_are_sorted_and_seeded() {
    let (out, _) = run(&["--seed", "42", "analyze", "lorentz:3"]);
    assert!(out.lines().any(|l| l == "# seed 42"));
    let lines = check_lines(&out);
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
    assert!(!lines.is_empty());
}

#[test]
fn deterministic_output() {
    let args = ["--seed", "7", "analyze", "psd_real:2"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn conjunct_demo() {
    let (out, code) = run(&["demo", "conjunct", "--density", "2", "--volume", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "6 [matter]"));
    let (out, _) = run(&["demo", "conjunct", "--density", "2", "--volume", "2", "--velocity", "2", "--matter", "2"]);
    assert!(out.lines().any(|l| l == "4 [matter]"));
    assert!(out.lines().any(|l| l == "4 [matter·velocity]"));
}

#[test]
fn other_demos() {
    let (out, code) = run(&["demo", "quadrature"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("CHECK quadrature.brackets_third PASS"));
    let (out, code) = run(&["demo", "krein", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("CHECK krein.pure_state_count PASS 3"));
}

#[test]
fn ratio_commands() {
    let (out, code) = run(&["ratio", "make", "--cone", "orthant:3", "--antecedent", "1,6,1.5", "--consequent", "1,2,3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("lambda = 3.000000000000 = 3"));
    let (out, code) = run(&["ratio", "eq", "--cone", "orthant:2", "--a1", "2,3", "--c1", "1,1", "--a2", "4,6", "--c2", "2,2"]);
    assert_eq!(code, 0);
    assert!(out.contains("equal: true"));
    let (out, _) = run(&["ratio", "compose", "--cone", "orthant:2", "--a1", "2,3", "--c1", "1,1", "--a2", "5,7", "--c2", "1,1"]);
    assert!(out.contains("CHECK ratio.compose PASS ratio"));
    let (out, _) = run(&["ratio", "add", "--cone", "orthant:2", "--a1", "2,3", "--c1", "1,1", "--a2", "5,7", "--c2", "1,1"]);
    assert!(out.contains("CHECK ratio.add PASS ratio"));
    let (out, _) = run(&["ratio", "compose", "--cone", "psd_real:2", "--a1", "2,0,1", "--c1", "1,0,1", "--a2", "1,0.7071067811865476,1", "--c2", "1,0,1"]);
    assert!(out.contains("CHECK ratio.compose UNKNOWN operator only"));
}

#[test]
fn derivation_commands() {
    let (out, code) = run(&["derivation", "spectrum", "--cone", "orthant:3", "--matrix", "1,0,0;0,1,0;0,0,5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("CHECK derivation.reconstruct PASS"));
    let (out, code) = run(&["derivation", "roundtrip", "--cone", "lorentz:3", "--matrix", "1,2,0;2,1,0;0,0,1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("CHECK derivation.roundtrip PASS"));
    let (_, code) = run(&["derivation", "spectrum", "--cone", "orthant:2", "--matrix", "0,1;1,0"]);
    assert_eq!(code, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze"]).1, 2);
    assert_eq!(run(&["frobnicate"]).1, 2);
    assert_eq!(run(&["analyze", "/nonexistent.cone"]).1, 2);
    assert_eq!(run(&["ratio", "make", "--cone", "orthant:2", "--antecedent", "1", "--consequent", "1,1"]).1, 2);
}

#[test]
fn writes_to_out() {
    let path = std::env::temp_dir().join(format!("eudoxus-report-{}.txt", std::process::id()));
    let (stdout, code) = run(&["--out", path.to_str().unwrap(), "demo", "conjunct"]);
    assert_eq!((stdout.as_str(), code), ("", 0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("6 [matter]"));
    let _ = std::fs::remove_file(path);
}
