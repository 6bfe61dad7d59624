//! Acceptance criterion 10: CLI contract. Round-trip identity on the
//! fixture corpus, stable exit codes, and the golden jump output.

use std::path::PathBuf;
use std::process::{Command, Output};

use jumplab_cli::problem::{compile, ProblemFile};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

fn jumplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumplab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = jumplab(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn criterion_10_round_trip_identity_on_fixture_corpus() {
    let mut checked = 0;
    for entry in std::fs::read_dir(fixture_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let parsed = ProblemFile::load(&path)
            .unwrap_or_else(|e| panic!("{}: {}", path.display(), e.message));
        let reparsed = ProblemFile::parse(&parsed.to_json()).unwrap();
        assert_eq!(
            parsed,
            reparsed,
            "round trip differs for {}",
            path.display()
        );
        compile(&parsed).unwrap_or_else(|e| panic!("{}: {}", path.display(), e.message));
        checked += 1;
    }
    assert_eq!(checked, 20, "fixture corpus must hold 20 canonical files");
    println!("ACCEPTANCE 10a round-trip identity on {checked} fixtures: PASS");
}

#[test]
fn criterion_10_golden_jump_output() {
    let golden = fixture("golden_two_gon.json");
    let (code, stdout, _) = run(&["jump", golden.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(
        stdout.lines().any(|l| l == "j = 1/2"),
        "missing golden line in:\n{stdout}"
    );
    println!("ACCEPTANCE 10b golden 2-gon prints \"j = 1/2\": PASS");
}

#[test]
fn criterion_10_exit_codes_observed() {
    let f = |name: &str| fixture(name).to_str().unwrap().to_string();

    // 0: success paths
    let (code, stdout, _) = run(&["green", &f("golden_two_gon.json"), "--X", "D", "--Y", "D"]);
    assert_eq!((code, stdout.trim()), (0, "1/2"));
    let (code, stdout, _) = run(&["green", &f("single_vertex.json"), "--X", "D", "--Y", "D"]);
    assert_eq!((code, stdout.trim()), (0, "0"));
    let (code, stdout, _) = run(&["align", &f("one_gon.json")]);
    assert_eq!((code, stdout.trim()), (0, "aligned"));
    let (code, stdout, _) = run(&["align", &f("golden_two_gon.json")]);
    assert_eq!(code, 0, "a negative verdict is data, not failure");
    assert!(stdout.contains("not aligned"));
    assert!(stdout.contains("e1") && stdout.contains("e2"));

    // 2: parse and validation errors
    for bad in [
        "invalid/syntax_error.json",
        "invalid/unknown_field.json",
        "invalid/zero_label.json",
        "invalid/bad_vertex_ref.json",
        "invalid/nonzero_degree_divisor.json",
        "invalid/unknown_order_name.json",
    ] {
        let (code, _, stderr) = run(&["align", &f(bad)]);
        assert_eq!(code, 2, "{bad} should be an input error: {stderr}");
        assert!(!stderr.is_empty(), "{bad} should explain itself");
    }
    let (code, _, _) = run(&[
        "green",
        &f("golden_two_gon.json"),
        "--X",
        "nope",
        "--Y",
        "D",
    ]);
    assert_eq!(code, 2);

    // 3: disconnected network
    let (code, _, _) = run(&["green", &f("disconnected.json"), "--X", "D", "--Y", "D"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["jump", &f("disconnected.json")]);
    assert_eq!(code, 3);

    // 5: enumeration bound (11 edges > 10)
    let (code, _, _) = run(&["oracle", &f("eleven_edges.json")]);
    assert_eq!(code, 5);

    // the bound is configurable through the environment
    let out = Command::new(env!("CARGO_BIN_EXE_jumplab"))
        .args(["oracle", &f("eleven_edges.json")])
        .env("JUMPLAB_ENUM_BOUND", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("MATCH"));

    println!("ACCEPTANCE 10c exit codes 0/2/3/5 observed as documented: PASS");
}

#[test]
fn oracle_reports_match_on_examples() {
    let f = |name: &str| fixture(name).to_str().unwrap().to_string();
    let (code, stdout, _) = run(&["oracle", &f("unit_triangle.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("MATCH"));
    assert_eq!(stdout.matches("2/3").count(), 3, "all pairs are 2/3");

    let (code, stdout, _) = run(&["oracle", &f("parallel_23.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("6/5") && stdout.contains("MATCH"));
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let golden = fixture("golden_two_gon.json");
    let (code, stdout, _) = run(&[
        "sweep",
        golden.to_str().unwrap(),
        "--max",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("interior: 4"));
    assert!(stdout.contains("min: 1/2"));
    assert!(stdout.contains("all zero: false"));
    let body = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "Z1,Z2,num,den");
    assert_eq!(lines.len(), 1 + 9, "header plus the {{0..2}}^2 grid");
    assert_eq!(lines[1], "0,0,0,1");
    assert!(lines.contains(&"1,1,1,2"));

    // aligned input: every value is zero
    let aligned = fixture("aligned_two_gon.json");
    let csv2 = dir.path().join("aligned.csv");
    let (code, stdout, _) = run(&[
        "sweep",
        aligned.to_str().unwrap(),
        "--max",
        "1",
        "--csv",
        csv2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("all zero: true"));
}

#[test]
fn jump_breaks_down_terms_per_divisor() {
    let golden = fixture("golden_two_gon.json");
    let (code, stdout, _) = run(&["jump", golden.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("gr(full) = 1/2"));
    assert!(stdout.contains("gr(Z1) = 0"));
    assert!(stdout.contains("gr(Z2) = 0"));
    assert!(stdout.contains("alignment: not aligned"));

    // aligned and tree inputs report zero
    for file in ["aligned_two_gon.json", "tree_path.json"] {
        let (code, stdout, _) = run(&["jump", fixture(file).to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(stdout.lines().any(|l| l == "j = 0"), "{file}:\n{stdout}");
    }
}

#[test]
fn blocks_prints_decomposition() {
    let (code, stdout, _) = run(&["blocks", fixture("two_triangles.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches("block ").count(), 2);
    assert!(stdout.contains("cut vertices: [c]"));
}

#[test]
fn green_accepts_inline_orders() {
    let golden = fixture("golden_two_gon.json");
    let (code, stdout, _) = run(&[
        "green",
        golden.to_str().unwrap(),
        "--X",
        "D",
        "--Y",
        "D",
        "--orders",
        "Z1=5",
    ]);
    // resistances 5 and 0: the zero edge contracts everything
    assert_eq!((code, stdout.trim()), (0, "0"));

    let (code, stdout, _) = run(&[
        "green",
        golden.to_str().unwrap(),
        "--X",
        "D",
        "--Y",
        "D",
        "--orders",
        "Z1=2,Z2=3",
    ]);
    assert_eq!((code, stdout.trim()), (0, "6/5"));
}

#[test]
fn nonzero_degree_divisor_warns_but_computes() {
    let file = fixture("nonzero_degree.json");
    let (code, stdout, stderr) = run(&["green", file.to_str().unwrap(), "--X", "X", "--Y", "X"]);
    assert_eq!(code, 0);
    assert!(!stdout.trim().is_empty());
    assert!(stderr.contains("nonzero total degree"));
}

#[test]
fn single_edge_green_is_its_resistance() {
    // one resistor of 5 ohms
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("single.json");
    std::fs::write(
        &path,
        r#"{
            "divisor_basis": ["Z1"],
            "vertices": ["u", "v"],
            "edges": [{"id": "e1", "ends": ["u", "v"], "label": {"Z1": 1}}],
            "divisors": {"D": {"u": 1, "v": -1}},
            "orders": {"Z1": 5}
        }"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["green", path.to_str().unwrap(), "--X", "D", "--Y", "D"]);
    assert_eq!((code, stdout.trim()), (0, "5"));
}
