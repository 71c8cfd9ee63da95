use std::path::PathBuf;

use serde_json::Value;
use stonekit::cli::{run, EXIT_FALSE, EXIT_INPUT, EXIT_OK};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["stonekit"];
    argv.extend_from_slice(args);
    run(argv)
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out) = cli(&a);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}"));
    assert!(jsonschema::is_valid(&schema("envelope.schema.json"), &v), "{v}");
    assert_eq!(v["exit"], code);
    (code, v)
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("stonekit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn omega_cat_decisions() {
    let (code, out) = cli(&["omega-cat", &data("atomless.pos")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("ω-categorical; refined tuple:\nposystem atomless\n"), "{out}");
    let (code, out) = cli(&["omega-cat", &data("discrete_open.pos")]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("infinitely many isolated points"));
}

#[test]
fn iso_on_relabelled_copies() {
    let (code, out) = cli(&["iso", &data("relabeled.pos")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "isomorphic: a->z b->y c->x\n");
    let (code, _) = cli(&["iso", &data("chain2.pos"), &data("atomless.pos")]);
    assert_eq!(code, EXIT_FALSE);
    let (code, out) = cli(&["iso", &data("chain2.pos")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("two blocks"));
}

#[test]
fn match_two_strategies() {
    let (code, out) = cli(&["match", &data("chain2.pos"), "--depth", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("matched to depth 4:"), "{out}");
    let (code, v) = json(&["match", &data("chain2.pos"), "--depth", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(jsonschema::is_valid(&schema("matching.schema.json"), &v["result"]));
    assert_eq!(v["result"]["pieces"], v["result"]["levels"][2].as_array().unwrap().len());
}

#[test]
fn mismatched_models_are_a_negative_decision() {
    let (code, out) = cli(&["match", &data("relabeled.pos"), "--depth", "2"]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("no matching"));
}

#[test]
fn json_outputs_follow_the_schemas() {
    for (verb, file, schema_name) in [
        ("approximate", "chain2.pos", "model.schema.json"),
        ("approximate", "finite3.pos", "model.schema.json"),
        ("check", "chain2.pos", "report.schema.json"),
        ("decompose", "chain2.pos", "decomposition.schema.json"),
        ("decompose", "relabeled.pos", "decomposition.schema.json"),
    ] {
        let (code, v) = json(&[verb, &data(file), "--depth", "3"]);
        assert_eq!(code, EXIT_OK, "{verb} {file}: {v}");
        let s = schema(schema_name);
        assert!(jsonschema::is_valid(&s, &v["result"]), "{verb} {file}");
    }
}

#[test]
fn model_field_order_is_fixed() {
    let (_, out) = cli(&["approximate", &data("chain2.pos"), "--depth", "1", "--format", "json"]);
    let keys = [
        "\"depth\"",
        "\"cells\"",
        "\"id\"",
        "\"parent\"",
        "\"type\"",
        "\"marks\"",
        "\"compact\"",
        "\"escape\"",
        "\"coverage\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{out}");
}

#[test]
fn check_passes_and_outputs_are_stable() {
    let a = cli(&["check", &data("relabeled.pos"), "--depth", "4"]);
    assert_eq!(a.0, EXIT_OK, "{}", a.1);
    let b = cli(&["check", &data("relabeled.pos"), "--depth", "4"]);
    assert_eq!(a, b);
    let e1 = cli(&["enumerate", "--max-p", "3", "--n", "1", "--max-f", "3", "--samples", "50", "--seed", "11"]);
    let e2 = cli(&["enumerate", "--max-p", "3", "--n", "1", "--max-f", "3", "--samples", "50", "--seed", "11"]);
    assert_eq!(e1, e2);
    assert_eq!(e1.0, EXIT_OK);
    assert!(e1.1.contains("|P| = 3: 158 classes"));
}

#[test]
fn conversions_and_signatures() {
    let (code, ca) = cli(&["to-ca", &data("chain2.pos")]);
    assert_eq!(code, EXIT_OK);
    let path = temp("chain2_ca.pos", &ca);
    let (code, tba) = cli(&["to-tba", &path]);
    assert_eq!(code, EXIT_OK);
    let both = temp("both.pos", &format!("{}\n{}", std::fs::read_to_string(data("chain2.pos")).unwrap(), tba));
    assert_eq!(cli(&["iso", &both]).0, EXIT_OK);

    let (code, out) = cli(&["signature", &data("sig.pos")]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("witness:"));
    let bad = temp("bad_sig.pos", "posystem s\n  elements: a\n  Q1: a\n  k: a=0\nend\n");
    assert_eq!(cli(&["signature", &bad]).0, EXIT_FALSE);
}

#[test]
fn measures_on_the_command_line() {
    let f = data("relabeled.pos");
    assert_eq!(cli(&["mu-add", &f, "1*a", "1*b"]), (EXIT_OK, "1*a + 1*b\n".to_string()));
    assert_eq!(cli(&["mu-add", &f, "a", "c"]), (EXIT_OK, "1*a\n".to_string()));
    assert_eq!(cli(&["mu-add", &f, "2*a", "1*a"]).0, EXIT_INPUT);
    let (code, out) = cli(&["mu-split", &f, "2*a + 1*b", "1*a", "1*a + 1*b"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("side 1: a\nside 2: a b\n"), "{out}");
}

#[test]
fn orbit_counts() {
    assert_eq!(cli(&["orbits", &data("atomless.pos")]).1, "3 invariants for 1-tuples (exact)\n");
    assert_eq!(cli(&["orbits", &data("finite3.pos")]).1, "4 invariants for 1-tuples (exact)\n");
}

#[test]
fn input_errors() {
    let bad = temp("bad.pos", "posystem X\n  elements: a b\n  order: a<c\nend\n");
    let (code, out) = cli(&["validate", &bad]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains(":3:12: unknown element `c`"), "{out}");
    let (code, v) = json(&["validate", &bad]);
    assert_eq!(code, EXIT_INPUT);
    assert!(v["error"].as_str().unwrap().contains("unknown element"));

    let zero = temp("zero.pos", "posystem X\n  elements: p\n  L: p\n  f: p=0\n  Q1: p\nend\n");
    let (code, out) = cli(&["validate", &zero]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("must be positive"));

    let (code, out) = cli(&["check"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.contains("posystem"));
    assert_eq!(cli(&["build", &data("chain2_ca.pos")]).0, EXIT_INPUT);
}

#[test]
fn validate_reports_invalid_tuples() {
    let f = temp("nogen.pos", "posystem X\n  elements: p q\n  reflexive: p q\n  L: p q\n  Q1: p q\nend\n");
    let (code, out) = cli(&["validate", &f]);
    assert_eq!(code, EXIT_FALSE);
    assert!(out.contains("FAIL generation"), "{out}");
    assert_eq!(cli(&["validate", &data("relabeled.pos")]).0, EXIT_OK);
}
