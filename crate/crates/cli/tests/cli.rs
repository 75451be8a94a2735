use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/paper/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn relplp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relplp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let text = fs::read_to_string(format!("{}/../../docs/report.schema.json", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn assert_valid(json: &str) {
    let value: serde_json::Value = serde_json::from_str(json).unwrap();
    let schema = schema();
    let messages: Vec<String> = match schema.validate(&value) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    assert!(messages.is_empty(), "schema violations: {messages:?}");
}

#[test]
fn eval_table_total() {
    let o = relplp(&["eval", &fixture("int1_reconciled.pl"), "--priors", &fixture("priors.tsv")]);
    assert!(o.status.success());
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("total"));
    let total: f64 = last.split_whitespace().last().unwrap().parse().unwrap();
    assert!((total - 2.3472).abs() < 1e-3);
    assert!(out.contains("wantsNotDrink(mary,coffee):"));
}

#[test]
fn empty_program_with_one_query() {
    let program = scratch("empty.pl", "query(q).\n");
    let priors = scratch("empty.tsv", "q\t0.3\n");
    let o = relplp(&["eval", &program, "--priors", &priors, "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0]["posterior"], 0.0);
    assert_eq!(v["rows"][0]["kld"], "inf");
    assert_eq!(v["total_kld"], "inf");
    assert_eq!(v["satisfied"], false);
    assert_valid(&stdout(&o));

    let o = relplp(&["eval", &program, "--priors", &priors]);
    assert!(stdout(&o).lines().last().unwrap().ends_with("inf"));
}

#[test]
fn csv_has_one_row_per_query_plus_summary() {
    let o = relplp(&["eval", &fixture("int5.pl"), "--priors", &fixture("priors_int5.tsv"), "--format", "csv"]);
    assert!(o.status.success());
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), ["label", "query", "prior", "posterior", "kld", "herbrand", "satisfied"]);
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 9 + 1);
    assert_eq!(&records[9][1], "total");
    assert_eq!(&records[0][1], "healthconscious(mary)");
}

#[test]
fn json_validates() {
    let o = relplp(&["eval", &fixture("int2.pl"), "--priors", &fixture("priors.tsv"), "--format", "json"]);
    assert!(o.status.success());
    assert_valid(&stdout(&o));

    let files = ["int1_reconciled.pl", "int2.pl", "int3.pl", "int4.pl", "int5.pl"].map(fixture);
    let priors = ["priors.tsv", "priors.tsv", "priors.tsv", "priors.tsv", "priors_int5.tsv"].map(fixture);
    let mut args: Vec<&str> = vec!["compare"];
    args.extend(files.iter().map(String::as_str));
    for p in &priors {
        args.extend(["--priors", p.as_str()]);
    }
    args.extend(["--format", "json"]);
    let o = relplp(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_valid(&stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["selection"]["winner"], "int5");
}

#[test]
fn compare_labels_and_trace() {
    let o = relplp(&[
        "compare",
        &fixture("int1_reconciled.pl"),
        &fixture("int4.pl"),
        "--priors",
        &fixture("priors.tsv"),
        "--label",
        "Int 1",
        "--label",
        "Int 4",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().last().unwrap(), "winner: Int 1");
    assert!(out.contains("Int 4 eliminated, same KL measure"));
}

#[test]
fn exit_statuses() {
    let priors = scratch("status.tsv", "a\t0.5\nq\t0.5\n");
    let code = |source: &str, extra: &[&str]| {
        let file = scratch(&format!("status_{}.pl", source.len()), source);
        let mut args = vec!["eval", file.as_str(), "--priors", priors.as_str()];
        args.extend(extra);
        relplp(&args).status.code().unwrap()
    };
    assert_eq!(code("a :- .", &[]), 2);
    assert_eq!(code("r(a).\nq :- r(X), X \\= Y.\nquery(q).", &[]), 3);
    assert_eq!(code("0.5::a.\nevidence(b).\nquery(a).", &[]), 4);
    assert_eq!(
        code("0.5::a1.\n0.5::a2.\n0.5::a3.\na :- a1.\na :- a2.\na :- a3.\nquery(a).", &["--mode", "enumerate", "--max-worlds", "4"]),
        5
    );
    assert_eq!(code("query(zz).", &[]), 1);

    let o = relplp(&["compare", &fixture("int2.pl"), &fixture("int2.pl"), "--priors", &fixture("priors.tsv")]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stdout(&o).ends_with("winner: none\n"));

    assert_eq!(relplp(&["compare", &fixture("int2.pl")]).status.code(), Some(1));
    assert_eq!(relplp(&["eval", "/nonexistent/file.pl"]).status.code(), Some(1));
    assert_eq!(relplp(&["--help"]).status.code(), Some(0));
}

#[test]
fn priors_count_must_match() {
    let o = relplp(&[
        "compare",
        &fixture("int1_reconciled.pl"),
        &fixture("int2.pl"),
        &fixture("int3.pl"),
        "--priors",
        &fixture("priors.tsv"),
        "--priors",
        &fixture("priors.tsv"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--priors"));
}

#[test]
fn dump_ground_goes_to_stderr() {
    let o = relplp(&["eval", &fixture("int2.pl"), "--priors", &fixture("priors.tsv"), "--dump-ground"]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.starts_with("% ground program: int2\n"));
    assert!(err.contains("0.9::edge(coffee,tirednessBlockingDrink)."));
    assert!(!stdout(&o).contains("::"));
}

#[test]
fn modes_agree_on_output() {
    let run = |mode: &str, extra: &[&str]| {
        let mut args = vec!["eval", "--mode", mode];
        let (f, p) = (fixture("int3.pl"), fixture("priors.tsv"));
        args.extend([f.as_str(), "--priors", p.as_str()]);
        args.extend(extra);
        stdout(&relplp(&args))
    };
    let auto = run("auto", &[]);
    assert_eq!(auto, run("compiled", &[]));
    assert_eq!(auto, run("enumerate", &[]));
    assert_eq!(auto, run("enumerate", &["--sequential"]));
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema = schema();
    let bad = serde_json::json!({
        "label": "x",
        "rows": [{"query": "q", "prior": 0.3, "posterior": 0.0, "kld": "infinity"}],
        "total_kld": "inf",
        "herbrand": 1,
        "satisfied": false
    });
    assert!(!schema.is_valid(&bad));
    let missing = serde_json::json!({"label": "x", "rows": []});
    assert!(!schema.is_valid(&missing));
}
