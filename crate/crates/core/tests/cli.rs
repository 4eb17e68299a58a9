mod common;

use common::Workspace;
use fusionkit::cli::{run, CliOutput, EXIT_INPUT, EXIT_USAGE};
use fusionkit::io::ResultDocument;

fn cli(args: &[&str]) -> CliOutput {
    let mut argv = vec!["fusionkit", "--no-cache"];
    argv.extend_from_slice(args);
    run(argv)
}

fn doc(out: &CliOutput) -> ResultDocument {
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn clebsch_gordan_product() {
    let ws = Workspace::new();
    let out = cli(&["product", &ws.path("su2.json"), "x1", "x1"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "x0 ⊕ x2\n"));
}

#[test]
fn so3_is_not_certified() {
    let ws = Workspace::new();
    let out = cli(&["--json", "divisible", &ws.path("su2.json"), "--sub", &ws.path("so3-embed.json"), "--depth", "8"]);
    assert_eq!(out.code, 2);
    let d = doc(&out);
    assert_eq!(d.verdict.as_deref(), Some("UnknownWithinBound"));
    assert_eq!(d.witnesses[0].detail, "x2⊗x1 = x1 ⊕ x3");
}

#[test]
fn rank_one_module_is_torsion() {
    let ws = Workspace::new();
    let out = cli(&["torsion", &ws.path("rank1-z2.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("torsion: Holds"));
}

#[test]
fn invalid_module_reports_its_witness() {
    let ws = Workspace::new();
    let out = cli(&["--json", "torsion", &ws.path("bad-module.json")]);
    assert_eq!(out.code, 1);
    let d = doc(&out);
    assert_eq!(d.witnesses[0].property, "associativity");
}

#[test]
fn usage_and_input_errors() {
    let ws = Workspace::new();
    assert_eq!(cli(&["product"]).code, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["torsion", &ws.path("missing.json")]).code, EXIT_INPUT);
    let out = cli(&["torsion", &ws.path("z2.json")]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("expected a module"), "{}", out.stderr);
    ws.write("junk.json", "{not json");
    assert_eq!(cli(&["validate", &ws.path("junk.json")]).code, EXIT_INPUT);
}

#[test]
fn certificate_pipeline() {
    let ws = Workspace::new();
    let cert = ws.path("cert.json");
    let out = cli(&["divisible", &ws.path("z4.json"), "--sub", &ws.path("z2-in-z4.json"), "--save", &cert]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(cli(&["validate", &cert]).code, 0);

    let out = cli(&["--json", "standardize", &ws.path("std-z2.json"), "--cert", &cert]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let bij = &doc(&out).result["bijection"];
    assert_eq!(bij.as_object().unwrap().len(), 2);

    let out = cli(&["--json", "standardize", &ws.path("rank1-z2.json"), "--cert", &cert]);
    assert_eq!(out.code, 1);
    assert!(doc(&out).witnesses[0].detail.contains("rank 2 ≠ rank 4"));
}

#[test]
fn ambient_mismatch_is_refused() {
    let ws = Workspace::new();
    let out = cli(&["divisible", &ws.path("s3.json"), "--sub", &ws.path("z2-in-z4.json")]);
    assert_eq!(out.code, fusionkit::cli::EXIT_COMPUTE);
}

#[test]
fn census_file_round_trips() {
    let ws = Workspace::new();
    let path = ws.path("census.json");
    let out =
        cli(&["--json", "enumerate", &ws.path("z4.json"), "--max-rank", "4", "--max-coeff", "1", "--save", &path]);
    assert_eq!(out.code, 0);
    assert_eq!(doc(&out).result["ranks"], serde_json::json!([1, 2, 4]));
    let out = cli(&["--json", "validate", &path]);
    assert_eq!(out.code, 0);
    assert_eq!(doc(&out).result["modules"], 3);
}

#[test]
fn warm_cache_gives_the_same_document() {
    let ws = Workspace::new();
    let cache = ws.root().join("c").display().to_string();
    let args = ["fusionkit", "--json", "--cache-dir", &cache, "divisible"];
    let free = ws.path("free23.json");
    let sub = ws.path("free23-right.json");
    let mut argv = args.to_vec();
    argv.extend_from_slice(&[&free, "--sub", &sub, "--depth", "5"]);
    let cold = run(argv.clone());
    let warm = run(argv);
    assert_eq!(cold.code, 0);
    assert_eq!(cold, warm);
}
