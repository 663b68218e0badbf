use std::path::Path;
use std::process::Command;

use agency_bridge::{
    fmt_number, load_model, model_to_json, parse_model, render_reports, save_model, Format, ModelFileError,
    ObjectiveDescriptor, SeedRange, ToleranceOverride, CSV_COLUMNS,
};
use agency_core::agents::ObjectiveSpec;
use agency_core::bridge::{IdentityReport, Witness};
use agency_core::envs::{build_paraglider, build_tmaze, TMazeVariant};
use agency_core::models::{Model, UtilityFunction, ViolationKind};

const BIN: &str = env!("CARGO_BIN_EXE_agency-bridge");

fn bridge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn number_formatting() {
    assert_eq!(fmt_number(0.0), "0");
    assert_eq!(fmt_number(-0.0), "0");
    assert_eq!(fmt_number(0.6), "0.6");
    assert_eq!(fmt_number(-1.2730116670092564), "-1.27301166701");
    assert_eq!(fmt_number(1e-12), "1e-12");
    assert_eq!(fmt_number(2.220446049250313e-16), "2.22044604925e-16");
    assert_eq!(fmt_number(61.0), "61");
    assert_eq!(fmt_number(123456789012.0), "123456789012");
    assert_eq!(fmt_number(1234567890123.0), "1.23456789012e+12");
    assert_eq!(fmt_number(0.00012345), "0.00012345");
    assert_eq!(fmt_number(f64::MAX), "1.79769313486e+308");
    assert_eq!(fmt_number(f64::NAN), "nan");
    assert_eq!(fmt_number(f64::NEG_INFINITY), "-inf");
}

#[test]
fn seed_and_tolerance_parsing() {
    assert_eq!("1..100".parse::<SeedRange>().unwrap(), SeedRange { start: 1, end: 100 });
    assert_eq!("3..=4".parse::<SeedRange>().unwrap(), SeedRange { start: 3, end: 4 });
    assert_eq!("7".parse::<SeedRange>().unwrap().single(), Some(7));
    assert_eq!("1..100".parse::<SeedRange>().unwrap().iter().count(), 100);
    assert!("5..2".parse::<SeedRange>().is_err());
    assert!("a..b".parse::<SeedRange>().is_err());
    let t: ToleranceOverride = "gibbs-optimality=1e-9".parse().unwrap();
    assert_eq!((t.name.as_str(), t.value), ("gibbs-optimality", 1e-9));
    assert!("x".parse::<ToleranceOverride>().is_err());
    assert!("x=-1".parse::<ToleranceOverride>().is_err());
    assert!("x=nan".parse::<ToleranceOverride>().is_err());
}

#[test]
fn objective_descriptors() {
    let m = Model::Mdp(build_paraglider());
    let d: ObjectiveDescriptor = "expected-utility:c=0.5".parse().unwrap();
    assert_eq!(d.utility().unwrap(), UtilityFunction::Power { c: 0.5 });
    assert_eq!(d.build(&m).unwrap(), ObjectiveSpec::ExpectedUtility { utility: UtilityFunction::Power { c: 0.5 } });
    let d: ObjectiveDescriptor = "itbr-mdp:beta=2,utility=log".parse().unwrap();
    assert_eq!(d.build(&m).unwrap(), ObjectiveSpec::ItbrMdp { beta: 2.0, utility: UtilityFunction::Log });
    let d: ObjectiveDescriptor = "efe-mdp:a=1,b=3".parse().unwrap();
    assert_eq!(d.utility().unwrap(), UtilityFunction::Affine { a: 1.0, b: 3.0 });
    assert_eq!(d.to_string(), "efe-mdp:a=1,b=3");
    assert!(matches!(d.build(&m).unwrap(), ObjectiveSpec::EfeMdp { .. }));

    assert!("nope".parse::<ObjectiveDescriptor>().is_err());
    assert!("efe-mdp:gamma=1".parse::<ObjectiveDescriptor>().is_err());
    assert!("efe-mdp:beta".parse::<ObjectiveDescriptor>().is_err());
    assert!("efe-mdp:beta=x".parse::<ObjectiveDescriptor>().is_err());
    assert!("expected-utility:utility=power".parse::<ObjectiveDescriptor>().unwrap().utility().is_err());
    assert!("feef".parse::<ObjectiveDescriptor>().unwrap().build(&m).is_err());
    assert!("itbr-mdp:beta=0".parse::<ObjectiveDescriptor>().unwrap().build(&m).is_err());

    let t = Model::Pomdp(build_tmaze(TMazeVariant::Absorbing).model);
    for name in ["feef", "efe-pomdp-value", "efe-pomdp-risk-ambiguity", "itbr-pomdp", "expected-utility"] {
        assert!(name.parse::<ObjectiveDescriptor>().unwrap().build(&t).is_ok(), "{name}");
    }
}

#[test]
fn model_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for model in [Model::Mdp(build_paraglider()), Model::Pomdp(build_tmaze(TMazeVariant::Correctable).model)] {
        let path = dir.path().join("m.json");
        save_model(&model, &path).unwrap();
        assert_eq!(load_model(&path).unwrap(), model);
    }
    for seed in 0..300 {
        let inst = agency_core::bridge::batch_instances(seed);
        for spec in [inst.mdp, inst.pomdp] {
            let model = agency_core::envs::random_instance(&spec).unwrap();
            assert_eq!(parse_model(&model_to_json(&model), Path::new("m.json")).unwrap(), model, "seed {seed}");
        }
    }
}

#[test]
fn model_file_errors() {
    let path = Path::new("m.json");
    match parse_model("{\n  \"format_version\": 1,\n  oops\n}", path) {
        Err(ModelFileError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
        other => panic!("{other:?}"),
    }
    let mut desc = build_paraglider().to_description();
    desc.transition[0][0] = vec![0.5, 0.0, 0.4];
    desc.discount = Some(0.9);
    let text = serde_json::to_string(&desc).unwrap();
    match parse_model(&text, path) {
        Err(ModelFileError::Validation { report, .. }) => {
            assert!(report.has(ViolationKind::Normalization) && report.has(ViolationKind::Discount));
        }
        other => panic!("{other:?}"),
    }
    let unknown = model_to_json(&Model::Mdp(build_paraglider())).replacen('{', "{\"extra\": 1,", 1);
    assert!(matches!(parse_model(&unknown, path), Err(ModelFileError::Parse { .. })));
    assert!(matches!(load_model(Path::new("/nonexistent/m.json")), Err(ModelFileError::Io { .. })));
}

fn sample_reports() -> Vec<IdentityReport> {
    vec![
        IdentityReport::new("a", 1e-13, 1e-12, Witness::default().with_parameter("beta", 0.1)).with_seed(1),
        IdentityReport::new("b,c", 2e-12, 1e-12, Witness::default()).with_notes("x"),
    ]
}

#[test]
fn csv_report_rows() {
    let single = render_reports(&sample_reports()[..1], Format::Csv).unwrap();
    assert_eq!(single, "identity_name,seed,residual,tolerance,pass\na,1,1e-13,1e-12,true\n");
    let mixed = render_reports(&sample_reports(), Format::Csv).unwrap();
    let mut reader = csv::Reader::from_reader(mixed.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS);
    let passes: Vec<String> = reader.records().map(|r| r.unwrap()[4].to_string()).collect();
    assert_eq!(passes, ["true", "false"]);
    assert!(render_reports(&[], Format::Csv).is_err());
}

#[test]
fn json_reports_round_trip() {
    let reports = sample_reports();
    let text = render_reports(&reports, Format::Json).unwrap();
    let back: Vec<IdentityReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, reports);
    let batch = agency_core::bridge::verify_all(1..=3, 100).unwrap();
    let back: Vec<IdentityReport> = serde_json::from_str(&render_reports(&batch, Format::Json).unwrap()).unwrap();
    assert_eq!(back, batch);
}

#[test]
fn table_is_aligned() {
    let table = render_reports(&sample_reports(), Format::Table).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert!(lines[0].starts_with("identity"));
    assert_eq!(lines[2].find("1e-13").map(|i| i + 5), lines[3].find("2e-12").map(|i| i + 5));
    assert!(lines[3].contains("FAIL"));
    assert!(table.ends_with("1/2 passed\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(bridge(&["reproduce", "paraglider"]).0, 0);
    assert_eq!(bridge(&["reproduce", "stpetersburg", "--format", "csv"]).0, 0);
    let (code, out, _) = bridge(&["reproduce", "paraglider", "--tol", "efe-indifference=0"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
    assert_eq!(bridge(&["reproduce", "nowhere"]).0, 2);
    assert_eq!(bridge(&["reproduce", "paraglider", "--tol", "no-such-check=1"]).0, 2);
    assert_eq!(bridge(&["verify", "all", "--seeds", "9..3"]).0, 2);
    assert_eq!(bridge(&["verify", "nothing", "--seeds", "1..2"]).0, 2);
    let (code, _, err) = bridge(&["evaluate", "--objective", "efe-mdp"]);
    assert_eq!(code, 2);
    assert!(err.contains("--model"));
    assert_eq!(bridge(&["evaluate", "--model", "/nonexistent.json", "--objective", "efe-mdp"]).0, 2);
    assert_eq!(bridge(&["generate", "mdp", "--seeds", "1..2"]).0, 2);
}

#[test]
fn reproductions_run_from_the_command_line() {
    for target in ["paraglider", "tmaze1", "tmaze2", "stpetersburg"] {
        let (code, out, _) = bridge(&["reproduce", target]);
        assert_eq!(code, 0, "{target}");
        assert!(!out.contains("FAIL"));
    }
    let (_, out, _) = bridge(&["reproduce", "paraglider"]);
    assert!(out.contains("-1.27301166701"));
}

#[test]
fn evaluate_and_generate() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("paraglider.model");
    let model = model.to_str().unwrap();
    assert_eq!(bridge(&["generate", "paraglider", "--out", model]).0, 0);
    let (code, out, _) = bridge(&["evaluate", "--model", model, "--objective", "efe-mdp", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("s1,a1,0.831118938327,true") && out.contains("s1,a2,0.831118938327,true"), "{out}");
    let (_, out, _) =
        bridge(&["evaluate", "--model", model, "--objective", "expected-utility:c=2", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed[0]["evaluation"]["optimal_set"], serde_json::json!([1]));

    let pomdp = dir.path().join("p.json");
    let pomdp = pomdp.to_str().unwrap();
    assert_eq!(bridge(&["generate", "pomdp", "--seeds", "4", "--out", pomdp]).0, 0);
    let (code, out, _) = bridge(&["evaluate", "--model", pomdp, "--objective", "feef:beta=2"]);
    assert_eq!(code, 0);
    assert!(out.contains("uniform belief"));
    // Generated batch instances are the ones the batch verifies.
    let spec = agency_core::bridge::batch_instances(4).pomdp;
    assert_eq!(load_model(Path::new(pomdp)).unwrap(), agency_core::envs::random_instance(&spec).unwrap());
}

#[test]
fn verify_writes_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let (code, stdout, _) =
        bridge(&["verify", "gibbs-optimality", "--seeds", "1..4", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.starts_with("gibbs-optimality,") && l.ends_with(",true")));
    let (code, _, _) = bridge(&["verify", "all", "--seeds", "1..2", "--tol", "efe-mdp-forms=0"]);
    assert!(code == 0 || code == 1);
}
