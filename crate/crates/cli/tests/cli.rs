use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use alstop::corpus::tokenize;
use alstop_cli::spec::SyntheticSpec;
use alstop_cli::{cmd_replay, cmd_report, cmd_run, cmd_sweep, prepare, ExperimentSpec, Format, PrepareRequest};

fn minicorpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/minicorpus")
}

fn alstop(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_alstop")).args(args).output().unwrap()
}

fn text_spec(out: &Path) -> ExperimentSpec {
    ExperimentSpec {
        dataset: Some(minicorpus()),
        folds: 4,
        seed_size: Some(10),
        batch_size: Some(5),
        out: out.to_path_buf(),
        ..ExperimentSpec::default()
    }
}

fn small_synthetic(out: &Path) -> ExperimentSpec {
    ExperimentSpec {
        format: Format::Synthetic,
        folds: 3,
        synthetic: Some(SyntheticSpec {
            examples: Some(700),
            ..SyntheticSpec::default()
        }),
        out: out.to_path_buf(),
        ..ExperimentSpec::default()
    }
}

fn prepare_request(out: &Path) -> PrepareRequest {
    PrepareRequest {
        dataset: Some(minicorpus()),
        layout: "textdir".into(),
        out: out.to_path_buf(),
        folds: 4,
        seed: 1,
        positive: None,
        min_count: 3,
        synthetic: Default::default(),
    }
}

#[test]
fn missing_dataset_exits_nonzero_naming_the_path() {
    let out = tempfile::tempdir().unwrap();
    let result = alstop(&[
        "run",
        "--dataset",
        "/definitely/not/here",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("/definitely/not/here"), "{stderr}");
}

#[test]
fn two_sweep_axes_are_refused() {
    let out = tempfile::tempdir().unwrap();
    let result = alstop(&[
        "sweep",
        "--format",
        "synthetic",
        "--out",
        out.path().to_str().unwrap(),
        "--sweep-intensity",
        "0.97,0.99",
        "--sweep-longevity",
        "2,3",
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("one sweep axis"), "{stderr}");
}

#[test]
fn unknown_layout_lists_the_supported_ones() {
    let out = tempfile::tempdir().unwrap();
    let mut req = prepare_request(out.path());
    req.layout = "mbox".into();
    let err = format!("{:#}", prepare(&req).unwrap_err());
    assert!(err.contains("textdir") && err.contains("svmlight") && err.contains("synthetic"), "{err}");
}

#[test]
fn two_class_directory_with_six_files() {
    let corpus = tempfile::tempdir().unwrap();
    for class in ["ham", "spam"] {
        fs::create_dir(corpus.path().join(class)).unwrap();
        for i in 0..3 {
            fs::write(corpus.path().join(class).join(format!("{i}")), format!("{class} words {i} {class}")).unwrap();
        }
    }
    let out = tempfile::tempdir().unwrap();
    let mut req = prepare_request(out.path());
    req.dataset = Some(corpus.path().to_path_buf());
    req.folds = 2;
    req.min_count = 1;
    let summary = prepare(&req).unwrap();
    assert_eq!(summary.examples, 6);
    assert_eq!(summary.positives, 3);
    assert_eq!(summary.fold_sizes, vec![3, 3]);
}

#[test]
fn empty_class_directory_is_an_error() {
    let corpus = tempfile::tempdir().unwrap();
    fs::create_dir(corpus.path().join("ham")).unwrap();
    fs::create_dir(corpus.path().join("spam")).unwrap();
    fs::write(corpus.path().join("ham/0"), "hello").unwrap();
    let out = tempfile::tempdir().unwrap();
    let mut req = prepare_request(out.path());
    req.dataset = Some(corpus.path().to_path_buf());
    assert!(prepare(&req).is_err());
}

#[test]
fn prepare_is_deterministic_and_writes_per_fold_vocabularies() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let summary = prepare(&prepare_request(a.path())).unwrap();
    prepare(&prepare_request(b.path())).unwrap();
    assert_eq!(summary.examples, 80);
    assert_eq!(summary.positives, 40);
    for f in 0..4 {
        assert!(a.path().join(format!("fold_{f:02}/vocab.tsv")).is_file());
        assert!(a.path().join(format!("fold_{f:02}/data.svm")).is_file());
    }
    assert_eq!(
        fs::read(a.path().join("folds.csv")).unwrap(),
        fs::read(b.path().join("folds.csv")).unwrap()
    );
}

/// Every vocabulary term must be frequent enough in the fold's own pool
/// documents; test documents must not contribute.
#[test]
fn vocabulary_is_built_from_the_pool_only() {
    let out = tempfile::tempdir().unwrap();
    prepare(&prepare_request(out.path())).unwrap();
    let folds = fs::read_to_string(out.path().join("folds.csv")).unwrap();
    let assignment: Vec<(usize, usize)> = folds
        .lines()
        .skip(1)
        .map(|l| {
            let (id, f) = l.split_once(',').unwrap();
            (id.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    let docs = alstop::corpus::load_text_dir(&minicorpus(), None).unwrap();
    for fold in 0..4 {
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for (id, f) in &assignment {
            if *f != fold {
                for t in tokenize(&docs[*id].text) {
                    *counts.entry(t).or_default() += 1;
                }
            }
        }
        let vocab = fs::read_to_string(out.path().join(format!("fold_{fold:02}/vocab.tsv"))).unwrap();
        let terms: BTreeSet<&str> = vocab.lines().map(|l| l.split('\t').next().unwrap()).collect();
        let expected: BTreeSet<&str> = counts.iter().filter(|(_, &c)| c >= 3).map(|(t, _)| t.as_str()).collect();
        assert_eq!(terms, expected, "fold {fold}");
    }
}

#[test]
fn prepared_directory_runs_like_the_raw_corpus() {
    let prepared = tempfile::tempdir().unwrap();
    prepare(&prepare_request(prepared.path())).unwrap();
    let raw_out = tempfile::tempdir().unwrap();
    let prep_out = tempfile::tempdir().unwrap();
    let raw = cmd_run(&text_spec(raw_out.path())).unwrap();
    let mut spec = text_spec(prep_out.path());
    spec.dataset = Some(prepared.path().to_path_buf());
    let prep = cmd_run(&spec).unwrap();
    assert_eq!(raw.manifest.dataset.format, "textdir");
    assert_eq!(prep.manifest.dataset.format, "prepared");
    for f in 0..4 {
        let name = format!("traces/fold_{f:02}.csv");
        assert_eq!(raw.manifest.outputs[&name], prep.manifest.outputs[&name], "{name}");
    }
}

#[test]
fn report_from_csv_matches_the_run() {
    let out = tempfile::tempdir().unwrap();
    let run = cmd_run(&small_synthetic(out.path())).unwrap();
    let report_dir = tempfile::tempdir().unwrap();
    let summary = cmd_report(out.path(), report_dir.path(), 0.95).unwrap();
    assert_eq!(summary, run.summary);
    for file in ["summary.csv", "summary.txt", "plots/average.svg", "plots/fold_00.svg"] {
        assert_eq!(
            fs::read(out.path().join(file)).unwrap(),
            fs::read(report_dir.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn manifest_replay_reproduces_every_output() {
    let out = tempfile::tempdir().unwrap();
    let run = cmd_run(&text_spec(out.path())).unwrap();
    let replay_dir = tempfile::tempdir().unwrap();
    let report = cmd_replay(&out.path().join("manifest.toml"), Some(replay_dir.path())).unwrap();
    assert!(report.ok(), "{report:?}");
    assert_eq!(report.matched.len(), run.manifest.outputs.len());

    // The manifest also works as a --config file.
    let again = tempfile::tempdir().unwrap();
    let result = alstop(&[
        "run",
        "--config",
        out.path().join("manifest.toml").to_str().unwrap(),
        "--out",
        again.path().to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    for f in 0..4 {
        let name = format!("traces/fold_{f:02}.csv");
        assert_eq!(fs::read(out.path().join(&name)).unwrap(), fs::read(again.path().join(&name)).unwrap());
    }
}

#[test]
fn sweeps_reuse_stored_traces() {
    let out = tempfile::tempdir().unwrap();
    let spec = small_synthetic(out.path());
    cmd_run(&spec).unwrap();
    let mut sweep = spec.clone();
    sweep.sweep.longevity = Some(vec![1, 2, 3, 4, 5, 6]);
    let table = cmd_sweep(&sweep).unwrap();
    assert!(table.reused_traces);
    assert_eq!(table.rows.len(), 6);
    assert!(out.path().join("sweep/longevity.csv").is_file());

    let mut changed = sweep.clone();
    changed.learner = "maxent".into();
    assert!(!cmd_sweep(&changed).unwrap().reused_traces);
}

#[test]
fn cli_end_to_end_on_the_minicorpus() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().to_str().unwrap();
    let result = alstop(&[
        "run",
        "--dataset",
        minicorpus().to_str().unwrap(),
        "--folds",
        "4",
        "--seed-size",
        "10",
        "--batch-size",
        "5",
        "--criteria",
        "sp,sc2000,minerr",
        "--keep-predictions",
        "--out",
        dir,
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("SP") && stdout.contains("All"), "{stdout}");
    assert!(out.path().join("predictions/fold_00.txt").is_file());
    let header = fs::read_to_string(out.path().join("traces/fold_00.csv")).unwrap();
    assert!(header.lines().next().unwrap().ends_with("minerr_threshold"));

    let report = alstop(&["report", "--traces", dir]);
    assert!(report.status.success());
    let replay = alstop(&["replay", out.path().join("manifest.toml").to_str().unwrap()]);
    assert!(replay.status.success(), "{}", String::from_utf8_lossy(&replay.stdout));
}
