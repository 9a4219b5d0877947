//! `run`, `report`, `sweep` and `replay`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use alstop::corpus::write_fold_manifest;
use alstop::eval::{average_curve, render_learning_curve, summarize, CurvePoint, StopMarker};
use alstop::{run_active_learning, seeds, Criterion, Summary, Trace};
use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{content_hash, sha256_hex, Dataset, FOLDS_FILE};
use crate::spec::{ExperimentSpec, SweepAxis, SweepValues};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const TRACES_DIR: &str = "traces";
pub const PLOTS_DIR: &str = "plots";
pub const PREDICTIONS_DIR: &str = "predictions";
pub const SWEEP_DIR: &str = "sweep";

pub fn trace_file(fold: usize) -> String {
    format!("fold_{fold:02}.csv")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub master: u64,
    /// Seed of the fold assignment, as a decimal string.
    pub folds: String,
    /// Engine seed per fold, as decimal strings.
    pub runs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub format: String,
    pub examples: usize,
    pub sha256: String,
}

/// Config echo, seeds and content hashes of one `run`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub spec: ExperimentSpec,
    pub seeds: SeedRecord,
    pub dataset: DatasetRecord,
    /// SHA-256 of every output file, keyed by path relative to the output
    /// directory.
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read manifest {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid manifest {}", path.display()))
    }
}

pub struct RunOutput {
    pub traces: Vec<Trace>,
    pub summary: Summary,
    pub manifest: Manifest,
}

/// Output files written so far, with their hashes.
struct Outputs {
    root: PathBuf,
    hashes: BTreeMap<String, String>,
}

impl Outputs {
    fn new(root: &Path) -> Self {
        Outputs {
            root: root.to_path_buf(),
            hashes: BTreeMap::new(),
        }
    }

    fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
        }
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.hashes.insert(rel.to_string(), sha256_hex(bytes));
        Ok(())
    }
}

fn markers(trace: &Trace) -> Vec<StopMarker> {
    trace
        .stop_points
        .iter()
        .filter_map(|p| {
            trace.outcome(p.criterion).map(|(annotations, _)| StopMarker {
                label: p.criterion.display_name().to_string(),
                annotations: annotations as f64,
            })
        })
        .collect()
}

/// Summary table plus per-fold and average learning curves.
fn write_reports(traces: &[Trace], confidence: f64, out: &mut Outputs) -> Result<Summary> {
    let summary = summarize(traces, confidence)?;
    let mut csv = Vec::new();
    summary.write_csv(&mut csv)?;
    out.write("summary.csv", &csv)?;
    out.write("summary.txt", summary.render_text().as_bytes())?;

    for (fold, trace) in traces.iter().enumerate() {
        let curve = CurvePoint::from_trace(trace);
        let svg = render_learning_curve(&curve, &markers(trace), &format!("Fold {fold}"));
        out.write(&format!("{PLOTS_DIR}/fold_{fold:02}.svg"), svg.as_bytes())?;
        out.write(&format!("{PLOTS_DIR}/fold_{fold:02}.csv"), CurvePoint::to_csv(&curve).as_bytes())?;
    }
    let average = average_curve(traces);
    let avg_markers: Vec<StopMarker> = summary
        .rows
        .iter()
        .filter_map(|r| {
            r.mean_annotations.map(|a| StopMarker {
                label: r.name.clone(),
                annotations: a,
            })
        })
        .collect();
    let svg = render_learning_curve(&average, &avg_markers, "Average over folds");
    out.write(&format!("{PLOTS_DIR}/average.svg"), svg.as_bytes())?;
    out.write(&format!("{PLOTS_DIR}/average.csv"), CurvePoint::to_csv(&average).as_bytes())?;
    Ok(summary)
}

/// Runs every fold and writes traces, summary, plots and the manifest.
pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunOutput> {
    spec.validate()?;
    if spec.seed > i64::MAX as u64 {
        bail!("seed must be at most {}", i64::MAX);
    }
    let dataset = Dataset::load(spec)?;
    let config = spec.al_config(dataset.examples)?;
    let resolved = spec.resolved(dataset.examples)?;
    let k = dataset.plan.k;
    let run_seeds: Vec<u64> = (0..k).map(|f| seeds::fold_seed(spec.seed, f)).collect();

    fs::create_dir_all(&spec.out).with_context(|| format!("cannot create output directory {}", spec.out.display()))?;
    let traces: Vec<Trace> = (0..k)
        .into_par_iter()
        .map(|fold| -> Result<Trace> {
            let data = dataset.fold(fold)?;
            let mut fold_config = config.clone();
            fold_config.rng_seed = run_seeds[fold];
            log::info!("fold {fold}: pool {} test {}", data.pool.len(), data.test.len());
            run_active_learning(&data.pool, &data.test, &fold_config).with_context(|| format!("fold {fold} failed"))
        })
        .collect::<Result<_>>()?;

    let mut out = Outputs::new(&spec.out);
    let mut folds_csv = Vec::new();
    write_fold_manifest(&dataset.plan, &mut folds_csv)?;
    out.write(FOLDS_FILE, &folds_csv)?;
    for (fold, trace) in traces.iter().enumerate() {
        out.write(&format!("{TRACES_DIR}/{}", trace_file(fold)), trace.to_csv_string().as_bytes())?;
        if spec.keep_predictions {
            let mut buf = Vec::new();
            trace.write_predictions(&mut buf)?;
            out.write(&format!("{PREDICTIONS_DIR}/fold_{fold:02}.txt"), &buf)?;
        }
    }
    let summary = write_reports(&traces, spec.confidence, &mut out)?;

    let manifest = Manifest {
        tool: format!("alstop {}", env!("CARGO_PKG_VERSION")),
        spec: resolved,
        seeds: SeedRecord {
            master: spec.seed,
            folds: dataset.plan.seed.to_string(),
            runs: run_seeds.iter().map(|s| s.to_string()).collect(),
        },
        dataset: DatasetRecord {
            format: dataset.format.to_string(),
            examples: dataset.examples,
            sha256: dataset.sha256.clone(),
        },
        outputs: out.hashes,
    };
    let manifest_path = spec.out.join(MANIFEST_FILE);
    fs::write(&manifest_path, toml::to_string(&manifest)?)
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    Ok(RunOutput {
        traces,
        summary,
        manifest,
    })
}

/// Reads `fold_XX.csv` files from `dir/traces` (or `dir` itself), in fold
/// order.
pub fn read_traces(dir: &Path) -> Result<Vec<Trace>> {
    let traces_dir = if dir.join(TRACES_DIR).is_dir() {
        dir.join(TRACES_DIR)
    } else {
        dir.to_path_buf()
    };
    let mut files: Vec<PathBuf> = fs::read_dir(&traces_dir)
        .with_context(|| format!("cannot list {}", traces_dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| {
        p.file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("fold_") && n.ends_with(".csv"))
    });
    files.sort();
    if files.is_empty() {
        bail!("no fold_XX.csv traces in {}", traces_dir.display());
    }
    files
        .iter()
        .map(|p| {
            let file = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            Trace::read_csv(BufReader::new(file)).with_context(|| format!("cannot parse trace {}", p.display()))
        })
        .collect()
}

/// Summary and plots recomputed from trace CSVs alone.
pub fn cmd_report(traces_dir: &Path, out: &Path, confidence: f64) -> Result<Summary> {
    let traces = read_traces(traces_dir)?;
    let mut outputs = Outputs::new(out);
    write_reports(&traces, confidence, &mut outputs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub mean_annotations: Option<f64>,
    pub mean_f: Option<f64>,
    pub folds_used: usize,
    pub censored: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    /// Whether stored traces were replayed rather than produced by this call.
    pub reused_traces: bool,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},sp_mean_annotations,sp_mean_f,folds_used,censored\n", self.axis.name());
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.value,
                opt(r.mean_annotations),
                opt(r.mean_f),
                r.folds_used,
                r.censored
            );
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{:<14} {:>12} {:>8} {:>6} {:>9}\n",
            self.axis.name(),
            "annotations",
            "F",
            "folds",
            "censored"
        );
        for r in &self.rows {
            let ann = r.mean_annotations.map_or("-".to_string(), |a| format!("{a:.1}"));
            let f = r.mean_f.map_or("-".to_string(), |f| format!("{:.2}", f * 100.0));
            let _ = writeln!(out, "{:<14} {:>12} {:>8} {:>6} {:>9}", r.value, ann, f, r.folds_used, r.censored);
        }
        out
    }
}

fn sp_row(summary: &Summary, value: String) -> Result<SweepRow> {
    let row = summary
        .criterion(Criterion::Sp)
        .context("the sp criterion must be part of the run to sweep its parameters")?;
    Ok(SweepRow {
        value,
        mean_annotations: row.mean_annotations,
        mean_f: row.mean_f,
        folds_used: row.used(),
        censored: row.censored,
    })
}

/// Traces for the base run: reused from `spec.out` when its manifest
/// describes the same experiment, produced otherwise.
fn base_traces(spec: &ExperimentSpec) -> Result<(Vec<Trace>, ExperimentSpec, bool)> {
    let manifest_path = spec.out.join(MANIFEST_FILE);
    if manifest_path.is_file() {
        let manifest = Manifest::load(&manifest_path)?;
        let current = spec.resolved(manifest.dataset.examples)?;
        if manifest.spec.same_run(&current) {
            log::info!("replaying stored traces in {}", spec.out.display());
            return Ok((read_traces(&spec.out)?, manifest.spec, true));
        }
        log::info!("stored run in {} differs from this spec; rerunning", spec.out.display());
    }
    let mut base = spec.clone();
    base.sweep = Default::default();
    let output = cmd_run(&base)?;
    Ok((output.traces, output.manifest.spec, false))
}

/// Varies one SP parameter. Intensity and longevity only change decisions,
/// so they are replayed over stored traces; stop-set size changes the
/// trajectory and gets a fresh run per value.
pub fn cmd_sweep(spec: &ExperimentSpec) -> Result<SweepTable> {
    spec.validate()?;
    let values = spec.sweep.single()?;
    let axis = values.axis();
    let mut rows = Vec::new();
    let mut reused = false;

    if axis.replayable() {
        let (traces, resolved, was_reused) = base_traces(spec)?;
        reused = was_reused;
        let base_stopping = resolved.al_config(0)?.stopping;
        for label in values.labels() {
            let mut stopping = base_stopping.clone();
            match &values {
                SweepValues::Intensity(_) => stopping.sp.cutoff = label.parse()?,
                SweepValues::Longevity(_) => stopping.sp.window = label.parse()?,
                SweepValues::StopSetSize(_) => unreachable!(),
            }
            stopping.sp.validate()?;
            let replayed: Vec<Trace> = traces
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.stop_points = t.replay(&t.criteria, stopping.clone());
                    t
                })
                .collect();
            rows.push(sp_row(&summarize(&replayed, spec.confidence)?, label)?);
        }
    } else {
        let SweepValues::StopSetSize(sizes) = &values else { unreachable!() };
        for &size in sizes {
            let mut run_spec = spec.clone();
            run_spec.sweep = Default::default();
            run_spec.stop_set_size = Some(size);
            run_spec.out = spec.out.join(SWEEP_DIR).join(format!("stop_set_size_{size}"));
            let output = cmd_run(&run_spec)?;
            rows.push(sp_row(&output.summary, size.to_string())?);
        }
    }

    let table = SweepTable {
        axis,
        rows,
        reused_traces: reused,
    };
    let dir = spec.out.join(SWEEP_DIR);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    fs::write(dir.join(format!("{}.csv", axis.name())), table.to_csv())?;
    fs::write(dir.join(format!("{}.txt", axis.name())), table.render_text())?;
    Ok(table)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayReport {
    pub matched: Vec<String>,
    pub mismatched: Vec<String>,
    pub missing: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.mismatched.is_empty() && self.missing.is_empty()
    }
}

/// Reruns the experiment recorded in a manifest into `out` and compares
/// every output hash.
pub fn cmd_replay(manifest_path: &Path, out: Option<&Path>) -> Result<ReplayReport> {
    let manifest = Manifest::load(manifest_path)?;
    let mut spec = manifest.spec.clone();
    spec.out = match out {
        Some(p) => p.to_path_buf(),
        None => manifest_path.parent().unwrap_or(Path::new(".")).join("replay"),
    };
    if let (Some(path), "svmlight" | "textdir" | "prepared") = (&spec.dataset, manifest.dataset.format.as_str()) {
        let hash = content_hash(path)?;
        if hash != manifest.dataset.sha256 {
            bail!(
                "dataset {} changed since the recorded run (sha256 {} != {})",
                path.display(),
                hash,
                manifest.dataset.sha256
            );
        }
    }
    let output = cmd_run(&spec)?;
    let mut report = ReplayReport::default();
    for (file, expected) in &manifest.outputs {
        match output.manifest.outputs.get(file) {
            Some(got) if got == expected => report.matched.push(file.clone()),
            Some(_) => report.mismatched.push(file.clone()),
            None => report.missing.push(file.clone()),
        }
    }
    Ok(report)
}

/// Writes `text` to stdout, ignoring a closed pipe.
pub fn print(text: &str) {
    let stdout = std::io::stdout();
    let mut lock = BufWriter::new(stdout.lock());
    let _ = lock.write_all(text.as_bytes());
    let _ = lock.flush();
}
