//! Experiment configuration: a TOML file whose fields can be overridden by
//! command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use alstop::corpus::synth::SyntheticConfig;
use alstop::corpus::DEFAULT_MIN_COUNT;
use alstop::stopping::SpConfig;
use alstop::{Config, Criterion, LearnerKind};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Decide from the path: a prepared directory, a directory-per-class
    /// corpus, or an svmlight file.
    #[default]
    Auto,
    Svmlight,
    Textdir,
    /// Output directory of `prepare`.
    Prepared,
    /// The bundled synthetic generator; no dataset path needed.
    Synthetic,
}

impl Format {
    pub const NAMES: [&'static str; 5] = ["auto", "svmlight", "textdir", "prepared", "synthetic"];
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Self::NAMES[*self as usize])
    }
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Format::Auto,
            "svmlight" => Format::Svmlight,
            "textdir" => Format::Textdir,
            "prepared" => Format::Prepared,
            "synthetic" => Format::Synthetic,
            other => bail!("unknown format {other:?}; supported: {}", Self::NAMES.join(", ")),
        })
    }
}

/// Parameter varied by `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Intensity,
    Longevity,
    StopSetSize,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Intensity => "intensity",
            SweepAxis::Longevity => "longevity",
            SweepAxis::StopSetSize => "stop_set_size",
        }
    }

    /// Whether the axis only changes decisions, so stored traces can be
    /// replayed instead of rerun.
    pub fn replayable(self) -> bool {
        !matches!(self, SweepAxis::StopSetSize)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longevity: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_set_size: Option<Vec<usize>>,
}

/// Values of the single requested axis.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepValues {
    Intensity(Vec<f64>),
    Longevity(Vec<usize>),
    StopSetSize(Vec<usize>),
}

impl SweepValues {
    pub fn axis(&self) -> SweepAxis {
        match self {
            SweepValues::Intensity(_) => SweepAxis::Intensity,
            SweepValues::Longevity(_) => SweepAxis::Longevity,
            SweepValues::StopSetSize(_) => SweepAxis::StopSetSize,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            SweepValues::Intensity(v) => v.iter().map(|x| x.to_string()).collect(),
            SweepValues::Longevity(v) | SweepValues::StopSetSize(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }
}

impl SweepSpec {
    pub fn is_empty(&self) -> bool {
        self.intensity.is_none() && self.longevity.is_none() && self.stop_set_size.is_none()
    }

    /// The one requested axis. Several axes at once are refused.
    pub fn single(&self) -> Result<SweepValues> {
        let mut axes = Vec::new();
        if let Some(v) = &self.intensity {
            axes.push(SweepValues::Intensity(v.clone()));
        }
        if let Some(v) = &self.longevity {
            axes.push(SweepValues::Longevity(v.clone()));
        }
        if let Some(v) = &self.stop_set_size {
            axes.push(SweepValues::StopSetSize(v.clone()));
        }
        match axes.len() {
            0 => bail!("no sweep axis given; use one of --sweep-intensity, --sweep-longevity, --sweep-stop-set-size"),
            1 => {}
            _ => {
                let names: Vec<&str> = axes.iter().map(|a| a.axis().name()).collect();
                bail!(
                    "only one sweep axis per invocation, got {}; run a separate sweep for each axis",
                    names.join(" and ")
                )
            }
        }
        let values = axes.pop().expect("one axis");
        if values.labels().is_empty() {
            bail!("sweep axis {} has no values", values.axis().name());
        }
        Ok(values)
    }
}

fn default_folds() -> usize {
    10
}

fn default_learner() -> String {
    "svm".into()
}

fn default_criteria() -> Vec<String> {
    Criterion::DEFAULT.iter().map(|c| c.name().to_string()).collect()
}

fn default_seed() -> u64 {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("alstop-out")
}

fn default_confidence() -> f64 {
    0.95
}

fn default_min_count() -> usize {
    DEFAULT_MIN_COUNT
}

/// Everything needed to run (and rerun) one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Positive class for directory corpora (one-vs-rest).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<String>,
    #[serde(default = "default_min_count")]
    pub min_count: usize,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default = "default_learner")]
    pub learner: String,
    #[serde(default = "default_criteria")]
    pub criteria: Vec<String>,
    /// Defaults depend on the dataset size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_set_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warm_start: Option<bool>,
    /// Confidence level of the significance tests in the summary.
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    #[serde(default)]
    pub keep_predictions: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticSpec>,
    #[serde(default, skip_serializing_if = "SweepSpec::is_empty")]
    pub sweep: SweepSpec,
}

/// Overrides for the synthetic generator.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub examples: Option<usize>,
    pub dimensions: Option<usize>,
    pub informative: Option<usize>,
    pub shift: Option<f64>,
    pub cutoff: Option<f64>,
    pub positive_fraction: Option<f64>,
    pub label_noise: Option<f64>,
    pub seed: Option<u64>,
}

impl SyntheticSpec {
    pub fn resolve(&self) -> SyntheticConfig {
        let d = SyntheticConfig::default();
        SyntheticConfig {
            examples: self.examples.unwrap_or(d.examples),
            dimensions: self.dimensions.unwrap_or(d.dimensions),
            informative: self.informative.unwrap_or(d.informative),
            shift: self.shift.unwrap_or(d.shift),
            cutoff: self.cutoff.unwrap_or(d.cutoff),
            positive_fraction: self.positive_fraction.unwrap_or(d.positive_fraction),
            label_noise: self.label_noise.unwrap_or(d.label_noise),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        toml::from_str("").expect("all fields have defaults")
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads a spec file, or the `spec` table of a run manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let value: toml::Table = toml::from_str(&text).with_context(|| format!("invalid TOML in {}", path.display()))?;
        let spec = match value.get("spec") {
            Some(toml::Value::Table(t)) => t.clone().try_into(),
            _ => value.try_into(),
        };
        spec.with_context(|| format!("invalid experiment config {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn learner_kind(&self) -> Result<LearnerKind> {
        Ok(self.learner.parse()?)
    }

    pub fn criteria(&self) -> Result<Vec<Criterion>> {
        let mut out = Vec::new();
        for name in &self.criteria {
            let c: Criterion = name.parse()?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        if out.is_empty() {
            bail!("criteria list is empty");
        }
        Ok(out)
    }

    pub fn synthetic_config(&self) -> SyntheticConfig {
        self.synthetic.clone().unwrap_or_default().resolve()
    }

    /// The format to use, inferred from the dataset path under `auto`.
    pub fn resolved_format(&self) -> Result<Format> {
        if self.format != Format::Auto {
            return Ok(self.format);
        }
        let Some(path) = &self.dataset else {
            return Ok(Format::Synthetic);
        };
        if !path.exists() {
            bail!("dataset path {} does not exist", path.display());
        }
        Ok(if path.join(crate::data::FOLDS_FILE).is_file() {
            Format::Prepared
        } else if path.is_dir() {
            Format::Textdir
        } else {
            Format::Svmlight
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            bail!("need at least 2 folds, got {}", self.folds);
        }
        self.learner_kind()?;
        self.criteria()?;
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            bail!("confidence must lie in (0, 1), got {}", self.confidence);
        }
        if let Some(v) = &self.sweep.intensity {
            if v.is_empty() || v.iter().any(|c| !(*c > 0.0 && *c <= 1.0)) {
                bail!("intensity sweep values must be a non-empty list in (0, 1]");
            }
        }
        for (name, v) in [("longevity", &self.sweep.longevity), ("stop-set-size", &self.sweep.stop_set_size)] {
            if let Some(v) = v {
                if v.is_empty() || v.contains(&0) {
                    bail!("{name} sweep values must be a non-empty list of positive integers");
                }
            }
        }
        Ok(())
    }

    /// Engine configuration for a dataset of `total_examples` examples.
    pub fn al_config(&self, total_examples: usize) -> Result<Config> {
        let mut config = Config::for_dataset_size(total_examples, self.learner_kind()?);
        config.criteria = self.criteria()?;
        if let Some(v) = self.batch_size {
            config.batch_size = v;
        }
        if let Some(v) = self.seed_size {
            config.seed_size = v;
        }
        let sp: &mut SpConfig<f64> = &mut config.stopping.sp;
        if let Some(v) = self.kappa_cutoff {
            sp.cutoff = v;
        }
        if let Some(v) = self.window {
            sp.window = v;
        }
        if let Some(v) = self.stop_set_size {
            sp.stop_set_size = v;
        }
        if let Some(v) = self.cost {
            config.train.cost = v;
        }
        if let Some(v) = self.lambda {
            config.train.lambda = v;
        }
        if let Some(v) = self.tolerance {
            config.train.tolerance = v;
        }
        if let Some(v) = self.warm_start {
            config.warm_start = v;
        }
        config.max_iterations = self.max_iterations;
        config.keep_predictions = self.keep_predictions;
        config.validate()?;
        Ok(config)
    }

    /// Copy with every engine default written out, for the manifest.
    pub fn resolved(&self, total_examples: usize) -> Result<Self> {
        let config = self.al_config(total_examples)?;
        let mut spec = self.clone();
        spec.format = self.resolved_format()?;
        spec.batch_size = Some(config.batch_size);
        spec.seed_size = Some(config.seed_size);
        spec.kappa_cutoff = Some(config.stopping.sp.cutoff);
        spec.window = Some(config.stopping.sp.window);
        spec.stop_set_size = Some(config.stopping.sp.stop_set_size);
        spec.cost = Some(config.train.cost);
        spec.lambda = Some(config.train.lambda);
        spec.tolerance = Some(config.train.tolerance);
        spec.warm_start = Some(config.warm_start);
        spec.criteria = config.criteria.iter().map(|c| c.name().to_string()).collect();
        if spec.format == Format::Synthetic {
            let s = self.synthetic_config();
            spec.synthetic = Some(SyntheticSpec {
                examples: Some(s.examples),
                dimensions: Some(s.dimensions),
                informative: Some(s.informative),
                shift: Some(s.shift),
                cutoff: Some(s.cutoff),
                positive_fraction: Some(s.positive_fraction),
                label_noise: Some(s.label_noise),
                seed: Some(s.seed),
            });
        }
        Ok(spec)
    }

    /// Same experiment apart from output location and sweep request.
    pub fn same_run(&self, other: &ExperimentSpec) -> bool {
        let strip = |s: &ExperimentSpec| ExperimentSpec {
            out: PathBuf::new(),
            sweep: SweepSpec::default(),
            ..s.clone()
        };
        strip(self) == strip(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_defaults() {
        let spec = ExperimentSpec::from_toml("").unwrap();
        assert_eq!(spec.folds, 10);
        assert_eq!(spec.learner, "svm");
        assert_eq!(spec.criteria, vec!["sp", "v2008", "sc2000", "zwh2008", "ls2008"]);
        let config = spec.al_config(5000).unwrap();
        assert_eq!((config.batch_size, config.seed_size), (20, 100));
        assert_eq!(spec.al_config(60_000).unwrap().batch_size, 200);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentSpec::from_toml("fold = 3").is_err());
    }

    #[test]
    fn round_trips_through_toml() {
        let mut spec = ExperimentSpec {
            dataset: Some("data/x.svm".into()),
            kappa_cutoff: Some(0.985),
            ..ExperimentSpec::default()
        };
        spec.sweep.longevity = Some(vec![1, 2, 3]);
        let back = ExperimentSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn one_sweep_axis_at_a_time() {
        let mut sweep = SweepSpec {
            intensity: Some(vec![0.97, 0.99]),
            ..SweepSpec::default()
        };
        assert_eq!(sweep.single().unwrap().axis(), SweepAxis::Intensity);
        sweep.longevity = Some(vec![2]);
        let err = sweep.single().unwrap_err().to_string();
        assert!(err.contains("separate"), "{err}");
        assert!(SweepSpec::default().single().is_err());
    }

    #[test]
    fn flags_feed_the_engine_config() {
        let spec = ExperimentSpec {
            learner: "maxent".into(),
            criteria: vec!["sp".into(), "min-err".into()],
            kappa_cutoff: Some(0.97),
            window: Some(5),
            stop_set_size: Some(500),
            batch_size: Some(10),
            ..ExperimentSpec::default()
        };
        let config = spec.al_config(1000).unwrap();
        assert_eq!(config.train.kind, LearnerKind::Maxent);
        assert_eq!(config.criteria, vec![Criterion::Sp, Criterion::MinErr]);
        assert_eq!(config.stopping.sp.cutoff, 0.97);
        assert_eq!(config.stopping.sp.window, 5);
        assert_eq!(config.stopping.sp.stop_set_size, 500);
        assert_eq!(config.batch_size, 10);
    }

    #[test]
    fn missing_dataset_is_named() {
        let spec = ExperimentSpec {
            dataset: Some("/no/such/corpus".into()),
            ..ExperimentSpec::default()
        };
        let err = spec.resolved_format().unwrap_err().to_string();
        assert!(err.contains("/no/such/corpus"), "{err}");
    }
}
