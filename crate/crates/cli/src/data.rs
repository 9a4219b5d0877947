//! Turning a dataset on disk (or the synthetic generator) into per-fold
//! pool/test splits.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use alstop::corpus::synth::{self, SyntheticConfig};
use alstop::corpus::{load_text_dir, make_folds, read_fold_manifest, svmlight, write_fold_manifest, FoldPlan, RawDocument, Vocabulary};
use alstop::{seeds, Example};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::spec::{ExperimentSpec, Format};

pub const FOLDS_FILE: &str = "folds.csv";
pub const PREPARED_FILE: &str = "prepared.toml";
pub const DATA_FILE: &str = "data.svm";
pub const VOCAB_FILE: &str = "vocab.tsv";

/// Layouts understood by `prepare`.
pub const LAYOUTS: [&str; 3] = ["textdir", "svmlight", "synthetic"];

pub fn fold_dir(root: &Path, fold: usize) -> PathBuf {
    root.join(format!("fold_{fold:02}"))
}

/// What `prepare` recorded about its input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreparedInfo {
    pub layout: String,
    pub examples: usize,
    pub folds: usize,
    /// Seed the fold assignment was drawn with, as a decimal string.
    pub fold_seed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_count: Option<usize>,
    /// Per-fold feature files, each with a vocabulary built on that fold's
    /// pool.
    pub per_fold: bool,
}

enum Source {
    Shared(Vec<Example>),
    PerFold(Vec<Vec<Example>>),
    Text { docs: Vec<RawDocument>, min_count: usize },
}

/// A dataset split into cross-validation folds.
pub struct Dataset {
    pub format: Format,
    pub plan: FoldPlan,
    pub examples: usize,
    /// SHA-256 over the input bytes (or the generated data).
    pub sha256: String,
    source: Source,
}

pub struct FoldData {
    pub pool: Vec<Example>,
    pub test: Vec<Example>,
    pub vocabulary: Option<Vocabulary>,
}

fn check_exists(path: &Path) -> Result<()> {
    if !path.exists() {
        bail!("dataset path {} does not exist", path.display());
    }
    Ok(())
}

/// Hash of a file, or of every file under a directory (relative path and
/// contents, in sorted order).
pub fn content_hash(path: &Path) -> Result<String> {
    let mut hasher = Sha256::new();
    if path.is_dir() {
        let mut files = Vec::new();
        collect_files(path, &mut files)?;
        files.sort();
        for f in files {
            let rel = f.strip_prefix(path).unwrap_or(&f);
            let bytes = fs::read(&f).with_context(|| format!("cannot read {}", f.display()))?;
            hasher.update(rel.to_string_lossy().as_bytes());
            hasher.update([0]);
            hasher.update((bytes.len() as u64).to_le_bytes());
            hasher.update(&bytes);
        }
    } else {
        hasher.update(fs::read(path).with_context(|| format!("cannot read {}", path.display()))?);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    for entry in fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let path = entry?.path();
        if path.is_dir() {
            collect_files(&path, out)?;
        } else {
            out.push(path);
        }
    }
    Ok(())
}

/// Writes examples so that line `n` holds the example with id `n`; ids
/// that are absent become blank lines.
pub fn write_by_id(examples: &[Example], path: &Path) -> Result<()> {
    let mut sorted: Vec<&Example> = examples.iter().collect();
    sorted.sort_by_key(|x| x.id);
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
    let mut line = 0;
    for x in sorted {
        while line < x.id {
            writeln!(out)?;
            line += 1;
        }
        svmlight::write(std::slice::from_ref(x), &mut out)?;
        line += 1;
    }
    out.flush()?;
    Ok(())
}

fn synthetic_data(config: &SyntheticConfig) -> (Vec<Example>, String) {
    let data: Vec<Example> = synth::generate(config);
    let mut bytes = Vec::new();
    svmlight::write(&data, &mut bytes).expect("writing to memory");
    (data, sha256_hex(&bytes))
}

impl Dataset {
    pub fn load(spec: &ExperimentSpec) -> Result<Self> {
        let format = spec.resolved_format()?;
        let fold_seed = seeds::derive_seed(spec.seed, seeds::FOLDS);
        match format {
            Format::Synthetic => {
                let (data, sha256) = synthetic_data(&spec.synthetic_config());
                let plan = make_folds(data.iter().map(|x| x.id), spec.folds, fold_seed)?;
                Ok(Dataset {
                    format,
                    plan,
                    examples: data.len(),
                    sha256,
                    source: Source::Shared(data),
                })
            }
            Format::Svmlight => {
                let path = spec.dataset.as_deref().context("svmlight format needs a dataset path")?;
                check_exists(path)?;
                let data: Vec<Example> =
                    svmlight::load(path).with_context(|| format!("cannot load dataset {}", path.display()))?;
                if data.is_empty() {
                    bail!("dataset {} contains no examples", path.display());
                }
                let plan = make_folds(data.iter().map(|x| x.id), spec.folds, fold_seed)?;
                Ok(Dataset {
                    format,
                    plan,
                    examples: data.len(),
                    sha256: content_hash(path)?,
                    source: Source::Shared(data),
                })
            }
            Format::Textdir => {
                let path = spec.dataset.as_deref().context("textdir format needs a dataset path")?;
                check_exists(path)?;
                let docs = load_text_dir(path, spec.positive.as_deref())
                    .with_context(|| format!("cannot load corpus {}", path.display()))?;
                let plan = make_folds(docs.iter().map(|d| d.id), spec.folds, fold_seed)?;
                Ok(Dataset {
                    format,
                    plan,
                    examples: docs.len(),
                    sha256: content_hash(path)?,
                    source: Source::Text {
                        docs,
                        min_count: spec.min_count,
                    },
                })
            }
            Format::Prepared => {
                let path = spec.dataset.as_deref().context("prepared format needs a dataset path")?;
                Self::load_prepared(path, spec.folds)
            }
            Format::Auto => unreachable!("resolved_format never returns auto"),
        }
    }

    fn load_prepared(root: &Path, folds: usize) -> Result<Self> {
        check_exists(root)?;
        let info_path = root.join(PREPARED_FILE);
        let info: PreparedInfo = toml::from_str(
            &fs::read_to_string(&info_path).with_context(|| format!("cannot read {}", info_path.display()))?,
        )
        .with_context(|| format!("invalid {}", info_path.display()))?;
        let seed: u64 = info.fold_seed.parse().context("invalid fold seed in prepared.toml")?;
        let folds_path = root.join(FOLDS_FILE);
        let plan = read_fold_manifest(
            BufReader::new(File::open(&folds_path).with_context(|| format!("cannot open {}", folds_path.display()))?),
            seed,
        )?;
        if plan.k != folds {
            bail!(
                "{} was prepared with {} folds but {} were requested",
                root.display(),
                plan.k,
                folds
            );
        }
        let source = if info.per_fold {
            let mut per_fold = Vec::with_capacity(plan.k);
            for f in 0..plan.k {
                let file = fold_dir(root, f).join(DATA_FILE);
                per_fold.push(svmlight::load(&file).with_context(|| format!("cannot load {}", file.display()))?);
            }
            Source::PerFold(per_fold)
        } else {
            let file = root.join(DATA_FILE);
            Source::Shared(svmlight::load(&file).with_context(|| format!("cannot load {}", file.display()))?)
        };
        Ok(Dataset {
            format: Format::Prepared,
            plan,
            examples: info.examples,
            sha256: content_hash(root)?,
            source,
        })
    }

    pub fn fold(&self, fold: usize) -> Result<FoldData> {
        let split = |data: &[Example]| {
            let (pool, test) = self.plan.split(data, fold);
            FoldData {
                pool,
                test,
                vocabulary: None,
            }
        };
        Ok(match &self.source {
            Source::Shared(data) => split(data),
            Source::PerFold(per_fold) => split(&per_fold[fold]),
            Source::Text { docs, min_count } => {
                let (pool_docs, test_docs): (Vec<&RawDocument>, Vec<&RawDocument>) =
                    docs.iter().partition(|d| self.plan.fold_of(d.id) != Some(fold));
                let vocabulary = Vocabulary::build(pool_docs.iter().map(|d| d.text.as_str()), *min_count)
                    .with_context(|| format!("fold {fold}: empty vocabulary"))?;
                let featurize = |d: &&RawDocument| vocabulary.featurize(d.id, &d.text, Some(d.label));
                let pool = pool_docs.iter().map(featurize).collect();
                let test = test_docs.iter().map(featurize).collect();
                FoldData {
                    pool,
                    test,
                    vocabulary: Some(vocabulary),
                }
            }
        })
    }

    pub fn per_fold_features(&self) -> bool {
        !matches!(self.source, Source::Shared(_))
    }
}

/// Arguments of `prepare`.
#[derive(Clone, Debug)]
pub struct PrepareRequest {
    pub dataset: Option<PathBuf>,
    pub layout: String,
    pub out: PathBuf,
    pub folds: usize,
    pub seed: u64,
    pub positive: Option<String>,
    pub min_count: usize,
    pub synthetic: SyntheticConfig,
}

#[derive(Clone, Debug)]
pub struct PrepareSummary {
    pub examples: usize,
    pub positives: usize,
    pub fold_sizes: Vec<usize>,
    pub files: Vec<PathBuf>,
}

/// Featurizes a raw corpus and writes the fold manifest plus per-fold
/// sparse files (and vocabularies for text corpora).
pub fn prepare(req: &PrepareRequest) -> Result<PrepareSummary> {
    if !LAYOUTS.contains(&req.layout.as_str()) {
        bail!("unrecognized layout {:?}; supported layouts: {}", req.layout, LAYOUTS.join(", "));
    }
    let spec = ExperimentSpec {
        dataset: req.dataset.clone(),
        format: req.layout.parse()?,
        positive: req.positive.clone(),
        min_count: req.min_count,
        folds: req.folds,
        seed: req.seed,
        ..ExperimentSpec::default()
    };
    if spec.format != Format::Synthetic && spec.dataset.is_none() {
        bail!("layout {} needs --dataset", req.layout);
    }
    let mut spec = spec;
    if spec.format == Format::Synthetic {
        spec.synthetic = Some(crate::spec::SyntheticSpec {
            examples: Some(req.synthetic.examples),
            dimensions: Some(req.synthetic.dimensions),
            informative: Some(req.synthetic.informative),
            shift: Some(req.synthetic.shift),
            cutoff: Some(req.synthetic.cutoff),
            positive_fraction: Some(req.synthetic.positive_fraction),
            label_noise: Some(req.synthetic.label_noise),
            seed: Some(req.synthetic.seed),
        });
    }
    let dataset = Dataset::load(&spec)?;
    fs::create_dir_all(&req.out).with_context(|| format!("cannot create {}", req.out.display()))?;
    let mut files = Vec::new();

    let folds_path = req.out.join(FOLDS_FILE);
    write_fold_manifest(&dataset.plan, BufWriter::new(File::create(&folds_path)?))?;
    files.push(folds_path);

    let mut positives = 0;
    if dataset.per_fold_features() {
        for f in 0..dataset.plan.k {
            let data = dataset.fold(f)?;
            let dir = fold_dir(&req.out, f);
            fs::create_dir_all(&dir)?;
            let all: Vec<Example> = data.pool.into_iter().chain(data.test).collect();
            if f == 0 {
                positives = all.iter().filter(|x| x.label == Some(alstop::Label::Pos)).count();
            }
            let data_path = dir.join(DATA_FILE);
            write_by_id(&all, &data_path)?;
            files.push(data_path);
            if let Some(vocab) = data.vocabulary {
                let vocab_path = dir.join(VOCAB_FILE);
                let mut out = BufWriter::new(File::create(&vocab_path)?);
                vocab.write_to(&mut out)?;
                out.flush()?;
                files.push(vocab_path);
            }
        }
    } else {
        let data = dataset.fold(0)?;
        let all: Vec<Example> = data.pool.into_iter().chain(data.test).collect();
        positives = all.iter().filter(|x| x.label == Some(alstop::Label::Pos)).count();
        let data_path = req.out.join(DATA_FILE);
        write_by_id(&all, &data_path)?;
        files.push(data_path);
    }

    let info = PreparedInfo {
        layout: req.layout.clone(),
        examples: dataset.examples,
        folds: dataset.plan.k,
        fold_seed: dataset.plan.seed.to_string(),
        positive: req.positive.clone(),
        min_count: dataset.per_fold_features().then_some(req.min_count),
        per_fold: dataset.per_fold_features(),
    };
    let info_path = req.out.join(PREPARED_FILE);
    fs::write(&info_path, toml::to_string(&info)?)?;
    files.push(info_path);

    Ok(PrepareSummary {
        examples: dataset.examples,
        positives,
        fold_sizes: dataset.plan.sizes(),
        files,
    })
}
