//! File-based rank → ensemble → evaluate pipeline behind the `featrec` binary.
//!
//! Each stage reads the previous stage's JSON artifact, so any stage can be
//! re-run on its own. Wall-clock data lives only in the `metadata` block of
//! each artifact; everything else is a pure function of inputs and seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::data::{load_csv, load_schema, Dataset, LoadOptions, DEFAULT_BINS};
use crate::ensemble::{ensemble_rank, recommend_top, MiOrdering, PositionalTable, RowDecision, TieBreak};
use crate::error::{Error, Result};
use crate::eval::{accuracy_curve, cross_validate, stratified_folds, AccuracyCurve, CvReport};
use crate::fixtures;
use crate::infotheory::{mi_class_rank, MiRankMode};
use crate::models::{ClassifierSpec, ForestParams, MlpParams, SvmParams};
use crate::rankers::{rank_all, MethodId, RankConfig, Ranking};
use crate::seed;
use crate::ARTIFACT_VERSION;

pub const RANKINGS_FILE: &str = "rankings.json";
pub const ENSEMBLE_FILE: &str = "ensemble.json";
pub const REPORT_FILE: &str = "report.json";
pub const CURVE_FILE: &str = "curve.csv";

/// Every tunable of the pipeline. Precedence: command line, then config file,
/// then these defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: Option<PathBuf>,
    /// Header of the class column; the last column when absent.
    pub label_column: Option<String>,
    pub schema: Option<PathBuf>,
    pub bins: usize,
    pub seed: u64,
    pub mifs_beta: f64,
    pub mi_mode: MiRankMode,
    pub forest: ForestParams,
    pub wrapper_k: usize,
    pub wrapper_folds: usize,
    /// One of `nn`, `svm`, `knn`, `majority`.
    pub classifier: String,
    pub nn: MlpParams,
    pub svm: SvmParams,
    pub knn_k: usize,
    pub folds: usize,
    /// Size of the recommended feature subset.
    pub top_k: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let r = RankConfig::default();
        PipelineConfig {
            input: None,
            label_column: None,
            schema: None,
            bins: DEFAULT_BINS,
            seed: 0,
            mifs_beta: r.mifs_beta,
            mi_mode: r.mi_mode,
            forest: r.forest,
            wrapper_k: r.wrapper_k,
            wrapper_folds: r.wrapper_folds,
            classifier: "nn".into(),
            nn: MlpParams::default(),
            svm: SvmParams::default(),
            knn_k: 3,
            folds: 10,
            top_k: None,
        }
    }
}

impl PipelineConfig {
    /// Parse a JSON config; unknown keys and bad values are configuration errors.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn rank_config(&self) -> RankConfig {
        RankConfig {
            bins: self.bins,
            mifs_beta: self.mifs_beta,
            forest: self.forest.clone(),
            wrapper_k: self.wrapper_k,
            wrapper_folds: self.wrapper_folds,
            mi_mode: self.mi_mode,
            seed: self.seed,
        }
    }

    pub fn classifier_spec(&self) -> Result<ClassifierSpec> {
        Ok(match ClassifierSpec::from_name(&self.classifier)? {
            ClassifierSpec::Nn(_) => ClassifierSpec::Nn(self.nn.clone()),
            ClassifierSpec::Svm(_) => ClassifierSpec::Svm(self.svm.clone()),
            ClassifierSpec::Knn { .. } => ClassifierSpec::Knn { k: self.knn_k },
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.rank_config().validate()?;
        self.classifier_spec()?;
        self.nn.adam.validate()?;
        if self.nn.hidden.contains(&0) {
            return Err(Error::Config("hidden layer widths must be positive".into()));
        }
        if !(self.svm.cbox > 0.0) || self.svm.gamma.is_some_and(|g| !(g > 0.0)) {
            return Err(Error::Config("SVM needs C > 0 and gamma > 0".into()));
        }
        if self.knn_k == 0 {
            return Err(Error::Config("knn_k must be at least 1".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if self.top_k == Some(0) {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        Ok(())
    }

    /// Load the configured dataset, dropping rows with missing cells.
    pub fn load_dataset(&self) -> Result<(Dataset, DatasetInfo)> {
        let Some(input) = &self.input else {
            return Err(Error::Config("no input dataset configured".into()));
        };
        let schema = self.schema.as_ref().map(load_schema).transpose()?;
        let raw = load_csv(
            input,
            &LoadOptions {
                label_column: self.label_column.clone(),
                schema,
            },
        )?;
        let dropped = raw.missing_row_count();
        let d = if dropped > 0 { raw.drop_missing()? } else { raw };
        let info = DatasetInfo {
            path: input.clone(),
            label_column: d.label_name().to_string(),
            n_rows: d.n_rows(),
            n_features: d.n_features(),
            class_count: d.class_count(),
            dropped_rows: dropped,
            feature_names: d.columns().iter().map(|c| c.name.clone()).collect(),
        };
        Ok((d, info))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub tool_version: String,
    pub created_unix_seconds: u64,
    /// Input the artifact was derived from, when it is not the dataset itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl Metadata {
    pub fn now() -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            created_unix_seconds: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            source: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub path: PathBuf,
    pub label_column: String,
    pub n_rows: usize,
    pub n_features: usize,
    pub class_count: usize,
    /// Rows removed because a cell was missing.
    pub dropped_rows: usize,
    pub feature_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingsArtifact {
    pub spec_version: String,
    pub metadata: Metadata,
    pub config: PipelineConfig,
    pub dataset: DatasetInfo,
    /// Class-weighted MI ordering used to break ensemble ties.
    pub mi_order: Vec<usize>,
    /// The eight base rankings in positional-table column order.
    pub rankings: Vec<Ranking>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleArtifact {
    pub spec_version: String,
    /// `metadata.source` is the `rankings.json` path or `fixture:<name>`.
    pub metadata: Metadata,
    pub methods: Vec<MethodId>,
    pub mi_order: Vec<usize>,
    pub order: Vec<usize>,
    pub skipped_rows: Vec<usize>,
    pub tie_break_log: Vec<TieBreak>,
    pub rows: Vec<RowDecision>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKReport {
    pub k: usize,
    pub features: Vec<usize>,
    pub feature_names: Vec<String>,
    pub mean_accuracy: f64,
    pub pooled_accuracy: f64,
    pub cv: CvReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportArtifact {
    pub spec_version: String,
    pub metadata: Metadata,
    pub config: PipelineConfig,
    pub dataset: DatasetInfo,
    /// Folds are stratified by class.
    pub stratified: bool,
    pub rankings: Vec<Ranking>,
    pub ensemble_order: Vec<usize>,
    pub curve: AccuracyCurve,
    pub top_k: Option<TopKReport>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Run the eight base rankers and the MI ordering; write `rankings.json`
/// and one `ranking_<method>.csv` per method into `out`.
pub fn run_rank(cfg: &PipelineConfig, out: &Path) -> Result<RankingsArtifact> {
    cfg.validate()?;
    let (d, info) = cfg.load_dataset()?;
    let rc = cfg.rank_config();
    let rankings = rank_all(&d, &rc)?;
    let mi = mi_class_rank(&d.discretize(rc.bins), d.labels(), rc.mi_mode)?;
    let artifact = RankingsArtifact {
        spec_version: ARTIFACT_VERSION.into(),
        metadata: Metadata::now(),
        config: cfg.clone(),
        dataset: info,
        mi_order: mi.order,
        rankings,
    };
    ensure_dir(out)?;
    write_json(&out.join(RANKINGS_FILE), &artifact)?;
    for r in &artifact.rankings {
        let mut s = String::from("rank,feature\n");
        for (i, f) in r.order.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, f));
        }
        let p = out.join(format!("ranking_{}.csv", r.method));
        fs::write(&p, s).map_err(|e| Error::io(&p, e))?;
    }
    Ok(artifact)
}

/// Where the ensemble stage takes its table from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnsembleSource {
    Rankings(PathBuf),
    /// A bundled table; only `table2` exists.
    Fixture(String),
}

/// Aggregate rankings into `ensemble.json` (written when `out` is given).
pub fn run_ensemble(source: &EnsembleSource, out: Option<&Path>) -> Result<EnsembleArtifact> {
    let (table, mi, label) = match source {
        EnsembleSource::Fixture(name) if name == "table2" => (
            fixtures::table2(),
            fixtures::table3_mi(),
            format!("fixture:{name}"),
        ),
        EnsembleSource::Fixture(name) => {
            return Err(Error::Config(format!("unknown fixture {name:?} (expected table2)")))
        }
        EnsembleSource::Rankings(path) => {
            let r: RankingsArtifact = read_json(path)?;
            (
                PositionalTable::from_rankings(&r.rankings)?,
                MiOrdering::new(r.mi_order)?,
                path.display().to_string(),
            )
        }
    };
    let outcome = ensemble_rank(&table, &mi)?;
    let artifact = EnsembleArtifact {
        spec_version: ARTIFACT_VERSION.into(),
        metadata: Metadata {
            source: Some(label),
            ..Metadata::now()
        },
        methods: table.methods().to_vec(),
        mi_order: mi.order().to_vec(),
        order: outcome.ranking.order,
        skipped_rows: outcome.skipped_rows,
        tie_break_log: outcome.tie_break_log,
        rows: outcome.rows,
    };
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_json(&dir.join(ENSEMBLE_FILE), &artifact)?;
    }
    Ok(artifact)
}

/// Command-line overrides for the evaluate stage; `None` keeps the lower layer.
#[derive(Debug, Clone, Default)]
pub struct EvaluateOverrides {
    pub config_file: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub label_column: Option<String>,
    pub schema: Option<PathBuf>,
    pub seed: Option<u64>,
    pub classifier: Option<String>,
    pub folds: Option<usize>,
    pub top_k: Option<usize>,
}

/// Evaluate the ensemble order found in `in_dir`, writing `report.json` and
/// `curve.csv` into `out`.
///
/// The dataset and settings recorded in `in_dir/rankings.json` form the base
/// layer, overridden by the config file and then by explicit flags.
pub fn run_evaluate(in_dir: &Path, out: &Path, o: &EvaluateOverrides) -> Result<ReportArtifact> {
    let ens: EnsembleArtifact = read_json(&in_dir.join(ENSEMBLE_FILE))?;
    let rankings_path = in_dir.join(RANKINGS_FILE);
    let recorded: Option<RankingsArtifact> = if rankings_path.exists() {
        Some(read_json(&rankings_path)?)
    } else {
        None
    };
    let mut cfg = match (&o.config_file, &recorded) {
        (Some(p), _) => PipelineConfig::load(p)?,
        (None, Some(r)) => r.config.clone(),
        (None, None) => PipelineConfig::default(),
    };
    if let (Some(_), Some(r)) = (&o.config_file, &recorded) {
        // the config file may omit the dataset; fall back to the recorded one
        cfg.input = cfg.input.or_else(|| r.config.input.clone());
        cfg.label_column = cfg.label_column.or_else(|| r.config.label_column.clone());
        cfg.schema = cfg.schema.or_else(|| r.config.schema.clone());
    }
    apply(&mut cfg.input, &o.input);
    apply(&mut cfg.label_column, &o.label_column);
    apply(&mut cfg.schema, &o.schema);
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(c) = &o.classifier {
        cfg.classifier = c.clone();
    }
    if let Some(f) = o.folds {
        cfg.folds = f;
    }
    if o.top_k.is_some() {
        cfg.top_k = o.top_k;
    }
    cfg.validate()?;
    let spec = cfg.classifier_spec()?;
    let (d, info) = cfg.load_dataset()?;

    let ranking = Ranking::new(MethodId::Ensemble, ens.order.clone())?;
    if ranking.len() != d.n_features() {
        return Err(Error::contract(format!(
            "ensemble ranks {} features but the dataset has {}",
            ranking.len(),
            d.n_features()
        )));
    }
    let plan = stratified_folds(d.labels(), cfg.folds, seed::derive(cfg.seed, 3))?;
    let train_seed = seed::derive(cfg.seed, 4);
    let curve = accuracy_curve(&d, &ranking, &spec, &plan, train_seed)?;
    let top_k = match cfg.top_k {
        None => None,
        Some(k) => {
            let features = recommend_top(&ranking, k)?;
            let cv = cross_validate(&d, &features, &spec, &plan, train_seed)?;
            Some(TopKReport {
                k,
                feature_names: features.iter().map(|&f| info.feature_names[f].clone()).collect(),
                features,
                mean_accuracy: cv.mean_accuracy,
                pooled_accuracy: cv.pooled_accuracy,
                cv,
            })
        }
    };
    let report = ReportArtifact {
        spec_version: ARTIFACT_VERSION.into(),
        metadata: Metadata::now(),
        config: cfg,
        dataset: info,
        stratified: true,
        rankings: recorded.map(|r| r.rankings).unwrap_or_default(),
        ensemble_order: ens.order,
        curve,
        top_k,
    };
    ensure_dir(out)?;
    write_json(&out.join(REPORT_FILE), &report)?;
    report.curve.write_csv(out.join(CURVE_FILE))?;
    Ok(report)
}

fn apply<T: Clone>(slot: &mut Option<T>, value: &Option<T>) {
    if value.is_some() {
        slot.clone_from(value);
    }
}

/// Parse an artifact and drop its `metadata` block, for run-to-run comparison.
pub fn without_metadata(json: &str) -> Result<serde_json::Value> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("metadata");
    }
    Ok(v)
}
