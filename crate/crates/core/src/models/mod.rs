//! From-scratch classifiers: MLP with Adam, one-vs-all RBF SVM with SMO,
//! k-NN, and the CART forest behind the embedded ranker.

pub mod forest;
pub mod knn;
pub mod mlp;
pub mod svm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use forest::{forest_importance, forest_train, ForestModel, ForestParams, TreeNode};
pub use knn::{knn_predict, KnnModel};
pub use mlp::{mlp_train, AdamConfig, MlpModel, MlpParams};
pub use svm::{svm_train, SvmModel, SvmParams};

/// Classifier family plus hyper-parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierSpec {
    Nn(MlpParams),
    Svm(SvmParams),
    Knn { k: usize },
    /// Always predicts the most frequent training class.
    Majority,
}

impl ClassifierSpec {
    /// Parse a classifier name as accepted on the command line.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "nn" | "mlp" => Ok(ClassifierSpec::Nn(MlpParams::default())),
            "svm" => Ok(ClassifierSpec::Svm(SvmParams::default())),
            "knn" => Ok(ClassifierSpec::Knn { k: 3 }),
            "majority" => Ok(ClassifierSpec::Majority),
            other => Err(Error::Config(format!(
                "unknown classifier {other:?} (expected nn, svm, knn or majority)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::Nn(_) => "nn",
            ClassifierSpec::Svm(_) => "svm",
            ClassifierSpec::Knn { .. } => "knn",
            ClassifierSpec::Majority => "majority",
        }
    }

    /// Train on already-standardized rows. `seed` replaces any seed in the params.
    pub fn fit(
        &self,
        rows: &[Vec<f64>],
        labels: &[usize],
        class_count: usize,
        seed: u64,
    ) -> Result<TrainedModel> {
        match self {
            ClassifierSpec::Nn(p) => {
                let mut p = p.clone();
                p.adam.seed = seed;
                Ok(TrainedModel::Nn(mlp_train(rows, labels, class_count, &p)?))
            }
            ClassifierSpec::Svm(p) => Ok(TrainedModel::Svm(svm_train(rows, labels, class_count, p)?)),
            ClassifierSpec::Knn { k } => Ok(TrainedModel::Knn(KnnModel::fit(rows, labels, *k)?)),
            ClassifierSpec::Majority => {
                let mut counts = vec![0usize; class_count.max(1)];
                for &l in labels {
                    counts[l] += 1;
                }
                let mut class = 0;
                for c in 1..counts.len() {
                    if counts[c] > counts[class] {
                        class = c;
                    }
                }
                Ok(TrainedModel::Majority { class })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Nn(MlpModel),
    Svm(SvmModel),
    Knn(KnnModel),
    Majority { class: usize },
}

impl TrainedModel {
    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        match self {
            TrainedModel::Nn(m) => m.predict(rows),
            TrainedModel::Svm(m) => m.predict(rows),
            TrainedModel::Knn(m) => m.predict(rows),
            TrainedModel::Majority { class } => Ok(vec![*class; rows.len()]),
        }
    }
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Versioned JSON envelope for a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format_version: u32,
    pub model: TrainedModel,
}

impl ModelDocument {
    pub fn new(model: TrainedModel) -> Self {
        ModelDocument {
            format_version: MODEL_FORMAT_VERSION,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Schema(format!(
                "unsupported model format version {}",
                doc.format_version
            )));
        }
        Ok(doc)
    }
}
