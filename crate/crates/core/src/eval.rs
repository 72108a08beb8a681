//! Stratified cross-validation, accuracy-vs-`k` curves and grid search.

use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Standardizer};
use crate::error::{Error, Result};
use crate::models::ClassifierSpec;
use crate::rankers::Ranking;
use crate::seed;

/// `k` disjoint folds covering every row, balanced per class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub folds: Vec<Vec<usize>>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn n_rows(&self) -> usize {
        self.folds.iter().map(Vec::len).sum()
    }

    /// Every row not in fold `f`, ascending.
    pub fn train_rows(&self, f: usize) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, rows)| rows.iter().copied())
            .collect();
        rows.sort_unstable();
        rows
    }
}

/// Shuffle each class, lay the classes end to end, and deal row `p` of that
/// sequence to fold `p mod k`.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<FoldPlan> {
    let n = labels.len();
    if k < 2 {
        return Err(Error::contract(format!("fold count must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::contract(format!("{k} folds requested for {n} rows")));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let mut rng = seed::rng(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut p = 0;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            folds[p % k].push(i);
            p += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldPlan { k, folds, seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub n_test: usize,
    pub correct: usize,
    /// `None` when training on this fold failed; see `error`.
    pub accuracy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub classifier: ClassifierSpec,
    pub features: Vec<usize>,
    pub folds: Vec<FoldResult>,
    /// Arithmetic mean of the successful fold accuracies.
    pub mean_accuracy: f64,
    /// Population standard deviation of the successful fold accuracies.
    pub std_accuracy: f64,
    /// Correct predictions over all held-out rows of successful folds.
    pub pooled_accuracy: f64,
}

/// Mean and population std, reduced over sorted values so fold order is irrelevant.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn run_fold(
    d: &Dataset,
    features: &[usize],
    spec: &ClassifierSpec,
    plan: &FoldPlan,
    fold: usize,
    seed: u64,
) -> FoldResult {
    let test = &plan.folds[fold];
    let train = plan.train_rows(fold);
    let scaler = Standardizer::fit_rows(d, &train, features);
    let xtr = scaler.transform(&d.select(&train, features));
    let ytr: Vec<usize> = train.iter().map(|&i| d.labels()[i]).collect();
    let xte = scaler.transform(&d.select(test, features));
    let outcome = spec
        .fit(&xtr, &ytr, d.class_count(), seed::derive(seed, fold as u64))
        .and_then(|m| m.predict(&xte));
    match outcome {
        Ok(pred) => {
            let correct = pred
                .iter()
                .zip(test)
                .filter(|&(&p, &i)| p == d.labels()[i])
                .count();
            FoldResult {
                fold,
                n_test: test.len(),
                correct,
                accuracy: Some(correct as f64 / test.len().max(1) as f64),
                error: None,
            }
        }
        Err(e) => FoldResult {
            fold,
            n_test: test.len(),
            correct: 0,
            accuracy: None,
            error: Some(e.to_string()),
        },
    }
}

/// Train on `k − 1` folds, score on the held-out one; standardization is fit
/// on the training split only. Fold `f` trains with seed `derive(seed, f)`.
pub fn cross_validate(
    d: &Dataset,
    features: &[usize],
    spec: &ClassifierSpec,
    plan: &FoldPlan,
    seed: u64,
) -> Result<CvReport> {
    if features.is_empty() {
        return Err(Error::contract("cross-validation needs at least one feature"));
    }
    if let Some(&f) = features.iter().find(|&&f| f >= d.n_features()) {
        return Err(Error::contract(format!("feature {f} out of range")));
    }
    if plan.n_rows() != d.n_rows() || plan.folds.iter().flatten().any(|&i| i >= d.n_rows()) {
        return Err(Error::contract("fold plan does not match the dataset"));
    }
    let folds: Vec<FoldResult> = (0..plan.folds.len())
        .into_par_iter()
        .map(|f| run_fold(d, features, spec, plan, f, seed))
        .collect();
    let accs: Vec<f64> = folds.iter().filter_map(|r| r.accuracy).collect();
    if accs.is_empty() {
        let why = folds
            .iter()
            .find_map(|r| r.error.clone())
            .unwrap_or_default();
        return Err(Error::DegenerateLabels(format!("every fold failed: {why}")));
    }
    let (mean, std) = mean_std(&accs);
    let (correct, total) = folds
        .iter()
        .filter(|r| r.accuracy.is_some())
        .fold((0, 0), |(c, t), r| (c + r.correct, t + r.n_test));
    Ok(CvReport {
        classifier: spec.clone(),
        features: features.to_vec(),
        folds,
        mean_accuracy: mean,
        std_accuracy: std,
        pooled_accuracy: correct as f64 / total.max(1) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub k: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub pooled_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyCurve {
    pub points: Vec<CurvePoint>,
}

impl AccuracyCurve {
    /// `k` with the highest mean accuracy; ties go to the smaller `k`.
    pub fn best_k(&self) -> Option<usize> {
        let mut best: Option<&CurvePoint> = None;
        for p in &self.points {
            if best.is_none_or(|b| p.mean_accuracy > b.mean_accuracy) {
                best = Some(p);
            }
        }
        best.map(|p| p.k)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,mean_accuracy,std_accuracy\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", p.k, p.mean_accuracy, p.std_accuracy));
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::io(path, e))
    }
}

/// Cross-validated accuracy on each prefix `1..=NF` of `ranking`.
pub fn accuracy_curve(
    d: &Dataset,
    ranking: &Ranking,
    spec: &ClassifierSpec,
    plan: &FoldPlan,
    seed: u64,
) -> Result<AccuracyCurve> {
    if ranking.len() != d.n_features() {
        return Err(Error::contract(format!(
            "ranking covers {} features, dataset has {}",
            ranking.len(),
            d.n_features()
        )));
    }
    let points = (1..=ranking.len())
        .into_par_iter()
        .map(|k| {
            let r = cross_validate(d, ranking.top(k), spec, plan, seed)?;
            Ok(CurvePoint {
                k,
                mean_accuracy: r.mean_accuracy,
                std_accuracy: r.std_accuracy,
                pooled_accuracy: r.pooled_accuracy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AccuracyCurve { points })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub index: usize,
    pub spec: ClassifierSpec,
    /// `None` when every fold failed for this configuration.
    pub mean_accuracy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best: ClassifierSpec,
    pub best_index: usize,
    pub report: CvReport,
    /// One entry per grid point, in grid order.
    pub leaderboard: Vec<GridEntry>,
}

/// Exhaustive search; the highest mean accuracy wins, ties to the earliest entry.
pub fn grid_search(
    d: &Dataset,
    features: &[usize],
    grid: &[ClassifierSpec],
    plan: &FoldPlan,
    seed: u64,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::Config("grid search needs at least one configuration".into()));
    }
    let reports: Vec<Result<CvReport>> = grid
        .par_iter()
        .map(|spec| cross_validate(d, features, spec, plan, seed))
        .collect();
    let mut best: Option<usize> = None;
    let mut leaderboard = Vec::with_capacity(grid.len());
    for (i, r) in reports.iter().enumerate() {
        let mean = r.as_ref().ok().map(|r| r.mean_accuracy);
        if let Some(m) = mean {
            let better = best.is_none_or(|b| {
                m > reports[b].as_ref().map(|r| r.mean_accuracy).unwrap_or(f64::NEG_INFINITY)
            });
            if better {
                best = Some(i);
            }
        }
        leaderboard.push(GridEntry {
            index: i,
            spec: grid[i].clone(),
            mean_accuracy: mean,
            error: r.as_ref().err().map(|e| e.to_string()),
        });
    }
    let Some(b) = best else {
        return Err(reports.into_iter().next().unwrap().unwrap_err());
    };
    let report = reports.into_iter().nth(b).unwrap()?;
    Ok(GridSearchResult {
        best: grid[b].clone(),
        best_index: b,
        report,
        leaderboard,
    })
}
