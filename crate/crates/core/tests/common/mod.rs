#![allow(dead_code)]

use featrec::Dataset;
use proptest::prelude::*;

/// Random dataset: `n` rows, `nf` features drawn from a small integer grid so
/// that ties and repeated values are common, every class present.
pub fn dataset(max_rows: usize, max_features: usize) -> impl Strategy<Value = Dataset> {
    (8..=max_rows, 2..=max_features, 2usize..=4).prop_flat_map(|(n, nf, c)| {
        (
            prop::collection::vec(prop::collection::vec(-20i32..20, nf), n),
            prop::collection::vec(0..c, n),
            Just(c),
        )
            .prop_map(|(rows, mut labels, c)| {
                for k in 0..c {
                    labels[k] = k;
                }
                let rows = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| v as f64 / 4.0).collect())
                    .collect();
                Dataset::from_rows(rows, labels).unwrap()
            })
    })
}

pub fn random_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

use featrec::models::mlp::{flatten, MlpModel};
use featrec::seed;
use rand::Rng;

/// Max relative error between the analytic gradient and central differences
/// (step 1e-5) for a random small network and batch drawn from `seed`.
pub fn gradient_check_error(seed: u64) -> f64 {
    let mut rng = seed::rng(seed);
    let inputs = rng.random_range(1..=5);
    let h1 = rng.random_range(1..=4);
    let h2 = rng.random_range(1..=4);
    let classes = rng.random_range(2..=4);
    let batch = rng.random_range(1..=6);
    let mut model = MlpModel::init(&[inputs, h1, h2, classes], rng.random());
    let rows: Vec<Vec<f64>> = (0..batch)
        .map(|_| (0..inputs).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let labels: Vec<usize> = (0..batch).map(|_| rng.random_range(0..classes)).collect();

    let (_, grads) = model.loss_and_gradient(&rows, &labels);
    let analytic = flatten(&grads);
    let theta = model.parameters();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for i in 0..theta.len() {
        let mut p = theta.clone();
        p[i] = theta[i] + h;
        model.set_parameters(&p);
        let up = model.loss(&rows, &labels);
        p[i] = theta[i] - h;
        model.set_parameters(&p);
        let down = model.loss(&rows, &labels);
        let numeric = (up - down) / (2.0 * h);
        let scale = analytic[i].abs().max(numeric.abs()).max(1e-8);
        worst = worst.max((analytic[i] - numeric).abs() / scale);
    }
    model.set_parameters(&theta);
    worst
}

/// Recompute the maximal KKT violation `m(α) − M(α)` of a binary dual from
/// scratch: gradient `Qα − e` with `Q_ij = y_i y_j K_ij`.
pub fn kkt_violation(kernel: &[Vec<f64>], y: &[f64], alpha: &[f64], c: f64) -> f64 {
    let n = y.len();
    let mut up = f64::NEG_INFINITY;
    let mut low = f64::INFINITY;
    for t in 0..n {
        let g: f64 = (0..n).map(|s| y[t] * y[s] * kernel[t][s] * alpha[s]).sum::<f64>() - 1.0;
        let v = -y[t] * g;
        let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
        let in_low = (y[t] < 0.0 && alpha[t] < c) || (y[t] > 0.0 && alpha[t] > 0.0);
        if in_up {
            up = up.max(v);
        }
        if in_low {
            low = low.min(v);
        }
    }
    if up.is_finite() && low.is_finite() {
        (up - low).max(0.0)
    } else {
        0.0
    }
}

/// Two uniform blobs of half-width 1 centred at (−3,−3) and (3,3).
pub fn separable_blobs(per_class: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = seed::rng(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..2 * per_class {
        let c = i % 2;
        let centre = if c == 0 { -3.0 } else { 3.0 };
        rows.push(vec![
            centre + rng.random_range(-1.0..1.0),
            centre + rng.random_range(-1.0..1.0),
        ]);
        labels.push(c);
    }
    (rows, labels)
}

use featrec::eval::FoldPlan;

/// Check the three fold-plan invariants; returns a description of the first failure.
pub fn fold_plan_violation(plan: &FoldPlan, labels: &[usize]) -> Option<String> {
    let n = labels.len();
    let mut seen = vec![false; n];
    for f in &plan.folds {
        for &i in f {
            if i >= n || seen[i] {
                return Some(format!("row {i} out of range or repeated"));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Some("folds do not cover every row".into());
    }
    let sizes: Vec<usize> = plan.folds.iter().map(Vec::len).collect();
    if sizes.iter().max().unwrap() - sizes.iter().min().unwrap() > 1 {
        return Some(format!("fold sizes {sizes:?}"));
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    for c in 0..classes {
        let per: Vec<usize> = plan
            .folds
            .iter()
            .map(|f| f.iter().filter(|&&i| labels[i] == c).count())
            .collect();
        if per.iter().max().unwrap() - per.iter().min().unwrap() > 1 {
            return Some(format!("class {c} counts {per:?}"));
        }
    }
    None
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn featrec<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_featrec"))
        .args(args)
        .output()
        .expect("featrec binary runs")
}

/// Write a small planted dataset as `data.csv` (label column `label`) in `dir`.
pub fn planted_csv(dir: &Path, n_rows: usize, n_features: usize) -> PathBuf {
    let d = featrec::synthetic::planted(&featrec::synthetic::PlantedConfig {
        n_rows,
        n_features,
        ..Default::default()
    })
    .unwrap();
    let p = dir.join("data.csv");
    d.write_csv(&p).unwrap();
    p
}
