//! k-nearest-neighbour voting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Indices of the `k` smallest `(distance, index)` pairs, nearest first.
///
/// Equal distances resolve to the lower index.
pub fn nearest_k(k: usize, candidates: impl Iterator<Item = (f64, usize)>) -> Vec<usize> {
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
    for (d, i) in candidates {
        if best.len() == k {
            let (wd, wi) = best[k - 1];
            if d > wd || (d == wd && i > wi) {
                continue;
            }
        }
        let pos = best.partition_point(|&(bd, bi)| bd < d || (bd == d && bi < i));
        best.insert(pos, (d, i));
        best.truncate(k);
    }
    best.into_iter().map(|(_, i)| i).collect()
}

/// Majority label among `neighbors`; vote ties go to the lowest label.
pub fn vote(neighbors: &[usize], labels: &[usize], class_count: usize) -> usize {
    let mut counts = vec![0usize; class_count.max(1)];
    for &i in neighbors {
        counts[labels[i]] += 1;
    }
    let mut best = 0;
    for c in 1..counts.len() {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    best
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Predict by majority vote of the `k` Euclidean nearest training rows.
pub fn knn_predict(
    train: &[Vec<f64>],
    labels: &[usize],
    k: usize,
    queries: &[Vec<f64>],
) -> Result<Vec<usize>> {
    if train.is_empty() {
        return Err(Error::contract("k-NN needs a non-empty training set"));
    }
    if train.len() != labels.len() {
        return Err(Error::contract("rows and labels differ in length"));
    }
    if k == 0 || k > train.len() {
        return Err(Error::contract(format!(
            "k = {k} must lie in 1..={}",
            train.len()
        )));
    }
    let width = train[0].len();
    let class_count = labels.iter().max().map_or(1, |m| m + 1);
    queries
        .iter()
        .map(|q| {
            if q.len() != width {
                return Err(Error::contract("query width differs from training width"));
            }
            let nn = nearest_k(
                k,
                train
                    .iter()
                    .enumerate()
                    .map(|(i, r)| (squared_distance(r, q), i)),
            );
            Ok(vote(&nn, labels, class_count))
        })
        .collect()
}

/// A stored training set used as a k-NN classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl KnnModel {
    pub fn fit(rows: &[Vec<f64>], labels: &[usize], k: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::contract("k-NN needs a non-empty training set"));
        }
        Ok(KnnModel {
            // clamp so small folds still predict
            k: k.clamp(1, rows.len()),
            rows: rows.to_vec(),
            labels: labels.to_vec(),
        })
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        knn_predict(&self.rows, &self.labels, self.k, rows)
    }
}
