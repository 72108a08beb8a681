//! Bootstrap forest of CART trees grown on Gini impurity, with
//! mean-decrease-impurity feature importance.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed::{self, TaskRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub trees: usize,
    /// `None` grows until leaves are pure or too small to split.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Features examined per split; `None` means `ceil(sqrt(NF))`.
    pub max_features: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            trees: 200,
            max_depth: None,
            min_samples_split: 2,
            max_features: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        class_counts: Vec<usize>,
    },
    Split {
        feature: usize,
        threshold: f64,
        /// `n·G(node) − n_l·G(left) − n_r·G(right)`, sample-weighted.
        impurity_decrease: f64,
        n_samples: usize,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    /// Node arena; index 0 is the root.
    pub nodes: Vec<TreeNode>,
    pub seed: u64,
}

impl Tree {
    pub fn predict_counts(&self, x: &[f64]) -> &[usize] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { class_counts } => return class_counts,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => at = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub n_features: usize,
    pub class_count: usize,
    pub trees: Vec<Tree>,
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

struct Grower<'a> {
    d: &'a Dataset,
    params: &'a ForestParams,
    max_features: usize,
    class_count: usize,
    nodes: Vec<TreeNode>,
    rng: TaskRng,
    features: Vec<usize>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

impl Grower<'_> {
    fn class_counts(&self, samples: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.class_count];
        for &i in samples {
            c[self.d.labels()[i]] += 1;
        }
        c
    }

    fn best_split_on(&self, feature: usize, samples: &[usize], parent: &[usize]) -> Option<BestSplit> {
        let mut pairs: Vec<(f64, usize)> = samples
            .iter()
            .map(|&i| (self.d.value(i, feature), self.d.labels()[i]))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = pairs.len();
        let parent_impurity = n as f64 * gini(parent, n);
        let mut left = vec![0usize; self.class_count];
        let mut right = parent.to_vec();
        let mut best: Option<BestSplit> = None;
        for k in 0..n - 1 {
            let (v, y) = pairs[k];
            left[y] += 1;
            right[y] -= 1;
            let next = pairs[k + 1].0;
            if next <= v {
                continue;
            }
            let nl = k + 1;
            let nr = n - nl;
            let child = nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr);
            let decrease = (parent_impurity - child).max(0.0);
            if best.as_ref().is_none_or(|b| decrease > b.decrease) {
                let mut threshold = v + (next - v) / 2.0;
                if threshold >= next {
                    threshold = v;
                }
                best = Some(BestSplit {
                    feature,
                    threshold,
                    decrease,
                });
            }
        }
        best
    }

    fn grow(&mut self, samples: Vec<usize>, depth: usize) -> usize {
        let counts = self.class_counts(&samples);
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf {
            class_counts: counts.clone(),
        });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let depth_ok = self.params.max_depth.is_none_or(|m| depth < m);
        if pure || samples.len() < self.params.min_samples_split.max(2) || !depth_ok {
            return id;
        }

        self.features.shuffle(&mut self.rng);
        let mut best: Option<BestSplit> = None;
        let mut examined = 0;
        for idx in 0..self.features.len() {
            let f = self.features[idx];
            if let Some(s) = self.best_split_on(f, &samples, &counts) {
                if best.as_ref().is_none_or(|b| s.decrease > b.decrease) {
                    best = Some(s);
                }
            }
            examined += 1;
            // keep drawing past the quota while no feature can split this node
            if examined >= self.max_features && best.is_some() {
                break;
            }
        }
        let Some(split) = best else {
            return id;
        };

        let (l, r): (Vec<usize>, Vec<usize>) = samples
            .iter()
            .partition(|&&i| self.d.value(i, split.feature) <= split.threshold);
        let n_samples = samples.len();
        drop(samples);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            impurity_decrease: split.decrease,
            n_samples,
            left,
            right,
        };
        id
    }
}

fn grow_tree(d: &Dataset, params: &ForestParams, max_features: usize, tree_seed: u64) -> Tree {
    let mut rng = seed::rng(tree_seed);
    let n = d.n_rows();
    let samples: Vec<usize> = if params.bootstrap {
        (0..n).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    let mut g = Grower {
        d,
        params,
        max_features,
        class_count: d.class_count(),
        nodes: Vec::new(),
        rng,
        features: (0..d.n_features()).collect(),
    };
    g.grow(samples, 0);
    Tree {
        nodes: g.nodes,
        seed: tree_seed,
    }
}

/// Train a forest; tree `t` uses the seed derived from `(seed, t)`.
pub fn forest_train(d: &Dataset, params: &ForestParams, seed: u64) -> Result<ForestModel> {
    if params.trees == 0 {
        return Err(Error::Config("forest needs at least one tree".into()));
    }
    if d.n_rows() == 0 || d.n_features() == 0 {
        return Err(Error::contract("forest needs rows and features"));
    }
    let first = d.labels()[0];
    if d.labels().iter().all(|&l| l == first) {
        return Err(Error::DegenerateLabels(
            "forest training labels contain a single class".into(),
        ));
    }
    let nf = d.n_features();
    let max_features = params
        .max_features
        .unwrap_or_else(|| (nf as f64).sqrt().ceil() as usize)
        .clamp(1, nf);
    let trees = (0..params.trees)
        .into_par_iter()
        .map(|t| grow_tree(d, params, max_features, seed::derive(seed, t as u64)))
        .collect();
    Ok(ForestModel {
        n_features: nf,
        class_count: d.class_count(),
        trees,
    })
}

/// Mean decrease in impurity per feature, normalized to sum to 1.
///
/// A forest with no informative split at all yields uniform importance.
pub fn forest_importance(m: &ForestModel) -> Vec<f64> {
    let mut imp = vec![0.0; m.n_features];
    for tree in &m.trees {
        for node in &tree.nodes {
            if let TreeNode::Split {
                feature,
                impurity_decrease,
                ..
            } = node
            {
                imp[*feature] += impurity_decrease;
            }
        }
    }
    let total: f64 = imp.iter().sum();
    if total > 0.0 {
        imp.iter_mut().for_each(|v| *v /= total);
    } else if m.n_features > 0 {
        imp.fill(1.0 / m.n_features as f64);
    }
    imp
}

impl ForestModel {
    /// Sum of leaf class frequencies over trees, argmax with ties to the lower class.
    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<usize> {
        rows.iter()
            .map(|x| {
                let mut score = vec![0.0; self.class_count];
                for t in &self.trees {
                    let counts = t.predict_counts(x);
                    let n: usize = counts.iter().sum();
                    for (s, &c) in score.iter_mut().zip(counts) {
                        *s += c as f64 / n.max(1) as f64;
                    }
                }
                let mut best = 0;
                for k in 1..score.len() {
                    if score[k] > score[best] {
                        best = k;
                    }
                }
                best
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn planted(n: usize, seed: u64) -> Dataset {
        let mut rng = seed::rng(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let y = i % 3;
            rows.push(vec![
                rng.random::<f64>(),
                y as f64,
                4.0,
                rng.random::<f64>(),
            ]);
            labels.push(y);
        }
        Dataset::from_rows(rows, labels).unwrap()
    }

    #[test]
    fn label_copy_dominates_and_constant_is_zero() {
        let d = planted(90, 1);
        let m = forest_train(&d, &ForestParams::default(), 5).unwrap();
        let imp = forest_importance(&m);
        assert_eq!(imp[2], 0.0);
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(imp[1] > imp[0] && imp[1] > imp[3]);
        assert!(imp.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn deterministic_for_seed() {
        let d = planted(60, 2);
        let p = ForestParams {
            trees: 20,
            ..ForestParams::default()
        };
        assert_eq!(forest_train(&d, &p, 9).unwrap(), forest_train(&d, &p, 9).unwrap());
    }

    #[test]
    fn leaves_sum_to_their_samples() {
        let d = planted(60, 3);
        let p = ForestParams {
            trees: 5,
            bootstrap: false,
            ..ForestParams::default()
        };
        let m = forest_train(&d, &p, 1).unwrap();
        for t in &m.trees {
            if let TreeNode::Leaf { class_counts } = &t.nodes[0] {
                assert_eq!(class_counts.iter().sum::<usize>(), 60);
            }
            for node in &t.nodes {
                if let TreeNode::Split {
                    impurity_decrease, ..
                } = node
                {
                    assert!(*impurity_decrease >= 0.0);
                }
            }
        }
        assert_eq!(m.predict(&d.select(&[0, 1, 2], &[0, 1, 2, 3])), vec![0, 1, 2]);
    }

    #[test]
    fn single_class_is_degenerate() {
        let d = Dataset::from_rows(vec![vec![1.0], vec![2.0]], vec![0, 0]).unwrap();
        assert!(matches!(
            forest_train(&d, &ForestParams::default(), 0),
            Err(Error::DegenerateLabels(_))
        ));
    }

    #[test]
    fn all_constant_features_give_uniform_importance() {
        let d = Dataset::from_rows(vec![vec![1.0, 2.0]; 6], vec![0, 1, 0, 1, 0, 1]).unwrap();
        let m = forest_train(&d, &ForestParams::default(), 0).unwrap();
        assert_eq!(forest_importance(&m), vec![0.5, 0.5]);
    }
}
