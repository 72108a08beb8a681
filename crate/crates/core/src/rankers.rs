//! The eight base rankers.
//!
//! Filters (MIFS, JMI, NMI, chi-square, F-score) score features from the data
//! alone; wrappers (SFS, SBS) search subsets by the cross-validated accuracy of
//! an internal 3-NN classifier; the embedded ranker reads impurity importance
//! off a random forest. Every ranker returns a full ordering of the features
//! and breaks ties toward the lower feature index.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, DiscretizedView, DEFAULT_BINS};
use crate::error::{Error, Result};
use crate::eval::stratified_folds;
use crate::infotheory::{
    joint_mutual_information, labels_as_codes, mutual_information, normalized_mutual_information,
    MiRankMode,
};
use crate::models::forest::{forest_importance, forest_train, ForestParams};
use crate::models::knn::{nearest_k, vote};
use crate::seed;

/// Score differences at or below this are treated as ties in greedy searches.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodId {
    RandomForest,
    Sfs,
    Sbs,
    Mifs,
    ChiSquared,
    Fscore,
    Jmi,
    Nmi,
    MiRank,
    Ensemble,
}

impl MethodId {
    /// The base rankers in positional-table column order.
    pub const BASE: [MethodId; 8] = [
        MethodId::RandomForest,
        MethodId::Sfs,
        MethodId::Sbs,
        MethodId::Mifs,
        MethodId::ChiSquared,
        MethodId::Fscore,
        MethodId::Jmi,
        MethodId::Nmi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodId::RandomForest => "random_forest",
            MethodId::Sfs => "sfs",
            MethodId::Sbs => "sbs",
            MethodId::Mifs => "mifs",
            MethodId::ChiSquared => "chi_squared",
            MethodId::Fscore => "fscore",
            MethodId::Jmi => "jmi",
            MethodId::Nmi => "nmi",
            MethodId::MiRank => "mi_rank",
            MethodId::Ensemble => "ensemble",
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MethodId::BASE
            .iter()
            .chain(&[MethodId::MiRank, MethodId::Ensemble])
            .find(|m| m.as_str() == s)
            .copied()
            .ok_or_else(|| Error::Schema(format!("unknown method {s:?}")))
    }
}

/// A full ordering of feature indices; `order[k]` is the feature ranked `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    pub method: MethodId,
    pub order: Vec<usize>,
}

pub fn is_permutation(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    for &f in order {
        if f >= order.len() || seen[f] {
            return false;
        }
        seen[f] = true;
    }
    true
}

impl Ranking {
    pub fn new(method: MethodId, order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order) {
            return Err(Error::contract(format!(
                "{method} ordering is not a permutation of 0..{}",
                order.len()
            )));
        }
        Ok(Ranking { method, order })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 0-based position of every feature.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &f) in self.order.iter().enumerate() {
            pos[f] = k;
        }
        pos
    }

    pub fn top(&self, d: usize) -> &[usize] {
        &self.order[..d.min(self.order.len())]
    }
}

/// Indices sorted by descending score; equal scores keep ascending index order.
pub fn argsort_desc(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

/// Greedy forward selection driven by `score(candidate, selected)`.
fn greedy_order(nf: usize, mut score: impl FnMut(usize, &[usize]) -> f64) -> Vec<usize> {
    let mut selected = Vec::with_capacity(nf);
    let mut remaining: Vec<usize> = (0..nf).collect();
    while !remaining.is_empty() {
        let mut best_pos = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (pos, &f) in remaining.iter().enumerate() {
            let s = score(f, &selected);
            if pos == 0 || s > best_score + TIE_EPS {
                best_pos = pos;
                best_score = s;
            }
        }
        selected.push(remaining.remove(best_pos));
    }
    selected
}

fn relevance(view: &DiscretizedView, y: &[u32]) -> Vec<f64> {
    view.codes
        .iter()
        .map(|c| mutual_information(c, y).map(|m| m.bits()).unwrap_or(0.0))
        .collect()
}

/// Lazily filled symmetric pairwise statistic between feature columns.
struct PairCache<F: Fn(usize, usize) -> f64> {
    nf: usize,
    values: Vec<Option<f64>>,
    compute: F,
}

impl<F: Fn(usize, usize) -> f64> PairCache<F> {
    fn new(nf: usize, compute: F) -> Self {
        PairCache {
            nf,
            values: vec![None; nf * nf],
            compute,
        }
    }

    fn get(&mut self, a: usize, b: usize) -> f64 {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let key = lo * self.nf + hi;
        if let Some(v) = self.values[key] {
            return v;
        }
        let v = (self.compute)(lo, hi);
        self.values[key] = Some(v);
        v
    }
}

fn check_view(view: &DiscretizedView, labels: &[usize]) -> Result<()> {
    if view.n_features() > 0 && view.n_rows() != labels.len() {
        return Err(Error::contract("view rows and labels differ in length"));
    }
    Ok(())
}

/// MIFS: maximize `I(f;C) − β Σ_{s∈S} I(f;s)`.
pub fn rank_mifs(view: &DiscretizedView, labels: &[usize], beta: f64) -> Result<Ranking> {
    if !(beta >= 0.0) {
        return Err(Error::Config("MIFS beta must be non-negative".into()));
    }
    check_view(view, labels)?;
    let y = labels_as_codes(labels);
    let rel = relevance(view, &y);
    let mut pair = PairCache::new(view.n_features(), |a, b| {
        mutual_information(&view.codes[a], &view.codes[b])
            .map(|m| m.bits())
            .unwrap_or(0.0)
    });
    let order = greedy_order(view.n_features(), |f, s| {
        let redundancy: f64 = if beta == 0.0 {
            0.0
        } else {
            s.iter().map(|&j| pair.get(f, j)).sum()
        };
        rel[f] - beta * redundancy
    });
    Ranking::new(MethodId::Mifs, order)
}

/// JMI: seed with the most relevant feature, then maximize `Σ_{s∈S} I((f,s);C)`.
pub fn rank_jmi(view: &DiscretizedView, labels: &[usize]) -> Result<Ranking> {
    check_view(view, labels)?;
    let y = labels_as_codes(labels);
    let rel = relevance(view, &y);
    let nf = view.n_features();
    // running sum of joint terms per candidate
    let mut acc = vec![0.0; nf];
    let mut last_added: Option<usize> = None;
    let mut selected = Vec::with_capacity(nf);
    let mut remaining: Vec<usize> = (0..nf).collect();
    while !remaining.is_empty() {
        if let Some(s) = last_added {
            for &f in &remaining {
                acc[f] += joint_mutual_information(&view.codes[f], &view.codes[s], &y)?;
            }
        }
        let score = |f: usize| if selected.is_empty() { rel[f] } else { acc[f] };
        let mut best_pos = 0;
        for pos in 1..remaining.len() {
            if score(remaining[pos]) > score(remaining[best_pos]) + TIE_EPS {
                best_pos = pos;
            }
        }
        let f = remaining.remove(best_pos);
        selected.push(f);
        last_added = Some(f);
    }
    Ranking::new(MethodId::Jmi, selected)
}

/// NMI: maximize `NMI(f;C) − mean_{s∈S} NMI(f;s)`.
pub fn rank_nmi(view: &DiscretizedView, labels: &[usize]) -> Result<Ranking> {
    check_view(view, labels)?;
    let y = labels_as_codes(labels);
    let rel: Vec<f64> = view
        .codes
        .iter()
        .map(|c| normalized_mutual_information(c, &y))
        .collect::<Result<_>>()?;
    let mut pair = PairCache::new(view.n_features(), |a, b| {
        normalized_mutual_information(&view.codes[a], &view.codes[b]).unwrap_or(0.0)
    });
    let order = greedy_order(view.n_features(), |f, s| {
        if s.is_empty() {
            rel[f]
        } else {
            let red: f64 = s.iter().map(|&j| pair.get(f, j)).sum();
            rel[f] - red / s.len() as f64
        }
    });
    Ranking::new(MethodId::Nmi, order)
}

/// Pearson chi-square `Σ (O − E)² / E` of a code column against the labels.
pub fn chi_square_statistic(codes: &[u32], labels: &[usize]) -> f64 {
    let n = codes.len();
    if n == 0 {
        return 0.0;
    }
    let kx = codes.iter().max().map_or(0, |&m| m as usize + 1);
    let ky = labels.iter().max().map_or(0, |&m| m + 1);
    let mut table = vec![0u64; kx * ky];
    for (&a, &b) in codes.iter().zip(labels) {
        table[a as usize * ky + b] += 1;
    }
    let row: Vec<u64> = (0..kx).map(|i| table[i * ky..(i + 1) * ky].iter().sum()).collect();
    let col: Vec<u64> = (0..ky).map(|j| (0..kx).map(|i| table[i * ky + j]).sum()).collect();
    let nf = n as f64;
    let mut stat = 0.0;
    for i in 0..kx {
        for j in 0..ky {
            if row[i] == 0 || col[j] == 0 {
                continue;
            }
            let e = row[i] as f64 * col[j] as f64 / nf;
            let d = table[i * ky + j] as f64 - e;
            stat += d * d / e;
        }
    }
    stat
}

pub fn rank_chi2(view: &DiscretizedView, labels: &[usize]) -> Result<Ranking> {
    check_view(view, labels)?;
    let scores: Vec<f64> = view
        .codes
        .iter()
        .map(|c| chi_square_statistic(c, labels))
        .collect();
    Ranking::new(MethodId::ChiSquared, argsort_desc(&scores))
}

pub const FISHER_EPS: f64 = 1e-12;

/// Fisher score `Σ_k n_k (μ_k − μ)² / (Σ_k n_k σ_k² + ε)` with population variances.
pub fn fisher_score(values: &[f64], labels: &[usize], class_count: usize) -> f64 {
    let n = values.len() as f64;
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    let mut cnt = vec![0usize; class_count];
    let mut sum = vec![0.0; class_count];
    for (&v, &l) in values.iter().zip(labels) {
        cnt[l] += 1;
        sum[l] += v;
    }
    let mu: Vec<f64> = (0..class_count)
        .map(|k| if cnt[k] > 0 { sum[k] / cnt[k] as f64 } else { 0.0 })
        .collect();
    let mut ss = vec![0.0; class_count];
    for (&v, &l) in values.iter().zip(labels) {
        ss[l] += (v - mu[l]).powi(2);
    }
    let mut between = 0.0;
    let mut within = 0.0;
    for k in 0..class_count {
        if cnt[k] == 0 {
            continue;
        }
        between += cnt[k] as f64 * (mu[k] - mean).powi(2);
        // n_k σ_k² is the within-class sum of squares
        within += ss[k];
    }
    between / (within + FISHER_EPS)
}

/// F-score ranking, computed on the standardized dataset.
pub fn rank_fscore(d: &Dataset) -> Result<Ranking> {
    if d.class_count() < 2 {
        return Err(Error::DegenerateLabels(
            "F-score needs at least two classes".into(),
        ));
    }
    let (std, _) = d.standardize();
    let scores: Vec<f64> = (0..std.n_features())
        .map(|j| fisher_score(&std.column(j), std.labels(), std.class_count()))
        .collect();
    Ranking::new(MethodId::Fscore, argsort_desc(&scores))
}

pub fn rank_random_forest(d: &Dataset, params: &ForestParams, seed: u64) -> Result<Ranking> {
    let m = forest_train(d, params, seed)?;
    Ranking::new(MethodId::RandomForest, argsort_desc(&forest_importance(&m)))
}

/// Internal classifier and protocol used by the wrapper rankers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WrapperEvaluator {
    /// Neighbours in the internal k-NN classifier.
    pub k: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for WrapperEvaluator {
    fn default() -> Self {
        WrapperEvaluator {
            k: 3,
            folds: 5,
            seed: 0,
        }
    }
}

/// Standardized data, fold assignment and per-feature access for subset scoring.
struct WrapperContext {
    n: usize,
    nf: usize,
    /// Column-major standardized values.
    cols: Vec<Vec<f64>>,
    labels: Vec<usize>,
    class_count: usize,
    fold_of: Vec<usize>,
    folds: Vec<Vec<usize>>,
    k: usize,
}

impl WrapperContext {
    fn new(d: &Dataset, ev: &WrapperEvaluator) -> Result<Self> {
        if ev.k == 0 {
            return Err(Error::Config("wrapper k must be at least 1".into()));
        }
        let (std, _) = d.standardize();
        let n = d.n_rows();
        let nfolds = ev.folds.clamp(2, n.max(2));
        let (folds, fold_of) = if n >= 2 {
            let plan = stratified_folds(d.labels(), nfolds, ev.seed)?;
            let mut fold_of = vec![0; n];
            for (f, rows) in plan.folds.iter().enumerate() {
                for &r in rows {
                    fold_of[r] = f;
                }
            }
            (plan.folds, fold_of)
        } else {
            (Vec::new(), vec![0; n])
        };
        Ok(WrapperContext {
            n,
            nf: d.n_features(),
            cols: (0..d.n_features()).map(|j| std.column(j)).collect(),
            labels: d.labels().to_vec(),
            class_count: d.class_count(),
            fold_of,
            folds,
            k: ev.k,
        })
    }

    fn add_feature(&self, dist: &mut [f64], f: usize, sign: f64) {
        let col = &self.cols[f];
        for i in 0..self.n {
            let row = &mut dist[i * self.n..(i + 1) * self.n];
            let xi = col[i];
            for (j, d) in row.iter_mut().enumerate() {
                let diff = xi - col[j];
                *d += sign * diff * diff;
            }
        }
    }

    fn distances(&self, features: &[usize]) -> Vec<f64> {
        let mut dist = vec![0.0; self.n * self.n];
        for &f in features {
            self.add_feature(&mut dist, f, 1.0);
        }
        dist
    }

    /// Mean fold accuracy of k-NN on a full `n × n` squared-distance matrix.
    fn accuracy(&self, dist: &[f64]) -> f64 {
        if self.folds.is_empty() {
            return 0.0;
        }
        let mut accs: Vec<f64> = Vec::with_capacity(self.folds.len());
        for (fi, test) in self.folds.iter().enumerate() {
            if test.is_empty() {
                continue;
            }
            let k = self.k.min(self.n - test.len()).max(1);
            let mut correct = 0usize;
            for &i in test {
                let row = &dist[i * self.n..(i + 1) * self.n];
                let nn = nearest_k(
                    k,
                    (0..self.n)
                        .filter(|&j| self.fold_of[j] != fi)
                        .map(|j| (row[j], j)),
                );
                if vote(&nn, &self.labels, self.class_count) == self.labels[i] {
                    correct += 1;
                }
            }
            accs.push(correct as f64 / test.len() as f64);
        }
        accs.sort_by(f64::total_cmp);
        accs.iter().sum::<f64>() / accs.len() as f64
    }

    fn accuracy_with(&self, base: &[f64], f: usize, sign: f64) -> f64 {
        let mut scratch = base.to_vec();
        self.add_feature(&mut scratch, f, sign);
        self.accuracy(&scratch)
    }
}

/// Pick the best `(accuracy, index)`: higher accuracy wins, ties go to the earlier entry.
fn best_candidate(scored: &[(usize, f64)]) -> usize {
    let mut best = 0;
    for (pos, &(_, acc)) in scored.iter().enumerate().skip(1) {
        if acc > scored[best].1 + TIE_EPS {
            best = pos;
        }
    }
    best
}

/// Sequential forward selection; the inclusion order is the ranking.
pub fn rank_sfs(d: &Dataset, ev: &WrapperEvaluator) -> Result<Ranking> {
    let ctx = WrapperContext::new(d, ev)?;
    let mut base = vec![0.0; ctx.n * ctx.n];
    let mut remaining: Vec<usize> = (0..ctx.nf).collect();
    let mut order = Vec::with_capacity(ctx.nf);
    while !remaining.is_empty() {
        let scored: Vec<(usize, f64)> = remaining
            .par_iter()
            .map(|&f| (f, ctx.accuracy_with(&base, f, 1.0)))
            .collect();
        let pick = best_candidate(&scored);
        let f = remaining.remove(pick);
        ctx.add_feature(&mut base, f, 1.0);
        order.push(f);
    }
    Ranking::new(MethodId::Sfs, order)
}

/// Sequential backward elimination; the last survivor ranks first.
pub fn rank_sbs(d: &Dataset, ev: &WrapperEvaluator) -> Result<Ranking> {
    let ctx = WrapperContext::new(d, ev)?;
    let mut alive: Vec<usize> = (0..ctx.nf).collect();
    let mut eliminated = Vec::with_capacity(ctx.nf);
    while alive.len() > 1 {
        let base = ctx.distances(&alive);
        let scored: Vec<(usize, f64)> = alive
            .par_iter()
            .map(|&f| (f, ctx.accuracy_with(&base, f, -1.0)))
            .collect();
        let pick = best_candidate(&scored);
        eliminated.push(alive.remove(pick));
    }
    let mut order = alive;
    order.extend(eliminated.into_iter().rev());
    Ranking::new(MethodId::Sbs, order)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankConfig {
    pub bins: usize,
    pub mifs_beta: f64,
    pub forest: ForestParams,
    pub wrapper_k: usize,
    pub wrapper_folds: usize,
    pub mi_mode: MiRankMode,
    pub seed: u64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            bins: DEFAULT_BINS,
            mifs_beta: 0.5,
            forest: ForestParams::default(),
            wrapper_k: 3,
            wrapper_folds: 5,
            mi_mode: MiRankMode::OneVsRest,
            seed: 0,
        }
    }
}

impl RankConfig {
    pub fn wrapper(&self) -> WrapperEvaluator {
        WrapperEvaluator {
            k: self.wrapper_k,
            folds: self.wrapper_folds,
            seed: seed::derive(self.seed, 2),
        }
    }

    pub fn forest_seed(&self) -> u64 {
        seed::derive(self.seed, 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::Config("bins must be at least 2".into()));
        }
        if !(self.mifs_beta >= 0.0) {
            return Err(Error::Config("MIFS beta must be non-negative".into()));
        }
        if self.forest.trees == 0 {
            return Err(Error::Config("forest needs at least one tree".into()));
        }
        if self.wrapper_k == 0 || self.wrapper_folds < 2 {
            return Err(Error::Config("wrapper needs k >= 1 and folds >= 2".into()));
        }
        Ok(())
    }
}

/// Run all eight base rankers in positional-table column order.
pub fn rank_all(d: &Dataset, cfg: &RankConfig) -> Result<Vec<Ranking>> {
    cfg.validate()?;
    if d.missing_row_count() > 0 {
        return Err(Error::contract("dataset still has missing cells; drop them first"));
    }
    let view = d.discretize(cfg.bins);
    let labels = d.labels();
    MethodId::BASE
        .par_iter()
        .map(|&m| match m {
            MethodId::RandomForest => rank_random_forest(d, &cfg.forest, cfg.forest_seed()),
            MethodId::Sfs => rank_sfs(d, &cfg.wrapper()),
            MethodId::Sbs => rank_sbs(d, &cfg.wrapper()),
            MethodId::Mifs => rank_mifs(&view, labels, cfg.mifs_beta),
            MethodId::ChiSquared => rank_chi2(&view, labels),
            MethodId::Fscore => rank_fscore(d),
            MethodId::Jmi => rank_jmi(&view, labels),
            MethodId::Nmi => rank_nmi(&view, labels),
            MethodId::MiRank | MethodId::Ensemble => unreachable!("not a base ranker"),
        })
        .collect()
}
