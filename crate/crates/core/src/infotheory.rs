//! Plug-in entropy and mutual information estimates over integer-coded columns.
//!
//! All quantities are in bits. Probabilities are empirical frequencies
//! `count / n`; cells with zero joint count contribute nothing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::DiscretizedView;
use crate::error::{Error, Result};
use crate::rankers::{argsort_desc, MethodId, Ranking};

/// Mutual information in bits, clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct MiScore(f64);

impl MiScore {
    pub fn bits(self) -> f64 {
        self.0
    }
}

/// Empirical distribution of a code column.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    pub support: Vec<u32>,
    pub mass: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn from_codes(x: &[u32]) -> Self {
        let counts = counts(x);
        let n = x.len() as f64;
        let mut support = Vec::new();
        let mut mass = Vec::new();
        for (code, &c) in counts.iter().enumerate() {
            if c > 0 {
                support.push(code as u32);
                mass.push(c as f64 / n);
            }
        }
        DiscreteDistribution { support, mass }
    }

    pub fn entropy(&self) -> f64 {
        -self
            .mass
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>()
    }
}

fn counts(x: &[u32]) -> Vec<u64> {
    let card = x.iter().max().map_or(0, |&m| m as usize + 1);
    let mut c = vec![0u64; card];
    for &v in x {
        c[v as usize] += 1;
    }
    c
}

fn entropy_from_counts(counts: &[u64], n: u64) -> f64 {
    let n = n as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    h.max(0.0)
}

/// Shannon entropy `H(X)` of a code column.
pub fn entropy(x: &[u32]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    entropy_from_counts(&counts(x), x.len() as u64)
}

// Dense joint tables up to this many cells, hash map above.
const DENSE_LIMIT: usize = 1 << 20;

/// `Σ p(x,y) log2(p(x,y) / (p(x) p(y)))` over the empirical joint.
fn mi_unchecked(x: &[u32], y: &[u32]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let cx = counts(x);
    let cy = counts(y);
    let nf = n as f64;
    let term = |cxy: u64, a: u64, b: u64| -> f64 {
        let c = cxy as f64;
        (c / nf) * (c * nf / (a as f64 * b as f64)).log2()
    };
    let (kx, ky) = (cx.len(), cy.len());
    let mut total = 0.0;
    if kx.saturating_mul(ky) <= DENSE_LIMIT {
        let mut joint = vec![0u64; kx * ky];
        for (&a, &b) in x.iter().zip(y) {
            joint[a as usize * ky + b as usize] += 1;
        }
        for (idx, &c) in joint.iter().enumerate() {
            if c > 0 {
                total += term(c, cx[idx / ky], cy[idx % ky]);
            }
        }
    } else {
        let mut joint: HashMap<(u32, u32), u64> = HashMap::new();
        for (&a, &b) in x.iter().zip(y) {
            *joint.entry((a, b)).or_default() += 1;
        }
        let mut cells: Vec<_> = joint.into_iter().collect();
        cells.sort_unstable();
        for ((a, b), c) in cells {
            total += term(c, cx[a as usize], cy[b as usize]);
        }
    }
    total.max(0.0)
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::contract(format!(
            "columns have different lengths ({a} vs {b})"
        )));
    }
    Ok(())
}

/// Mutual information `I(X;Y)` between two code columns.
pub fn mutual_information(x: &[u32], y: &[u32]) -> Result<MiScore> {
    check_lengths(x.len(), y.len())?;
    Ok(MiScore(mi_unchecked(x, y)))
}

/// Pair-code two columns into one: `(a, b) -> a * card(b) + b`.
pub fn pair_codes(f: &[u32], s: &[u32]) -> Vec<u32> {
    let ks = s.iter().max().map_or(1, |&m| m + 1);
    f.iter().zip(s).map(|(&a, &b)| a * ks + b).collect()
}

/// `I((F,S); C)`: information the pair of columns carries about `c`.
pub fn joint_mutual_information(f: &[u32], s: &[u32], c: &[u32]) -> Result<f64> {
    check_lengths(f.len(), s.len())?;
    check_lengths(f.len(), c.len())?;
    Ok(mi_unchecked(&pair_codes(f, s), c))
}

/// Symmetric uncertainty `2 I(X;Y) / (H(X) + H(Y))`, 0 when both entropies vanish.
pub fn normalized_mutual_information(x: &[u32], y: &[u32]) -> Result<f64> {
    check_lengths(x.len(), y.len())?;
    let denom = entropy(x) + entropy(y);
    if denom <= 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * mi_unchecked(x, y) / denom).clamp(0.0, 1.0))
}

/// How the per-class term of the class-weighted MI score is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiRankMode {
    /// `I(c_k; f)` is the MI between the indicator `[label == k]` and `f`.
    #[default]
    OneVsRest,
    /// `I(c_k; f)` is the full `I(C; f)`, so the weighted sum collapses to it.
    Plain,
}

/// Class-prior-weighted relevance `Σ_k p(c_k) I(c_k; f)` for one feature.
pub fn mi_rank_score(feature: &[u32], labels: &[u32], mode: MiRankMode) -> Result<f64> {
    check_lengths(feature.len(), labels.len())?;
    let n = labels.len() as f64;
    match mode {
        MiRankMode::Plain => Ok(mi_unchecked(feature, labels)),
        MiRankMode::OneVsRest => {
            let cc = counts(labels);
            let mut score = 0.0;
            for (k, &nk) in cc.iter().enumerate() {
                if nk == 0 {
                    continue;
                }
                let indicator: Vec<u32> = labels.iter().map(|&l| u32::from(l as usize == k)).collect();
                score += (nk as f64 / n) * mi_unchecked(feature, &indicator);
            }
            Ok(score)
        }
    }
}

pub fn labels_as_codes(labels: &[usize]) -> Vec<u32> {
    labels.iter().map(|&l| l as u32).collect()
}

/// Class-weighted MI score of every feature in the view.
pub fn mi_rank_scores(view: &DiscretizedView, labels: &[usize], mode: MiRankMode) -> Result<Vec<f64>> {
    let y = labels_as_codes(labels);
    view.codes
        .iter()
        .map(|col| mi_rank_score(col, &y, mode))
        .collect()
}

/// Features by descending class-weighted MI, ties to the lower index.
pub fn mi_class_rank(view: &DiscretizedView, labels: &[usize], mode: MiRankMode) -> Result<Ranking> {
    let scores = mi_rank_scores(view, labels, mode)?;
    Ranking::new(MethodId::MiRank, argsort_desc(&scores))
}
