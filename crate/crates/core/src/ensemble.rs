//! Positional-table aggregation of several feature rankings.
//!
//! Row `i` of the table holds the feature each method ranked `i + 1`. Rows are
//! visited top to bottom. Among the row's features that are not yet selected,
//! one whose occurrence count is strictly larger than every other candidate's
//! wins the row; otherwise the candidate ranked highest by the mutual
//! information ordering wins. A row whose features are all selected already
//! yields nothing, and later picks move up so output ranks stay compact.
//! Features never picked are appended last, in mutual-information order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rankers::{is_permutation, MethodId, Ranking};

/// `grid[i][j]` is the feature ranked `i + 1` by method `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionalTable {
    grid: Vec<Vec<usize>>,
    methods: Vec<MethodId>,
}

impl PositionalTable {
    /// Stack rankings as columns. All must be permutations of the same length.
    pub fn from_rankings(rankings: &[Ranking]) -> Result<Self> {
        let Some(first) = rankings.first() else {
            return Err(Error::contract("positional table needs at least one ranking"));
        };
        let nf = first.order.len();
        for (j, r) in rankings.iter().enumerate() {
            if r.order.len() != nf {
                return Err(Error::contract(format!(
                    "ranking {j} ({}) has {} entries, expected {nf}",
                    r.method,
                    r.order.len()
                )));
            }
            if !is_permutation(&r.order) {
                return Err(Error::contract(format!(
                    "ranking {j} ({}) is not a permutation of 0..{nf}",
                    r.method
                )));
            }
        }
        let grid = (0..nf)
            .map(|i| rankings.iter().map(|r| r.order[i]).collect())
            .collect();
        Ok(PositionalTable {
            grid,
            methods: rankings.iter().map(|r| r.method).collect(),
        })
    }

    /// Build from explicit rows; every column must be a permutation.
    pub fn from_rows(rows: Vec<Vec<usize>>, methods: Vec<MethodId>) -> Result<Self> {
        let nt = methods.len();
        if nt == 0 {
            return Err(Error::contract("positional table needs at least one column"));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != nt) {
            return Err(Error::contract(format!(
                "row {} has {} entries, expected {nt}",
                i + 1,
                rows[i].len()
            )));
        }
        let rankings: Vec<Ranking> = methods
            .iter()
            .enumerate()
            .map(|(j, &m)| Ranking {
                method: m,
                order: rows.iter().map(|r| r[j]).collect(),
            })
            .collect();
        Self::from_rankings(&rankings)
    }

    pub fn n_features(&self) -> usize {
        self.grid.len()
    }

    pub fn n_methods(&self) -> usize {
        self.methods.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.grid[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.grid
    }

    pub fn methods(&self) -> &[MethodId] {
        &self.methods
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        self.grid.iter().map(|r| r[j]).collect()
    }
}

/// Features by descending class-weighted MI; the tie-break ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiOrdering {
    order: Vec<usize>,
}

impl MiOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if !is_permutation(&order) {
            return Err(Error::contract("MI ordering is not a permutation"));
        }
        Ok(MiOrdering { order })
    }

    pub fn from_ranking(r: &Ranking) -> Self {
        MiOrdering {
            order: r.order.clone(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &f) in self.order.iter().enumerate() {
            pos[f] = k;
        }
        pos
    }
}

/// Which rule placed a feature at a given output rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    Majority,
    Mi,
    Leftover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDecision {
    /// 1-based table row.
    pub row: usize,
    pub selected: Option<usize>,
    pub rule: Option<TieBreak>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleOutcome {
    pub ranking: Ranking,
    /// 1-based rows whose features were all selected already.
    pub skipped_rows: Vec<usize>,
    /// Rule per output rank, aligned with `ranking.order`.
    pub tie_break_log: Vec<TieBreak>,
    /// One entry per table row, in order.
    pub rows: Vec<RowDecision>,
}

/// Aggregate the table into a single ranking.
pub fn ensemble_rank(t: &PositionalTable, mi: &MiOrdering) -> Result<EnsembleOutcome> {
    let nf = t.n_features();
    if mi.order.len() != nf {
        return Err(Error::contract(format!(
            "MI ordering covers {} features, table has {nf}",
            mi.order.len()
        )));
    }
    let mi_pos = mi.positions();
    let mut in_s = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    let mut log = Vec::with_capacity(nf);
    let mut skipped = Vec::new();
    let mut rows = Vec::with_capacity(nf);

    for (i, row) in t.rows().iter().enumerate() {
        // occurrence counts among not-yet-selected features only
        let mut occ: BTreeMap<usize, usize> = BTreeMap::new();
        for &f in row {
            if !in_s[f] {
                *occ.entry(f).or_default() += 1;
            }
        }
        if occ.is_empty() {
            skipped.push(i + 1);
            rows.push(RowDecision {
                row: i + 1,
                selected: None,
                rule: None,
            });
            continue;
        }
        let max = *occ.values().max().unwrap();
        let leaders: Vec<usize> = occ
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(&f, _)| f)
            .collect();
        let (pick, rule) = if leaders.len() == 1 {
            (leaders[0], TieBreak::Majority)
        } else {
            let best = occ
                .keys()
                .copied()
                .min_by_key(|&f| (mi_pos[f], f))
                .unwrap();
            (best, TieBreak::Mi)
        };
        in_s[pick] = true;
        order.push(pick);
        log.push(rule);
        rows.push(RowDecision {
            row: i + 1,
            selected: Some(pick),
            rule: Some(rule),
        });
    }

    for &f in &mi.order {
        if !in_s[f] {
            in_s[f] = true;
            order.push(f);
            log.push(TieBreak::Leftover);
        }
    }

    Ok(EnsembleOutcome {
        ranking: Ranking::new(MethodId::Ensemble, order)?,
        skipped_rows: skipped,
        tie_break_log: log,
        rows,
    })
}

/// The first `d` features of a ranking, `1 ≤ d ≤ NF`.
pub fn recommend_top(r: &Ranking, d: usize) -> Result<Vec<usize>> {
    if d == 0 || d > r.order.len() {
        return Err(Error::contract(format!(
            "top-d must lie in 1..={}, got {d}",
            r.order.len()
        )));
    }
    Ok(r.order[..d].to_vec())
}
