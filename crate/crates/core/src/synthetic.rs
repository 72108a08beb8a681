//! Seeded synthetic datasets with a known set of relevant features.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed;

/// Four-class data where features 0..4 decide the class and the rest are noise.
///
/// The class is `2·[x0 + x1 > 0] + [x2 + x3 > 0]`; with probability
/// `label_noise` it is replaced by a uniformly drawn class. Draws are
/// rejected until every class holds exactly `n_rows / 4` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub n_rows: usize,
    pub n_features: usize,
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            n_rows: 500,
            n_features: 20,
            label_noise: 0.02,
            seed: 0,
        }
    }
}

pub const PLANTED_RELEVANT: [usize; 4] = [0, 1, 2, 3];

pub fn planted(cfg: &PlantedConfig) -> Result<Dataset> {
    if cfg.n_features < 4 {
        return Err(Error::Config("planted data needs at least 4 features".into()));
    }
    if cfg.n_rows < 4 || cfg.n_rows % 4 != 0 {
        return Err(Error::Config("planted row count must be a positive multiple of 4".into()));
    }
    if !(0.0..=1.0).contains(&cfg.label_noise) {
        return Err(Error::Config("label noise must lie in [0, 1]".into()));
    }
    let quota = cfg.n_rows / 4;
    let mut filled = [0usize; 4];
    let mut rng = seed::rng(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.n_rows);
    let mut labels = Vec::with_capacity(cfg.n_rows);
    while rows.len() < cfg.n_rows {
        let x: Vec<f64> = (0..cfg.n_features)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let mut y = 2 * usize::from(x[0] + x[1] > 0.0) + usize::from(x[2] + x[3] > 0.0);
        if rng.random::<f64>() < cfg.label_noise {
            y = rng.random_range(0..4);
        }
        if filled[y] == quota {
            continue;
        }
        filled[y] += 1;
        rows.push(x);
        labels.push(y);
    }
    Dataset::from_rows(rows, labels)
}
