//! Run each of the eight base rankers on a synthetic dataset where features
//! 0..4 carry the class and the rest are noise.
//!
//! ```bash
//! cargo run --release --example base_rankers
//! ```

use featrec::infotheory::{mi_class_rank, MiRankMode};
use featrec::rankers::{rank_all, RankConfig};
use featrec::synthetic::{planted, PlantedConfig};

fn main() -> featrec::Result<()> {
    let d = planted(&PlantedConfig {
        n_rows: 300,
        n_features: 12,
        ..PlantedConfig::default()
    })?;
    let cfg = RankConfig {
        seed: 1,
        ..RankConfig::default()
    };
    for r in rank_all(&d, &cfg)? {
        println!("{:<14} {:?}", r.method.as_str(), r.order);
    }
    let mi = mi_class_rank(&d.discretize(cfg.bins), d.labels(), MiRankMode::OneVsRest)?;
    println!("{:<14} {:?}", "mi_rank", mi.order);
    Ok(())
}
