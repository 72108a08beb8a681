//! Rank a dataset with all eight methods, aggregate the rankings and
//! recommend the top `d` features.
//!
//! ```bash
//! cargo run --release --example ensemble_recommend -- 4
//! ```

use featrec::ensemble::{ensemble_rank, recommend_top, MiOrdering, PositionalTable};
use featrec::infotheory::mi_class_rank;
use featrec::rankers::{rank_all, RankConfig};
use featrec::synthetic::{planted, PlantedConfig, PLANTED_RELEVANT};

fn main() -> featrec::Result<()> {
    let d_top: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let data = planted(&PlantedConfig::default())?;
    let cfg = RankConfig::default();

    let rankings = rank_all(&data, &cfg)?;
    let table = PositionalTable::from_rankings(&rankings)?;
    let mi = MiOrdering::from_ranking(&mi_class_rank(&data.discretize(cfg.bins), data.labels(), cfg.mi_mode)?);
    let out = ensemble_rank(&table, &mi)?;

    println!("first rows of the positional table:");
    for (i, row) in table.rows().iter().take(6).enumerate() {
        println!("  {:>2}: {:?}", i + 1, row);
    }
    println!("ensemble: {:?}", out.ranking.order);
    println!("rules:    {:?}", out.tie_break_log);
    let top = recommend_top(&out.ranking, d_top)?;
    println!("top {d_top}: {top:?} (planted: {PLANTED_RELEVANT:?})");
    Ok(())
}
