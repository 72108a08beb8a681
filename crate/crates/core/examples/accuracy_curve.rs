//! Cross-validated accuracy as features are added in ensemble order; writes
//! `curve.csv` to the working directory.
//!
//! ```bash
//! cargo run --release --example accuracy_curve -- svm
//! ```

use featrec::ensemble::{ensemble_rank, MiOrdering, PositionalTable};
use featrec::eval::{accuracy_curve, stratified_folds};
use featrec::infotheory::mi_class_rank;
use featrec::models::ClassifierSpec;
use featrec::rankers::{rank_all, RankConfig};
use featrec::synthetic::{planted, PlantedConfig};

fn main() -> featrec::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "svm".into());
    let spec = ClassifierSpec::from_name(&name)?;
    let d = planted(&PlantedConfig { n_features: 12, ..PlantedConfig::default() })?;
    let cfg = RankConfig::default();

    let table = PositionalTable::from_rankings(&rank_all(&d, &cfg)?)?;
    let mi = MiOrdering::from_ranking(&mi_class_rank(&d.discretize(cfg.bins), d.labels(), cfg.mi_mode)?);
    let ranking = ensemble_rank(&table, &mi)?.ranking;

    let plan = stratified_folds(d.labels(), 10, 0)?;
    let curve = accuracy_curve(&d, &ranking, &spec, &plan, 0)?;
    for p in &curve.points {
        let bar = "#".repeat((p.mean_accuracy * 50.0).round() as usize);
        println!("k={:>2} feature {:>2}  {:.3} ±{:.3} {bar}", p.k, ranking.order[p.k - 1], p.mean_accuracy, p.std_accuracy);
    }
    println!("best k: {:?}", curve.best_k());
    curve.write_csv("curve.csv")?;
    println!("wrote curve.csv");
    Ok(())
}
