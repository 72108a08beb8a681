//! Grid search over the SVM box constraint and RBF width with 10-fold CV.
//!
//! ```bash
//! cargo run --release --example grid_search
//! ```

use featrec::eval::{grid_search, stratified_folds};
use featrec::models::{ClassifierSpec, SvmParams};
use featrec::synthetic::{planted, PlantedConfig};

fn main() -> featrec::Result<()> {
    let d = planted(&PlantedConfig::default())?;
    let mut grid = Vec::new();
    for cbox in [0.1, 1.0, 10.0] {
        for gamma in [0.01, 0.1, 1.0, 10.0] {
            grid.push(ClassifierSpec::Svm(SvmParams {
                cbox,
                gamma: Some(gamma),
                ..SvmParams::default()
            }));
        }
    }
    let plan = stratified_folds(d.labels(), 10, 0)?;
    let result = grid_search(&d, &[0, 1, 2, 3], &grid, &plan, 0)?;
    for e in &result.leaderboard {
        let ClassifierSpec::Svm(p) = &e.spec else { unreachable!() };
        let acc = e.mean_accuracy.map_or("failed".into(), |a| format!("{a:.4}"));
        let mark = if e.index == result.best_index { "  <- best" } else { "" };
        println!("C={:<5} gamma={:<5} {acc}{mark}", p.cbox, p.gamma.unwrap());
    }
    println!("pooled accuracy of best: {:.4}", result.report.pooled_accuracy);
    Ok(())
}
