//! Replay the bundled 29-feature ccRCC ranking table through the ensemble and
//! show which rule settled each row.
//!
//! ```bash
//! cargo run --example replay_fixture
//! ```

use featrec::ensemble::{ensemble_rank, recommend_top};
use featrec::fixtures;

fn main() -> featrec::Result<()> {
    let table = fixtures::table2();
    let mi = fixtures::table3_mi();
    let out = ensemble_rank(&table, &mi)?;

    println!("row  methods                         pick  rule");
    for d in &out.rows {
        let cells: Vec<String> = table.row(d.row - 1).iter().map(|f| format!("{f:>2}")).collect();
        let pick = d.selected.map_or("-".to_string(), |f| f.to_string());
        let rule = d.rule.map_or("skipped".to_string(), |r| format!("{r:?}").to_lowercase());
        println!("{:>3}  {}  {:>4}  {}", d.row, cells.join(" "), pick, rule);
    }
    println!("\nensemble order: {:?}", out.ranking.order);
    println!("skipped rows:   {:?}", out.skipped_rows);
    println!("matches bundled output: {}", out.ranking.order == fixtures::table3_proposed());

    let schema = fixtures::ccrcc_schema();
    let top = recommend_top(&out.ranking, 4)?;
    let names: Vec<&str> = top.iter().map(|&f| schema[f].name.as_str()).collect();
    println!("top 4: {top:?} = {names:?}");
    Ok(())
}
