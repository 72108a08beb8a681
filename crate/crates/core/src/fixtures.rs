//! Bundled ranking tables from the 29-feature ccRCC study and its column schema.
//!
//! `table2.csv` holds the eight base rankings column by column, `table3_mi.csv`
//! the class-weighted MI ordering and `table3_proposed.csv` the published
//! ensemble output. Feature numbers are 0-based, matching `ccrcc.schema`.

use crate::data::{parse_schema, ColumnSpec};
use crate::ensemble::{MiOrdering, PositionalTable};
use crate::error::{Error, Result};
use crate::rankers::MethodId;

pub const TABLE2_CSV: &str = include_str!("../fixtures/table2.csv");
pub const TABLE3_MI_CSV: &str = include_str!("../fixtures/table3_mi.csv");
pub const TABLE3_PROPOSED_CSV: &str = include_str!("../fixtures/table3_proposed.csv");
pub const CCRCC_SCHEMA: &str = include_str!("../fixtures/ccrcc.schema");

/// Parse a grid CSV whose header names one method per column.
pub fn parse_grid(text: &str) -> Result<PositionalTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| Error::Parse {
        row: 1,
        message: e.to_string(),
    })?;
    let methods = header
        .iter()
        .map(|h| {
            h.parse::<MethodId>()
                .map_err(|_| Error::Schema(format!("unknown method column {h:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row: line,
            message: e.to_string(),
        })?;
        let row = rec
            .iter()
            .map(|c| {
                c.parse::<usize>().map_err(|_| Error::Parse {
                    row: line,
                    message: format!("{c:?} is not a feature index"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    PositionalTable::from_rows(rows, methods)
}

/// Parse `rank,feature` lines into an ordering (ranks must run 1..=n).
pub fn parse_order(text: &str) -> Result<Vec<usize>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut order = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row: line,
            message: e.to_string(),
        })?;
        let field = |k: usize| -> Result<usize> {
            rec.get(k)
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::Parse {
                    row: line,
                    message: "expected rank,feature".into(),
                })
        };
        if field(0)? != i + 1 {
            return Err(Error::Parse {
                row: line,
                message: format!("rank {} out of sequence", field(0)?),
            });
        }
        order.push(field(1)?);
    }
    Ok(order)
}

pub fn table2() -> PositionalTable {
    parse_grid(TABLE2_CSV).expect("bundled table2 is valid")
}

pub fn table3_mi() -> MiOrdering {
    MiOrdering::new(parse_order(TABLE3_MI_CSV).expect("bundled MI order parses"))
        .expect("bundled MI order is a permutation")
}

pub fn table3_proposed() -> Vec<usize> {
    parse_order(TABLE3_PROPOSED_CSV).expect("bundled proposed order parses")
}

pub fn ccrcc_schema() -> Vec<ColumnSpec> {
    parse_schema(CCRCC_SCHEMA).expect("bundled schema is valid")
}
