//! Ensemble feature recommendation for tabular classification data.
//!
//! Eight base rankers (MIFS, JMI, NMI, chi-square, F-score, sequential forward
//! and backward selection, random forest impurity importance) each produce a
//! full ordering of the features. The orderings are stacked into a positional
//! table, and [`ensemble::ensemble_rank`] walks it row by row: a feature that
//! occurs strictly more often than any other unselected feature in the row wins
//! the row, otherwise the unselected candidate with the highest class-weighted
//! mutual information is taken.
//!
//! The [`eval`] module wraps the from-scratch classifiers in [`models`] into a
//! stratified cross-validation harness used to draw accuracy-vs-`k` curves.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --example replay_fixture
//! cargo run --example information_measures
//! cargo run --example base_rankers
//! cargo run --example ensemble_recommend
//! cargo run --example classifiers
//! cargo run --example accuracy_curve
//! cargo run --example grid_search
//! cargo run --example ccrcc_reproduction -- path/to/ccrcc.csv stage
//! ```

pub mod data;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod infotheory;
pub mod models;
pub mod pipeline;
pub mod rankers;
pub mod seed;
pub mod synthetic;

pub use data::{ColumnKind, ColumnSpec, Dataset, DiscretizedView, Standardizer};
pub use ensemble::{ensemble_rank, recommend_top, EnsembleOutcome, MiOrdering, PositionalTable};
pub use error::{Error, Result};
pub use rankers::{MethodId, Ranking};

/// Version tag written into every JSON artifact.
pub const ARTIFACT_VERSION: &str = "1.0";
