//! Full pipeline on a ccRCC clinical export laid out as the bundled 29-column
//! schema: rank, aggregate, then report 10-fold CV accuracy of the top 4
//! features with both the NN and the SVM.
//!
//! ```bash
//! cargo run --release --example ccrcc_reproduction -- path/to/ccrcc.csv stage
//! ```
//!
//! The CSV needs a header row; the 29 feature columns must appear in schema
//! order and the label column may sit anywhere. Rows with missing cells are
//! dropped. Artifacts are written to `ccrcc_runs/`.

use std::fs;
use std::path::{Path, PathBuf};

use featrec::data::format_schema;
use featrec::fixtures;
use featrec::pipeline::{self, EnsembleSource, EvaluateOverrides, PipelineConfig};

fn main() -> featrec::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(input) = args.next() else {
        eprintln!("usage: ccrcc_reproduction <data.csv> [label-column]");
        std::process::exit(2);
    };
    let label = args.next().unwrap_or_else(|| "stage".into());
    let out = Path::new("ccrcc_runs");
    fs::create_dir_all(out).map_err(|e| featrec::Error::Io { path: out.into(), source: e })?;
    let schema_path = out.join("ccrcc.schema");
    fs::write(&schema_path, format_schema(&fixtures::ccrcc_schema()))
        .map_err(|e| featrec::Error::Io { path: schema_path.clone(), source: e })?;

    let cfg = PipelineConfig {
        input: Some(PathBuf::from(&input)),
        label_column: Some(label),
        schema: Some(schema_path),
        ..PipelineConfig::default()
    };
    let ranked = pipeline::run_rank(&cfg, out)?;
    println!(
        "{} rows ({} dropped for missing cells), {} classes",
        ranked.dataset.n_rows, ranked.dataset.dropped_rows, ranked.dataset.class_count
    );
    let ens = pipeline::run_ensemble(&EnsembleSource::Rankings(out.join(pipeline::RANKINGS_FILE)), Some(out))?;
    println!("ensemble order: {:?}", ens.order);

    for classifier in ["svm", "nn"] {
        let dir = out.join(classifier);
        let report = pipeline::run_evaluate(
            out,
            &dir,
            &EvaluateOverrides {
                classifier: Some(classifier.into()),
                top_k: Some(4),
                ..EvaluateOverrides::default()
            },
        )?;
        let t = report.top_k.expect("top_k requested");
        println!(
            "{classifier}: top-4 {:?} mean {:.4} pooled {:.4}",
            t.feature_names, t.mean_accuracy, t.pooled_accuracy
        );
    }
    Ok(())
}
