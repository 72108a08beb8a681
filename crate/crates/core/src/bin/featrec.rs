//! Command-line front end: `featrec rank | ensemble | evaluate`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use featrec::pipeline::{self, EnsembleSource, EvaluateOverrides, PipelineConfig};
use featrec::{Error, Result};

#[derive(Parser)]
#[command(name = "featrec", version, about = "Ensemble feature recommendation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the eight base rankers and the MI ordering on a CSV dataset.
    Rank {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        label_column: Option<String>,
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        bins: Option<usize>,
        /// JSON config file; flags given here take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Aggregate rankings into one ensemble ordering.
    Ensemble {
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        rankings: Option<PathBuf>,
        /// Bundled table to replay instead of a rankings file (`table2`).
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate a classifier along the ensemble ordering.
    Evaluate {
        /// Directory holding `ensemble.json` (and `rankings.json`).
        #[arg(long = "in", default_value = ".")]
        in_dir: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        classifier: Option<String>,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        label_column: Option<String>,
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Rank {
            input,
            label_column,
            schema,
            seed,
            bins,
            config,
            out,
        } => {
            let mut cfg = match config {
                Some(p) => PipelineConfig::load(p)?,
                None => PipelineConfig::default(),
            };
            cfg.input = input.or(cfg.input);
            cfg.label_column = label_column.or(cfg.label_column);
            cfg.schema = schema.or(cfg.schema);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.bins = bins.unwrap_or(cfg.bins);
            let a = pipeline::run_rank(&cfg, &out)?;
            println!("mi_rank: {}", join(&a.mi_order));
            for r in &a.rankings {
                println!("{}: {}", r.method, join(&r.order));
            }
            eprintln!("wrote {}", out.join(pipeline::RANKINGS_FILE).display());
        }
        Command::Ensemble {
            rankings,
            fixture,
            out,
        } => {
            let source = match (rankings, fixture) {
                (Some(p), _) => EnsembleSource::Rankings(p),
                (None, Some(f)) => EnsembleSource::Fixture(f),
                (None, None) => return Err(Error::Config("pass --rankings or --fixture".into())),
            };
            let a = pipeline::run_ensemble(&source, out.as_deref())?;
            println!("{}", join(&a.order));
            if let Some(dir) = out {
                eprintln!("wrote {}", dir.join(pipeline::ENSEMBLE_FILE).display());
            }
        }
        Command::Evaluate {
            in_dir,
            out,
            classifier,
            folds,
            top_k,
            seed,
            input,
            label_column,
            schema,
            config,
        } => {
            let o = EvaluateOverrides {
                config_file: config,
                input,
                label_column,
                schema,
                seed,
                classifier,
                folds,
                top_k,
            };
            let r = pipeline::run_evaluate(&in_dir, &out, &o)?;
            for p in &r.curve.points {
                println!("k={:<3} mean={:.4} std={:.4}", p.k, p.mean_accuracy, p.std_accuracy);
            }
            if let Some(t) = &r.top_k {
                println!(
                    "top-{} {:?}: mean={:.4} pooled={:.4}",
                    t.k, t.features, t.mean_accuracy, t.pooled_accuracy
                );
            }
            eprintln!("wrote {}", out.join(pipeline::REPORT_FILE).display());
        }
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("featrec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
