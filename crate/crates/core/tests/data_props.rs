use featrec::data::{load_csv, parse_csv, LoadOptions, Standardizer};
use featrec::Dataset;
use proptest::prelude::*;

mod common;

fn with_gaps(rows: Vec<Vec<f64>>, holes: &[(usize, usize)]) -> String {
    let nf = rows[0].len();
    let mut s: String = (0..nf).map(|j| format!("f{j},")).collect::<String>() + "class\n";
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            if holes.contains(&(i, j)) {
                s.push_str("NA,");
            } else {
                s.push_str(&format!("{v},"));
            }
        }
        s.push_str(&format!("{}\n", i % 2));
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn drop_missing_is_idempotent(
        rows in prop::collection::vec(prop::collection::vec(-5i32..5, 3), 6..30),
        holes in prop::collection::vec((0usize..6, 0usize..3), 0..4),
    ) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let d = parse_csv(&with_gaps(rows, &holes), &LoadOptions::default()).unwrap();
        match d.drop_missing() {
            Ok(once) => {
                prop_assert_eq!(once.missing_row_count(), 0);
                prop_assert_eq!(once.drop_missing().unwrap(), once);
            }
            Err(e) => prop_assert!(matches!(e, featrec::Error::EmptyDataset | featrec::Error::DegenerateLabels(_)), "{e}"),
        }
    }

    #[test]
    fn codes_preserve_order(d in common::dataset(60, 5), bins in 2usize..12) {
        let view = d.discretize(bins);
        for j in 0..d.n_features() {
            let col = d.column(j);
            let codes = view.column(j);
            for a in 0..col.len() {
                for b in 0..col.len() {
                    if col[a] <= col[b] {
                        prop_assert!(codes[a] <= codes[b]);
                    }
                }
            }
            prop_assert!(codes.iter().all(|&c| (c as usize) < view.cardinalities[j]));
        }
    }

    #[test]
    fn standardized_columns_are_unit(d in common::dataset(80, 6)) {
        let (z, s) = d.standardize();
        for j in 0..d.n_features() {
            let col = z.column(j);
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            if s.stds[j] > 0.0 {
                prop_assert!(mean.abs() < 1e-9 && (var - 1.0).abs() < 1e-9);
            } else {
                prop_assert!(col.iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn csv_round_trip(d in common::dataset(40, 5)) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        d.write_csv(&p).unwrap();
        let back = load_csv(&p, &LoadOptions { label_column: Some(d.label_name().to_string()), schema: None }).unwrap();
        prop_assert_eq!(back.labels(), d.labels());
        for i in 0..d.n_rows() {
            prop_assert_eq!(back.row(i), d.row(i));
        }
    }
}

#[test]
fn training_statistics_ignore_test_rows() {
    let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, (i * i) as f64]).collect();
    let d = Dataset::from_rows(rows.clone(), (0..10).map(|i| i % 2).collect()).unwrap();
    let train: Vec<usize> = (0..7).collect();
    let a = Standardizer::fit_rows(&d, &train, &[0, 1]);
    let mut perturbed = rows;
    for r in perturbed.iter_mut().skip(7) {
        r[0] += 1e6;
        r[1] = -3.0;
    }
    let b = Standardizer::fit_rows(&d.with_values(perturbed).unwrap(), &train, &[0, 1]);
    assert_eq!(a, b);
}
