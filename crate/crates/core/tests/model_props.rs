use featrec::models::knn::knn_predict;
use featrec::models::mlp::softmax;
use featrec::models::svm::{kernel_matrix, smo_solve, svm_train, SvmParams};
use featrec::models::{mlp_train, ClassifierSpec, MlpParams};
use proptest::prelude::*;

mod common;

#[test]
fn analytic_gradient_matches_finite_differences() {
    for seed in 0..20 {
        let e = common::gradient_check_error(seed);
        assert!(e <= 1e-4, "seed {seed}: relative error {e:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn smo_respects_box_kkt_and_ascent(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0, any::<bool>()), 4..40),
        c in 0.1f64..10.0,
        gamma in 0.1f64..2.0,
    ) {
        let rows: Vec<Vec<f64>> = pts.iter().map(|&(a, b, _)| vec![a, b]).collect();
        let mut y: Vec<f64> = pts.iter().map(|&(_, _, s)| if s { 1.0 } else { -1.0 }).collect();
        y[0] = 1.0;
        y[1] = -1.0;
        let k = kernel_matrix(&rows, gamma);
        let sol = smo_solve(&k, &y, c, 1e-3, 100_000);
        prop_assert!(sol.converged);
        prop_assert!(sol.alpha.iter().all(|&a| (0.0..=c).contains(&a)));
        let eq: f64 = sol.alpha.iter().zip(&y).map(|(a, y)| a * y).sum();
        prop_assert!(eq.abs() < 1e-9);
        prop_assert!(common::kkt_violation(&k, &y, &sol.alpha, c) <= 1e-3 + 1e-9);
        prop_assert!(sol.dual_trace.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn softmax_sums_to_one(logits in prop::collection::vec(-700.0f64..700.0, 1..10)) {
        let p = softmax(&logits);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(p.iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn one_nn_fits_distinct_training_points(
        pts in prop::collection::btree_set((-50i32..50, -50i32..50), 2..40),
        labels in prop::collection::vec(0usize..3, 40),
    ) {
        let rows: Vec<Vec<f64>> = pts.iter().map(|&(a, b)| vec![a as f64, b as f64]).collect();
        let labels = &labels[..rows.len()];
        prop_assert_eq!(knn_predict(&rows, labels, 1, &rows).unwrap(), labels.to_vec());
    }
}

#[test]
fn fixed_seed_gives_identical_models() {
    let (rows, labels) = common::separable_blobs(20, 4);
    let p = MlpParams::default();
    let a = mlp_train(&rows, &labels, 2, &p).unwrap();
    let b = mlp_train(&rows, &labels, 2, &p).unwrap();
    assert_eq!(a, b);
    for spec in [ClassifierSpec::from_name("svm").unwrap(), ClassifierSpec::from_name("nn").unwrap()] {
        let m1 = spec.fit(&rows, &labels, 2, 9).unwrap();
        let m2 = spec.fit(&rows, &labels, 2, 9).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.predict(&rows).unwrap(), m2.predict(&rows).unwrap());
    }
}

#[test]
fn duplicated_training_rows_keep_the_decision_function() {
    // with every α strictly inside the box, doubling the data halves each α
    // and leaves Σ αᵢ yᵢ K(xᵢ, ·) and the bias unchanged
    let (rows, labels) = common::separable_blobs(15, 2);
    let params = SvmParams { cbox: 1e6, gamma: Some(0.5), tol: 1e-6, ..SvmParams::default() };
    let once = svm_train(&rows, &labels, 2, &params).unwrap();
    let rows2: Vec<Vec<f64>> = rows.iter().chain(&rows).cloned().collect();
    let labels2: Vec<usize> = labels.iter().chain(&labels).copied().collect();
    let twice = svm_train(&rows2, &labels2, 2, &params).unwrap();
    for i in -8..=8 {
        for j in -8..=8 {
            let x = [i as f64 * 0.75, j as f64 * 0.75];
            let (a, b) = (once.decision_values(&x), twice.decision_values(&x));
            for k in 0..2 {
                assert!((a[k] - b[k]).abs() < 1e-3, "probe {x:?}: {} vs {}", a[k], b[k]);
            }
        }
    }
}
