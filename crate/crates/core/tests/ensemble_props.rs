use featrec::ensemble::{ensemble_rank, MiOrdering, PositionalTable, TieBreak};
use featrec::fixtures;
use featrec::rankers::{is_permutation, MethodId, Ranking};
use proptest::prelude::*;

mod common;

fn columns(nf: usize, nt: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(common::random_permutation(nf), nt)
}

fn table(cols: &[Vec<usize>]) -> PositionalTable {
    let rs: Vec<Ranking> = cols
        .iter()
        .map(|c| Ranking::new(MethodId::Sfs, c.clone()).unwrap())
        .collect();
    PositionalTable::from_rankings(&rs).unwrap()
}

fn instance() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<usize>)> {
    (1usize..=100, 1usize..=16)
        .prop_flat_map(|(nf, nt)| (columns(nf, nt), common::random_permutation(nf)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn output_is_a_permutation((cols, mi) in instance()) {
        let out = ensemble_rank(&table(&cols), &MiOrdering::new(mi).unwrap()).unwrap();
        prop_assert!(is_permutation(&out.ranking.order));
        prop_assert_eq!(out.tie_break_log.len(), out.ranking.order.len());
        let leftovers = out.tie_break_log.iter().filter(|&&r| r == TieBreak::Leftover).count();
        prop_assert!(leftovers <= out.skipped_rows.len());
    }

    #[test]
    fn method_column_order_is_irrelevant(
        ((cols, mi), shuffle) in instance().prop_flat_map(|(c, m)| { let nt = c.len(); (Just((c, m)), common::random_permutation(nt)) })
    ) {
        let mi = MiOrdering::new(mi).unwrap();
        let moved: Vec<Vec<usize>> = shuffle.iter().map(|&j| cols[j].clone()).collect();
        prop_assert_eq!(
            ensemble_rank(&table(&cols), &mi).unwrap().ranking.order,
            ensemble_rank(&table(&moved), &mi).unwrap().ranking.order
        );
    }

    #[test]
    fn unanimity((col, mi, nt) in (1usize..=60).prop_flat_map(|nf| (common::random_permutation(nf), common::random_permutation(nf), 1usize..=16))) {
        let cols = vec![col.clone(); nt];
        let out = ensemble_rank(&table(&cols), &MiOrdering::new(mi).unwrap()).unwrap();
        prop_assert_eq!(out.ranking.order, col);
    }

    #[test]
    fn unanimous_first_stays_first((cols, mi) in instance(), lead in any::<prop::sample::Index>()) {
        let nf = cols[0].len();
        let f = lead.index(nf);
        let cols: Vec<Vec<usize>> = cols
            .into_iter()
            .map(|mut c| {
                let at = c.iter().position(|&x| x == f).unwrap();
                c.swap(0, at);
                c
            })
            .collect();
        let out = ensemble_rank(&table(&cols), &MiOrdering::new(mi).unwrap()).unwrap();
        prop_assert_eq!(out.ranking.order[0], f);
    }

    #[test]
    fn picks_come_from_early_enough_rows((cols, mi) in instance()) {
        let t = table(&cols);
        let out = ensemble_rank(&t, &MiOrdering::new(mi).unwrap()).unwrap();
        let mut skipped = 0;
        let mut k = 0;
        for d in &out.rows {
            match d.selected {
                None => skipped += 1,
                Some(f) => {
                    k += 1;
                    let bound = k + skipped;
                    prop_assert!(t.rows()[..bound].iter().any(|r| r.contains(&f)));
                }
            }
        }
    }
}

#[test]
fn bundled_table_replays_exactly() {
    let out = ensemble_rank(&fixtures::table2(), &fixtures::table3_mi()).unwrap();
    assert_eq!(
        out.ranking.order,
        vec![7, 9, 22, 0, 27, 1, 17, 14, 25, 8, 5, 15, 18, 19, 21, 13, 24, 12, 3, 23, 10, 20, 16, 11, 4, 28, 6, 2, 26]
    );
    assert_eq!(out.ranking.order, fixtures::table3_proposed());
    assert_eq!(out.skipped_rows, vec![23]);
    assert_eq!(out.ranking.order[28], 26);
    assert_eq!(out.tie_break_log[28], TieBreak::Leftover);
    let majority: Vec<usize> = out
        .rows
        .iter()
        .filter(|d| d.rule == Some(TieBreak::Majority))
        .map(|d| d.row)
        .collect();
    assert_eq!(majority, vec![1, 2, 4, 5, 6, 10, 13, 14, 16, 18, 20, 21, 27, 28, 29]);
}

#[test]
fn malformed_grid_is_rejected() {
    let bad = Ranking { method: MethodId::Jmi, order: vec![0, 2, 2] };
    let good = Ranking::new(MethodId::Nmi, vec![0, 1, 2]).unwrap();
    let e = PositionalTable::from_rankings(&[good, bad]).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}
