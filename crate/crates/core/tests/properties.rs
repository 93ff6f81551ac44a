use gdfv::bench;
use gdfv::hmm::{self, GdfvTreeDecoder};
use gdfv::maxplus::{multiply_trivial, MaxPlusMatrix, TableMultiplier, TreeMultiplier};
use gdfv::ExtendedValue;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Small integers (and −∞) keep every sum exact, so ties are real ties.
fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![4 => (-3i32..4).prop_map(f64::from), 1 => Just(f64::NEG_INFINITY)]
}

fn instance() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<f64>, usize)> {
    (1usize..10, 1usize..10).prop_flat_map(|(rows, cols)| {
        (
            Just(rows),
            Just(cols),
            prop::collection::vec(entry(), rows * cols),
            prop::collection::vec(entry(), cols),
            1..=cols,
        )
    })
}

proptest! {
    #[test]
    fn spliced_equals_trivial((rows, cols, a, b, t) in instance()) {
        let a = MaxPlusMatrix::from_f64(rows, cols, &a).unwrap();
        let b: Vec<ExtendedValue> = b.into_iter().map(|x| ExtendedValue::new(x).unwrap()).collect();
        let want = multiply_trivial(&a, &b).unwrap();
        let (tree, stats) = TreeMultiplier::new(&a, t).unwrap().multiply(&b).unwrap();
        prop_assert_eq!(&tree, &want);
        prop_assert_eq!(stats.reported_rows as usize, rows * cols.div_ceil(t));
        if t <= 3 {
            let (table, _) = TableMultiplier::new(&a, t).unwrap().multiply(&b).unwrap();
            prop_assert_eq!(&table, &want);
        }
    }

    #[test]
    fn gdfv_matches_viterbi(seed in any::<u64>(), n in 1usize..12, k in 1usize..4, m in 1usize..30, t in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = bench::random_model(&mut rng, n, k).unwrap();
        let obs = bench::random_observations(&mut rng, &model, m);
        let (base, _) = hmm::viterbi_baseline(&model, &obs).unwrap();
        let (got, _) = GdfvTreeDecoder::with_width(&model, t.min(n), u64::MAX).unwrap().decode(&obs).unwrap();
        let (x, y) = (base.log_joint_prob.to_f64(), got.log_joint_prob.to_f64());
        prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        let lp = hmm::joint_log_prob(&model, &got.path, &obs).unwrap().to_f64();
        prop_assert!((lp - y).abs() <= 1e-9 * y.abs().max(1.0));
    }
}
