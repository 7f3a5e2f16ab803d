mod common;

use common::{block, cofactor_det};
use crossmax::cross::{build_cross, residual_entry_det_ratio};
use crossmax::densemat::{lu_factor, singular_values, DenseMatrix};
use crossmax::maxvol::{
    brute_force_maxvol, dominance_check, find_dominant, maxvol_rows, initial_submatrix, IndexPair, MaxvolConfig,
    SweepMode,
};
use proptest::prelude::*;

fn matrix(rows: std::ops::RangeInclusive<usize>, cols: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DenseMatrix> {
    (rows, cols).prop_flat_map(|(n, m)| {
        prop::collection::vec(-1.0f64..1.0, n * m).prop_map(move |d| DenseMatrix::new(n, m, d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lu_determinant_matches_cofactors(a in matrix(1..=6, 1..=6).prop_filter("square", |a| a.is_square())) {
        let rows: Vec<Vec<f64>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        let expect = cofactor_det(&rows);
        let got = lu_factor(&a).unwrap().determinant();
        prop_assert!((got - expect).abs() <= 1e-10 * (1.0 + expect.abs()));
    }

    #[test]
    fn residual_is_a_determinant_ratio(a in matrix(3..=7, 3..=7), r in 1usize..=2) {
        let pair = IndexPair::new((0..r).collect(), (0..r).collect()).unwrap();
        let core = cofactor_det(&block(&a, pair.rows(), pair.cols()));
        prop_assume!(core.abs() > 1e-3);
        let approx = build_cross(&a, &pair).unwrap().reconstruct();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let direct = a[(i, j)] - approx[(i, j)];
                let ratio = residual_entry_det_ratio(&a, &pair, i, j).unwrap();
                prop_assert!((direct - ratio).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn maxvol_rows_trace_increases_and_ends_dominant(a in matrix(6..=30, 1..=5), h in 1usize..=4) {
        let r = a.cols();
        prop_assume!(a.rows() >= r);
        let cfg = MaxvolConfig::default().with_mode(SweepMode::RowsOnly).with_h(h);
        let Ok(start) = initial_submatrix(&a, r, cfg.init) else { return Ok(()) };
        let rep = maxvol_rows(&a, start.rows(), &cfg).unwrap();
        prop_assert!(rep.log_vol_trace.windows(2).all(|w| w[1] > w[0]));
        if rep.converged {
            prop_assert!(dominance_check(&a, &rep.indices, cfg.epsilon).unwrap().is_dominant);
        }
    }

    #[test]
    fn maxvol_never_beats_brute_force(a in matrix(4..=6, 4..=6), r in 1usize..=3) {
        let Ok(rep) = find_dominant(&a, r, &MaxvolConfig::default().with_h(2)) else { return Ok(()) };
        let (_, best) = brute_force_maxvol(&a, r).unwrap();
        prop_assert!(rep.final_log_volume() <= best + 1e-9);
    }

    #[test]
    fn singular_values_descend_and_match_frobenius(a in matrix(1..=7, 1..=7)) {
        let s = singular_values(&a).unwrap();
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
        let fro: f64 = a.data().iter().map(|v| v * v).sum();
        let ss: f64 = s.iter().map(|v| v * v).sum();
        prop_assert!((fro - ss).abs() <= 1e-10 * (1.0 + fro));
    }
}
