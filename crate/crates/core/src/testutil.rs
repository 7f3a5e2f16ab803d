//! Independent oracles shared by the unit tests.

use crate::densemat::DenseMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &DenseMatrix) -> f64 {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    laplace(&rows)
}

fn laplace(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    match n {
        0 => 1.0,
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        _ => {
            let mut total = 0.0;
            for col in 0..n {
                let entry = rows[0][col];
                if entry == 0.0 {
                    continue;
                }
                let minor: Vec<Vec<f64>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * entry * laplace(&minor);
            }
            total
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
}
