#![allow(dead_code)]

use crossmax::densemat::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
}

/// Laplace expansion along the first row, written against plain vectors so
/// it shares no code with the LU path.
pub fn cofactor_det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    if n == 1 {
        return rows[0][0];
    }
    let mut total = 0.0;
    for c in 0..n {
        let minor: Vec<Vec<f64>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
            .collect();
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * rows[0][c] * cofactor_det(&minor);
    }
    total
}

pub fn block(a: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Vec<Vec<f64>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a[(i, j)]).collect()).collect()
}

/// Random strictly increasing subset of `0..n` of size `k`.
pub fn subset(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut v = rand::seq::index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}
