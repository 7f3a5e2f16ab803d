//! Dense real matrices and the handful of factorizations the rest of the
//! crate needs: partial-pivoted LU with log-determinant bookkeeping,
//! one-sided Jacobi singular values and Householder least squares.

use std::fmt;
use std::io::{Read, Write};
use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Relative pivot threshold: a pivot smaller than `PIVOT_TOL * max|A|` marks
/// the matrix as singular.
pub const PIVOT_TOL: f64 = 1e-12;

/// Sweep tolerance of the Jacobi singular value iteration.
pub const JACOBI_TOL: f64 = 1e-12;

/// Sweep cap of the Jacobi singular value iteration.
pub const JACOBI_MAX_SWEEPS: usize = 60;

/// Row-major dense matrix of finite reals.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from `f(i, j)`. Non-finite values are a caller bug.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self { rows, cols, data }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Copies `self(rows, cols)`; indices must be in range.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let lhs = self.row(i);
            let dst = out.row_mut(i);
            for (k, &a) in lhs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by a vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Partial-pivoted LU factors `P A = L U` with `L` unit lower triangular,
/// packed into one matrix.
///
/// A singular input still yields factors: `det_sign` is 0 and
/// `log_abs_det` is `-inf`, so callers can treat it as zero volume. Solving
/// with such factors fails with [`Error::SingularMatrix`].
#[derive(Debug, Clone)]
pub struct LuFactors {
    packed: DenseMatrix,
    perm: Vec<usize>,
    det_sign: i8,
    log_abs_det: f64,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.packed.rows
    }

    /// Row permutation: row `k` of `P A` is row `perm[k]` of `A`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn packed(&self) -> &DenseMatrix {
        &self.packed
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    /// Natural log of `|det A|`; `-inf` when singular.
    pub fn log_abs_det(&self) -> f64 {
        self.log_abs_det
    }

    pub fn is_singular(&self) -> bool {
        self.det_sign == 0
    }

    pub fn determinant(&self) -> f64 {
        if self.is_singular() {
            0.0
        } else {
            f64::from(self.det_sign) * self.log_abs_det.exp()
        }
    }

    fn check(&self, rows: usize) -> Result<()> {
        if self.is_singular() {
            return Err(Error::SingularMatrix);
        }
        if rows != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {rows} rows, factors are {0}x{0}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.check(b.rows)?;
        let n = self.dim();
        let lu = &self.packed;
        let mut x = b.select_rows(&self.perm);
        for i in 0..n {
            for k in 0..i {
                let l = lu[(i, k)];
                if l != 0.0 {
                    let (head, tail) = x.data.split_at_mut(i * x.cols);
                    let src = &head[k * x.cols..(k + 1) * x.cols];
                    for (d, s) in tail[..x.cols].iter_mut().zip(src) {
                        *d -= l * s;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = lu[(i, k)];
                if u != 0.0 {
                    let (head, tail) = x.data.split_at_mut(k * x.cols);
                    let dst = &mut head[i * x.cols..(i + 1) * x.cols];
                    for (d, s) in dst.iter_mut().zip(&tail[..x.cols]) {
                        *d -= u * s;
                    }
                }
            }
            let pivot = lu[(i, i)];
            for v in x.row_mut(i) {
                *v /= pivot;
            }
        }
        Ok(x)
    }

    /// Solves `Aᵀ X = B`.
    pub fn solve_transposed(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        self.check(b.rows)?;
        let n = self.dim();
        let lu = &self.packed;
        let cols = b.cols;
        // Aᵀ = Uᵀ Lᵀ P
        let mut w = b.clone();
        for i in 0..n {
            let pivot = lu[(i, i)];
            for v in w.row_mut(i) {
                *v /= pivot;
            }
            for j in i + 1..n {
                let u = lu[(i, j)];
                if u != 0.0 {
                    let (head, tail) = w.data.split_at_mut(j * cols);
                    let src = &head[i * cols..(i + 1) * cols];
                    for (d, s) in tail[..cols].iter_mut().zip(src) {
                        *d -= u * s;
                    }
                }
            }
        }
        for i in (0..n).rev() {
            for j in 0..i {
                let l = lu[(i, j)];
                if l != 0.0 {
                    let (head, tail) = w.data.split_at_mut(i * cols);
                    let src = &tail[..cols];
                    for (d, s) in head[j * cols..(j + 1) * cols].iter_mut().zip(src) {
                        *d -= l * s;
                    }
                }
            }
        }
        let mut x = DenseMatrix::zeros(n, cols);
        for (k, &p) in self.perm.iter().enumerate() {
            x.row_mut(p).copy_from_slice(w.row(k));
        }
        Ok(x)
    }

    /// Solves `X A = B`.
    pub fn right_solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.cols != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "left-hand side has {} columns, factors are {1}x{1}",
                b.cols,
                self.dim()
            )));
        }
        Ok(self.solve_transposed(&b.transpose())?.transpose())
    }
}

/// Partial-pivoted LU factorization of a square matrix.
///
/// Only a non-square input is an error; singularity is reported through
/// [`LuFactors::det_sign`].
pub fn lu_factor(a: &DenseMatrix) -> Result<LuFactors> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "LU needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let tol = PIVOT_TOL * a.max_abs();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1i8;
    let mut log_abs_det = 0.0;

    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].abs();
        for i in k + 1..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= tol {
            return Ok(LuFactors {
                packed: lu,
                perm,
                det_sign: 0,
                log_abs_det: f64::NEG_INFINITY,
            });
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        if pivot < 0.0 {
            sign = -sign;
        }
        log_abs_det += pivot.abs().ln();
        for i in k + 1..n {
            let l = lu[(i, k)] / pivot;
            lu[(i, k)] = l;
            if l != 0.0 {
                let (head, tail) = lu.data.split_at_mut(i * n);
                let src = &head[k * n + k + 1..(k + 1) * n];
                for (d, s) in tail[k + 1..n].iter_mut().zip(src) {
                    *d -= l * s;
                }
            }
        }
    }

    Ok(LuFactors {
        packed: lu,
        perm,
        det_sign: sign,
        log_abs_det,
    })
}

/// Singular values in descending order, `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi applied to the columns of `A` or `Aᵀ`,
/// whichever is tall.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let (values, converged) = jacobi_singular_values(a);
    match converged {
        Ok(()) => Ok(values),
        Err(off_diagonal) => Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_diagonal,
        }),
    }
}

/// Returns the singular value estimates together with `Err(residual)` when
/// the sweep cap was hit.
fn jacobi_singular_values(a: &DenseMatrix) -> (Vec<f64>, std::result::Result<(), f64>) {
    // columns of the tall orientation
    let mut cols: Vec<Vec<f64>> = if a.rows >= a.cols {
        (0..a.cols).map(|j| a.column(j)).collect()
    } else {
        (0..a.rows).map(|i| a.row(i).to_vec()).collect()
    };
    let q = cols.len();
    let mut norms: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
    let mut status = Ok(());

    for sweep in 0..=JACOBI_MAX_SWEEPS {
        let mut off: f64 = 0.0;
        let mut rotated = false;
        for i in 0..q {
            for j in i + 1..q {
                let alpha = norms[i];
                let beta = norms[j];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&cols[i], &cols[j]);
                let rel = gamma.abs() / (alpha * beta).sqrt();
                if rel <= JACOBI_TOL {
                    continue;
                }
                off = off.max(rel);
                if sweep == JACOBI_MAX_SWEEPS {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
                norms[i] = dot(&cols[i], &cols[i]);
                norms[j] = dot(&cols[j], &cols[j]);
            }
        }
        if sweep == JACOBI_MAX_SWEEPS && off > 0.0 {
            status = Err(off);
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = norms.iter().map(|n| n.sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    (values, status)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Largest entry modulus.
    Chebyshev,
    Frobenius,
    /// Largest singular value.
    Spectral,
}

pub fn norm(a: &DenseMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::Chebyshev => a.max_abs(),
        NormKind::Frobenius => dot(&a.data, &a.data).sqrt(),
        NormKind::Spectral => jacobi_singular_values(a).0.first().copied().unwrap_or(0.0),
    }
}

/// Least-squares solution of `A x ≈ b` for a tall, full-column-rank `A`
/// via Householder QR.
pub fn least_squares(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {m} rows",
            b.len()
        )));
    }
    if m < n {
        return Err(Error::RankDeficient(n));
    }
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut rhs = b.to_vec();
    let mut diag = vec![0.0; n];

    for k in 0..n {
        let x = &cols[k][k..];
        let alpha = dot(x, x).sqrt();
        if alpha == 0.0 {
            return Err(Error::RankDeficient(n));
        }
        let r_kk = if x[0] > 0.0 { -alpha } else { alpha };
        let mut v = x.to_vec();
        v[0] -= r_kk;
        let vnorm2 = dot(&v, &v);
        diag[k] = r_kk;
        let reflect = |target: &mut [f64]| {
            let f = 2.0 * dot(&v, target) / vnorm2;
            for (t, vi) in target.iter_mut().zip(&v) {
                *t -= f * vi;
            }
        };
        for col in cols.iter_mut().skip(k + 1) {
            reflect(&mut col[k..]);
        }
        reflect(&mut rhs[k..]);
    }

    let scale = diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    if diag.iter().any(|d| d.abs() <= PIVOT_TOL * scale) {
        return Err(Error::RankDeficient(n));
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            acc -= cols[j][i] * xj;
        }
        x[i] = acc / diag[i];
    }
    Ok(x)
}

/// Reads a headerless comma-separated matrix, one row per line.
pub fn read_csv<R: Read>(reader: R) -> Result<DenseMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field.parse::<f64>().map_err(|_| {
                    Error::InvalidMatrix(format!("cannot parse '{field}' at ({i}, {j})"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows)
}

pub fn write_csv<W: Write>(writer: W, m: &DenseMatrix) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    for i in 0..m.rows {
        wtr.write_record(m.row(i).iter().map(|v| v.to_string()))?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}
