//! Bivariate polynomial least squares on `[-1, 1]²`, fitted either on the
//! whole sample grid or only at the maxvol-selected pivotal samples.

use serde::Serialize;

use crate::densemat::{least_squares, lu_factor, singular_values, DenseMatrix};
use crate::maxvol::{dominance_check, initial_submatrix, maxvol_rows, IndexPair, MaxvolConfig, SweepMode};
use crate::cross::{error_bound, BoundInputs, BoundVariant};
use crate::{Error, Result};

/// Total-degree monomials `x^p y^q`, `p + q ≤ d`, in graded-lex order
/// `1, x, y, x², xy, y², …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis2D {
    degree: usize,
    terms: Vec<(u32, u32)>,
}

impl Basis2D {
    pub fn new(degree: usize) -> Self {
        let mut terms = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
        for total in 0..=degree as u32 {
            for q in 0..=total {
                terms.push((total - q, q));
            }
        }
        Self { degree, terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(u32, u32)] {
        &self.terms
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    /// Writes every basis function at `(x, y)` into `out`.
    fn eval_into(&self, x: f64, y: f64, xp: &mut [f64], yp: &mut [f64], out: &mut [f64]) {
        xp[0] = 1.0;
        yp[0] = 1.0;
        for k in 1..=self.degree {
            xp[k] = xp[k - 1] * x;
            yp[k] = yp[k - 1] * y;
        }
        for (o, &(p, q)) in out.iter_mut().zip(&self.terms) {
            *o = xp[p as usize] * yp[q as usize];
        }
    }

    /// `Σ c_i x^{p_i} y^{q_i}`.
    pub fn evaluate(&self, coeffs: &[f64], x: f64, y: f64) -> f64 {
        let mut xp = vec![0.0; self.degree + 1];
        let mut yp = vec![0.0; self.degree + 1];
        let mut phi = vec![0.0; self.size()];
        self.eval_into(x, y, &mut xp, &mut yp, &mut phi);
        phi.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}

/// Samples on `[-1, 1]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    points: Vec<(f64, f64)>,
    /// Points per axis for a tensor grid, `None` for scattered samples.
    per_axis: Option<usize>,
}

impl SampleGrid {
    /// `k × k` tensor grid including the endpoints, `x` varying fastest.
    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidConfig(format!(
                "a uniform grid needs at least 2 points per axis, got {k}"
            )));
        }
        let axis: Vec<f64> = (0..k)
            .map(|i| -1.0 + 2.0 * i as f64 / (k - 1) as f64)
            .collect();
        let points = axis
            .iter()
            .flat_map(|&y| axis.iter().map(move |&x| (x, y)))
            .collect();
        Ok(Self {
            points,
            per_axis: Some(k),
        })
    }

    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("empty sample grid".into()));
        }
        Ok(Self {
            points,
            per_axis: None,
        })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn per_axis(&self) -> Option<usize> {
        self.per_axis
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.points.iter().map(|&(x, y)| f(x, y)).collect()
    }
}

/// Entry `(j, i)` is basis function `i` at sample `j`.
pub fn design_matrix(basis: &Basis2D, grid: &SampleGrid) -> DenseMatrix {
    let m = basis.size();
    let mut data = vec![0.0; grid.len() * m];
    let mut xp = vec![0.0; basis.degree + 1];
    let mut yp = vec![0.0; basis.degree + 1];
    for (row, &(x, y)) in data.chunks_exact_mut(m).zip(&grid.points) {
        basis.eval_into(x, y, &mut xp, &mut yp, row);
    }
    DenseMatrix::new(grid.len(), m, data).expect("finite samples give a finite design matrix")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FitMethod {
    FullGrid,
    Pivotal,
}

/// Terms of the residual bound for a fit through the rows `I`:
/// `‖A x̂ − b‖_∞ ≤ μ ‖ε_I‖₁ + η ‖x_b‖₁ + ‖ε_{Iᶜ}‖_∞`, where `ε = A x_b − b`,
/// `μ` is the largest interpolation modulus and `η` the cross error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualBound {
    pub bound: f64,
    pub lhs: f64,
    pub eps_i_l1: f64,
    pub middle: f64,
    pub eps_ic_inf: f64,
    pub interp_modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FitReport {
    pub coefficients: Vec<f64>,
    pub method: FitMethod,
    /// Sample indices fitted exactly; empty for a full-grid fit.
    pub pivotal_rows: Vec<usize>,
    pub rel_error: Option<f64>,
    pub bound_terms: Option<ResidualBound>,
}

/// Householder least squares over every sample.
pub fn full_fit(a: &DenseMatrix, b: &[f64]) -> Result<FitReport> {
    Ok(FitReport {
        coefficients: least_squares(a, b)?,
        method: FitMethod::FullGrid,
        pivotal_rows: Vec::new(),
        rel_error: None,
        bound_terms: None,
    })
}

/// Maxvol rows of `a` (all columns kept), then the square solve through
/// them.
pub fn pivotal_fit(a: &DenseMatrix, b: &[f64], cfg: &MaxvolConfig) -> Result<FitReport> {
    let (n, m) = a.shape();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n}x{m} design matrix with {} samples",
            b.len()
        )));
    }
    let cfg = cfg.with_mode(SweepMode::RowsOnly);
    let start = initial_submatrix(a, m, cfg.init)?;
    let report = maxvol_rows(a, start.rows(), &cfg)?;
    let rows = report.indices.rows().to_vec();
    let x = solve_through(a, b, &rows, &(0..m).collect::<Vec<_>>())?;
    Ok(FitReport {
        coefficients: x,
        method: FitMethod::Pivotal,
        pivotal_rows: rows,
        rel_error: None,
        bound_terms: None,
    })
}

/// Solves `A(I,J) z = b_I` and scatters `z` into a length-`m` vector.
fn solve_through(a: &DenseMatrix, b: &[f64], rows: &[usize], cols: &[usize]) -> Result<Vec<f64>> {
    let block = a.submatrix(rows, cols);
    let lu = lu_factor(&block)?;
    let rhs = DenseMatrix::new(rows.len(), 1, rows.iter().map(|&i| b[i]).collect())?;
    let z = lu.solve(&rhs)?;
    let mut x = vec![0.0; a.cols()];
    for (&j, &v) in cols.iter().zip(z.data()) {
        x[j] = v;
    }
    Ok(x)
}

/// Discrete `ℓ²` relative error of the fitted polynomial against `f` over
/// `grid`.
pub fn relative_error(f: impl Fn(f64, f64) -> f64, coeffs: &[f64], basis: &Basis2D, grid: &SampleGrid) -> Result<f64> {
    if coeffs.len() != basis.size() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a basis of size {}",
            coeffs.len(),
            basis.size()
        )));
    }
    let mut xp = vec![0.0; basis.degree + 1];
    let mut yp = vec![0.0; basis.degree + 1];
    let mut phi = vec![0.0; basis.size()];
    let (mut num, mut den) = (0.0, 0.0);
    for &(x, y) in &grid.points {
        basis.eval_into(x, y, &mut xp, &mut yp, &mut phi);
        let approx: f64 = phi.iter().zip(coeffs).map(|(a, b)| a * b).sum();
        let exact = f(x, y);
        num += (exact - approx).powi(2);
        den += exact * exact;
    }
    if den == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((num / den).sqrt())
}

/// Residual bound for the fit through `pair`, with `x_b` a least-squares
/// solution of `A x ≈ b` and `r = pair.rank()`.
///
/// When `r` reaches the column count the cross is exact and the middle term
/// is zero.
pub fn residual_bound(a: &DenseMatrix, pair: &IndexPair, x_b: &[f64], b: &[f64], epsilon: f64) -> Result<ResidualBound> {
    let (n, m) = a.shape();
    if x_b.len() != m || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n}x{m} system with x of length {} and b of length {}",
            x_b.len(),
            b.len()
        )));
    }
    let dom = dominance_check(a, pair, epsilon)?;
    if !dom.is_dominant {
        return Err(Error::NotDominant(dom.max_modulus));
    }
    let r = pair.rank();
    let ax = a.mul_vec(x_b)?;
    let eps: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let in_i = |i: &usize| pair.rows().binary_search(i).is_ok();
    let eps_i_l1: f64 = pair.rows().iter().map(|&i| eps[i].abs()).sum();
    let eps_ic_inf = (0..n).filter(|i| !in_i(i)).map(|i| eps[i].abs()).fold(0.0, f64::max);
    let middle = if r >= m.min(n) {
        0.0
    } else {
        let sigma = singular_values(a)?;
        let eta = error_bound(&BoundInputs::new(sigma, r, 1.0)?, BoundVariant::Improved);
        eta * x_b.iter().map(|v| v.abs()).sum::<f64>()
    };
    let interp_modulus = dom.max_modulus.max(1.0);
    let x_hat = solve_through(a, b, pair.rows(), pair.cols())?;
    let lhs = a
        .mul_vec(&x_hat)?
        .iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    Ok(ResidualBound {
        bound: interp_modulus * eps_i_l1 + middle + eps_ic_inf,
        lhs,
        eps_i_l1,
        middle,
        eps_ic_inf,
        interp_modulus,
    })
}

pub type TestFunction = fn(f64, f64) -> f64;

/// Names accepted by [`test_function`].
pub const FUNCTION_NAMES: [&str; 9] = [
    "exp_r2", "sin_r2", "cos_r2", "log_r2", "rational", "franke", "ackley", "rastrigin", "wavy",
];

pub fn test_function(name: &str) -> Result<TestFunction> {
    let f: TestFunction = match name {
        "exp_r2" => |x, y| (x * x + y * y).exp(),
        "sin_r2" => |x, y| (x * x + y * y).sin(),
        "cos_r2" => |x, y| (x * x + y * y).cos(),
        "log_r2" => |x, y| (1.0 + x * x + y * y).ln(),
        "rational" => |x, y| (1.0 + x.powi(4) + y.powi(4)) / (1.0 + x * x + y * y),
        "franke" => franke,
        "ackley" => ackley,
        "rastrigin" => |x, y| {
            use std::f64::consts::TAU;
            20.0 + x * x + y * y - 10.0 * ((TAU * x).cos() + (TAU * y).cos())
        },
        "wavy" => |x, y| {
            1.0 - 0.5 * ((10.0 * x).cos() * (-x * x / 2.0).exp() + (10.0 * y).cos() * (-y * y / 2.0).exp())
        },
        _ => return Err(Error::UnknownFunction(name.to_string())),
    };
    Ok(f)
}

// Franke's function lives on [0,1]²
fn franke(x: f64, y: f64) -> f64 {
    let (x, y) = (9.0 * (x + 1.0) / 2.0, 9.0 * (y + 1.0) / 2.0);
    0.75 * (-((x - 2.0).powi(2) + (y - 2.0).powi(2)) / 4.0).exp()
        + 0.75 * (-(x + 1.0).powi(2) / 49.0 - (y + 1.0) / 10.0).exp()
        + 0.5 * (-((x - 7.0).powi(2) + (y - 3.0).powi(2)) / 4.0).exp()
        - 0.2 * (-(x - 4.0).powi(2) - (y - 7.0).powi(2)).exp()
}

fn ackley(x: f64, y: f64) -> f64 {
    use std::f64::consts::{E, TAU};
    -20.0 * (-0.2 * (0.5 * (x * x + y * y)).sqrt()).exp() - (0.5 * ((TAU * x).cos() + (TAU * y).cos())).exp()
        + E
        + 20.0
}

/// One complete fit: sample `f` on a `grid`-per-axis tensor grid, fit with
/// `method`, measure on an `eval_grid` grid. Pivotal fits also carry the
/// residual bound against the full least-squares solution.
pub fn fit_function(
    f: impl Fn(f64, f64) -> f64,
    degree: usize,
    grid: usize,
    eval_grid: usize,
    method: FitMethod,
    cfg: &MaxvolConfig,
) -> Result<(FitReport, SampleGrid)> {
    let basis = Basis2D::new(degree);
    let samples = SampleGrid::uniform(grid)?;
    let a = design_matrix(&basis, &samples);
    let b = samples.sample(&f);
    let mut report = match method {
        FitMethod::FullGrid => full_fit(&a, &b)?,
        FitMethod::Pivotal => {
            let mut rep = pivotal_fit(&a, &b, cfg)?;
            let x_b = least_squares(&a, &b)?;
            let pair = IndexPair::new(rep.pivotal_rows.clone(), (0..basis.size()).collect())?;
            rep.bound_terms = Some(residual_bound(&a, &pair, &x_b, &b, cfg.epsilon)?);
            rep
        }
    };
    report.rel_error = Some(relative_error(&f, &report.coefficients, &basis, &SampleGrid::uniform(eval_grid)?)?);
    Ok((report, samples))
}
