//! Cross approximation `A_r = A(:,J) · A(I,J)⁻¹ · A(I,:)`, its exact
//! residual entries and the Chebyshev-norm error bounds it satisfies.

use serde::Serialize;

use crate::densemat::{lu_factor, singular_values, DenseMatrix, LuFactors};
use crate::maxvol::{brute_force_maxvol, schur_scalar, IndexPair};
use crate::{Error, Result};

/// Factored cross approximation; `A_r` itself is never formed unless
/// [`CrossFactors::reconstruct`] is called.
#[derive(Debug, Clone)]
pub struct CrossFactors {
    indices: IndexPair,
    col_panel: DenseMatrix,
    row_panel: DenseMatrix,
    core: LuFactors,
    source_dims: (usize, usize),
}

impl CrossFactors {
    pub fn indices(&self) -> &IndexPair {
        &self.indices
    }

    /// `A(:,J)`.
    pub fn col_panel(&self) -> &DenseMatrix {
        &self.col_panel
    }

    /// `A(I,:)`.
    pub fn row_panel(&self) -> &DenseMatrix {
        &self.row_panel
    }

    pub fn core(&self) -> &LuFactors {
        &self.core
    }

    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    pub fn rank(&self) -> usize {
        self.indices.rank()
    }

    /// `A(:,J) · (A(I,J)⁻¹ A(I,:))`, one solve against the row panel.
    pub fn reconstruct(&self) -> DenseMatrix {
        let coeffs = self
            .core
            .solve(&self.row_panel)
            .expect("core block is nonsingular by construction");
        self.col_panel
            .matmul(&coeffs)
            .expect("panel shapes agree by construction")
    }
}

pub fn build_cross(a: &DenseMatrix, pair: &IndexPair) -> Result<CrossFactors> {
    pair.check_bounds(a.rows(), a.cols())?;
    let core = lu_factor(&a.submatrix(pair.rows(), pair.cols()))?;
    if core.is_singular() {
        return Err(Error::SingularMatrix);
    }
    Ok(CrossFactors {
        indices: pair.clone(),
        col_panel: a.select_cols(pair.cols()),
        row_panel: a.select_rows(pair.rows()),
        core,
        source_dims: a.shape(),
    })
}

pub fn reconstruct(f: &CrossFactors) -> DenseMatrix {
    f.reconstruct()
}

/// Residual entry `(A − A_r)(i, j)` as the Schur complement
/// `A_ij − A(i,J) A(I,J)⁻¹ A(I,j)`, which equals `det ℰ_ij / det A(I,J)` for
/// the block `ℰ_ij` bordering `A(I,J)` with row `i` and column `j`.
pub fn residual_entry_det_ratio(a: &DenseMatrix, pair: &IndexPair, i: usize, j: usize) -> Result<f64> {
    pair.check_bounds(a.rows(), a.cols())?;
    if i >= a.rows() || j >= a.cols() {
        return Err(Error::InvalidIndices(format!(
            "entry ({i}, {j}) outside a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if pair.rows().contains(&i) || pair.cols().contains(&j) {
        if lu_factor(&a.submatrix(pair.rows(), pair.cols()))?.is_singular() {
            return Err(Error::SingularMatrix);
        }
        return Ok(0.0);
    }
    let core = a.submatrix(pair.rows(), pair.cols());
    let x: Vec<f64> = pair.rows().iter().map(|&r| a[(r, j)]).collect();
    let y: Vec<f64> = pair.cols().iter().map(|&c| a[(i, c)]).collect();
    schur_scalar(&core, &x, &y, a[(i, j)])
}

/// `max |A − A_r|` and the first entry attaining it.
pub fn chebyshev_error(a: &DenseMatrix, f: &CrossFactors) -> Result<(f64, (usize, usize))> {
    if a.shape() != f.source_dims {
        return Err(Error::DimensionMismatch(format!(
            "factors were built from a {:?} matrix, got {:?}",
            f.source_dims,
            a.shape()
        )));
    }
    let residual = a.sub(&f.reconstruct())?;
    let mut best = (0.0, (0, 0));
    for i in 0..residual.rows() {
        for (j, v) in residual.row(i).iter().enumerate() {
            if v.abs() > best.0 {
                best = (v.abs(), (i, j));
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum BoundVariant {
    /// `(r+1) σ_{r+1}`.
    Classic,
    /// `(r+1) σ_{r+1} / sqrt(1 + Σ_{k≤r} σ_{r+1}²/σ_k²)`, valid for a
    /// maximal-volume block.
    Improved,
    /// The improved bound divided by `ν`, valid for a dominant block whose
    /// volume is `ν` times the maximum.
    NuDominant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    sigma: Vec<f64>,
    r: usize,
    nu: f64,
}

impl BoundInputs {
    pub fn new(sigma: Vec<f64>, r: usize, nu: f64) -> Result<Self> {
        if sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) || sigma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "singular values must be finite, non-negative and descending".into(),
            ));
        }
        if r >= sigma.len() {
            return Err(Error::InvalidRank {
                rank: r,
                needed: r + 1,
                got: sigma.len(),
            });
        }
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::InvalidNu(nu));
        }
        Ok(Self { sigma, r, nu })
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

pub fn error_bound(b: &BoundInputs, variant: BoundVariant) -> f64 {
    let r = b.r;
    let tail = b.sigma[r];
    let classic = (r as f64 + 1.0) * tail;
    if tail == 0.0 {
        return 0.0;
    }
    match variant {
        BoundVariant::Classic => classic,
        BoundVariant::Improved | BoundVariant::NuDominant => {
            // descending order keeps every σ_k ≥ σ_{r+1} > 0 here
            debug_assert!(b.sigma[..r].iter().all(|&s| s > 0.0));
            let correction: f64 = b.sigma[..r].iter().map(|s| (tail / s).powi(2)).sum();
            let improved = classic / (1.0 + correction).sqrt();
            if variant == BoundVariant::NuDominant {
                improved / b.nu
            } else {
                improved
            }
        }
    }
}

/// Where the `ν` of a certificate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum NuSource {
    Given,
    /// `exp(ln vol(A(I,J)) − ln vol(A_max))` from exhaustive search.
    Oracle,
    /// `r^{-r/2}`, the worst case for a dominant block of a tall matrix.
    DominanceFloor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundCertificate {
    pub rank: usize,
    pub indices: IndexPair,
    pub chebyshev_error: f64,
    pub argmax: (usize, usize),
    pub classic_bound: f64,
    pub improved_bound: f64,
    pub nu: f64,
    pub nu_source: NuSource,
    pub nu_dominant_bound: f64,
    /// `nu_dominant_bound − chebyshev_error`.
    pub slack: f64,
}

/// `ν = |det A(I,J)| / max |det|` by exhaustive search, or `None` when the
/// search is too large.
pub fn oracle_nu(a: &DenseMatrix, pair: &IndexPair) -> Result<Option<f64>> {
    match brute_force_maxvol(a, pair.rank()) {
        Ok((_, best)) => {
            let lv = lu_factor(&a.submatrix(pair.rows(), pair.cols()))?.log_abs_det();
            Ok(Some((lv - best).exp().min(1.0)))
        }
        Err(Error::TooLarge(..)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Error and both bounds for the cross approximation `f` of `a`.
///
/// With `nu = None` the dominance deficiency is measured against the
/// exhaustive optimum when that is affordable and otherwise taken as
/// `r^{-r/2}`. A full-rank cross is exact and reports zero bounds.
pub fn bound_certificate(a: &DenseMatrix, f: &CrossFactors, nu: Option<f64>) -> Result<BoundCertificate> {
    let (chebyshev_error, argmax) = chebyshev_error(a, f)?;
    let r = f.rank();
    let (nu, nu_source) = match nu {
        Some(v) => (v, NuSource::Given),
        None => match oracle_nu(a, f.indices())? {
            Some(v) => (v, NuSource::Oracle),
            None => ((r as f64).powf(-(r as f64) / 2.0), NuSource::DominanceFloor),
        },
    };
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidNu(nu));
    }
    let sigma = singular_values(a)?;
    let (classic, improved, nu_dom) = if r >= sigma.len() {
        (0.0, 0.0, 0.0)
    } else {
        let inputs = BoundInputs::new(sigma, r, nu)?;
        (
            error_bound(&inputs, BoundVariant::Classic),
            error_bound(&inputs, BoundVariant::Improved),
            error_bound(&inputs, BoundVariant::NuDominant),
        )
    };
    Ok(BoundCertificate {
        rank: r,
        indices: f.indices().clone(),
        chebyshev_error,
        argmax,
        classic_bound: classic,
        improved_bound: improved,
        nu,
        nu_source,
        nu_dominant_bound: nu_dom,
        slack: nu_dom - chebyshev_error,
    })
}
