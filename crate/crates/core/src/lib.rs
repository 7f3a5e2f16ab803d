//! Cross (skeleton / CUR) approximation of dense matrices driven by the
//! greedy maximal-volume family of submatrix selection algorithms.
//!
//! The crate is organised bottom-up:
//!
//! * [`densemat`]: a small dense kernel (LU with log-determinants, one-sided
//!   Jacobi singular values, Householder least squares, norms, CSV I/O).
//! * [`maxvol`]: dominant-submatrix search: row-only, simultaneous 2D and
//!   alternating variants, all parameterised by a greedy width `h`.
//! * [`cross`]: the approximation `A(:,J) A(I,J)^-1 A(I,:)`, exact residual
//!   entries and Chebyshev-norm error bounds.
//! * [`imgcodec`]: integer-preserving grayscale image compression with the
//!   XCUR container.
//! * [`polylsq`]: bivariate polynomial least squares on a full grid versus
//!   on maxvol-selected pivotal rows.
//! * [`bench`]: seeded solve-count benchmarks for the greedy family.

pub mod bench;
pub mod cross;
pub mod densemat;
mod error;
pub mod imgcodec;
pub mod maxvol;
pub mod polylsq;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
