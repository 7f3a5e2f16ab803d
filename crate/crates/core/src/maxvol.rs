//! Greedy maximal-volume search for dominant `r × r` submatrices.
//!
//! Every variant works with the same primitive: form the interpolation
//! matrix of the current block (`B = M(:,J) A⁻¹` for rows, `C = A⁻¹ M(I,:)`
//! for columns) with one linear solve, then swap in the source whose entry
//! has the largest modulus. Replacing slot `j` with source `i` multiplies
//! `|det A|` by exactly `|b_ij|`, so the volume grows until every entry is at
//! most `1 + ε` in modulus.
//!
//! With greedy width `h > 1` a sweep may accept extra swaps: the `k`-th
//! candidate is taken when the `k × k` block of `B` spanned by the chosen
//! sources and slots has a larger determinant than the block accepted so far.
//! The growth factor of each extension is a Schur complement
//! ([`schur_scalar`]), so the test costs a `k × k` solve rather than a new
//! factorization of `A`.
//!
//! | variant                 | mode                          | h   |
//! |-------------------------|-------------------------------|-----|
//! | classic tall maxvol     | [`SweepMode::RowsOnly`]       | 1   |
//! | 2-greedy tall maxvol    | [`SweepMode::RowsOnly`]       | 2   |
//! | 2D maxvol               | [`SweepMode::Simultaneous2d`] | any |
//! | alternating maxvol      | [`SweepMode::Alternating`]    | 1   |
//! | alternating h-greedy    | [`SweepMode::Alternating`]    | h   |

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::densemat::{lu_factor, DenseMatrix, LuFactors, PIVOT_TOL};
use crate::{Error, Result};

/// Upper limit on the number of index pairs [`brute_force_maxvol`] visits.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Number of random draws tried by [`InitStrategy::RandomIndices`].
pub const RANDOM_INIT_ATTEMPTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum InitStrategy {
    /// Row pivots of partial-pivoted elimination on `M`, then column pivots
    /// of the same elimination on `M(I,:)ᵀ`.
    LuPivots,
    RandomIndices { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SweepMode {
    /// Tall `n × r` input, only rows move.
    RowsOnly,
    /// Both interpolation matrices per sweep, one swap along the larger.
    Simultaneous2d,
    /// A row phase then a column phase per sweep, each with greedy width `h`.
    Alternating,
}

/// How the extra candidates `k = 2..=h` of a sweep are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum GreedyRule {
    /// Try candidates `k = 2..=h` in turn against the leading swap and stop
    /// after the first one accepted (at most two swaps per phase).
    FirstAccept,
    /// Grow the accepted block one candidate at a time and stop at the first
    /// rejection (up to `h` swaps per phase).
    Cumulative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MaxvolConfig {
    /// Dominance slack: stop once every interpolation entry is `≤ 1 + ε`.
    pub epsilon: f64,
    /// Greedy width.
    pub h: usize,
    pub max_sweeps: usize,
    pub init: InitStrategy,
    pub mode: SweepMode,
    pub greedy: GreedyRule,
    /// Optional extra stop: relative volume growth of a sweep below this.
    pub rel_vol_tol: Option<f64>,
}

impl Default for MaxvolConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-2,
            h: 1,
            max_sweeps: 200,
            init: InitStrategy::LuPivots,
            mode: SweepMode::Alternating,
            greedy: GreedyRule::FirstAccept,
            rel_vol_tol: None,
        }
    }
}

impl MaxvolConfig {
    pub fn with_h(mut self, h: usize) -> Self {
        self.h = h;
        self
    }

    pub fn with_mode(mut self, mode: SweepMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_greedy(mut self, greedy: GreedyRule) -> Self {
        self.greedy = greedy;
        self
    }

    pub fn with_init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.h == 0 {
            return Err(Error::InvalidConfig("greedy width h must be >= 1".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be >= 1".into()));
        }
        if let Some(tol) = self.rel_vol_tol {
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "rel_vol_tol must be non-negative, got {tol}"
                )));
            }
        }
        Ok(())
    }
}

/// Row and column index sets, each strictly increasing and of equal length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IndexPair {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl IndexPair {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidIndices(format!(
                "{} rows but {} columns",
                rows.len(),
                cols.len()
            )));
        }
        for (name, set) in [("row", &rows), ("column", &cols)] {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidIndices(format!(
                    "{name} indices must be strictly increasing: {set:?}"
                )));
            }
        }
        Ok(Self { rows, cols })
    }

    /// Sorts the inputs first; duplicates are still rejected.
    pub fn from_unsorted(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        cols.sort_unstable();
        Self::new(rows, cols)
    }

    /// Pair selecting `rows` together with every column of an `n × r` matrix.
    pub fn rows_only(rows: Vec<usize>) -> Result<Self> {
        let r = rows.len();
        Self::from_unsorted(rows, (0..r).collect())
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn check_bounds(&self, nrows: usize, ncols: usize) -> Result<()> {
        if self.rows.last().is_some_and(|&i| i >= nrows) {
            return Err(Error::InvalidIndices(format!(
                "row index {} out of range for {nrows} rows",
                self.rows.last().unwrap()
            )));
        }
        if self.cols.last().is_some_and(|&j| j >= ncols) {
            return Err(Error::InvalidIndices(format!(
                "column index {} out of range for {ncols} columns",
                self.cols.last().unwrap()
            )));
        }
        Ok(())
    }
}

/// Which interpolation matrix a swap or witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Axis {
    /// `B = M(:,J) A⁻¹`: sources are rows of `M`, slots are rows of `A`.
    Rows,
    /// `C = A⁻¹ M(I,:)`: sources are columns of `M`, slots are columns of `A`.
    Cols,
}

/// One greedy phase that changed the submatrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SwapBatch {
    pub axis: Axis,
    /// Positional row indices of `A` before the batch.
    pub rows_before: Vec<usize>,
    /// Positional column indices of `A` before the batch.
    pub cols_before: Vec<usize>,
    /// Candidates `(source, slot)` in the order they were tested.
    pub candidates: Vec<(usize, usize)>,
    /// Verdict for each candidate; the first is always accepted.
    pub accepted: Vec<bool>,
    /// `ln |det|` growth predicted from the interpolation entries.
    pub log_growth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum StopReason {
    Dominant,
    VolumeStalled,
    MaxSweeps,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MaxvolReport {
    pub indices: IndexPair,
    pub sweeps: usize,
    pub row_swaps: usize,
    pub col_swaps: usize,
    /// Number of interpolation-matrix solves.
    pub solve_count: usize,
    /// `ln |det A|` of the starting block followed by its value after every
    /// batch of swaps.
    pub log_vol_trace: Vec<f64>,
    pub converged: bool,
    pub stop: StopReason,
    /// Largest interpolation modulus seen in the last sweep.
    pub final_max_modulus: f64,
    pub batches: Vec<SwapBatch>,
}

impl MaxvolReport {
    pub fn final_log_volume(&self) -> f64 {
        *self.log_vol_trace.last().expect("trace holds the start volume")
    }
}

/// Returns `b − y·Bk⁻¹·x`, the factor by which bordering `Bk` with column
/// `x`, row `y` and corner `b` scales its determinant.
pub fn schur_scalar(bk: &DenseMatrix, x: &[f64], y: &[f64], b: f64) -> Result<f64> {
    let k = bk.rows();
    if !bk.is_square() || x.len() != k || y.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "bordering a {}x{} block with vectors of length {} and {}",
            bk.rows(),
            bk.cols(),
            x.len(),
            y.len()
        )));
    }
    if k == 0 {
        return Ok(b);
    }
    let lu = lu_factor(bk)?;
    let z = lu.solve(&DenseMatrix::new(k, 1, x.to_vec())?)?;
    let correction: f64 = y.iter().zip(z.data()).map(|(a, b)| a * b).sum();
    Ok(b - correction)
}

/// Picks a nonsingular starting `r × r` block.
pub fn initial_submatrix(m: &DenseMatrix, r: usize, strategy: InitStrategy) -> Result<IndexPair> {
    let (n, cols) = m.shape();
    if r == 0 || r > n.min(cols) {
        return Err(Error::InvalidConfig(format!(
            "rank {r} must lie in 1..={} for a {n}x{cols} matrix",
            n.min(cols)
        )));
    }
    match strategy {
        InitStrategy::LuPivots => {
            let rows = pivot_rows(m, r).ok_or(Error::RankDeficient(r))?;
            let cols = pivot_rows(&m.select_rows(&rows).transpose(), r)
                .ok_or(Error::RankDeficient(r))?;
            let pair = IndexPair::from_unsorted(rows, cols)?;
            if lu_factor(&m.submatrix(pair.rows(), pair.cols()))?.is_singular() {
                return Err(Error::RankDeficient(r));
            }
            Ok(pair)
        }
        InitStrategy::RandomIndices { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..RANDOM_INIT_ATTEMPTS {
                let rows = sample(&mut rng, n, r).into_vec();
                let cols = sample(&mut rng, cols, r).into_vec();
                let pair = IndexPair::from_unsorted(rows, cols)?;
                if !lu_factor(&m.submatrix(pair.rows(), pair.cols()))?.is_singular() {
                    return Ok(pair);
                }
            }
            Err(Error::RankDeficient(r))
        }
    }
}

/// Rows chosen as pivots by Gaussian elimination with partial pivoting,
/// scanning columns left to right and skipping numerically empty ones.
fn pivot_rows(m: &DenseMatrix, r: usize) -> Option<Vec<usize>> {
    let (n, ncols) = m.shape();
    let tol = PIVOT_TOL * m.max_abs();
    if tol == 0.0 {
        return None;
    }
    let mut work = m.clone();
    let mut used = vec![false; n];
    let mut picked = Vec::with_capacity(r);
    for col in 0..ncols {
        if picked.len() == r {
            break;
        }
        let mut best = None;
        let mut best_abs = tol;
        for (i, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
            let v = work[(i, col)].abs();
            if v > best_abs {
                best_abs = v;
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        used[p] = true;
        picked.push(p);
        let pivot = work[(p, col)];
        for i in 0..n {
            if used[i] {
                continue;
            }
            let l = work[(i, col)] / pivot;
            if l == 0.0 {
                continue;
            }
            for c in col..ncols {
                let v = work[(p, c)];
                work[(i, c)] -= l * v;
            }
        }
    }
    (picked.len() == r).then_some(picked)
}

/// Largest-modulus entry of `g` outside the excluded rows and columns,
/// ties going to the smallest `(row, col)`.
fn argmax_excluding(g: &DenseMatrix, skip_rows: &[usize], skip_cols: &[usize]) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..g.rows() {
        if skip_rows.contains(&i) {
            continue;
        }
        for (j, &v) in g.row(i).iter().enumerate() {
            if skip_cols.contains(&j) {
                continue;
            }
            if best.is_none_or(|(_, _, b)| v.abs() > b.abs()) {
                best = Some((i, j, v));
            }
        }
    }
    best
}

struct PhaseOutcome {
    max_modulus: f64,
    batch: Option<SwapBatch>,
}

/// One greedy phase over an interpolation matrix `g` whose rows are
/// sources and whose columns are slots of `positions`.
fn greedy_phase(
    g: &DenseMatrix,
    axis: Axis,
    rows: &mut [usize],
    cols: &mut [usize],
    cfg: &MaxvolConfig,
) -> Result<PhaseOutcome> {
    let Some((i1, j1, b1)) = argmax_excluding(g, &[], &[]) else {
        return Ok(PhaseOutcome {
            max_modulus: 0.0,
            batch: None,
        });
    };
    let max_modulus = b1.abs();
    if max_modulus <= 1.0 + cfg.epsilon {
        return Ok(PhaseOutcome {
            max_modulus,
            batch: None,
        });
    }

    let (rows_before, cols_before) = (rows.to_vec(), cols.to_vec());
    let mut sources = vec![i1];
    let mut slots = vec![j1];
    let mut tried_sources = vec![i1];
    let mut tried_slots = vec![j1];
    let mut candidates = vec![(i1, j1)];
    let mut accepted = vec![true];
    let mut log_growth = max_modulus.ln();

    for _k in 2..=cfg.h.min(g.cols()) {
        let Some((ik, jk, bk)) = argmax_excluding(g, &tried_sources, &tried_slots) else {
            break;
        };
        tried_sources.push(ik);
        tried_slots.push(jk);
        candidates.push((ik, jk));

        let block = g.submatrix(&sources, &slots);
        let x: Vec<f64> = sources.iter().map(|&s| g[(s, jk)]).collect();
        let y: Vec<f64> = slots.iter().map(|&t| g[(ik, t)]).collect();
        let growth = schur_scalar(&block, &x, &y, bk)?;
        let take = growth.abs() > 1.0;
        accepted.push(take);
        if take {
            sources.push(ik);
            slots.push(jk);
            log_growth += growth.abs().ln();
        }
        match (cfg.greedy, take) {
            (GreedyRule::FirstAccept, true) | (GreedyRule::Cumulative, false) => break,
            _ => {}
        }
    }

    let positions = match axis {
        Axis::Rows => rows,
        Axis::Cols => cols,
    };
    for (&src, &slot) in sources.iter().zip(&slots) {
        positions[slot] = src;
    }

    Ok(PhaseOutcome {
        max_modulus,
        batch: Some(SwapBatch {
            axis,
            rows_before,
            cols_before,
            candidates,
            accepted,
            log_growth,
        }),
    })
}

fn factor_block(m: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Result<LuFactors> {
    let lu = lu_factor(&m.submatrix(rows, cols))?;
    if lu.is_singular() {
        return Err(Error::SingularMatrix);
    }
    Ok(lu)
}

fn row_interpolation(m: &DenseMatrix, cols: &[usize], lu: &LuFactors) -> Result<DenseMatrix> {
    lu.right_solve(&m.select_cols(cols))
}

/// `Cᵀ = (A⁻¹ M(I,:))ᵀ`, laid out with sources as rows.
fn col_interpolation(m: &DenseMatrix, rows: &[usize], lu: &LuFactors) -> Result<DenseMatrix> {
    Ok(lu.solve(&m.select_rows(rows))?.transpose())
}

struct Run<'a> {
    m: &'a DenseMatrix,
    cfg: &'a MaxvolConfig,
    rows: Vec<usize>,
    cols: Vec<usize>,
    lu: LuFactors,
    report: MaxvolReport,
}

impl<'a> Run<'a> {
    fn start(m: &'a DenseMatrix, rows: Vec<usize>, cols: Vec<usize>, cfg: &'a MaxvolConfig) -> Result<Self> {
        cfg.validate()?;
        let lu = factor_block(m, &rows, &cols)?;
        let report = MaxvolReport {
            indices: IndexPair::from_unsorted(rows.clone(), cols.clone())?,
            sweeps: 0,
            row_swaps: 0,
            col_swaps: 0,
            solve_count: 0,
            log_vol_trace: vec![lu.log_abs_det()],
            converged: false,
            stop: StopReason::MaxSweeps,
            final_max_modulus: f64::INFINITY,
            batches: Vec::new(),
        };
        Ok(Self {
            m,
            cfg,
            rows,
            cols,
            lu,
            report,
        })
    }

    fn commit(&mut self, batch: SwapBatch) -> Result<()> {
        let swaps = batch.accepted.iter().filter(|&&a| a).count();
        match batch.axis {
            Axis::Rows => self.report.row_swaps += swaps,
            Axis::Cols => self.report.col_swaps += swaps,
        }
        self.report.batches.push(batch);
        self.lu = factor_block(self.m, &self.rows, &self.cols)?;
        self.report.log_vol_trace.push(self.lu.log_abs_det());
        Ok(())
    }

    fn row_phase(&mut self) -> Result<f64> {
        let g = row_interpolation(self.m, &self.cols, &self.lu)?;
        self.report.solve_count += 1;
        let out = greedy_phase(&g, Axis::Rows, &mut self.rows, &mut self.cols, self.cfg)?;
        if let Some(batch) = out.batch {
            self.commit(batch)?;
        }
        Ok(out.max_modulus)
    }

    fn col_phase(&mut self) -> Result<f64> {
        let g = col_interpolation(self.m, &self.rows, &self.lu)?;
        self.report.solve_count += 1;
        let out = greedy_phase(&g, Axis::Cols, &mut self.rows, &mut self.cols, self.cfg)?;
        if let Some(batch) = out.batch {
            self.commit(batch)?;
        }
        Ok(out.max_modulus)
    }

    /// Single swap along whichever interpolation matrix holds the larger
    /// entry; rows win ties.
    fn simultaneous_step(&mut self) -> Result<f64> {
        let b = row_interpolation(self.m, &self.cols, &self.lu)?;
        let c = col_interpolation(self.m, &self.rows, &self.lu)?;
        self.report.solve_count += 2;
        let single = MaxvolConfig { h: 1, ..*self.cfg };
        let bmax = argmax_excluding(&b, &[], &[]).map_or(0.0, |(_, _, v)| v.abs());
        let cmax = argmax_excluding(&c, &[], &[]).map_or(0.0, |(_, _, v)| v.abs());
        let out = if bmax >= cmax {
            greedy_phase(&b, Axis::Rows, &mut self.rows, &mut self.cols, &single)?
        } else {
            greedy_phase(&c, Axis::Cols, &mut self.rows, &mut self.cols, &single)?
        };
        if let Some(batch) = out.batch {
            self.commit(batch)?;
        }
        Ok(bmax.max(cmax))
    }

    fn drive(mut self, mut sweep: impl FnMut(&mut Self) -> Result<f64>) -> Result<MaxvolReport> {
        let tol = 1.0 + self.cfg.epsilon;
        loop {
            if self.report.sweeps == self.cfg.max_sweeps {
                self.report.stop = StopReason::MaxSweeps;
                break;
            }
            self.report.sweeps += 1;
            let before = self.lu.log_abs_det();
            let max_modulus = sweep(&mut self)?;
            self.report.final_max_modulus = max_modulus;
            if max_modulus <= tol {
                self.report.converged = true;
                self.report.stop = StopReason::Dominant;
                break;
            }
            if let Some(rel) = self.cfg.rel_vol_tol {
                if (self.lu.log_abs_det() - before).exp_m1() < rel {
                    self.report.stop = StopReason::VolumeStalled;
                    break;
                }
            }
        }
        self.report.indices = IndexPair::from_unsorted(self.rows, self.cols)?;
        Ok(self.report)
    }
}

fn trivial_report(m: &DenseMatrix) -> Result<MaxvolReport> {
    let n = m.rows();
    let all: Vec<usize> = (0..n).collect();
    let lu = factor_block(m, &all, &all)?;
    Ok(MaxvolReport {
        indices: IndexPair::new(all.clone(), all)?,
        sweeps: 0,
        row_swaps: 0,
        col_swaps: 0,
        solve_count: 0,
        log_vol_trace: vec![lu.log_abs_det()],
        converged: true,
        stop: StopReason::Dominant,
        final_max_modulus: 1.0,
        batches: Vec::new(),
    })
}

/// Dominant rows of a tall `n × r` matrix (all columns kept).
pub fn maxvol_rows(m: &DenseMatrix, start: &[usize], cfg: &MaxvolConfig) -> Result<MaxvolReport> {
    let (n, r) = m.shape();
    if start.len() != r {
        return Err(Error::InvalidIndices(format!(
            "start selects {} rows of an {n}x{r} matrix",
            start.len()
        )));
    }
    IndexPair::rows_only(start.to_vec())?.check_bounds(n, r)?;
    if cfg.mode != SweepMode::RowsOnly {
        return Err(Error::InvalidConfig(
            "maxvol_rows needs SweepMode::RowsOnly".into(),
        ));
    }
    if n == r {
        cfg.validate()?;
        return trivial_report(m);
    }
    let run = Run::start(m, start.to_vec(), (0..r).collect(), cfg)?;
    run.drive(|s| s.row_phase())
}

/// Dominant `r × r` submatrix of a general `n × m` matrix.
pub fn maxvol_general(m: &DenseMatrix, start: &IndexPair, cfg: &MaxvolConfig) -> Result<MaxvolReport> {
    start.check_bounds(m.rows(), m.cols())?;
    let r = start.rank();
    if r == 0 {
        return Err(Error::InvalidIndices("empty start pair".into()));
    }
    if m.is_square() && r == m.rows() {
        cfg.validate()?;
        return trivial_report(m);
    }
    let run = Run::start(m, start.rows().to_vec(), start.cols().to_vec(), cfg)?;
    match cfg.mode {
        SweepMode::RowsOnly => run.drive(|s| s.row_phase()),
        SweepMode::Alternating => run.drive(|s| {
            let b = s.row_phase()?;
            let c = s.col_phase()?;
            Ok(b.max(c))
        }),
        SweepMode::Simultaneous2d => run.drive(|s| s.simultaneous_step()),
    }
}

/// Starting block from `cfg.init`, then the search selected by `cfg.mode`.
pub fn find_dominant(m: &DenseMatrix, r: usize, cfg: &MaxvolConfig) -> Result<MaxvolReport> {
    cfg.validate()?;
    let start = initial_submatrix(m, r, cfg.init)?;
    match cfg.mode {
        SweepMode::RowsOnly if r == m.cols() => maxvol_rows(m, start.rows(), cfg),
        _ => maxvol_general(m, &start, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub axis: Axis,
    /// Row of `B` (`n × r`) or `C` (`r × m`).
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Dominance {
    pub is_dominant: bool,
    pub max_modulus: f64,
    pub witness: Witness,
}

/// Checks that every entry of `M(:,J) A⁻¹` and `A⁻¹ M(I,:)` is at most
/// `1 + ε` in modulus, `A = M(I,J)`.
pub fn dominance_check(m: &DenseMatrix, pair: &IndexPair, epsilon: f64) -> Result<Dominance> {
    pair.check_bounds(m.rows(), m.cols())?;
    let lu = factor_block(m, pair.rows(), pair.cols())?;
    let b = row_interpolation(m, pair.cols(), &lu)?;
    let c = lu.solve(&m.select_rows(pair.rows()))?;
    let (bi, bj, bv) = argmax_excluding(&b, &[], &[]).ok_or(Error::SingularMatrix)?;
    let (ci, cj, cv) = argmax_excluding(&c, &[], &[]).ok_or(Error::SingularMatrix)?;
    let (max_modulus, witness) = if bv.abs() >= cv.abs() {
        (bv.abs(), Witness { axis: Axis::Rows, row: bi, col: bj })
    } else {
        (cv.abs(), Witness { axis: Axis::Cols, row: ci, col: cj })
    };
    Ok(Dominance {
        is_dominant: max_modulus <= 1.0 + epsilon,
        max_modulus,
        witness,
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Exhaustive maximal-volume `r × r` submatrix; ties go to the
/// lexicographically smallest `(I, J)`.
pub fn brute_force_maxvol(m: &DenseMatrix, r: usize) -> Result<(IndexPair, f64)> {
    let (n, cols) = m.shape();
    if r == 0 || r > n.min(cols) {
        return Err(Error::InvalidConfig(format!(
            "rank {r} must lie in 1..={} for a {n}x{cols} matrix",
            n.min(cols)
        )));
    }
    let count = binomial(n, r).saturating_mul(binomial(cols, r));
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(count, BRUTE_FORCE_LIMIT));
    }
    let col_sets: Vec<Vec<usize>> = (0..cols).combinations(r).collect();
    let mut best: Option<(Vec<usize>, Vec<usize>, f64)> = None;
    for rows in (0..n).combinations(r) {
        let panel = m.select_rows(&rows);
        for cset in &col_sets {
            let lv = lu_factor(&panel.select_cols(cset))?.log_abs_det();
            if best.as_ref().is_none_or(|(_, _, b)| lv > *b) {
                best = Some((rows.clone(), cset.clone(), lv));
            }
        }
    }
    let (rows, cols, lv) = best.expect("at least one candidate pair");
    Ok((IndexPair::new(rows, cols)?, lv))
}

/// Hadamard bound on `ln |det|` of any `r × r` submatrix: the sum of the
/// logs of the `r` largest row norms of `m`.
pub fn hadamard_log_bound(m: &DenseMatrix, r: usize) -> f64 {
    let mut norms: Vec<f64> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    norms.sort_by(|a, b| b.total_cmp(a));
    norms.iter().take(r).map(|v| v.ln()).sum()
}
