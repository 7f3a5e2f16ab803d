//! Solve-count benchmark for the greedy maxvol family on random matrices.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::densemat::DenseMatrix;
use crate::maxvol::{
    initial_submatrix, maxvol_general, maxvol_rows, GreedyRule, InitStrategy, MaxvolConfig, MaxvolReport,
    SweepMode,
};
use crate::{Error, Result};

/// Relative volume growth per sweep below which a run stops.
pub const REL_VOL_TOL: f64 = 1e-8;

pub const REPORT_HEADER: &str = "rank,h,mean_solves,std_solves,mean_time_sec";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BenchMode {
    /// `n × r` matrices, rows only.
    Tall,
    /// `n × n` matrices, alternating row and column phases.
    Square,
}

/// Greedy width of one benchmark column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HChoice {
    Fixed(usize),
    /// `h = r`.
    Rank,
}

impl HChoice {
    pub fn resolve(self, rank: usize) -> usize {
        match self {
            HChoice::Fixed(h) => h,
            HChoice::Rank => rank,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub rows: usize,
    pub ranks: Vec<usize>,
    pub h_values: Vec<HChoice>,
    pub trials: usize,
    pub seed: u64,
    pub mode: BenchMode,
    pub epsilon: f64,
    pub max_sweeps: usize,
    pub greedy: GreedyRule,
}

impl BenchSpec {
    pub fn new(rows: usize, ranks: Vec<usize>, h_values: Vec<HChoice>, trials: usize, mode: BenchMode) -> Self {
        let base = MaxvolConfig::default();
        Self {
            rows,
            ranks,
            h_values,
            trials,
            seed: 0,
            mode,
            epsilon: base.epsilon,
            max_sweeps: base.max_sweeps,
            greedy: base.greedy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if self.ranks.is_empty() || self.h_values.is_empty() {
            return Err(Error::InvalidConfig("need at least one rank and one h".into()));
        }
        for &r in &self.ranks {
            if r == 0 || r > self.rows {
                return Err(Error::InvalidConfig(format!(
                    "rank {r} must lie in 1..={}",
                    self.rows
                )));
            }
        }
        if self.h_values.contains(&HChoice::Fixed(0)) {
            return Err(Error::InvalidConfig("greedy width h must be >= 1".into()));
        }
        Ok(())
    }

    fn config(&self, h: usize) -> MaxvolConfig {
        MaxvolConfig {
            epsilon: self.epsilon,
            h,
            max_sweeps: self.max_sweeps,
            init: InitStrategy::LuPivots,
            mode: match self.mode {
                BenchMode::Tall => SweepMode::RowsOnly,
                BenchMode::Square => SweepMode::Alternating,
            },
            greedy: self.greedy,
            rel_vol_tol: Some(REL_VOL_TOL),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub rank: usize,
    pub h: usize,
    pub mean_solves: f64,
    pub std_solves: f64,
    pub mean_time_sec: f64,
}

/// Solve counts of every trial for one `(rank, h)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub rank: usize,
    pub h: usize,
    pub solves: Vec<usize>,
    pub seconds: Vec<f64>,
}

impl BenchCell {
    pub fn row(&self) -> BenchRow {
        let solves: Vec<f64> = self.solves.iter().map(|&s| s as f64).collect();
        let (mean, std) = mean_std(&solves);
        let (mean_time, _) = mean_std(&self.seconds);
        BenchRow {
            rank: self.rank,
            h: self.h,
            mean_solves: mean,
            std_solves: std,
            mean_time_sec: mean_time,
        }
    }
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// The matrix and starting block of one `(rank, trial)`, shared by every `h`.
pub fn trial_instance(spec: &BenchSpec, rank: usize, trial: usize) -> Result<(DenseMatrix, Vec<usize>, Vec<usize>)> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(((rank as u64) << 32) | trial as u64);
    let cols = match spec.mode {
        BenchMode::Tall => rank,
        BenchMode::Square => spec.rows,
    };
    let m = DenseMatrix::from_fn(spec.rows, cols, |_, _| rng.gen_range(-1.0..=1.0));
    let start = initial_submatrix(&m, rank, InitStrategy::RandomIndices { seed: rng.gen() })?;
    Ok((m, start.rows().to_vec(), start.cols().to_vec()))
}

fn run_one(m: &DenseMatrix, rows: &[usize], cols: &[usize], cfg: &MaxvolConfig) -> Result<MaxvolReport> {
    match cfg.mode {
        SweepMode::RowsOnly => maxvol_rows(m, rows, cfg),
        _ => maxvol_general(m, &crate::maxvol::IndexPair::new(rows.to_vec(), cols.to_vec())?, cfg),
    }
}

/// Per-trial results for every `(rank, h)`, ordered by rank then by the
/// order of `h_values`.
pub fn run_bench_cells(spec: &BenchSpec) -> Result<Vec<BenchCell>> {
    spec.validate()?;
    let mut cells = Vec::new();
    for &rank in &spec.ranks {
        let hs: Vec<usize> = spec.h_values.iter().map(|c| c.resolve(rank)).collect();
        let mut rank_cells: Vec<BenchCell> = hs
            .iter()
            .map(|&h| BenchCell {
                rank,
                h,
                solves: Vec::with_capacity(spec.trials),
                seconds: Vec::with_capacity(spec.trials),
            })
            .collect();
        for trial in 0..spec.trials {
            let (m, rows, cols) = trial_instance(spec, rank, trial)?;
            for cell in &mut rank_cells {
                let cfg = spec.config(cell.h);
                let t = Instant::now();
                let report = run_one(&m, &rows, &cols, &cfg)?;
                cell.seconds.push(t.elapsed().as_secs_f64());
                cell.solves.push(report.solve_count);
            }
        }
        cells.extend(rank_cells);
    }
    Ok(cells)
}

pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    Ok(run_bench_cells(spec)?.iter().map(BenchCell::row).collect())
}

pub fn emit_report(rows: &[BenchRow]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(REPORT_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))
}

pub fn parse_report(bytes: &[u8]) -> Result<Vec<BenchRow>> {
    let mut r = csv::Reader::from_reader(bytes);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>().join(",") != REPORT_HEADER {
        return Err(Error::MalformedHeader(format!("unexpected bench header {headers:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: BenchMode) -> BenchSpec {
        let mut s = BenchSpec::new(60, vec![3, 6], vec![HChoice::Fixed(1), HChoice::Rank], 3, mode);
        s.seed = 11;
        s
    }

    #[test]
    fn rank_one_tall_is_cheap() {
        let mut s = BenchSpec::new(100, vec![1], vec![HChoice::Fixed(1)], 1, BenchMode::Tall);
        s.seed = 5;
        let rows = run_bench(&s).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].mean_solves >= 1.0 && rows[0].mean_solves <= 2.0, "{rows:?}");
    }

    #[test]
    fn deterministic_solve_counts() {
        for mode in [BenchMode::Tall, BenchMode::Square] {
            let a = run_bench_cells(&small(mode)).unwrap();
            let b = run_bench_cells(&small(mode)).unwrap();
            let counts = |c: &[BenchCell]| c.iter().map(|c| c.solves.clone()).collect::<Vec<_>>();
            assert_eq!(counts(&a), counts(&b));
            assert_eq!(a.iter().map(|c| (c.rank, c.h)).collect::<Vec<_>>(), vec![(3, 1), (3, 3), (6, 1), (6, 6)]);
        }
    }

    #[test]
    fn instances_do_not_depend_on_h() {
        let s = small(BenchMode::Square);
        let (m1, r1, c1) = trial_instance(&s, 3, 1).unwrap();
        let (m2, r2, c2) = trial_instance(&s, 3, 1).unwrap();
        assert_eq!((m1, r1, c1), (m2, r2, c2));
        let (m3, _, _) = trial_instance(&s, 3, 2).unwrap();
        assert_ne!(trial_instance(&s, 3, 1).unwrap().0, m3);
    }

    #[test]
    fn report_round_trip() {
        assert_eq!(emit_report(&[]).unwrap(), format!("{REPORT_HEADER}\n").into_bytes());
        let rows = vec![BenchRow {
            rank: 30,
            h: 4,
            mean_solves: 31.25,
            std_solves: 2.5,
            mean_time_sec: 0.001,
        }];
        let text = emit_report(&rows).unwrap();
        assert_eq!(String::from_utf8(text.clone()).unwrap().lines().count(), 2);
        assert_eq!(parse_report(&text).unwrap(), rows);
        assert!(parse_report(b"a,b\n1,2\n").is_err());
    }

    #[test]
    fn spec_validation() {
        let mut s = small(BenchMode::Tall);
        s.trials = 0;
        assert!(run_bench(&s).is_err());
        let mut s = small(BenchMode::Tall);
        s.ranks = vec![61];
        assert!(run_bench(&s).is_err());
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.2909944487358056).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), (7.0, 0.0));
    }
}
