//! Argument parsing and dispatch for the `crossmax` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use crossmax::bench::{emit_report, run_bench, BenchMode, BenchSpec, HChoice};
use crossmax::cross::{bound_certificate, build_cross};
use crossmax::densemat::read_csv;
use crossmax::imgcodec::{compress, decompress, load_pgm, psnr, save_pgm, xcur_decode, xcur_encode, Target};
use crossmax::maxvol::{IndexPair, MaxvolConfig};
use crossmax::polylsq::{fit_function, test_function, FitMethod, FitReport};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Parser)]
#[command(name = "crossmax", version, about = "Maximal-volume cross approximation toolkit")]
pub struct Cli {
    /// Seed for randomized runs
    #[arg(long, global = true, env = "CROSSMAX_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Dominance slack: stop when every interpolation entry is at most 1 + eps
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub eps: f64,
    #[arg(long, global = true, default_value_t = 200)]
    pub max_sweeps: usize,
    /// Human-readable summary on stderr
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross approximation of a CSV matrix with its error bounds
    Cross(CrossArgs),
    /// PGM image to XCUR container
    Compress(CompressArgs),
    /// XCUR container to PGM image
    Decompress(DecompressArgs),
    /// Polynomial least squares on a grid, full or pivotal
    LsqDemo(LsqArgs),
    /// Solve-count benchmark of the greedy width
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct CrossArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub rank: usize,
    /// Greedy width
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Also write the JSON report here
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["psnr", "rank"])))]
pub struct CompressArgs {
    pub input: PathBuf,
    /// Smallest rank reaching this PSNR in dB
    #[arg(long)]
    pub psnr: Option<f64>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecompressArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Reference image for a PSNR report
    #[arg(long = "ref")]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LsqArgs {
    #[arg(long)]
    pub function: String,
    #[arg(long, default_value_t = 10)]
    pub degree: usize,
    #[arg(long, default_value_t = 51)]
    pub grid: usize,
    #[arg(long, default_value_t = 501)]
    pub eval_grid: usize,
    /// Fit only at the maxvol-selected samples
    #[arg(long)]
    pub pivotal: bool,
    #[arg(long, default_value_t = 1)]
    pub h: usize,
    /// Write the pivotal sample locations as x,y CSV
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Tall,
    Square,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    pub rows: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [30, 60])]
    pub ranks: Vec<usize>,
    /// Greedy widths; `r` means h equal to the rank
    #[arg(long = "h", value_delimiter = ',', value_parser = parse_h, default_value = "1,2,3,4,r")]
    pub h_values: Vec<HChoice>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Tall)]
    pub mode: ModeArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_h(s: &str) -> Result<HChoice, String> {
    if s == "r" {
        return Ok(HChoice::Rank);
    }
    match s.parse::<usize>() {
        Ok(h) if h >= 1 => Ok(HChoice::Fixed(h)),
        _ => Err(format!("expected a positive integer or `r`, got `{s}`")),
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crossmax::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// PSNR as JSON, with `"inf"` for identical images.
fn psnr_value(db: f64) -> Value {
    if db.is_infinite() {
        Value::from("inf")
    } else {
        Value::from(db)
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CrossReport<'a> {
    rank: usize,
    indices: &'a IndexPair,
    chebyshev_error: f64,
    classic_bound: f64,
    improved_bound: f64,
    nu: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ProbeJson {
    rank: usize,
    psnr: Option<Value>,
    passed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CompressReport {
    width: usize,
    height: usize,
    rank: usize,
    psnr: Value,
    stored_entries: usize,
    ratio: f64,
    bytes: usize,
    probes: Vec<ProbeJson>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DecompressReport {
    width: usize,
    height: usize,
    rank: usize,
    psnr: Option<Value>,
}

impl Cli {
    fn maxvol(&self, h: usize) -> MaxvolConfig {
        let mut cfg = MaxvolConfig::default().with_epsilon(self.eps).with_h(h);
        cfg.max_sweeps = self.max_sweeps;
        cfg
    }
}

/// Runs a parsed command; JSON goes to `out`, summaries to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    };
    match &cli.command {
        Command::Cross(a) => {
            let m = read_csv(read(&a.input)?.as_slice())?;
            let rep = crossmax::maxvol::find_dominant(&m, a.rank, &cli.maxvol(a.h))?;
            let cert = bound_certificate(&m, &build_cross(&m, &rep.indices)?, None)?;
            let json = serde_json::to_string_pretty(&CrossReport {
                rank: cert.rank,
                indices: &cert.indices,
                chebyshev_error: cert.chebyshev_error,
                classic_bound: cert.classic_bound,
                improved_bound: cert.improved_bound,
                nu: cert.nu,
            })?;
            if let Some(path) = &a.report {
                write(path, format!("{json}\n").as_bytes())?;
            }
            writeln!(out, "{json}").map_err(io)?;
            if cli.verbose {
                writeln!(
                    err,
                    "rank {} after {} sweeps ({} solves): error {:.3e} <= bound {:.3e} (nu {:.3}, {:?})",
                    cert.rank,
                    rep.sweeps,
                    rep.solve_count,
                    cert.chebyshev_error,
                    cert.nu_dominant_bound,
                    cert.nu,
                    cert.nu_source
                )
                .map_err(io)?;
            }
        }
        Command::Compress(a) => {
            let img = load_pgm(&read(&a.input)?)?;
            let target = match (a.rank, a.psnr) {
                (Some(r), _) => Target::Rank(r),
                (None, Some(db)) => Target::Psnr(db),
                (None, None) => unreachable!("clap requires one target"),
            };
            let c = compress(&img, target, &cli.maxvol(a.h))?;
            let bytes = xcur_encode(&c.image);
            if let Some(path) = &a.output {
                write(path, &bytes)?;
            }
            let report = CompressReport {
                width: img.width(),
                height: img.height(),
                rank: c.image.rank(),
                psnr: psnr_value(c.psnr),
                stored_entries: c.image.stored_entry_count(),
                ratio: c.image.ratio(),
                bytes: bytes.len(),
                probes: c
                    .probes
                    .iter()
                    .map(|p| ProbeJson {
                        rank: p.rank,
                        psnr: p.psnr.map(psnr_value),
                        passed: p.passed,
                    })
                    .collect(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?).map_err(io)?;
            if cli.verbose {
                writeln!(
                    err,
                    "{}x{} at rank {}: {:.2} dB, {} of {} pixels stored",
                    img.width(),
                    img.height(),
                    c.image.rank(),
                    c.psnr,
                    c.image.stored_entry_count(),
                    img.width() * img.height()
                )
                .map_err(io)?;
            }
        }
        Command::Decompress(a) => {
            let c = xcur_decode(&read(&a.input)?)?;
            let img = decompress(&c)?;
            write(&a.output, &save_pgm(&img))?;
            let db = match &a.reference {
                Some(path) => Some(psnr(&load_pgm(&read(path)?)?, &img)?),
                None => None,
            };
            let report = DecompressReport {
                width: img.width(),
                height: img.height(),
                rank: c.rank(),
                psnr: db.map(psnr_value),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?).map_err(io)?;
        }
        Command::LsqDemo(a) => {
            let f = test_function(&a.function)?;
            let method = if a.pivotal { FitMethod::Pivotal } else { FitMethod::FullGrid };
            let (report, grid): (FitReport, _) =
                fit_function(f, a.degree, a.grid, a.eval_grid, method, &cli.maxvol(a.h))?;
            if let Some(path) = &a.points {
                let mut csv = String::from("x,y\n");
                for &i in &report.pivotal_rows {
                    let (x, y) = grid.points()[i];
                    csv.push_str(&format!("{x},{y}\n"));
                }
                write(path, csv.as_bytes())?;
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?).map_err(io)?;
            if cli.verbose {
                writeln!(
                    err,
                    "{} degree {} on {}^2 samples: relative error {:.3e}",
                    a.function,
                    a.degree,
                    a.grid,
                    report.rel_error.unwrap_or(f64::NAN)
                )
                .map_err(io)?;
            }
        }
        Command::Bench(a) => {
            let mode = match a.mode {
                ModeArg::Tall => BenchMode::Tall,
                ModeArg::Square => BenchMode::Square,
            };
            let mut spec = BenchSpec::new(a.rows, a.ranks.clone(), a.h_values.clone(), a.trials, mode);
            spec.seed = cli.seed;
            spec.epsilon = cli.eps;
            spec.max_sweeps = cli.max_sweeps;
            let rows = run_bench(&spec)?;
            let csv = emit_report(&rows)?;
            match &a.output {
                Some(path) => write(path, &csv)?,
                None => out.write_all(&csv).map_err(io)?,
            }
            if cli.verbose {
                for r in &rows {
                    writeln!(
                        err,
                        "rank {:>4} h {:>4}: {:.2} ± {:.2} solves, {:.4}s",
                        r.rank, r.h, r.mean_solves, r.std_solves, r.mean_time_sec
                    )
                    .map_err(io)?;
                }
            }
        }
    }
    Ok(())
}

/// Full process behaviour: exit 0 on success, 2 on usage errors, 1 on
/// anything else with a one-line message.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}
