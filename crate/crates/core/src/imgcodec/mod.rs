//! Integer-preserving grayscale compression by cross approximation.
//!
//! The encoder picks a dominant `r × r` block `M(I,J)` of the pixel matrix and
//! stores only the integer panels `M(I,:)` and `M(Iᶜ,J)`, i.e.
//! `r·width + r·height − r²` pixels. The decoder rebuilds
//! `M(:,J) M(I,J)⁻¹ M(I,:)` and rounds it back to 8 bits.

mod pgm;
mod xcur;

pub use pgm::{load_pgm, save_pgm};
pub use xcur::{encoded_len, xcur_decode, xcur_encode, HEADER_LEN, MAGIC, VERSION};

use serde::Serialize;

use crate::densemat::{lu_factor, DenseMatrix};
use crate::maxvol::{find_dominant, MaxvolConfig, SweepMode};
use crate::{Error, Result};

/// First rank probed by the PSNR-target search.
pub const PSNR_SEARCH_START: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::TruncatedData {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// `height × width` matrix of pixel values.
    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.height, self.width, |i, j| {
            f64::from(self.pixels[i * self.width + j])
        })
    }

    /// Rounds half away from zero and clamps to `[0, 255]`.
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        let pixels = m.data().iter().map(|&v| v.round().clamp(0.0, 255.0) as u8).collect();
        Self {
            width: m.cols(),
            height: m.rows(),
            pixels,
        }
    }
}

/// `10 log10(255² / MSE)`; `+inf` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{} image",
            a.width, a.height, b.width, b.height
        )));
    }
    let sse: f64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / a.pixels.len() as f64;
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

/// Stored panels of a cross-compressed image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedImage {
    width: usize,
    height: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    row_panel: Vec<u8>,
    col_panel_complement: Vec<u8>,
}

impl CompressedImage {
    /// Validates shapes and index order; does not check the core block.
    pub fn from_parts(
        width: usize,
        height: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        row_panel: Vec<u8>,
        col_panel_complement: Vec<u8>,
    ) -> Result<Self> {
        let r = rows.len();
        if cols.len() != r || r == 0 || r > width.min(height) {
            return Err(Error::IndexOutOfRange(format!(
                "{} rows and {} columns selected in a {width}x{height} image",
                r,
                cols.len()
            )));
        }
        for (set, limit) in [(&rows, height), (&cols, width)] {
            if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&i| i >= limit) {
                return Err(Error::IndexOutOfRange(format!(
                    "indices {set:?} must be strictly increasing and below {limit}"
                )));
            }
        }
        let expected = r * width + (height - r) * r;
        let found = row_panel.len() + col_panel_complement.len();
        if row_panel.len() != r * width || col_panel_complement.len() != (height - r) * r {
            return Err(Error::LengthMismatch { expected, found });
        }
        Ok(Self {
            width,
            height,
            rows,
            cols,
            row_panel,
            col_panel_complement,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// `M(I, :)`, `r × width`.
    pub fn row_panel(&self) -> &[u8] {
        &self.row_panel
    }

    /// `M(Iᶜ, J)`, `(height − r) × r`.
    pub fn col_panel_complement(&self) -> &[u8] {
        &self.col_panel_complement
    }

    /// `r·width + r·height − r²`.
    pub fn stored_entry_count(&self) -> usize {
        self.row_panel.len() + self.col_panel_complement.len()
    }

    /// Stored entries over the pixel count.
    pub fn ratio(&self) -> f64 {
        self.stored_entry_count() as f64 / (self.width * self.height) as f64
    }

    fn from_image(img: &GrayImage, rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        let mut row_panel = Vec::with_capacity(rows.len() * img.width);
        for &i in &rows {
            row_panel.extend_from_slice(&img.pixels[i * img.width..(i + 1) * img.width]);
        }
        let mut complement = Vec::with_capacity((img.height - rows.len()) * cols.len());
        for i in (0..img.height).filter(|i| rows.binary_search(i).is_err()) {
            complement.extend(cols.iter().map(|&j| img.get(j, i)));
        }
        Self::from_parts(img.width, img.height, rows, cols, row_panel, complement)
    }
}

/// Storage ratio of a rank-`r` container without building one.
pub fn storage_ratio(width: usize, height: usize, r: usize) -> f64 {
    (r * width + r * height - r * r) as f64 / (width * height) as f64
}

/// Rebuilds `M(:,J) M(I,J)⁻¹ M(I,:)` from the stored panels.
pub fn decompress(c: &CompressedImage) -> Result<GrayImage> {
    let (w, h, r) = (c.width, c.height, c.rank());
    let row_panel = DenseMatrix::from_fn(r, w, |i, j| f64::from(c.row_panel[i * w + j]));
    let core = row_panel.select_cols(&c.cols);
    let lu = lu_factor(&core)?;
    if lu.is_singular() {
        return Err(Error::SingularCore);
    }
    let mut col_panel = DenseMatrix::zeros(h, r);
    let mut next = 0;
    for y in 0..h {
        match c.rows.binary_search(&y) {
            Ok(pos) => {
                for k in 0..r {
                    col_panel[(y, k)] = core[(pos, k)];
                }
            }
            Err(_) => {
                for k in 0..r {
                    col_panel[(y, k)] = f64::from(c.col_panel_complement[next * r + k]);
                }
                next += 1;
            }
        }
    }
    let coeffs = lu.solve(&row_panel).map_err(|_| Error::SingularCore)?;
    Ok(GrayImage::from_matrix(&col_panel.matmul(&coeffs)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Rank(usize),
    /// Smallest rank whose decoded PSNR reaches this many dB.
    Psnr(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Probe {
    pub rank: usize,
    /// Decoded PSNR; `None` when no nonsingular block of this rank was found.
    pub psnr: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Compression {
    pub image: CompressedImage,
    pub psnr: f64,
    /// Ranks tried by the PSNR search, in order (a single entry for a fixed
    /// rank).
    pub probes: Vec<Probe>,
}

/// Encodes at a single rank and measures the decoded PSNR.
pub fn compress_at_rank(img: &GrayImage, r: usize, cfg: &MaxvolConfig) -> Result<(CompressedImage, f64)> {
    if r == 0 || r > img.width.min(img.height) {
        return Err(Error::InvalidConfig(format!(
            "rank {r} must lie in 1..={}",
            img.width.min(img.height)
        )));
    }
    let mut cfg = *cfg;
    if cfg.mode == SweepMode::RowsOnly {
        cfg.mode = SweepMode::Alternating;
    }
    let report = find_dominant(&img.to_matrix(), r, &cfg)?;
    let c = CompressedImage::from_image(
        img,
        report.indices.rows().to_vec(),
        report.indices.cols().to_vec(),
    )?;
    // the container must decode; its PSNR comes from the same path
    let decoded = decompress(&c)?;
    Ok((c, psnr(img, &decoded)?))
}

pub fn compress(img: &GrayImage, target: Target, cfg: &MaxvolConfig) -> Result<Compression> {
    match target {
        Target::Rank(r) => {
            let (image, db) = compress_at_rank(img, r, cfg)?;
            Ok(Compression {
                image,
                psnr: db,
                probes: vec![Probe {
                    rank: r,
                    psnr: Some(db),
                    passed: true,
                }],
            })
        }
        Target::Psnr(db) => search_rank(img, db, cfg),
    }
}

/// Doubling from [`PSNR_SEARCH_START`] until a rank passes, then bisection
/// between the last failure and the first success. PSNR is not monotone in
/// the rank, so the result is certified only by its own probe.
fn search_rank(img: &GrayImage, target: f64, cfg: &MaxvolConfig) -> Result<Compression> {
    if target.is_nan() || target <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "PSNR target must be positive, got {target}"
        )));
    }
    let mut ceiling = img.width.min(img.height);
    let mut probes = Vec::new();
    let mut best: Option<(CompressedImage, f64)> = None;

    let probe = |r: usize, probes: &mut Vec<Probe>| -> Result<Option<(CompressedImage, f64)>> {
        match compress_at_rank(img, r, cfg) {
            Ok((c, db)) => {
                let passed = db >= target;
                probes.push(Probe { rank: r, psnr: Some(db), passed });
                Ok(Some((c, db)))
            }
            Err(Error::RankDeficient(_)) => {
                probes.push(Probe { rank: r, psnr: None, passed: false });
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };

    let mut lo = 0;
    let mut r = PSNR_SEARCH_START.min(ceiling);
    while best.is_none() {
        match probe(r, &mut probes)? {
            Some((c, db)) if db >= target => best = Some((c, db)),
            Some(_) => {
                lo = r;
                if r == ceiling {
                    return Err(Error::TargetUnachievable {
                        target,
                        max_rank: ceiling,
                    });
                }
                r = (2 * r).min(ceiling);
            }
            None => {
                // no nonsingular block this large; the numerical rank is lower
                ceiling = r - 1;
                if ceiling <= lo {
                    return Err(Error::TargetUnachievable {
                        target,
                        max_rank: ceiling.max(lo),
                    });
                }
                r = ceiling;
            }
        }
    }

    let mut hi = best.as_ref().map(|(c, _)| c.rank()).expect("search found a passing rank");
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match probe(mid, &mut probes)? {
            Some((c, db)) if db >= target => {
                hi = mid;
                best = Some((c, db));
            }
            _ => lo = mid,
        }
    }
    let (image, psnr) = best.expect("search found a passing rank");
    Ok(Compression { image, psnr, probes })
}
