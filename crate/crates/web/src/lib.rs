//! Browser bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function so the logic also
//! runs (and is tested) natively.

use crossmax::densemat::DenseMatrix;
use crossmax::imgcodec::{compress, decompress, GrayImage, Target};
use crossmax::maxvol::{initial_submatrix, maxvol_general, InitStrategy, MaxvolConfig, SweepMode};
use crossmax::polylsq::{fit_function, test_function, FitMethod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

/// Decoded image and its statistics.
#[wasm_bindgen]
pub struct Reconstruction {
    pixels: Vec<u8>,
    rank: usize,
    psnr: f64,
    ratio: f64,
}

#[wasm_bindgen]
impl Reconstruction {
    #[wasm_bindgen(getter)]
    pub fn pixels(&self) -> Vec<u8> {
        self.pixels.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `Infinity` for a lossless result.
    #[wasm_bindgen(getter)]
    pub fn psnr(&self) -> f64 {
        self.psnr
    }

    #[wasm_bindgen(getter)]
    pub fn ratio(&self) -> f64 {
        self.ratio
    }
}

pub fn reconstruct_image(width: usize, height: usize, pixels: &[u8], rank: usize, h: usize) -> Result<Reconstruction, String> {
    let img = GrayImage::new(width, height, pixels.to_vec()).map_err(|e| e.to_string())?;
    let out = compress(&img, Target::Rank(rank), &MaxvolConfig::default().with_h(h)).map_err(|e| e.to_string())?;
    let back = decompress(&out.image).map_err(|e| e.to_string())?;
    Ok(Reconstruction {
        pixels: back.pixels().to_vec(),
        rank: out.image.rank(),
        psnr: out.psnr,
        ratio: out.image.ratio(),
    })
}

/// Rank-`rank` cross reconstruction of a grayscale raster.
#[wasm_bindgen(js_name = compressImage)]
pub fn compress_image(width: usize, height: usize, pixels: &[u8], rank: usize, h: usize) -> Result<Reconstruction, JsError> {
    reconstruct_image(width, height, pixels, rank, h).map_err(|e| JsError::new(&e))
}

/// Flat `[x0, y0, x1, y1, …, relError]`: pivotal sample locations of a
/// degree-`degree` fit on a `grid × grid` mesh, then the fit's relative
/// error on a 101² mesh.
pub fn pivotal_layout(function: &str, degree: usize, grid: usize) -> Result<Vec<f64>, String> {
    let f = test_function(function).map_err(|e| e.to_string())?;
    let (report, samples) =
        fit_function(f, degree, grid, 101, FitMethod::Pivotal, &MaxvolConfig::default()).map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = report
        .pivotal_rows
        .iter()
        .flat_map(|&i| {
            let (x, y) = samples.points()[i];
            [x, y]
        })
        .collect();
    out.push(report.rel_error.unwrap_or(f64::NAN));
    Ok(out)
}

#[wasm_bindgen(js_name = pivotalPoints)]
pub fn pivotal_points(function: &str, degree: usize, grid: usize) -> Result<Vec<f64>, JsError> {
    pivotal_layout(function, degree, grid).map_err(|e| JsError::new(&e))
}

/// `ln |det|` after every swap batch for a random `n × n` matrix, rank `r`,
/// greedy width `h`, from a random start.
pub fn volume_trace(n: usize, r: usize, h: usize, seed: u64) -> Result<Vec<f64>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0));
    let cfg = MaxvolConfig::default()
        .with_h(h)
        .with_mode(SweepMode::Alternating)
        .with_init(InitStrategy::RandomIndices { seed });
    let start = initial_submatrix(&m, r, cfg.init).map_err(|e| e.to_string())?;
    let report = maxvol_general(&m, &start, &cfg).map_err(|e| e.to_string())?;
    Ok(report.log_vol_trace)
}

#[wasm_bindgen(js_name = maxvolTrace)]
pub fn maxvol_trace(n: usize, r: usize, h: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    volume_trace(n, r, h, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_raster_is_exact() {
        let pixels: Vec<u8> = (0..6 * 4).map(|k| ((k % 6 + 1) * (k / 6 + 1) * 5) as u8).collect();
        let r = reconstruct_image(6, 4, &pixels, 1, 1).unwrap();
        assert_eq!(r.pixels, pixels);
        assert_eq!(r.psnr, f64::INFINITY);
        assert!(reconstruct_image(6, 4, &pixels[1..], 1, 1).is_err());
    }

    #[test]
    fn pivotal_layout_shape() {
        let v = pivotal_layout("franke", 4, 21).unwrap();
        assert_eq!(v.len(), 2 * 15 + 1);
        assert!(v[..30].iter().all(|c| (-1.0..=1.0).contains(c)));
        assert!(pivotal_layout("nope", 4, 21).is_err());
    }

    #[test]
    fn trace_increases() {
        let t = volume_trace(40, 5, 2, 3).unwrap();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }
}
