//! The XCUR container. All integers are little-endian:
//!
//! ```text
//! magic "XCUR"          4 bytes
//! version = 1           u8
//! width, height, r      u32 each
//! I                     r × u32
//! J                     r × u32
//! M(I, :)               r·width bytes, row-major
//! M(Iᶜ, J)              (height − r)·r bytes, row-major
//! ```

use super::CompressedImage;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"XCUR";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 4 + 1 + 3 * 4;

/// Exact encoded size of a container.
pub fn encoded_len(width: usize, height: usize, r: usize) -> usize {
    HEADER_LEN + 8 * r + r * width + (height - r) * r
}

pub fn xcur_encode(c: &CompressedImage) -> Vec<u8> {
    let (w, h, r) = (c.width(), c.height(), c.rank());
    let mut out = Vec::with_capacity(encoded_len(w, h, r));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    for v in [w, h, r] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for &i in c.rows().iter().chain(c.cols()) {
        out.extend_from_slice(&(i as u32).to_le_bytes());
    }
    out.extend_from_slice(c.row_panel());
    out.extend_from_slice(c.col_panel_complement());
    out
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4-byte slice"))
}

pub fn xcur_decode(bytes: &[u8]) -> Result<CompressedImage> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::LengthMismatch {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    if bytes[4] != VERSION {
        return Err(Error::BadVersion(bytes[4]));
    }
    let width = read_u32(bytes, 5) as usize;
    let height = read_u32(bytes, 9) as usize;
    let r = read_u32(bytes, 13) as usize;
    if r == 0 || r > width.min(height) {
        return Err(Error::IndexOutOfRange(format!(
            "rank {r} for a {width}x{height} image"
        )));
    }
    let expected = encoded_len(width, height, r);
    if bytes.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: bytes.len(),
        });
    }
    let mut at = HEADER_LEN;
    let mut take_indices = |limit: usize, name: &str| -> Result<Vec<usize>> {
        let v: Vec<usize> = (0..r).map(|k| read_u32(bytes, at + 4 * k) as usize).collect();
        at += 4 * r;
        if v.iter().any(|&i| i >= limit) {
            return Err(Error::IndexOutOfRange(format!("{name} index beyond {limit}")));
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::IndexOutOfRange(format!(
                "{name} indices are not strictly increasing"
            )));
        }
        Ok(v)
    };
    let rows = take_indices(height, "row")?;
    let cols = take_indices(width, "column")?;
    let panel_end = at + r * width;
    CompressedImage::from_parts(
        width,
        height,
        rows,
        cols,
        bytes[at..panel_end].to_vec(),
        bytes[panel_end..].to_vec(),
    )
}
