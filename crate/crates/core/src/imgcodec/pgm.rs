//! Netpbm graymaps: `P2` (ASCII) and `P5` (binary), 8-bit only.

use super::GrayImage;
use crate::{Error, Result};

struct Header {
    binary: bool,
    width: usize,
    height: usize,
    maxval: u32,
    /// Offset of the first raster byte (P5) or of the first sample (P2).
    data_start: usize,
}

fn skip_space_and_comments(bytes: &[u8], mut pos: usize) -> usize {
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
        } else {
            return pos;
        }
    }
}

fn read_number(bytes: &[u8], pos: usize, what: &str) -> Result<(u32, usize)> {
    let start = skip_space_and_comments(bytes, pos);
    let mut end = start;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == start {
        return Err(Error::MalformedHeader(format!("expected {what}")));
    }
    std::str::from_utf8(&bytes[start..end])
        .ok()
        .and_then(|s| s.parse().ok())
        .map(|v| (v, end))
        .ok_or_else(|| Error::MalformedHeader(format!("{what} out of range")))
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::MalformedHeader("missing P2/P5 magic".into())),
    };
    let (width, pos) = read_number(bytes, 2, "width")?;
    let (height, pos) = read_number(bytes, pos, "height")?;
    let (maxval, pos) = read_number(bytes, pos, "maxval")?;
    if maxval == 0 {
        return Err(Error::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates the header from a binary raster
    if bytes.get(pos).is_some_and(|b| !b.is_ascii_whitespace()) {
        return Err(Error::MalformedHeader("no whitespace after maxval".into()));
    }
    Ok(Header {
        binary,
        width: width as usize,
        height: height as usize,
        maxval,
        data_start: (pos + 1).min(bytes.len()),
    })
}

pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let h = parse_header(bytes)?;
    let expected = h.width * h.height;
    let pixels = if h.binary {
        let raster = bytes.get(h.data_start..).unwrap_or(&[]);
        if raster.len() < expected {
            return Err(Error::TruncatedData {
                expected,
                found: raster.len(),
            });
        }
        raster[..expected].to_vec()
    } else {
        let mut out = Vec::with_capacity(expected);
        let mut pos = h.data_start;
        while out.len() < expected {
            pos = skip_space_and_comments(bytes, pos);
            if pos >= bytes.len() {
                return Err(Error::TruncatedData {
                    expected,
                    found: out.len(),
                });
            }
            let (v, next) = read_number(bytes, pos, "sample")?;
            out.push(v);
            pos = next;
        }
        if let Some(&bad) = out.iter().find(|&&v| v > h.maxval) {
            return Err(Error::MalformedHeader(format!(
                "sample {bad} exceeds maxval {}",
                h.maxval
            )));
        }
        out.into_iter().map(|v| v as u8).collect()
    };
    if let Some(&bad) = pixels.iter().find(|&&v| u32::from(v) > h.maxval) {
        return Err(Error::MalformedHeader(format!(
            "sample {bad} exceeds maxval {}",
            h.maxval
        )));
    }
    GrayImage::new(h.width, h.height, pixels)
}

/// Canonical binary form: `P5\n<w> <h>\n255\n` followed by the raster.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}
