//! On-disk map formats.
//!
//! Float grid layout (little-endian):
//!
//! | offset | size | field                         |
//! |--------|------|-------------------------------|
//! | 0      | 4    | magic `GZSM`                  |
//! | 4      | 4    | version, u32 = 1              |
//! | 8      | 4    | width, u32                    |
//! | 12     | 4    | height, u32                   |
//! | 16     | 1    | norm mode (0 raw, 1 max1, 2 sum1) |
//! | 17     | 3    | reserved, zero                |
//! | 20     | 8·w·h| values, f64, row-major        |

use std::io::{Read, Write};
use std::path::Path;

use image::{ImageBuffer, Luma};

use crate::error::{Error, Result};
use crate::types::{NormMode, SaliencyMap};

pub const GRID_MAGIC: &[u8; 4] = b"GZSM";
pub const GRID_VERSION: u32 = 1;
pub const GRID_HEADER_LEN: usize = 20;

pub fn write_grid<W: Write>(mut w: W, map: &SaliencyMap) -> std::io::Result<()> {
    let mut header = [0u8; GRID_HEADER_LEN];
    header[0..4].copy_from_slice(GRID_MAGIC);
    header[4..8].copy_from_slice(&GRID_VERSION.to_le_bytes());
    header[8..12].copy_from_slice(&(map.width() as u32).to_le_bytes());
    header[12..16].copy_from_slice(&(map.height() as u32).to_le_bytes());
    header[16] = map.norm_mode().code();
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(map.values().len() * 8);
    for v in map.values() {
        body.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&body)?;
    w.flush()
}

pub fn read_grid<R: Read>(mut r: R) -> Result<SaliencyMap> {
    let bad = |msg: String| Error::InvalidMap(msg);
    let mut header = [0u8; GRID_HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| bad(format!("short header: {e}")))?;
    if &header[0..4] != GRID_MAGIC {
        return Err(bad("bad magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().expect("4 bytes"));
    let version = word(4);
    if version != GRID_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let (width, height) = (word(8) as usize, word(12) as usize);
    let mode = NormMode::from_code(header[16])
        .ok_or_else(|| bad(format!("unknown norm mode {}", header[16])))?;
    let n = width
        .checked_mul(height)
        .ok_or_else(|| bad("grid too large".into()))?;
    let mut body = vec![0u8; n * 8];
    r.read_exact(&mut body)
        .map_err(|e| bad(format!("truncated body: {e}")))?;
    let values: Vec<f64> = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    // values are stored already normalized; keep them bit-exact
    let map = SaliencyMap::new(width, height, values, NormMode::Raw)?;
    Ok(tag(map, mode))
}

fn tag(mut map: SaliencyMap, mode: NormMode) -> SaliencyMap {
    map.set_mode(mode);
    map
}

pub fn save_grid(path: &Path, map: &SaliencyMap) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_grid(std::io::BufWriter::new(file), map).map_err(|e| Error::io(path, e))
}

pub fn load_grid(path: &Path) -> Result<SaliencyMap> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_grid(std::io::BufReader::new(file))
}

/// 16-bit grayscale rendering of the peak-normalized map.
pub fn to_png16(map: &SaliencyMap) -> ImageBuffer<Luma<u16>, Vec<u16>> {
    let peak = map.max();
    let scale = if peak > 0.0 { 65535.0 / peak } else { 0.0 };
    let data = map
        .values()
        .iter()
        .map(|v| (v * scale).round().clamp(0.0, 65535.0) as u16)
        .collect();
    ImageBuffer::from_raw(map.width() as u32, map.height() as u32, data).expect("buffer sized to map")
}

pub fn save_png16(path: &Path, map: &SaliencyMap) -> Result<()> {
    to_png16(map).save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads any grayscale-convertible image as a peak-normalized map.
pub fn load_png(path: &Path) -> Result<SaliencyMap> {
    let img = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    let gray = img.to_luma16();
    let (w, h) = gray.dimensions();
    let values = gray.into_raw().into_iter().map(|v| v as f64 / 65535.0).collect();
    SaliencyMap::new(w as usize, h as usize, values, NormMode::Max1)
}
