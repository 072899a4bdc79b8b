//! PNG renderings of analysis results. Pixel-exact and deterministic.

use std::path::Path;

use anyhow::Context;
use gazekit::bias::location::HeatGrid;
use gazekit::bias::{ColorPalette, PolarHistogram};
use image::{Rgb, RgbImage};

/// Black-red-yellow-white ramp over [0, 1].
fn hot(t: f64) -> Rgb<u8> {
    let t = t.clamp(0.0, 1.0) * 3.0;
    let c = |v: f64| (v.clamp(0.0, 1.0) * 255.0).round() as u8;
    Rgb([c(t), c(t - 1.0), c(t - 2.0)])
}

pub fn heat_grid(grid: &HeatGrid, cell_px: u32) -> RgbImage {
    let max = grid.counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let (w, h) = (grid.width as u32, grid.height as u32);
    let mut img = RgbImage::from_fn(w * cell_px, h * cell_px, |x, y| {
        let (cx, cy) = ((x / cell_px) as usize, (y / cell_px) as usize);
        hot(grid.counts[cy * grid.width + cx] as f64 / max)
    });
    // quadrant midlines
    let (mx, my) = (img.width() / 2, img.height() / 2);
    for y in (0..img.height()).filter(|y| (y / 4) % 2 == 0) {
        img.put_pixel(mx, y, Rgb([90, 160, 255]));
    }
    for x in (0..img.width()).filter(|x| (x / 4) % 2 == 0) {
        img.put_pixel(x, my, Rgb([90, 160, 255]));
    }
    img
}

/// Wedge per angle bin with radius proportional to its count; 0° points
/// right and angles grow clockwise, matching screen coordinates.
pub fn polar(hist: &PolarHistogram, size: u32) -> RgbImage {
    let max = hist.bins.iter().map(|b| b.count).max().unwrap_or(0).max(1) as f64;
    let c = size as f64 / 2.0;
    let r_max = c - 4.0;
    RgbImage::from_fn(size, size, |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - c, y as f64 + 0.5 - c);
        let r = dx.hypot(dy);
        let angle = dy.atan2(dx).to_degrees().rem_euclid(360.0);
        let bin = ((angle / hist.bin_width_deg) as usize).min(hist.bins.len() - 1);
        let reach = r_max * hist.bins[bin].count as f64 / max;
        if r <= reach {
            Rgb([220, 80, 40])
        } else if (r - r_max).abs() < 0.7 || (r - r_max / 2.0).abs() < 0.5 {
            Rgb([170, 170, 170])
        } else {
            Rgb([255, 255, 255])
        }
    })
}

/// One horizontal bar per palette color, length proportional to `weight`.
pub fn palette_bars(palette: &ColorPalette, weight: impl Fn(usize) -> f64, bar_h: u32, width: u32) -> RgbImage {
    let n = palette.colors.len() as u32;
    let weights: Vec<f64> = (0..palette.colors.len()).map(&weight).collect();
    let max = weights.iter().copied().fold(0.0, f64::max);
    RgbImage::from_fn(width, n * bar_h, |x, y| {
        let i = (y / bar_h) as usize;
        let len = if max > 0.0 { weights[i] / max * width as f64 } else { 0.0 };
        if y % bar_h == bar_h - 1 || x as f64 >= len.max(2.0) {
            Rgb([255, 255, 255])
        } else {
            Rgb(palette.colors[i].centroid.map(|v| v.round().clamp(0.0, 255.0) as u8))
        }
    })
}

pub fn save(img: &RgbImage, path: &Path) -> anyhow::Result<()> {
    img.save(path).with_context(|| format!("writing {}", path.display()))
}
