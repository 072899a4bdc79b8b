//! Saliency maps from recorded fixations, and bottom-up conspicuity maps from
//! pixels.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ingest::truncate_to_duration;
use crate::types::{to_pixel, ImageMeta, NormMode, SaliencyMap, Scanpath};

pub mod io;
pub mod itti_koch;
pub mod plane;

pub use itti_koch::{itti_koch_conspicuity, itti_koch_saliency, Conspicuity, IttiKochConfig};
pub use plane::Plane;

/// Isotropic Gaussian used to blur fixations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernelSpec {
    pub sigma_px: f64,
    /// Kernel support radius in multiples of sigma.
    pub truncation_radius: f64,
}

/// Default kernel width as a fraction of the image diagonal (about one degree
/// of visual angle on the study display).
pub const DEFAULT_SIGMA_FRAC: f64 = 0.02;

impl GaussianKernelSpec {
    pub fn new(sigma_px: f64) -> Result<Self> {
        if !(sigma_px.is_finite() && sigma_px > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma_px = {sigma_px}")));
        }
        Ok(Self {
            sigma_px,
            truncation_radius: 3.0,
        })
    }

    /// `frac` times the image diagonal.
    pub fn from_diagonal_fraction(width: u32, height: u32, frac: f64) -> Result<Self> {
        Self::new(frac * (width as f64).hypot(height as f64))
    }

    pub fn for_image(meta: &ImageMeta) -> Self {
        Self::from_diagonal_fraction(meta.width, meta.height, DEFAULT_SIGMA_FRAC)
            .expect("image dimensions are positive")
    }

    fn radius(&self) -> usize {
        (self.truncation_radius * self.sigma_px).ceil() as usize
    }

    /// `exp(-k^2 / 2 sigma^2)` for `k = 0..=radius`.
    fn profile(&self) -> Vec<f64> {
        let two_var = 2.0 * self.sigma_px * self.sigma_px;
        (0..=self.radius())
            .map(|k| (-((k * k) as f64) / two_var).exp())
            .collect()
    }
}

fn included<'a>(
    scanpaths: &'a [Scanpath],
    meta: &'a ImageMeta,
    horizon_s: f64,
) -> Result<impl Iterator<Item = (usize, usize, f64)> + 'a> {
    if let Some(sp) = scanpaths.iter().find(|sp| sp.image_id != meta.image_id) {
        return Err(Error::InvalidParameter(format!(
            "scanpath for image `{}` passed with image `{}`",
            sp.image_id, meta.image_id
        )));
    }
    let (w, h) = (meta.width as usize, meta.height as usize);
    Ok(scanpaths.iter().flat_map(move |sp| {
        truncate_to_duration(sp, horizon_s)
            .fixations()
            .iter()
            .filter(|f| f.in_bounds())
            .map(|f| (to_pixel(f.x, w), to_pixel(f.y, h), f.duration_s))
            .collect::<Vec<_>>()
    }))
}

/// Duration-weighted sum of Gaussians, one per included fixation, centered on
/// the fixation's pixel. Unnormalized: a lone fixation of duration `d`
/// contributes `d` at its own pixel.
pub fn fixation_density(
    scanpaths: &[Scanpath],
    meta: &ImageMeta,
    kernel: &GaussianKernelSpec,
    horizon_s: f64,
) -> Result<SaliencyMap> {
    let (w, h) = (meta.width as usize, meta.height as usize);
    let mut values = vec![0.0; w * h];
    let profile = kernel.profile();
    let r = profile.len() - 1;
    for (px, py, weight) in included(scanpaths, meta, horizon_s)? {
        let (x0, x1) = (px.saturating_sub(r), (px + r).min(w - 1));
        let (y0, y1) = (py.saturating_sub(r), (py + r).min(h - 1));
        for y in y0..=y1 {
            let wy = weight * profile[y.abs_diff(py)];
            let row = &mut values[y * w..(y + 1) * w];
            for x in x0..=x1 {
                row[x] += wy * profile[x.abs_diff(px)];
            }
        }
    }
    Ok(SaliencyMap::from_raw_unchecked(w, h, values))
}

/// Peak-normalized fixation map. When no fixation falls before the horizon
/// the map is all zero; check [`SaliencyMap::is_all_zero`].
pub fn fixation_map(
    scanpaths: &[Scanpath],
    meta: &ImageMeta,
    kernel: &GaussianKernelSpec,
    horizon_s: f64,
) -> Result<SaliencyMap> {
    Ok(fixation_density(scanpaths, meta, kernel, horizon_s)?.normalized(NormMode::Max1))
}

/// Distinct fixated pixels `(x, y)`.
pub type PixelSet = BTreeSet<(usize, usize)>;

pub fn binary_fixation_points(
    scanpaths: &[Scanpath],
    meta: &ImageMeta,
    horizon_s: f64,
) -> Result<PixelSet> {
    Ok(included(scanpaths, meta, horizon_s)?
        .map(|(x, y, _)| (x, y))
        .collect())
}
