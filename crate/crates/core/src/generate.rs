//! Winner-take-all scanpaths with inhibition of return.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::saliency::DEFAULT_SIGMA_FRAC;
use crate::types::{pixel_center, Fixation, SaliencyMap, Scanpath};

pub const DEFAULT_N_FIX: usize = 15;
pub const DECAY_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IorVariant {
    /// Every past fixation suppresses with weight 1.
    Plain,
    /// The i-th most recent fixation suppresses with weight max(0, 1 - 0.1(i-1)).
    Decaying,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IorSpec {
    pub sigma_px: f64,
    pub variant: IorVariant,
    /// Most recent fixations that suppress; `None` means all of them.
    pub history_window: Option<usize>,
    /// Mask support radius in sigmas; beyond it the mask is treated as 1.
    pub support_sigmas: f64,
}

impl IorSpec {
    pub fn plain(sigma_px: f64) -> Self {
        Self {
            sigma_px,
            variant: IorVariant::Plain,
            history_window: None,
            support_sigmas: 4.0,
        }
    }

    pub fn decaying(sigma_px: f64) -> Self {
        Self {
            sigma_px,
            variant: IorVariant::Decaying,
            history_window: Some(DECAY_WINDOW),
            support_sigmas: 4.0,
        }
    }

    /// Suppression sigma matching the default fixation-map sigma.
    pub fn default_sigma(width: usize, height: usize) -> f64 {
        DEFAULT_SIGMA_FRAC * ((width * width + height * height) as f64).sqrt()
    }

    /// Weight of the `i`-th most recent fixation (1-based).
    pub fn weight(&self, i: usize) -> f64 {
        match self.variant {
            IorVariant::Plain => 1.0,
            IorVariant::Decaying => (1.0 - 0.1 * (i as f64 - 1.0)).max(0.0),
        }
    }
}

/// Fixation timing for generated scanpaths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub duration_s: f64,
    /// Gap between the end of one fixation and the next onset.
    pub gap_s: f64,
}

impl Timing {
    /// Fixations spread evenly over seven seconds.
    pub fn uniform(n_fix: usize) -> Self {
        Self {
            duration_s: 7.0 / n_fix.max(1) as f64,
            gap_s: 0.0,
        }
    }
}

/// Maximum pixel; ties go to the smallest row-major index.
pub fn argmax_with_ties(map: &SaliencyMap) -> (usize, usize) {
    let i = argmax_values(map.values());
    (i % map.width(), i / map.width())
}

fn argmax_values(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn suppress(work: &mut [f64], width: usize, height: usize, center: (usize, usize), weight: f64, ior: &IorSpec) {
    if weight <= 0.0 {
        return;
    }
    let r = (ior.support_sigmas * ior.sigma_px).ceil();
    let (x0, x1, y0, y1) = if r.is_finite() {
        let r = r as usize;
        (
            center.0.saturating_sub(r),
            (center.0 + r).min(width - 1),
            center.1.saturating_sub(r),
            (center.1 + r).min(height - 1),
        )
    } else {
        (0, width - 1, 0, height - 1)
    };
    let inv = 1.0 / (2.0 * ior.sigma_px * ior.sigma_px);
    for y in y0..=y1 {
        let dy = y as f64 - center.1 as f64;
        for x in x0..=x1 {
            let dx = x as f64 - center.0 as f64;
            work[y * width + x] *= 1.0 - weight * (-(dx * dx + dy * dy) * inv).exp();
        }
    }
}

/// The map the next selection is made on, given fixations so far (oldest first).
pub fn working_map(map: &SaliencyMap, history: &[(usize, usize)], ior: &IorSpec) -> Vec<f64> {
    let (w, h) = map.dims();
    let mut work = map.values().to_vec();
    let window = ior.history_window.unwrap_or(usize::MAX);
    for (i, &c) in history.iter().rev().take(window).enumerate() {
        suppress(&mut work, w, h, c, ior.weight(i + 1), ior);
    }
    work
}

pub fn wta_ior_scanpath(map: &SaliencyMap, n_fix: usize, ior: &IorSpec) -> Result<Scanpath> {
    wta_ior_scanpath_timed(map, n_fix, ior, Timing::uniform(n_fix))
}

/// Winner-take-all selection: pick the argmax, suppress around it, repeat.
/// If suppression drives the whole working map to zero, selection restarts
/// from the unsuppressed map.
pub fn wta_ior_scanpath_timed(map: &SaliencyMap, n_fix: usize, ior: &IorSpec, timing: Timing) -> Result<Scanpath> {
    if n_fix == 0 {
        return Err(Error::NFixZero);
    }
    if map.is_all_zero() {
        return Err(Error::AllZeroMap);
    }
    if !(ior.sigma_px > 0.0) {
        return Err(Error::InvalidParameter(format!("suppression sigma {}", ior.sigma_px)));
    }
    let (w, h) = map.dims();
    let mut history = Vec::with_capacity(n_fix);
    let mut fixations = Vec::with_capacity(n_fix);
    let mut onset = 0.0;
    for _ in 0..n_fix {
        let mut work = working_map(map, &history, ior);
        if work.iter().all(|&v| v <= 0.0) {
            work = map.values().to_vec();
        }
        let i = argmax_values(&work);
        let (x, y) = (i % w, i / w);
        history.push((x, y));
        fixations.push(Fixation::new(pixel_center(x, w), pixel_center(y, h), onset, timing.duration_s)?);
        onset += timing.duration_s + timing.gap_s;
    }
    Scanpath::new(String::new(), String::new(), fixations)
}
