//! Saliency-map evaluation. AUC-Judd, NSS and information gain score a map
//! against fixated pixels; SIM, CC and KL compare two maps as distributions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::saliency::PixelSet;
use crate::types::{NormMode, SaliencyMap};

pub const DEFAULT_EPS: f64 = 1e-9;

fn same_dims(a: &SaliencyMap, b: &SaliencyMap) -> Result<()> {
    if a.dims() != b.dims() {
        let ((aw, ah), (bw, bh)) = (a.dims(), b.dims());
        return Err(Error::DimensionMismatch(aw, ah, bw, bh));
    }
    Ok(())
}

fn fixated_values(pred: &SaliencyMap, fix: &PixelSet) -> Result<Vec<f64>> {
    if fix.is_empty() {
        return Err(Error::EmptyFixations);
    }
    fix.iter()
        .map(|&(x, y)| {
            if x < pred.width() && y < pred.height() {
                Ok(pred.get(x, y))
            } else {
                Err(Error::InvalidParameter(format!(
                    "fixation ({x}, {y}) outside {}x{} map",
                    pred.width(),
                    pred.height()
                )))
            }
        })
        .collect()
}

fn distribution(map: &SaliencyMap) -> Result<SaliencyMap> {
    if !(map.sum() > 0.0) {
        return Err(Error::ZeroMass);
    }
    Ok(map.clone().normalized(NormMode::Sum1))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")))
    }
}

/// Area under the ROC curve with fixated pixels as positives and all other
/// pixels as negatives. Thresholds are the distinct predicted values at
/// fixated pixels.
pub fn auc_judd(pred: &SaliencyMap, fix: &PixelSet) -> Result<f64> {
    let mut fixated_sorted = fixated_values(pred, fix)?;
    fixated_sorted.sort_by(|a, b| b.total_cmp(a));
    let n_fix = fixated_sorted.len();
    let n_neg = pred.values().len() - n_fix;
    let mut positives = fixated_sorted.clone();
    positives.dedup();

    // all pixel values, descending, to count pixels above each threshold
    let mut all = pred.values().to_vec();
    all.sort_by(|a, b| b.total_cmp(a));

    let mut points = vec![(0.0, 0.0)];
    let (mut above_all, mut above_fix) = (0usize, 0usize);
    for &t in &positives {
        while above_all < all.len() && all[above_all] >= t {
            above_all += 1;
        }
        while above_fix < fixated_sorted.len() && fixated_sorted[above_fix] >= t {
            above_fix += 1;
        }
        let tp = above_fix as f64 / n_fix as f64;
        let fp = if n_neg == 0 {
            0.0
        } else {
            (above_all - above_fix) as f64 / n_neg as f64
        };
        points.push((fp, tp));
    }
    points.push((1.0, 1.0));
    Ok(points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum())
}

/// Mean z-scored saliency at fixated pixels (population standard deviation).
pub fn nss(pred: &SaliencyMap, fix: &PixelSet) -> Result<f64> {
    let at_fix = fixated_values(pred, fix)?;
    let values = pred.values();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    if !(std > 0.0) || std < mean.abs() * 1e-14 {
        return Err(Error::ZeroVariance);
    }
    Ok(at_fix.iter().map(|v| (v - mean) / std).sum::<f64>() / at_fix.len() as f64)
}

/// Information gain over a baseline, in bits per fixation.
pub fn info_gain(pred: &SaliencyMap, baseline: &SaliencyMap, fix: &PixelSet, eps: f64) -> Result<f64> {
    same_dims(pred, baseline)?;
    check_eps(eps)?;
    let p = distribution(pred)?;
    let b = distribution(baseline)?;
    let pv = fixated_values(&p, fix)?;
    let bv = fixated_values(&b, fix)?;
    let total: f64 = pv
        .iter()
        .zip(&bv)
        .map(|(p, b)| (p + eps).log2() - (b + eps).log2())
        .sum();
    Ok(total / pv.len() as f64)
}

/// Histogram intersection of the two maps as distributions.
pub fn sim(pred: &SaliencyMap, gt: &SaliencyMap) -> Result<f64> {
    same_dims(pred, gt)?;
    let p = distribution(pred)?;
    let g = distribution(gt)?;
    Ok(p.values().iter().zip(g.values()).map(|(a, b)| a.min(*b)).sum())
}

/// Pearson correlation over pixels.
pub fn cc(pred: &SaliencyMap, gt: &SaliencyMap) -> Result<f64> {
    same_dims(pred, gt)?;
    let n = pred.values().len() as f64;
    let mp = pred.sum() / n;
    let mg = gt.sum() / n;
    let (mut cov, mut vp, mut vg) = (0.0, 0.0, 0.0);
    for (a, b) in pred.values().iter().zip(gt.values()) {
        let (da, db) = (a - mp, b - mg);
        cov += da * db;
        vp += da * da;
        vg += db * db;
    }
    if !(vp > 0.0 && vg > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((cov / (vp.sqrt() * vg.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    Nats,
    Bits,
}

/// KL(gt ‖ pred) in nats, both maps as distributions. `eps` regularizes both
/// sides of the ratio, so identical maps score exactly zero and a zero
/// prediction under ground-truth mass stays finite.
pub fn kl_div(pred: &SaliencyMap, gt: &SaliencyMap, eps: f64) -> Result<f64> {
    kl_div_base(pred, gt, eps, LogBase::Nats)
}

pub fn kl_div_base(pred: &SaliencyMap, gt: &SaliencyMap, eps: f64, base: LogBase) -> Result<f64> {
    same_dims(pred, gt)?;
    check_eps(eps)?;
    let g = distribution(gt)?;
    // an all-zero prediction is a legal (worst-case) input
    let p = if pred.sum() > 0.0 {
        pred.clone().normalized(NormMode::Sum1)
    } else {
        pred.clone()
    };
    let nats: f64 = g
        .values()
        .iter()
        .zip(p.values())
        .filter(|(g, _)| **g > 0.0)
        .map(|(g, p)| g * ((g + eps) / (p + eps)).ln())
        .sum();
    let nats = nats.max(0.0);
    Ok(match base {
        LogBase::Nats => nats,
        LogBase::Bits => nats / std::f64::consts::LN_2,
    })
}
