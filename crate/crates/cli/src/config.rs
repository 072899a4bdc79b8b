//! Run configuration: every tolerance, seed and width that affects results.
//! Loaded from a TOML file (all keys optional), then overridden by flags.

use std::path::Path;

use anyhow::Context;
use gazekit::UiType;
use serde::{Deserialize, Serialize};

use crate::InputError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub horizons: Vec<f64>,
    pub sigma_frac: f64,
    pub rec_threshold_frac: f64,
    pub tde_k: usize,
    pub det_min_line: usize,
    pub seed: u64,
    /// 0 lets the pool pick one worker per core.
    pub workers: usize,
    pub ui_type: Option<UiType>,
    pub n_fix: usize,
    pub angle_bins: usize,
    pub palette_k: usize,
    pub eps: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            horizons: vec![1.0, 3.0, 7.0],
            sigma_frac: gazekit::saliency::DEFAULT_SIGMA_FRAC,
            rec_threshold_frac: gazekit::scanpath_metrics::DEFAULT_REC_THRESHOLD_FRAC,
            tde_k: 3,
            det_min_line: 2,
            seed: 0,
            workers: 0,
            ui_type: None,
            n_fix: gazekit::generate::DEFAULT_N_FIX,
            angle_bins: gazekit::bias::DEFAULT_ANGLE_BINS,
            palette_k: 16,
            eps: gazekit::salmap_metrics::DEFAULT_EPS,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read run config {}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| InputError(format!("bad run config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let bad = |m: String| Err(InputError(m).into());
        if self.horizons.is_empty() || self.horizons.iter().any(|h| !(*h > 0.0)) {
            return bad(format!("horizons must be positive, got {:?}", self.horizons));
        }
        if !(self.sigma_frac > 0.0) {
            return bad(format!("sigma_frac must be positive, got {}", self.sigma_frac));
        }
        if !(self.rec_threshold_frac > 0.0) {
            return bad(format!("rec_threshold_frac must be positive, got {}", self.rec_threshold_frac));
        }
        if self.tde_k == 0 || self.det_min_line < 2 || self.n_fix == 0 || self.angle_bins == 0 || self.palette_k == 0 {
            return bad("tde_k, n_fix, angle_bins and palette_k must be >= 1 and det_min_line >= 2".into());
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let text = toml::to_string(self).context("serializing run config")?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn pool(&self) -> anyhow::Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .context("starting worker pool")
    }
}

pub fn parse_horizons(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().trim_end_matches('s').parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect()
}
