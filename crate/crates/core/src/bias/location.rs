use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::truncate_to_duration;
use crate::stats::{chi_square_gof, holm_bonferroni, kruskal_wallis, Expected};
use crate::types::{to_pixel, Fixation, ImageMeta, Scanpath, StatTestResult, UiType};

/// Screen quadrants; y grows downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quadrant {
    /// top-right
    Q1,
    /// top-left
    Q2,
    /// bottom-left
    Q3,
    /// bottom-right
    Q4,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Half-open halves: the midline belongs to the right and bottom sides.
pub fn quadrant_of(fix: &Fixation) -> Quadrant {
    match (fix.x < 0.5, fix.y < 0.5) {
        (true, true) => Quadrant::Q2,
        (false, true) => Quadrant::Q1,
        (true, false) => Quadrant::Q3,
        (false, false) => Quadrant::Q4,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadrantCounts {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

impl QuadrantCounts {
    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            q1: a[0],
            q2: a[1],
            q3: a[2],
            q4: a[3],
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }

    pub fn get(&self, q: Quadrant) -> f64 {
        self.as_array()[q.index()]
    }

    pub fn total(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

/// Fixation counts on a regular grid over the normalized image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatGrid {
    pub width: usize,
    pub height: usize,
    pub counts: Vec<u64>,
}

impl HeatGrid {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            counts: vec![0; width * height],
        }
    }

    fn add(&mut self, f: &Fixation) {
        let (x, y) = (to_pixel(f.x, self.width), to_pixel(f.y, self.height));
        self.counts[y * self.width + x] += 1;
    }

    fn merge(&mut self, other: &HeatGrid) {
        self.counts.iter_mut().zip(&other.counts).for_each(|(a, b)| *a += b);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationConfig {
    pub horizon_s: f64,
    pub ui_type: Option<UiType>,
    pub grid: (usize, usize),
}

impl Default for LocationConfig {
    fn default() -> Self {
        Self {
            horizon_s: 7.0,
            ui_type: None,
            grid: (48, 30),
        }
    }
}

/// Per-image partial results; merging is exact integer addition, so the
/// merge order never changes the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationAccumulator {
    heat: HeatGrid,
    /// viewer -> quadrant counts summed over that viewer's scanpaths
    per_viewer: BTreeMap<String, [u64; 4]>,
    scanpaths: usize,
    /// per-scanpath counts, for the per-(viewer, image) average
    per_scanpath_sum: [u64; 4],
}

impl LocationAccumulator {
    pub fn new(config: &LocationConfig) -> Self {
        Self {
            heat: HeatGrid::new(config.grid.0, config.grid.1),
            per_viewer: BTreeMap::new(),
            scanpaths: 0,
            per_scanpath_sum: [0; 4],
        }
    }

    pub fn add(&mut self, scanpath: &Scanpath, horizon_s: f64) {
        let counts = self.per_viewer.entry(scanpath.viewer_id.clone()).or_default();
        for f in truncate_to_duration(scanpath, horizon_s).fixations() {
            if !f.in_bounds() {
                continue;
            }
            let q = quadrant_of(f).index();
            counts[q] += 1;
            self.per_scanpath_sum[q] += 1;
            self.heat.add(f);
        }
        self.scanpaths += 1;
    }

    pub fn merge(mut self, other: LocationAccumulator) -> Self {
        self.heat.merge(&other.heat);
        for (viewer, c) in other.per_viewer {
            let mine = self.per_viewer.entry(viewer).or_default();
            for q in 0..4 {
                mine[q] += c[q];
            }
        }
        self.scanpaths += other.scanpaths;
        for q in 0..4 {
            self.per_scanpath_sum[q] += other.per_scanpath_sum[q];
        }
        self
    }

    pub fn finish(self) -> Result<LocationBias> {
        let n_viewers = self.per_viewer.len();
        let totals: [f64; 4] = std::array::from_fn(|q| {
            self.per_viewer.values().map(|c| c[q] as f64).sum::<f64>()
        });
        if n_viewers == 0 || totals.iter().sum::<f64>() == 0.0 {
            return Err(Error::NoData);
        }
        let per_viewer = totals.map(|t| t / n_viewers as f64);
        let per_viewer_image = self.per_scanpath_sum.map(|t| t as f64 / self.scanpaths as f64);
        let omnibus = chi_square_gof(&per_viewer, Expected::EqualProportions)?;

        let viewer_counts: Vec<[f64; 4]> = self
            .per_viewer
            .values()
            .map(|c| c.map(|v| v as f64))
            .collect();
        let mut pairwise = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let pair = [per_viewer[a], per_viewer[b]];
                let chi = chi_square_gof(&pair, Expected::EqualProportions).ok();
                let ga: Vec<f64> = viewer_counts.iter().map(|c| c[a]).collect();
                let gb: Vec<f64> = viewer_counts.iter().map(|c| c[b]).collect();
                let rank_sum = kruskal_wallis(&[&ga, &gb]).ok();
                pairwise.push(PairwiseComparison {
                    a: Quadrant::ALL[a],
                    b: Quadrant::ALL[b],
                    chi_square: chi,
                    chi_square_p_holm: None,
                    rank_sum,
                    rank_sum_p_holm: None,
                });
            }
        }
        adjust(&mut pairwise, |c| c.chi_square.map(|r| r.p_value), |c, p| c.chi_square_p_holm = Some(p));
        adjust(&mut pairwise, |c| c.rank_sum.map(|r| r.p_value), |c, p| c.rank_sum_p_holm = Some(p));

        Ok(LocationBias {
            heat: self.heat,
            totals: QuadrantCounts::from_array(totals),
            per_viewer: QuadrantCounts::from_array(per_viewer),
            per_viewer_image: QuadrantCounts::from_array(per_viewer_image),
            n_viewers,
            n_scanpaths: self.scanpaths,
            omnibus,
            pairwise,
        })
    }
}

fn adjust(
    pairs: &mut [PairwiseComparison],
    p: impl Fn(&PairwiseComparison) -> Option<f64>,
    set: impl Fn(&mut PairwiseComparison, f64),
) {
    let idx: Vec<usize> = (0..pairs.len()).filter(|&i| p(&pairs[i]).is_some()).collect();
    let raw: Vec<f64> = idx.iter().map(|&i| p(&pairs[i]).expect("filtered")).collect();
    for (i, adj) in idx.into_iter().zip(holm_bonferroni(&raw)) {
        set(&mut pairs[i], adj);
    }
}

/// Quadrant pair comparison. `chi_square` tests the two per-viewer average
/// counts against an even split (df = 1); `rank_sum` compares the viewers'
/// counts in the two quadrants with a two-group Kruskal-Wallis (equivalent
/// to a Wilcoxon rank-sum test). Both p-values are Holm-corrected over the
/// six pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub a: Quadrant,
    pub b: Quadrant,
    pub chi_square: Option<StatTestResult>,
    pub chi_square_p_holm: Option<f64>,
    pub rank_sum: Option<StatTestResult>,
    pub rank_sum_p_holm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationBias {
    pub heat: HeatGrid,
    /// Raw counts over all viewers.
    pub totals: QuadrantCounts,
    /// Totals divided by the number of viewers (the omnibus test input).
    pub per_viewer: QuadrantCounts,
    /// Mean count per (viewer, image) scanpath.
    pub per_viewer_image: QuadrantCounts,
    pub n_viewers: usize,
    pub n_scanpaths: usize,
    pub omnibus: StatTestResult,
    pub pairwise: Vec<PairwiseComparison>,
}

/// Quadrant distribution of in-bounds fixations before `horizon_s`, over the
/// images of the configured UI type (all images when unset).
pub fn location_bias(
    scanpaths: &[Scanpath],
    metas: &[ImageMeta],
    config: &LocationConfig,
) -> Result<LocationBias> {
    let types: HashMap<&str, UiType> = metas.iter().map(|m| (m.image_id.as_str(), m.ui_type)).collect();
    let mut acc = LocationAccumulator::new(config);
    for sp in scanpaths {
        if let Some(want) = config.ui_type {
            if types.get(sp.image_id.as_str()) != Some(&want) {
                continue;
            }
        }
        acc.add(sp, config.horizon_s);
    }
    acc.finish()
}
