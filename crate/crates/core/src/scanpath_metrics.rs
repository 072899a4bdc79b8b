//! Scanpath-to-scanpath comparison: DTW, time-delay embedding distance,
//! Eyenalysis double mapping, and the cross-recurrence measures REC, DET and
//! CORM.
//!
//! Distances are Euclidean in image-normalized coordinates unless a
//! [`MetricSpace`] rescales the axes (e.g. to pixels).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Scanpath;

type Point = (f64, f64);

#[inline]
fn dist(a: Point, b: Point) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt()
}

fn non_empty(a: &Scanpath, b: &Scanpath) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        Err(Error::EmptyScanpath)
    } else {
        Ok(())
    }
}

/// Dynamic time warping cost with match/insert/delete steps, both ends
/// aligned, no window and no length normalization.
pub fn dtw(a: &Scanpath, b: &Scanpath) -> Result<f64> {
    non_empty(a, b)?;
    Ok(dtw_points(&a.points(), &b.points()))
}

pub(crate) fn dtw_points(a: &[Point], b: &[Point]) -> f64 {
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for &p in a {
        cur[0] = f64::INFINITY;
        for j in 1..=m {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = dist(p, b[j - 1]) + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Mean, over the length-`k` windows of `a` (the reference path), of the
/// smallest distance to any window of `b`. Windows are compared as
/// 2k-vectors and the distance is divided by `k`.
pub fn tde(a: &Scanpath, b: &Scanpath, k: usize) -> Result<f64> {
    non_empty(a, b)?;
    if k == 0 {
        return Err(Error::InvalidParameter("embedding length k = 0".into()));
    }
    for len in [a.len(), b.len()] {
        if len < k {
            return Err(Error::ScanpathShorterThanK { len, k });
        }
    }
    Ok(tde_points(&a.points(), &b.points(), k))
}

pub(crate) fn tde_points(a: &[Point], b: &[Point], k: usize) -> f64 {
    let window_dist = |wa: &[Point], wb: &[Point]| {
        let sq: f64 = wa
            .iter()
            .zip(wb)
            .map(|(p, q)| (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2))
            .sum();
        sq.sqrt() / k as f64
    };
    let windows_a: Vec<_> = a.windows(k).collect();
    let total: f64 = windows_a
        .iter()
        .map(|wa| {
            b.windows(k)
                .map(|wb| window_dist(wa, wb))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / windows_a.len() as f64
}

/// Each fixation is mapped to its nearest neighbour in the other path, in
/// both directions; the result is the mean of all those distances.
pub fn eyenalysis(a: &Scanpath, b: &Scanpath) -> Result<f64> {
    non_empty(a, b)?;
    Ok(eyenalysis_points(&a.points(), &b.points()))
}

pub(crate) fn eyenalysis_points(a: &[Point], b: &[Point]) -> f64 {
    let nearest = |p: Point, set: &[Point]| set.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min);
    let forward: f64 = a.iter().map(|&p| nearest(p, b)).sum();
    let backward: f64 = b.iter().map(|&p| nearest(p, a)).sum();
    (forward + backward) / (a.len() + b.len()) as f64
}

/// Fraction of the image size used as the recurrence radius.
pub const DEFAULT_REC_THRESHOLD_FRAC: f64 = 0.05;

/// Cross-recurrence between the first `n = min(|a|, |b|)` fixations of two
/// scanpaths: cell `(i, j)` is set iff `a_i` and `b_j` are closer than the
/// threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceMatrix {
    n: usize,
    cells: Vec<bool>,
    threshold: f64,
}

impl RecurrenceMatrix {
    /// Builds a matrix from explicit cells (row-major, `n * n`).
    pub fn from_cells(n: usize, cells: Vec<bool>, threshold: f64) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::InvalidParameter(format!("{} cells for n = {n}", cells.len())));
        }
        if !(threshold > 0.0) {
            return Err(Error::InvalidParameter(format!("threshold {threshold}")));
        }
        Ok(Self { n, cells, threshold })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

/// Threshold = 5% of `image_diag_norm`, the image diagonal in the same units
/// as the fixation coordinates (√2 for unit-square coordinates).
pub fn recurrence_matrix(a: &Scanpath, b: &Scanpath, image_diag_norm: f64) -> Result<RecurrenceMatrix> {
    recurrence_matrix_with_threshold(a, b, DEFAULT_REC_THRESHOLD_FRAC * image_diag_norm)
}

pub fn recurrence_matrix_with_threshold(
    a: &Scanpath,
    b: &Scanpath,
    threshold: f64,
) -> Result<RecurrenceMatrix> {
    non_empty(a, b)?;
    recurrence_points(&a.points(), &b.points(), threshold)
}

pub(crate) fn recurrence_points(a: &[Point], b: &[Point], threshold: f64) -> Result<RecurrenceMatrix> {
    let n = a.len().min(b.len());
    let mut cells = Vec::with_capacity(n * n);
    for &p in &a[..n] {
        for &q in &b[..n] {
            cells.push(dist(p, q) < threshold);
        }
    }
    RecurrenceMatrix::from_cells(n, cells, threshold)
}

/// Percentage of recurrent cells.
pub fn rec(m: &RecurrenceMatrix) -> f64 {
    if m.n == 0 {
        return 0.0;
    }
    100.0 * m.count() as f64 / (m.n * m.n) as f64
}

/// Percentage of recurrent cells lying on a diagonal run of at least
/// `min_line` consecutive recurrences.
pub fn det(m: &RecurrenceMatrix, min_line: usize) -> Result<f64> {
    if min_line < 2 {
        return Err(Error::InvalidParameter(format!("min_line = {min_line}, need >= 2")));
    }
    let total = m.count();
    if total == 0 {
        return Ok(0.0);
    }
    let n = m.n as isize;
    let mut on_lines = 0usize;
    for offset in -(n - 1)..n {
        let mut run = 0usize;
        let (mut i, mut j) = if offset >= 0 { (0, offset) } else { (-offset, 0) };
        while i < n && j < n {
            if m.get(i as usize, j as usize) {
                run += 1;
            } else {
                if run >= min_line {
                    on_lines += run;
                }
                run = 0;
            }
            i += 1;
            j += 1;
        }
        if run >= min_line {
            on_lines += run;
        }
    }
    Ok(100.0 * on_lines as f64 / total as f64)
}

/// Center of recurrence mass: mean lag `j - i` of recurrent cells, as a
/// percentage of the largest possible lag `n - 1`.
pub fn corm(m: &RecurrenceMatrix) -> Result<f64> {
    let count = m.count();
    if count == 0 {
        return Err(Error::NoRecurrences);
    }
    if m.n == 1 {
        return Ok(0.0);
    }
    let mut lag_sum = 0i64;
    for i in 0..m.n {
        for j in 0..m.n {
            if m.get(i, j) {
                lag_sum += j as i64 - i as i64;
            }
        }
    }
    Ok(100.0 * lag_sum as f64 / ((m.n - 1) * count) as f64)
}

/// Axis scaling applied to normalized coordinates before measuring distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "units", rename_all = "lowercase")]
pub enum MetricSpace {
    /// Unit-square coordinates; image diagonal √2.
    Normalized,
    /// Pixel coordinates of a `width x height` image.
    Pixels { width: f64, height: f64 },
}

impl MetricSpace {
    fn scale(&self) -> (f64, f64) {
        match *self {
            MetricSpace::Normalized => (1.0, 1.0),
            MetricSpace::Pixels { width, height } => (width, height),
        }
    }

    pub fn diagonal(&self) -> f64 {
        let (sx, sy) = self.scale();
        sx.hypot(sy)
    }

    fn project(&self, sp: &Scanpath) -> Vec<Point> {
        let (sx, sy) = self.scale();
        sp.fixations().iter().map(|f| (f.x * sx, f.y * sy)).collect()
    }
}

/// Settings for evaluating a predicted scanpath against a reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanpathMetricConfig {
    pub space: MetricSpace,
    pub rec_threshold_frac: f64,
    pub tde_k: usize,
    pub det_min_line: usize,
}

impl Default for ScanpathMetricConfig {
    fn default() -> Self {
        Self {
            space: MetricSpace::Normalized,
            rec_threshold_frac: DEFAULT_REC_THRESHOLD_FRAC,
            tde_k: 3,
            det_min_line: 2,
        }
    }
}

/// All six scores for one pair. Scores that are undefined for the pair
/// (TDE on paths shorter than k, CORM without recurrences) are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanpathScores {
    pub dtw: f64,
    pub tde: Option<f64>,
    pub eyenalysis: f64,
    pub rec: f64,
    pub det: f64,
    pub corm: Option<f64>,
}

impl ScanpathMetricConfig {
    /// Scores `predicted` against the reference path `truth`.
    pub fn evaluate(&self, truth: &Scanpath, predicted: &Scanpath) -> Result<ScanpathScores> {
        non_empty(truth, predicted)?;
        let a = self.space.project(truth);
        let b = self.space.project(predicted);
        let threshold = self.rec_threshold_frac * self.space.diagonal();
        let m = recurrence_points(&a, &b, threshold)?;
        let k = self.tde_k;
        let tde = (k > 0 && a.len() >= k && b.len() >= k).then(|| tde_points(&a, &b, k));
        Ok(ScanpathScores {
            dtw: dtw_points(&a, &b),
            tde,
            eyenalysis: eyenalysis_points(&a, &b),
            rec: rec(&m),
            det: det(&m, self.det_min_line)?,
            corm: corm(&m).ok(),
        })
    }
}
