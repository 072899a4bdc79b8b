use std::collections::{HashMap, HashSet};

use image::RgbImage;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::truncate_to_duration;
use crate::stats::bartlett;
use crate::types::{to_pixel, Scanpath, StatTestResult};

/// Rec. 709 luma of gamma-encoded 8-bit RGB, in [0, 1].
pub fn luma(rgb: [u8; 3]) -> f64 {
    // integer weights keep white at exactly 1
    let w = 2126 * rgb[0] as u32 + 7152 * rgb[1] as u32 + 722 * rgb[2] as u32;
    w as f64 / 2_550_000.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Stop once the relative inertia change drops below this.
    pub tol: f64,
    pub max_pixels_per_image: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            k: 16,
            seed: 0,
            max_iter: 100,
            tol: 1e-4,
            max_pixels_per_image: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonCount {
    pub horizon_s: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaletteColor {
    pub centroid: [f64; 3],
    pub pixel_share: f64,
    pub fixation_counts: Vec<HorizonCount>,
}

impl PaletteColor {
    pub fn count_at(&self, horizon_s: f64) -> Option<u64> {
        self.fixation_counts
            .iter()
            .find(|c| c.horizon_s == horizon_s)
            .map(|c| c.count)
    }

    pub fn hex(&self) -> String {
        let c = self.centroid.map(|v| v.round().clamp(0.0, 255.0) as u8);
        format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorPalette {
    pub colors: Vec<PaletteColor>,
}

impl ColorPalette {
    /// Index of the centroid closest to `rgb`; ties go to the lower index.
    pub fn nearest(&self, rgb: [f64; 3]) -> usize {
        let centroids: Vec<[f64; 3]> = self.colors.iter().map(|c| c.centroid).collect();
        nearest(&centroids, &rgb).0
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}

fn nearest(centroids: &[[f64; 3]], p: &[f64; 3]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, c) in centroids.iter().enumerate() {
        let d = dist2(c, p);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn rgb_f64(p: &image::Rgb<u8>) -> [f64; 3] {
    [p[0] as f64, p[1] as f64, p[2] as f64]
}

fn sample_pixels(images: &[&RgbImage], per_image: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for img in images {
        let raw: Vec<&image::Rgb<u8>> = img.pixels().collect();
        if raw.len() <= per_image {
            out.extend(raw.iter().map(|p| rgb_f64(p)));
        } else {
            let mut picked = index::sample(rng, raw.len(), per_image).into_vec();
            picked.sort_unstable();
            out.extend(picked.into_iter().map(|i| rgb_f64(raw[i])));
        }
    }
    out
}

fn kmeans_pp_init(points: &[[f64; 3]], k: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 3]> {
    let mut centroids = vec![points[rng.random_range(0..points.len())]];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = d2.iter().rposition(|&d| d > 0.0).expect("total > 0");
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 && target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[next];
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(dist2(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// Lloyd iterations; returns centroids and per-cluster member counts.
fn lloyd(points: &[[f64; 3]], mut centroids: Vec<[f64; 3]>, cfg: &KMeansConfig) -> (Vec<[f64; 3]>, Vec<usize>) {
    let k = centroids.len();
    let mut assign = vec![0usize; points.len()];
    let mut prev_inertia = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let mut inertia = 0.0;
        for (a, p) in assign.iter_mut().zip(points) {
            let (i, d) = nearest(&centroids, p);
            *a = i;
            inertia += d;
        }
        let mut sums = vec![[0.0; 3]; k];
        let mut counts = vec![0usize; k];
        for (&a, p) in assign.iter().zip(points) {
            counts[a] += 1;
            for c in 0..3 {
                sums[a][c] += p[c];
            }
        }
        for j in 0..k {
            if counts[j] > 0 {
                centroids[j] = sums[j].map(|s| s / counts[j] as f64);
            } else {
                // reseed an empty cluster at the worst-served point
                let far = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i, nearest(&centroids, p).1))
                    .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
                centroids[j] = points[far.0];
            }
        }
        let converged = prev_inertia.is_finite()
            && (prev_inertia - inertia).abs() <= cfg.tol * prev_inertia.max(f64::MIN_POSITIVE);
        prev_inertia = inertia;
        if converged || inertia == 0.0 {
            break;
        }
    }
    let mut counts = vec![0usize; k];
    for p in points {
        counts[nearest(&centroids, p).0] += 1;
    }
    (centroids, counts)
}

/// Dominant colors by k-means (k-means++ seeding) over subsampled pixels of
/// all images, ordered by pixel share.
pub fn color_palette(images: &[&RgbImage], config: &KMeansConfig) -> Result<ColorPalette> {
    if config.k == 0 {
        return Err(Error::InvalidParameter("k = 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = sample_pixels(images, config.max_pixels_per_image, &mut rng);
    if points.is_empty() {
        return Err(Error::NoData);
    }
    let distinct: HashSet<[u64; 3]> = points.iter().map(|p| p.map(|v| v.to_bits())).collect();
    if distinct.len() < config.k {
        return Err(Error::KTooLarge {
            k: config.k,
            distinct: distinct.len(),
        });
    }
    let init = kmeans_pp_init(&points, config.k, &mut rng);
    let (centroids, counts) = lloyd(&points, init, config);
    let n = points.len() as f64;
    let mut colors: Vec<PaletteColor> = centroids
        .into_iter()
        .zip(counts)
        .map(|(centroid, c)| PaletteColor {
            centroid,
            pixel_share: c as f64 / n,
            fixation_counts: Vec::new(),
        })
        .collect();
    colors.sort_by(|a, b| b.pixel_share.total_cmp(&a.pixel_share));
    Ok(ColorPalette { colors })
}

/// Pixel under an in-bounds fixation.
fn fixated_pixel(img: &RgbImage, x: f64, y: f64) -> [u8; 3] {
    let (w, h) = (img.width() as usize, img.height() as usize);
    img.get_pixel(to_pixel(x, w) as u32, to_pixel(y, h) as u32).0
}

/// Votes each fixation before `horizon_s` for the cluster nearest its pixel
/// and reorders the palette by votes (stable, so zero votes keep the
/// pixel-share order). Scanpaths whose image is missing are skipped.
pub fn fixated_color_ranking(
    palette: &ColorPalette,
    images: &HashMap<String, RgbImage>,
    scanpaths: &[Scanpath],
    horizon_s: f64,
) -> ColorPalette {
    let mut votes = vec![0u64; palette.colors.len()];
    for sp in scanpaths {
        let Some(img) = images.get(&sp.image_id) else {
            continue;
        };
        for f in truncate_to_duration(sp, horizon_s).fixations() {
            if f.in_bounds() {
                let px = fixated_pixel(img, f.x, f.y);
                votes[palette.nearest(px.map(f64::from))] += 1;
            }
        }
    }
    let mut ranked: Vec<(PaletteColor, u64)> = palette
        .colors
        .iter()
        .cloned()
        .zip(votes)
        .map(|(mut c, v)| {
            c.fixation_counts.retain(|hc| hc.horizon_s != horizon_s);
            c.fixation_counts.push(HorizonCount { horizon_s, count: v });
            (c, v)
        })
        .collect();
    ranked.sort_by_key(|r| std::cmp::Reverse(r.1));
    ColorPalette {
        colors: ranked.into_iter().map(|(c, _)| c).collect(),
    }
}

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSummary {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl BoxSummary {
    pub fn of(values: &[f64]) -> Option<BoxSummary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        // linear interpolation between closest ranks
        let q = |p: f64| {
            let pos = p * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        Some(BoxSummary {
            n: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v[0],
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrightnessGroup {
    /// `None` for the all-pixels group.
    pub horizon_s: Option<f64>,
    pub summary: Option<BoxSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrightnessBias {
    pub groups: Vec<BrightnessGroup>,
    /// Bartlett over all groups; `None` when some group has fewer than two
    /// samples or every sample is identical.
    pub bartlett: Option<StatTestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrightnessConfig {
    pub horizons: Vec<f64>,
    /// Pixels drawn per image for the all-pixels group; `None` uses every pixel.
    pub pixel_sample_per_image: Option<usize>,
    pub seed: u64,
}

impl Default for BrightnessConfig {
    fn default() -> Self {
        Self {
            horizons: vec![1.0, 3.0, 7.0],
            pixel_sample_per_image: Some(10_000),
            seed: 0,
        }
    }
}

/// Brightness of all pixels against the brightness under fixations at each
/// horizon (one pixel per fixation).
pub fn brightness_bias(
    images: &HashMap<String, RgbImage>,
    scanpaths: &[Scanpath],
    config: &BrightnessConfig,
) -> Result<BrightnessBias> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ids: Vec<&String> = images.keys().collect();
    ids.sort();
    let mut all = Vec::new();
    for id in ids {
        let img = &images[id];
        let n = (img.width() * img.height()) as usize;
        match config.pixel_sample_per_image {
            Some(m) if m < n => {
                let mut picked = index::sample(&mut rng, n, m).into_vec();
                picked.sort_unstable();
                let w = img.width() as usize;
                all.extend(
                    picked
                        .into_iter()
                        .map(|i| luma(img.get_pixel((i % w) as u32, (i / w) as u32).0)),
                );
            }
            _ => all.extend(img.pixels().map(|p| luma(p.0))),
        }
    }
    if all.is_empty() {
        return Err(Error::NoData);
    }
    let mut samples = vec![all];
    for &h in &config.horizons {
        let mut fixated = Vec::new();
        for sp in scanpaths {
            let Some(img) = images.get(&sp.image_id) else {
                continue;
            };
            for f in truncate_to_duration(sp, h).fixations() {
                if f.in_bounds() {
                    fixated.push(luma(fixated_pixel(img, f.x, f.y)));
                }
            }
        }
        samples.push(fixated);
    }
    let groups = std::iter::once(None)
        .chain(config.horizons.iter().map(|&h| Some(h)))
        .zip(&samples)
        .map(|(horizon_s, s)| BrightnessGroup {
            horizon_s,
            summary: BoxSummary::of(s),
        })
        .collect();
    let refs: Vec<&[f64]> = samples.iter().map(Vec::as_slice).collect();
    Ok(BrightnessBias {
        groups,
        bartlett: bartlett(&refs).ok(),
    })
}
