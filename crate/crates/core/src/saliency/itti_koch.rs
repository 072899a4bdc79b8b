//! Bottom-up saliency from intensity, color-opponency and orientation
//! contrast.
//!
//! Each feature is decomposed into a dyadic Gaussian pyramid. Feature maps are
//! absolute center-surround differences between a fine "center" level `c`
//! and a coarser "surround" level `c + delta`, resampled to the coarsest
//! center level. Every map passes through an iterative difference-of-Gaussians
//! normalization that promotes maps with few strong peaks and suppresses maps
//! with many comparable ones. The three conspicuity maps are normalized again
//! and averaged.

use image::RgbImage;

use super::plane::Plane;
use crate::error::{Error, Result};
use crate::types::{NormMode, SaliencyMap};

pub const MIN_IMAGE_SIZE: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct IttiKochConfig {
    pub pyramid_levels: usize,
    pub center_levels: Vec<usize>,
    pub surround_deltas: Vec<usize>,
    pub orientations_deg: Vec<f64>,
    pub gabor: GaborSpec,
    pub normalization: NormalizationSpec,
    /// Color is zeroed where intensity is below this fraction of the maximum.
    pub color_intensity_floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborSpec {
    pub size: usize,
    pub sigma: f64,
    pub wavelength: f64,
    pub aspect: f64,
}

/// Parameters of the iterative within-map competition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationSpec {
    pub iterations: usize,
    /// Excitatory and inhibitory widths as fractions of the map width.
    pub sigma_ex_frac: f64,
    pub sigma_inh_frac: f64,
    pub c_ex: f64,
    pub c_inh: f64,
    pub inhibition_bias: f64,
}

impl Default for IttiKochConfig {
    fn default() -> Self {
        Self {
            pyramid_levels: 9,
            center_levels: vec![2, 3, 4],
            surround_deltas: vec![3, 4],
            orientations_deg: vec![0.0, 45.0, 90.0, 135.0],
            gabor: GaborSpec {
                size: 9,
                sigma: 2.0,
                wavelength: 5.0,
                aspect: 0.5,
            },
            normalization: NormalizationSpec {
                iterations: 3,
                sigma_ex_frac: 0.02,
                sigma_inh_frac: 0.25,
                c_ex: 0.5,
                c_inh: 1.5,
                inhibition_bias: 0.02,
            },
            color_intensity_floor: 0.1,
        }
    }
}

/// Maps whose peak is below this are treated as empty; it absorbs rounding
/// residue from filtering constant regions.
const NUMERIC_FLOOR: f64 = 1e-9;

/// The three per-feature conspicuity maps at the working scale, plus the raw
/// (pre-normalization) energy of each channel's center-surround maps.
#[derive(Debug, Clone)]
pub struct Conspicuity {
    pub intensity: Plane,
    pub color: Plane,
    pub orientation: Plane,
    pub intensity_energy: f64,
    pub color_energy: f64,
    pub orientation_energy: f64,
}

struct Channels {
    intensity: Plane,
    red_green: Plane,
    blue_yellow: Plane,
}

fn channels(image: &RgbImage, floor: f64) -> Channels {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let mut intensity = Vec::with_capacity(w * h);
    let mut rgb = Vec::with_capacity(w * h);
    for p in image.pixels() {
        let [r, g, b] = p.0.map(|c| c as f64 / 255.0);
        intensity.push((r + g + b) / 3.0);
        rgb.push((r, g, b));
    }
    let i_max = intensity.iter().copied().fold(0.0, f64::max);
    let mut rg = Vec::with_capacity(w * h);
    let mut by = Vec::with_capacity(w * h);
    for (&(r, g, b), &i) in rgb.iter().zip(&intensity) {
        if i_max <= 0.0 || i < floor * i_max {
            rg.push(0.0);
            by.push(0.0);
            continue;
        }
        let red = (r - (g + b) / 2.0).max(0.0);
        let green = (g - (r + b) / 2.0).max(0.0);
        let blue = (b - (r + g) / 2.0).max(0.0);
        let yellow = ((r + g) / 2.0 - (r - g).abs() / 2.0 - b).max(0.0);
        rg.push(red - green);
        by.push(blue - yellow);
    }
    Channels {
        intensity: Plane::new(w, h, intensity),
        red_green: Plane::new(w, h, rg),
        blue_yellow: Plane::new(w, h, by),
    }
}

fn pyramid(base: Plane, levels: usize) -> Vec<Plane> {
    let mut out = Vec::with_capacity(levels);
    out.push(base);
    while out.len() < levels {
        let next = out.last().expect("non-empty").pyr_down();
        out.push(next);
    }
    out
}

fn gabor_kernel(spec: &GaborSpec, theta_deg: f64) -> Vec<f64> {
    let r = (spec.size / 2) as isize;
    let theta = theta_deg.to_radians();
    let (s, c) = theta.sin_cos();
    let mut k = Vec::with_capacity(spec.size * spec.size);
    for y in -r..=r {
        for x in -r..=r {
            let (x, y) = (x as f64, y as f64);
            // carrier varies along the direction `theta`
            let u = x * c + y * s;
            let v = -x * s + y * c;
            let envelope = (-(u * u + spec.aspect * spec.aspect * v * v)
                / (2.0 * spec.sigma * spec.sigma))
                .exp();
            k.push(envelope * (2.0 * std::f64::consts::PI * u / spec.wavelength).cos());
        }
    }
    let mean = k.iter().sum::<f64>() / k.len() as f64;
    k.iter_mut().for_each(|v| *v -= mean);
    k
}

impl IttiKochConfig {
    fn scale_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.center_levels.iter().flat_map(move |&c| {
            self.surround_deltas
                .iter()
                .map(move |&d| (c, c + d))
                .filter(move |&(_, s)| s < self.pyramid_levels)
        })
    }

    fn working_level(&self) -> usize {
        self.center_levels.iter().copied().max().unwrap_or(0)
    }

    /// Iterative difference-of-Gaussians map normalization.
    pub fn normalize_map(&self, map: &Plane) -> Plane {
        let spec = &self.normalization;
        let peak = map.max();
        if !(peak > NUMERIC_FLOOR) {
            return Plane::zeros(map.width, map.height);
        }
        let mut m = map.map(|v| v / peak);
        let w = map.width as f64;
        let (ex, inh) = (spec.sigma_ex_frac * w, spec.sigma_inh_frac * w);
        let (c_ex2, c_inh2) = (spec.c_ex * spec.c_ex, spec.c_inh * spec.c_inh);
        for _ in 0..spec.iterations {
            let excite = m.gaussian_blur(ex);
            let inhibit = m.gaussian_blur(inh);
            m = Plane::new(
                m.width,
                m.height,
                m.data
                    .iter()
                    .zip(&excite.data)
                    .zip(&inhibit.data)
                    .map(|((&v, &e), &i)| (v + c_ex2 * e - c_inh2 * i - spec.inhibition_bias).max(0.0))
                    .collect(),
            );
        }
        m
    }

    /// Center-surround maps of one pyramid, resampled to the working scale.
    fn center_surround(&self, pyr: &[Plane], size: (usize, usize)) -> Vec<Plane> {
        self.scale_pairs()
            .map(|(c, s)| {
                let center = &pyr[c];
                let surround = pyr[s].resize(center.width, center.height);
                center
                    .zip_with(&surround, |a, b| (a - b).abs())
                    .resize(size.0, size.1)
            })
            .collect()
    }

    fn sum_normalized(&self, maps: &[Plane], size: (usize, usize)) -> Plane {
        let mut acc = Plane::zeros(size.0, size.1);
        for m in maps {
            acc.add_assign(&self.normalize_map(m));
        }
        acc
    }
}

fn energy(maps: &[Plane]) -> f64 {
    maps.iter().map(Plane::sum).sum()
}

/// Computes the intensity, color and orientation conspicuity maps.
pub fn itti_koch_conspicuity(image: &RgbImage, config: &IttiKochConfig) -> Result<Conspicuity> {
    let (w, h) = image.dimensions();
    if w < MIN_IMAGE_SIZE || h < MIN_IMAGE_SIZE {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
            min: MIN_IMAGE_SIZE,
        });
    }
    if config.pyramid_levels == 0 || config.center_levels.iter().any(|&c| c >= config.pyramid_levels) {
        return Err(Error::InvalidParameter("center level beyond pyramid depth".into()));
    }
    let ch = channels(image, config.color_intensity_floor);
    let levels = config.pyramid_levels;
    let intensity_pyr = pyramid(ch.intensity, levels);
    let rg_pyr = pyramid(ch.red_green, levels);
    let by_pyr = pyramid(ch.blue_yellow, levels);
    let work = &intensity_pyr[config.working_level()];
    let size = (work.width, work.height);

    let intensity_maps = config.center_surround(&intensity_pyr, size);
    let mut color_maps = config.center_surround(&rg_pyr, size);
    color_maps.extend(config.center_surround(&by_pyr, size));

    let mut orientation = Plane::zeros(size.0, size.1);
    let mut orientation_energy = 0.0;
    for &theta in &config.orientations_deg {
        let kernel = gabor_kernel(&config.gabor, theta);
        let oriented: Vec<Plane> = intensity_pyr
            .iter()
            .map(|level| level.convolve2d(&kernel, config.gabor.size).map(f64::abs))
            .collect();
        let maps = config.center_surround(&oriented, size);
        orientation_energy += energy(&maps);
        let per_angle = config.sum_normalized(&maps, size);
        orientation.add_assign(&config.normalize_map(&per_angle));
    }

    Ok(Conspicuity {
        intensity: config.sum_normalized(&intensity_maps, size),
        color: config.sum_normalized(&color_maps, size),
        orientation,
        intensity_energy: energy(&intensity_maps),
        color_energy: energy(&color_maps),
        orientation_energy,
    })
}

/// Peak-normalized saliency at the input resolution. Images without any
/// contrast yield an all-zero map.
pub fn itti_koch_saliency(image: &RgbImage, config: &IttiKochConfig) -> Result<SaliencyMap> {
    let c = itti_koch_conspicuity(image, config)?;
    let mut combined = config.normalize_map(&c.intensity);
    combined.add_assign(&config.normalize_map(&c.color));
    combined.add_assign(&config.normalize_map(&c.orientation));
    let combined = combined.map(|v| v / 3.0);
    let (w, h) = (image.width() as usize, image.height() as usize);
    let full = combined.resize(w, h);
    Ok(SaliencyMap::from_raw_unchecked(w, h, full.data.into_iter().map(|v| v.max(0.0)).collect())
        .normalized(NormMode::Max1))
}
