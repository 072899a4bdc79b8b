//! Domain values shared by every analysis: fixations, scanpaths, saliency
//! maps, segmentation boxes, image metadata and test results.
//!
//! Coordinates are normalized to the stimulus image (not the screen), with
//! `y` growing downward.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single gaze fixation in image-normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fixation {
    pub x: f64,
    pub y: f64,
    pub onset_s: f64,
    pub duration_s: f64,
}

impl Fixation {
    /// Coordinates may lie outside the unit square; ingest filtering removes
    /// those. Duration must be positive and onset non-negative.
    pub fn new(x: f64, y: f64, onset_s: f64, duration_s: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidFixation(format!("non-finite position ({x}, {y})")));
        }
        if !(onset_s.is_finite() && onset_s >= 0.0) {
            return Err(Error::InvalidFixation(format!("onset {onset_s} < 0")));
        }
        if !(duration_s.is_finite() && duration_s > 0.0) {
            return Err(Error::InvalidFixation(format!("duration {duration_s} <= 0")));
        }
        Ok(Self {
            x,
            y,
            onset_s,
            duration_s,
        })
    }

    pub fn in_bounds(&self) -> bool {
        (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }

    pub fn distance(&self, other: &Fixation) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Ordered fixations of one viewer over one image. Onsets strictly increase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scanpath {
    pub image_id: String,
    pub viewer_id: String,
    fixations: Vec<Fixation>,
}

impl Scanpath {
    pub fn new(
        image_id: impl Into<String>,
        viewer_id: impl Into<String>,
        fixations: Vec<Fixation>,
    ) -> Result<Self> {
        if let Some(index) = fixations
            .windows(2)
            .position(|w| w[1].onset_s <= w[0].onset_s)
        {
            return Err(Error::NonIncreasingOnset { index: index + 1 });
        }
        Ok(Self {
            image_id: image_id.into(),
            viewer_id: viewer_id.into(),
            fixations,
        })
    }

    /// Builds a scanpath from bare points with evenly spaced onsets. Handy for
    /// metric inputs where timing is irrelevant.
    pub fn from_points(points: &[(f64, f64)]) -> Self {
        let fixations = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Fixation {
                x,
                y,
                onset_s: i as f64 * 0.25,
                duration_s: 0.25,
            })
            .collect();
        Self {
            image_id: String::new(),
            viewer_id: String::new(),
            fixations,
        }
    }

    pub fn fixations(&self) -> &[Fixation] {
        &self.fixations
    }

    pub fn len(&self) -> usize {
        self.fixations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixations.is_empty()
    }

    /// Keeps the fixations accepted by `keep`. Any subsequence of a strictly
    /// increasing sequence is strictly increasing, so no re-validation is needed.
    pub fn retain(&self, keep: impl FnMut(&Fixation) -> bool) -> Scanpath {
        let mut keep = keep;
        Scanpath {
            image_id: self.image_id.clone(),
            viewer_id: self.viewer_id.clone(),
            fixations: self.fixations.iter().copied().filter(|f| keep(f)).collect(),
        }
    }

    pub fn truncated(&self, n: usize) -> Scanpath {
        Scanpath {
            image_id: self.image_id.clone(),
            viewer_id: self.viewer_id.clone(),
            fixations: self.fixations.iter().take(n).copied().collect(),
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.fixations.iter().map(|f| (f.x, f.y)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    Raw,
    Max1,
    Sum1,
}

impl NormMode {
    pub fn code(self) -> u8 {
        match self {
            NormMode::Raw => 0,
            NormMode::Max1 => 1,
            NormMode::Sum1 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(NormMode::Raw),
            1 => Some(NormMode::Max1),
            2 => Some(NormMode::Sum1),
            _ => None,
        }
    }
}

/// Non-negative row-major grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    norm_mode: NormMode,
}

impl SaliencyMap {
    /// Wraps `values` as a raw map and then applies `norm_mode`.
    pub fn new(width: usize, height: usize, values: Vec<f64>, norm_mode: NormMode) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidMap(format!("empty grid {width}x{height}")));
        }
        if values.len() != width * height {
            return Err(Error::InvalidMap(format!(
                "{} values for a {width}x{height} grid",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidMap(format!("value {v} is negative or non-finite")));
        }
        let map = Self {
            width,
            height,
            values,
            norm_mode: NormMode::Raw,
        };
        Ok(map.normalized(norm_mode))
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width * height],
            norm_mode: NormMode::Raw,
        }
    }

    pub(crate) fn from_raw_unchecked(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        Self {
            width,
            height,
            values,
            norm_mode: NormMode::Raw,
        }
    }

    /// Relabels the mode without touching values (for grids read back from disk).
    pub(crate) fn set_mode(&mut self, mode: NormMode) {
        self.norm_mode = mode;
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm_mode(&self) -> NormMode {
        self.norm_mode
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Rescales to the requested mode. All-zero maps are left untouched but
    /// still tagged with the mode.
    pub fn normalized(mut self, mode: NormMode) -> Self {
        let denom = match mode {
            NormMode::Raw => None,
            NormMode::Max1 => Some(self.max()),
            NormMode::Sum1 => Some(self.sum()),
        };
        if let Some(d) = denom {
            if d > 0.0 {
                self.values.iter_mut().for_each(|v| *v /= d);
            }
        }
        self.norm_mode = mode;
        self
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Bilinear resampling to a new grid (pixel centers aligned). The result is
    /// tagged raw.
    pub fn resized(&self, width: usize, height: usize) -> SaliencyMap {
        if (width, height) == (self.width, self.height) {
            return self.clone();
        }
        let mut out = Vec::with_capacity(width * height);
        let sx = self.width as f64 / width as f64;
        let sy = self.height as f64 / height as f64;
        for y in 0..height {
            let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (self.height - 1) as f64);
            let y0 = fy.floor() as usize;
            let y1 = (y0 + 1).min(self.height - 1);
            let ty = fy - y0 as f64;
            for x in 0..width {
                let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (self.width - 1) as f64);
                let x0 = fx.floor() as usize;
                let x1 = (x0 + 1).min(self.width - 1);
                let tx = fx - x0 as f64;
                let top = self.get(x0, y0) * (1.0 - tx) + self.get(x1, y0) * tx;
                let bottom = self.get(x0, y1) * (1.0 - tx) + self.get(x1, y1) * tx;
                out.push(top * (1.0 - ty) + bottom * ty);
            }
        }
        SaliencyMap::from_raw_unchecked(width, height, out)
    }
}

/// Maps a normalized coordinate onto a pixel index: the pixel containing the
/// point, with 1.0 clamped onto the last index.
pub fn to_pixel(coord: f64, extent: usize) -> usize {
    let p = (coord * extent as f64).floor();
    if p <= 0.0 {
        0
    } else {
        (p as usize).min(extent - 1)
    }
}

/// Center of pixel `index` in normalized coordinates.
pub fn pixel_center(index: usize, extent: usize) -> f64 {
    (index as f64 + 0.5) / extent as f64
}

macro_rules! string_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(Error::UnknownCategory(s.to_string())),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementCategory {
    Image,
    Text,
    Face,
}

string_enum!(ElementCategory { Image => "image", Text => "text", Face => "face" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UiType {
    Webpage,
    Desktop,
    Mobile,
    Poster,
}

string_enum!(UiType { Webpage => "webpage", Desktop => "desktop", Mobile => "mobile", Poster => "poster" });

/// Pixel rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementBox {
    pub category: ElementCategory,
    pub rect: Rect,
}

impl ElementBox {
    pub fn new(category: ElementCategory, x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
        if !finite || x0 >= x1 || y0 >= y1 {
            return Err(Error::DegenerateBox { x0, y0, x1, y1 });
        }
        Ok(Self {
            category,
            rect: Rect { x0, y0, x1, y1 },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageMeta {
    pub image_id: String,
    pub ui_type: UiType,
    pub width: u32,
    pub height: u32,
    pub block_id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatTestResult {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    /// φ for chi-square goodness of fit.
    pub effect_size: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_increasing_onsets() {
        let f = |t| Fixation::new(0.5, 0.5, t, 0.1).unwrap();
        assert!(Scanpath::new("img", "v", vec![f(0.0), f(0.5), f(1.0)]).is_ok());
        let err = Scanpath::new("img", "v", vec![f(0.0), f(0.5), f(0.5)]).unwrap_err();
        assert!(matches!(err, Error::NonIncreasingOnset { index: 2 }));
        assert!(Scanpath::new("img", "v", vec![f(1.0), f(0.2)]).is_err());
    }

    #[test]
    fn fixation_rejects_non_positive_duration() {
        assert!(Fixation::new(0.1, 0.1, 0.0, 0.0).is_err());
        assert!(Fixation::new(0.1, 0.1, -0.1, 0.2).is_err());
        assert!(Fixation::new(1.5, -0.2, 0.0, 0.2).is_ok());
    }

    #[test]
    fn normalization_modes() {
        let m = SaliencyMap::new(2, 2, vec![1.0, 2.0, 3.0, 4.0], NormMode::Max1).unwrap();
        assert_eq!(m.max(), 1.0);
        let s = m.clone().normalized(NormMode::Sum1);
        assert!((s.sum() - 1.0).abs() < 1e-12);
        let z = SaliencyMap::zeros(3, 3).normalized(NormMode::Max1);
        assert!(z.is_all_zero());
        assert!(SaliencyMap::new(1, 1, vec![-1.0], NormMode::Raw).is_err());
        assert!(SaliencyMap::new(2, 1, vec![1.0], NormMode::Raw).is_err());
    }

    #[test]
    fn pixel_mapping_clamps_the_far_edge() {
        assert_eq!(to_pixel(1.0, 10), 9);
        assert_eq!(to_pixel(0.0, 10), 0);
        assert_eq!(to_pixel(0.55, 10), 5);
        assert_eq!(to_pixel(pixel_center(7, 10), 10), 7);
    }

    #[test]
    fn categories_parse_case_insensitively() {
        assert_eq!("Webpage".parse::<UiType>().unwrap(), UiType::Webpage);
        assert_eq!("face".parse::<ElementCategory>().unwrap(), ElementCategory::Face);
        assert!(matches!("video".parse::<UiType>(), Err(Error::UnknownCategory(_))));
    }

    #[test]
    fn degenerate_boxes_are_rejected() {
        assert!(ElementBox::new(ElementCategory::Text, 10.0, 10.0, 10.0, 40.0).is_err());
        assert!(ElementBox::new(ElementCategory::Text, 10.0, 10.0, 100.0, 40.0).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn renormalization_is_idempotent(
                values in prop::collection::vec(0.0f64..1e3, 1..64),
                sum in any::<bool>(),
            ) {
                let n = values.len();
                let mode = if sum { NormMode::Sum1 } else { NormMode::Max1 };
                let once = SaliencyMap::new(n, 1, values, mode).unwrap();
                let twice = once.clone().normalized(mode);
                for (a, b) in once.values().iter().zip(twice.values()) {
                    prop_assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }
}
