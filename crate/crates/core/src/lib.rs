//! Gaze analytics for UI screenshots.
//!
//! - [`ingest`]: tracker logs, image manifests and segmentation files
//! - [`saliency`]: duration-weighted fixation maps and bottom-up conspicuity maps
//! - [`scanpath_metrics`] / [`salmap_metrics`]: model evaluation
//! - [`stats`]: chi-square, Bartlett, Kruskal-Wallis, Holm
//! - [`bias`]: location, color, saccade and element-revisit analyses
//! - [`generate`]: winner-take-all scanpaths with inhibition of return

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bias;
pub mod error;
pub mod generate;
pub mod ingest;
pub mod saliency;
pub mod salmap_metrics;
pub mod scanpath_metrics;
pub mod stats;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    ElementBox, ElementCategory, Fixation, ImageMeta, NormMode, Rect, SaliencyMap, Scanpath,
    StatTestResult, UiType,
};
