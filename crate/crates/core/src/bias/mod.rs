//! Dataset-level viewing biases.

pub mod color;
pub mod location;
pub mod saccade;
pub mod visits;

pub use color::{
    brightness_bias, color_palette, fixated_color_ranking, luma, BoxSummary, BrightnessBias,
    BrightnessConfig, ColorPalette, KMeansConfig, PaletteColor,
};
pub use location::{
    location_bias, quadrant_of, HeatGrid, LocationAccumulator, LocationBias, LocationConfig, PairwiseComparison, Quadrant,
    QuadrantCounts,
};
pub use saccade::{saccade_distribution, Direction, PolarHistogram, DEFAULT_ANGLE_BINS};
pub use visits::{visit_revisit, CategoryVisits, VisitStats};
