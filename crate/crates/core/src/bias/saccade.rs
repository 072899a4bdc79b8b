use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::kruskal_wallis;
use crate::types::{Scanpath, StatTestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Right,
    Left,
    Down,
    Up,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Right, Direction::Left, Direction::Down, Direction::Up];

    /// 90° sectors around the cardinal directions; diagonals (|dx| = |dy|)
    /// go to the horizontal side.
    pub fn of(dx: f64, dy: f64) -> Direction {
        if dx.abs() >= dy.abs() {
            if dx >= 0.0 {
                Direction::Right
            } else {
                Direction::Left
            }
        } else if dy > 0.0 {
            Direction::Down
        } else {
            Direction::Up
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarBin {
    pub start_deg: f64,
    pub count: usize,
    #[serde(skip)]
    pub amplitudes: Vec<f64>,
    pub mean_amplitude: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionCounts {
    pub right: usize,
    pub left: usize,
    pub down: usize,
    pub up: usize,
}

impl DirectionCounts {
    pub fn total(&self) -> usize {
        self.right + self.left + self.down + self.up
    }
}

/// Saccade angles (screen coordinates, 0° = right, 90° = down) binned with
/// their amplitudes, plus the four-way direction split and a Kruskal-Wallis
/// test of amplitude across directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarHistogram {
    pub bin_width_deg: f64,
    pub bins: Vec<PolarBin>,
    pub directions: DirectionCounts,
    #[serde(skip)]
    pub direction_amplitudes: [Vec<f64>; 4],
    /// `None` when fewer than two directions have saccades.
    pub amplitude_by_direction: Option<StatTestResult>,
}

pub const DEFAULT_ANGLE_BINS: usize = 36;

pub fn saccade_distribution(scanpaths: &[Scanpath], angle_bins: usize) -> Result<PolarHistogram> {
    if angle_bins == 0 {
        return Err(Error::InvalidParameter("angle_bins = 0".into()));
    }
    let width = 360.0 / angle_bins as f64;
    let mut bins: Vec<PolarBin> = (0..angle_bins)
        .map(|i| PolarBin {
            start_deg: i as f64 * width,
            count: 0,
            amplitudes: Vec::new(),
            mean_amplitude: None,
        })
        .collect();
    let mut directions = DirectionCounts::default();
    let mut direction_amplitudes: [Vec<f64>; 4] = Default::default();

    for sp in scanpaths {
        for w in sp.fixations().windows(2) {
            let (dx, dy) = (w[1].x - w[0].x, w[1].y - w[0].y);
            let amplitude = (dx * dx + dy * dy).sqrt();
            let angle = dy.atan2(dx).to_degrees().rem_euclid(360.0);
            let bin = ((angle / width) as usize).min(angle_bins - 1);
            bins[bin].count += 1;
            bins[bin].amplitudes.push(amplitude);
            let dir = Direction::of(dx, dy);
            match dir {
                Direction::Right => directions.right += 1,
                Direction::Left => directions.left += 1,
                Direction::Down => directions.down += 1,
                Direction::Up => directions.up += 1,
            }
            direction_amplitudes[dir as usize].push(amplitude);
        }
    }
    for b in &mut bins {
        if !b.amplitudes.is_empty() {
            b.mean_amplitude = Some(b.amplitudes.iter().sum::<f64>() / b.amplitudes.len() as f64);
        }
    }
    let groups: Vec<&[f64]> = direction_amplitudes
        .iter()
        .filter(|g| !g.is_empty())
        .map(Vec::as_slice)
        .collect();
    let amplitude_by_direction = if groups.len() >= 2 {
        Some(kruskal_wallis(&groups)?)
    } else {
        None
    };
    Ok(PolarHistogram {
        bin_width_deg: width,
        bins,
        directions,
        direction_amplitudes,
        amplitude_by_direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rightward_saccade() {
        let sp = Scanpath::from_points(&[(0.2, 0.5), (0.8, 0.5)]);
        let h = saccade_distribution(&[sp], DEFAULT_ANGLE_BINS).unwrap();
        assert_eq!(h.directions.right, 1);
        assert_eq!(h.directions.total(), 1);
        assert!((h.direction_amplitudes[0][0] - 0.6).abs() < 1e-15);
        assert_eq!(h.bins[0].count, 1);
        assert!(h.amplitude_by_direction.is_none());
    }

    #[test]
    fn square_loop_hits_each_direction() {
        let sp = Scanpath::from_points(&[(0.2, 0.2), (0.8, 0.2), (0.8, 0.8), (0.2, 0.8), (0.2, 0.2)]);
        let h = saccade_distribution(&[sp], DEFAULT_ANGLE_BINS).unwrap();
        assert_eq!(
            h.directions,
            DirectionCounts {
                right: 1,
                left: 1,
                down: 1,
                up: 1
            }
        );
        // down is 90 degrees in screen coordinates
        assert_eq!(h.bins[9].count, 1);
        assert_eq!(h.bins[18].count, 1);
        assert_eq!(h.bins[27].count, 1);
        assert!(h.amplitude_by_direction.is_some());
    }

    #[test]
    fn diagonal_ties_go_horizontal() {
        assert_eq!(Direction::of(0.1, 0.1), Direction::Right);
        assert_eq!(Direction::of(-0.1, 0.1), Direction::Left);
        assert_eq!(Direction::of(-0.1, -0.1), Direction::Left);
        assert_eq!(Direction::of(0.1, -0.1), Direction::Right);
        assert_eq!(Direction::of(0.0, 0.0), Direction::Right);
        assert_eq!(Direction::of(0.05, 0.1), Direction::Down);
    }

    #[test]
    fn counts_sum_to_saccades() {
        let a = Scanpath::from_points(&[(0.1, 0.1), (0.3, 0.9), (0.5, 0.2)]);
        let b = Scanpath::from_points(&[(0.4, 0.4)]);
        let c = Scanpath::from_points(&[(0.9, 0.1), (0.1, 0.1), (0.2, 0.2), (0.3, 0.1)]);
        let h = saccade_distribution(&[a, b, c], 12).unwrap();
        assert_eq!(h.directions.total(), 2 + 0 + 3);
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<usize>(), 5);
    }
}
