//! Crowd ground truth: density maps rendered from head annotations with
//! geometry-adaptive Gaussian kernels, plus count evaluation.
//!
//! Each head gets a Gaussian whose σ is `beta` times the mean distance to
//! its `k` nearest neighbouring heads. Kernels are truncated at
//! `truncation_radius · σ` and renormalised over the cells that survive
//! truncation and image clipping, so every head contributes exactly one
//! person to the map.

mod io;
mod knn;
mod render;

use thiserror::Error;

pub use io::{parse_annotations, read_dmap, write_annotations, write_dmap, write_text_grid, DMAP_MAGIC, DMAP_VERSION};
pub use knn::{knn_mean_distance, KdTree};
pub use render::{adaptive_sigma, render_density_map, MIN_SIGMA};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("image has zero size ({width}x{height})")]
    ZeroSize { width: u32, height: u32 },
    #[error("head {index} at ({x}, {y}) lies outside the {width}x{height} image")]
    PointOutOfBounds {
        index: usize,
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },
    #[error("invalid kernel parameters: {0}")]
    InvalidParams(String),
    #[error("count lists differ in length ({predicted} predicted vs {truth} truth)")]
    LengthMismatch { predicted: usize, truth: usize },
    #[error("count lists are empty")]
    Empty,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bad density map file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Head positions in pixel coordinates; `(0, 0)` is the top-left corner of
/// the top-left pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadAnnotations {
    points: Vec<Point>,
    width: u32,
    height: u32,
}

impl HeadAnnotations {
    pub fn new(width: u32, height: u32, points: Vec<Point>) -> Result<Self, DensityError> {
        if width == 0 || height == 0 {
            return Err(DensityError::ZeroSize { width, height });
        }
        for (index, p) in points.iter().enumerate() {
            let inside = p.x >= 0.0 && p.y >= 0.0 && p.x < width as f64 && p.y < height as f64;
            if !inside {
                return Err(DensityError::PointOutOfBounds {
                    index,
                    x: p.x,
                    y: p.y,
                    width,
                    height,
                });
            }
        }
        Ok(Self { points, width, height })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub k: usize,
    pub beta: f64,
    pub fallback_sigma: f64,
    /// Truncation radius in multiples of σ.
    pub truncation_radius: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            k: 4,
            beta: 0.3,
            fallback_sigma: 15.0,
            truncation_radius: 4.0,
        }
    }
}

impl KernelParams {
    pub fn validate(&self) -> Result<(), DensityError> {
        let bad = |m: &str| Err(DensityError::InvalidParams(m.to_string()));
        if self.k < 1 {
            return bad("k must be at least 1");
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad("beta must be positive");
        }
        if !(self.fallback_sigma.is_finite() && self.fallback_sigma > 0.0) {
            return bad("fallback_sigma must be positive");
        }
        if !(self.truncation_radius.is_finite() && self.truncation_radius >= 2.0) {
            return bad("truncation_radius must be at least 2");
        }
        Ok(())
    }
}

/// Row-major grid of non-negative densities (persons per pixel).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub width: u32,
    pub height: u32,
    pub values: Vec<f64>,
}

impl DensityMap {
    pub fn zeros(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width as usize * height as usize],
        }
    }

    pub fn at(&self, col: u32, row: u32) -> f64 {
        self.values[row as usize * self.width as usize + col as usize]
    }
}

/// Estimated head count: the sum of all cells in row-major order.
pub fn count_from_map(map: &DensityMap) -> f64 {
    map.values.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountMetrics {
    pub mae: f64,
    pub rmse: f64,
}

pub fn evaluate_counts(predicted: &[f64], truth: &[f64]) -> Result<CountMetrics, DensityError> {
    if predicted.len() != truth.len() {
        return Err(DensityError::LengthMismatch {
            predicted: predicted.len(),
            truth: truth.len(),
        });
    }
    if predicted.is_empty() {
        return Err(DensityError::Empty);
    }
    let n = predicted.len() as f64;
    let (abs, sq) = predicted.iter().zip(truth).fold((0.0, 0.0), |(a, s), (p, t)| {
        let e = p - t;
        (a + e.abs(), s + e * e)
    });
    Ok(CountMetrics {
        mae: abs / n,
        rmse: (sq / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation_bounds() {
        assert!(HeadAnnotations::new(0, 10, vec![]).is_err());
        assert!(HeadAnnotations::new(10, 10, vec![Point { x: 10.0, y: 1.0 }]).is_err());
        assert!(HeadAnnotations::new(10, 10, vec![Point { x: -0.1, y: 1.0 }]).is_err());
        assert!(HeadAnnotations::new(10, 10, vec![Point { x: 9.99, y: 0.0 }]).is_ok());
    }

    #[test]
    fn kernel_param_checks() {
        assert!(KernelParams::default().validate().is_ok());
        let p = KernelParams {
            k: 0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = KernelParams {
            truncation_radius: 1.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = KernelParams {
            beta: 0.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn count_metrics() {
        let m = evaluate_counts(&[5.0], &[5.0]).unwrap();
        assert_eq!((m.mae, m.rmse), (0.0, 0.0));

        let m = evaluate_counts(&[267.0, 453.0], &[258.0, 662.0]).unwrap();
        assert_eq!(m.mae, 109.0);
        assert!((m.rmse - ((81.0 + 43681.0) / 2.0f64).sqrt()).abs() < 1e-12);
        assert_eq!(format!("{:.2}", m.rmse), "147.92");

        assert!(matches!(
            evaluate_counts(&[1.0], &[1.0, 2.0]),
            Err(DensityError::LengthMismatch { .. })
        ));
        assert!(matches!(evaluate_counts(&[], &[]), Err(DensityError::Empty)));
    }

    #[test]
    fn zero_map_counts_zero() {
        assert_eq!(count_from_map(&DensityMap::zeros(8, 8)), 0.0);
    }
}
