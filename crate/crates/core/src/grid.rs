//! Capital grids for scans, tables and figures.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    k_min: f64,
    k_max: f64,
    points: usize,
    spacing: Spacing,
}

impl Grid {
    pub fn new(k_min: f64, k_max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidGrid(msg));
        if !(k_min.is_finite() && k_max.is_finite()) {
            return bad(format!("bounds must be finite, got [{k_min}, {k_max}]"));
        }
        if k_min <= 0.0 {
            return bad(format!("k_min must be positive, got {k_min}"));
        }
        if points == 0 {
            return bad("points must be at least 1".into());
        }
        if points == 1 && k_min != k_max {
            return bad(format!(
                "a single-point grid needs k_min = k_max, got [{k_min}, {k_max}]"
            ));
        }
        if points > 1 && k_max <= k_min {
            return bad(format!("k_max must exceed k_min, got [{k_min}, {k_max}]"));
        }
        Ok(Self {
            k_min,
            k_max,
            points,
            spacing,
        })
    }

    pub fn log(k_min: f64, k_max: f64, points: usize) -> Result<Self> {
        Self::new(k_min, k_max, points, Spacing::Log)
    }

    pub fn linear(k_min: f64, k_max: f64, points: usize) -> Result<Self> {
        Self::new(k_min, k_max, points, Spacing::Linear)
    }

    pub fn single(k: f64) -> Result<Self> {
        Self::new(k, k, 1, Spacing::Log)
    }

    pub fn k_min(&self) -> f64 {
        self.k_min
    }
    pub fn k_max(&self) -> f64 {
        self.k_max
    }
    pub fn points(&self) -> usize {
        self.points
    }
    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Grid values, strictly increasing, with both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.k_min];
        }
        let last = self.points - 1;
        let n = last as f64;
        let mut out: Vec<f64> = (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Log => {
                        let (lo, hi) = (self.k_min.ln(), self.k_max.ln());
                        (lo + t * (hi - lo)).exp()
                    }
                    Spacing::Linear => self.k_min + t * (self.k_max - self.k_min),
                }
            })
            .collect();
        out[0] = self.k_min;
        out[last] = self.k_max;
        out
    }
}
