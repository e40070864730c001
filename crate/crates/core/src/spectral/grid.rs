use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `x_i = x_min + i h`, `i = 0..n`, with `h = (x_max − x_min)/(n − 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{x_min}, {x_max}]")));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!("x_min = {x_min} must be below x_max = {x_max}")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n}")));
        }
        Ok(Self { x_min, x_max, n })
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// Same bounds, `n` replaced.
    pub fn with_len(&self, n: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, n)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * self.x_max.abs().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_endpoints() {
        let g = Grid::new(0.0, 4.0, 5).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.points().collect::<Vec<_>>(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(!g.is_symmetric());
        assert!(Grid::symmetric(3.0, 7).unwrap().is_symmetric());
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(matches!(Grid::new(0.0, 1.0, 2), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(1.0, 1.0, 10), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(0.0, f64::INFINITY, 10), Err(Error::InvalidGrid(_))));
    }
}
