//! Callable building blocks shared by every module: real source potentials,
//! complex wave functions with analytic derivatives, and closed domains.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// A real potential `V(x)` together with its derivatives.
pub trait RealPotential: Send + Sync + fmt::Debug {
    /// `V` and at least `V'`, `V''` at `x`.
    fn jet(&self, x: f64) -> Jet;

    fn value(&self, x: f64) -> f64 {
        self.jet(x).value().re
    }
}

/// A complex function of a real variable with analytically known derivatives.
pub trait WaveFunction: Send + Sync {
    /// Value and as many derivatives as the implementation knows exactly.
    fn jet(&self, x: f64) -> Jet;

    fn value(&self, x: f64) -> Complex64 {
        self.jet(x).value()
    }
}

impl<F> WaveFunction for F
where
    F: Fn(f64) -> Jet + Send + Sync,
{
    fn jet(&self, x: f64) -> Jet {
        self(x)
    }
}

pub type SharedWave = Arc<dyn WaveFunction>;
pub type SharedPotential = Arc<dyn RealPotential>;

/// Closed interval `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidParameter(format!("bad domain [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.min..=self.max).contains(&x)
    }

    /// `count` uniformly spaced points including both endpoints.
    pub fn probe(&self, count: usize) -> impl Iterator<Item = f64> + '_ {
        let count = count.max(2);
        let step = self.width() / (count - 1) as f64;
        (0..count).map(move |i| if i + 1 == count { self.max } else { self.min + i as f64 * step })
    }
}

/// Relative deviation `|a − b| / max(scale, tiny)`.
pub(crate) fn scaled(deviation: f64, scale: f64) -> f64 {
    deviation / scale.max(f64::MIN_POSITIVE)
}
