use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::evolution::grid::Grid1D;

/// g(t) = amplitude·sin(Ωt), identically zero from `switch_off` on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeProfile {
    pub amplitude: f64,
    pub omega: f64,
    #[serde(default)]
    pub switch_off: Option<f64>,
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self.switch_off {
            Some(t_off) if t >= t_off => 0.0,
            _ => self.amplitude * (self.omega * t).sin(),
        }
    }
}

/// Separable nonstationary term g(t)·(a0(x), a_z(x)).
#[derive(Debug, Clone, PartialEq)]
pub struct Drive {
    pub a0: Vec<f64>,
    pub a_z: Vec<f64>,
    pub profile: TimeProfile,
}

/// Scalar potential A₀ and vector potential A_z sampled on the grid, plus an
/// optional nonstationary part.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub a0: Vec<f64>,
    pub a_z: Vec<f64>,
    pub drive: Option<Drive>,
}

impl PotentialSpec {
    pub fn new(grid: &Grid1D, a0: Vec<f64>, a_z: Vec<f64>) -> Result<Self> {
        for v in [&a0, &a_z] {
            if v.len() != grid.n_points {
                return Err(DiracError::PotentialSize {
                    expected: grid.n_points,
                    found: v.len(),
                });
            }
        }
        Ok(PotentialSpec {
            a0,
            a_z,
            drive: None,
        })
    }

    pub fn free(grid: &Grid1D) -> Self {
        PotentialSpec {
            a0: vec![0.0; grid.n_points],
            a_z: vec![0.0; grid.n_points],
            drive: None,
        }
    }

    pub fn constant(grid: &Grid1D, v: f64) -> Self {
        PotentialSpec {
            a0: vec![v; grid.n_points],
            ..Self::free(grid)
        }
    }

    /// Gaussian well A₀ = −depth·exp(−x²/2w²).
    pub fn smooth_well(grid: &Grid1D, depth: f64, width: f64) -> Self {
        let a0 = grid
            .positions()
            .iter()
            .map(|x| -depth * (-(x * x) / (2.0 * width * width)).exp())
            .collect();
        PotentialSpec {
            a0,
            ..Self::free(grid)
        }
    }

    /// A₀ = v0·½(1 + tanh(x/smoothing)); the periodic wrap at ±L/2 drops back
    /// to zero.
    pub fn step(grid: &Grid1D, v0: f64, smoothing: f64) -> Self {
        let a0 = grid
            .positions()
            .iter()
            .map(|x| {
                if smoothing > 0.0 {
                    0.5 * v0 * (1.0 + (x / smoothing).tanh())
                } else if *x >= 0.0 {
                    v0
                } else {
                    0.0
                }
            })
            .collect();
        PotentialSpec {
            a0,
            ..Self::free(grid)
        }
    }

    pub fn with_drive(mut self, a0: Vec<f64>, a_z: Vec<f64>, profile: TimeProfile) -> Result<Self> {
        let n = self.a0.len();
        for v in [&a0, &a_z] {
            if v.len() != n {
                return Err(DiracError::PotentialSize {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        self.drive = Some(Drive { a0, a_z, profile });
        Ok(self)
    }

    pub fn is_stationary(&self) -> bool {
        self.drive.is_none()
    }

    /// Copy without the nonstationary term.
    pub fn stationary_part(&self) -> PotentialSpec {
        PotentialSpec {
            a0: self.a0.clone(),
            a_z: self.a_z.clone(),
            drive: None,
        }
    }

    pub fn check_grid(&self, grid: &Grid1D) -> Result<()> {
        if self.a0.len() != grid.n_points || self.a_z.len() != grid.n_points {
            return Err(DiracError::PotentialSize {
                expected: grid.n_points,
                found: self.a0.len().min(self.a_z.len()),
            });
        }
        Ok(())
    }

    /// (A₀, A_z) at sample j and time t.
    pub fn at(&self, j: usize, t: f64) -> (f64, f64) {
        match &self.drive {
            Some(d) => {
                let g = d.profile.value(t);
                (self.a0[j] + g * d.a0[j], self.a_z[j] + g * d.a_z[j])
            }
            None => (self.a0[j], self.a_z[j]),
        }
    }
}
