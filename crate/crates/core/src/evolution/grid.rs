use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::plane_waves::Species;
use crate::spinor_algebra::{charge_conjugate, Bispinor, GammaSet};

/// Periodic lattice x_j = −L/2 + j·dx, j = 0..N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub n_points: usize,
    pub length: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() || !(length > 0.0) || !length.is_finite() {
            return Err(DiracError::InvalidGrid { n_points, length });
        }
        Ok(Grid1D { n_points, length })
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Integer wave index of FFT slot n: 0, 1, …, N/2, −N/2+1, …, −1.
    pub fn wave_index(&self, n: usize) -> i64 {
        let n_pts = self.n_points as i64;
        let n = n as i64;
        if n <= n_pts / 2 {
            n
        } else {
            n - n_pts
        }
    }

    pub fn is_nyquist(&self, n: usize) -> bool {
        n == self.n_points / 2
    }

    /// Wave number 2πn/L of FFT slot n.
    pub fn wavenumber(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.wave_index(n) as f64 / self.length
    }

    /// Wave number seen by first-derivative operators: the Nyquist slot is
    /// its own mirror image under k → −k and carries zero.
    pub fn derivative_wavenumber(&self, n: usize) -> f64 {
        if self.is_nyquist(n) {
            0.0
        } else {
            self.wavenumber(n)
        }
    }

    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI / self.spacing()
    }

    /// FFT slot carrying wave number k, excluding the Nyquist slot.
    pub fn lattice_index(&self, k: f64) -> Option<usize> {
        let step = 2.0 * std::f64::consts::PI / self.length;
        let n = (k / step).round();
        if (k - n * step).abs() > 1e-9 * step {
            return None;
        }
        let n = n as i64;
        let half = self.n_points as i64 / 2;
        if n.abs() >= half {
            return None;
        }
        Some(if n >= 0 {
            n as usize
        } else {
            (n + self.n_points as i64) as usize
        })
    }
}

/// Whether a field is known to hold only one frequency sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyContent {
    Positive,
    Negative,
    Mixed,
}

/// Bispinor samples on a [`Grid1D`] at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub values: Vec<Bispinor>,
    pub grid: Grid1D,
    pub time: f64,
    pub species: Species,
    pub frequency: FrequencyContent,
}

impl GridField {
    pub fn zeros(grid: Grid1D, species: Species, frequency: FrequencyContent) -> Self {
        GridField {
            values: vec![Bispinor::ZERO; grid.n_points],
            grid,
            time: 0.0,
            species,
            frequency,
        }
    }

    pub fn from_values(
        grid: Grid1D,
        values: Vec<Bispinor>,
        species: Species,
        frequency: FrequencyContent,
    ) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(DiracError::GridMismatch {
                expected: grid.n_points,
                found: values.len(),
            });
        }
        Ok(GridField {
            values,
            grid,
            time: 0.0,
            species,
            frequency,
        })
    }

    /// Charge sign in units of e.
    pub fn charge_sign(&self) -> f64 {
        self.species.charge_sign()
    }

    /// Only single-sign positive-frequency fields carry the Born interpretation.
    pub fn is_probability_amplitude(&self) -> bool {
        self.frequency == FrequencyContent::Positive
    }

    pub fn check_same_grid(&self, other: &GridField) -> Result<()> {
        if self.grid != other.grid {
            return Err(DiracError::GridMismatch {
                expected: self.grid.n_points,
                found: other.grid.n_points,
            });
        }
        Ok(())
    }

    /// ∫ψ⁺ψ dx
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(Bispinor::norm_sqr).sum::<f64>() * self.grid.spacing()
    }

    /// ∫ψ⁺φ dx
    pub fn inner(&self, other: &GridField) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.inner(b))
            .sum::<Complex64>()
            * self.grid.spacing()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if !(n > 1e-300) {
            return Err(DiracError::VanishingNorm(n));
        }
        let s = Complex64::from(1.0 / n.sqrt());
        for v in &mut self.values {
            *v = v.scale(s);
        }
        Ok(())
    }

    pub fn scaled(&self, s: Complex64) -> GridField {
        GridField {
            values: self.values.iter().map(|v| v.scale(s)).collect(),
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, other: &GridField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Pointwise C*γ̃₄ψ*; swaps the species and mirrors the frequency sign.
    pub fn charge_conjugated(&self, g: &GammaSet) -> GridField {
        GridField {
            values: self.values.iter().map(|v| charge_conjugate(v, g)).collect(),
            grid: self.grid,
            time: self.time,
            species: self.species.conjugate(),
            frequency: match self.frequency {
                FrequencyContent::Positive => FrequencyContent::Negative,
                FrequencyContent::Negative => FrequencyContent::Positive,
                FrequencyContent::Mixed => FrequencyContent::Mixed,
            },
        }
    }
}

/// Cached forward/inverse FFTs for one grid.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral")
            .field("grid", &self.grid)
            .finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        Spectral {
            grid,
            forward: planner.plan_fft_forward(grid.n_points),
            inverse: planner.plan_fft_inverse(grid.n_points),
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    fn pack(values: &[Bispinor], n: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::from(0.0); 4 * n];
        for (j, v) in values.iter().enumerate() {
            for c in 0..4 {
                buf[c * n + j] = v.0[c];
            }
        }
        buf
    }

    fn unpack(buf: &[Complex64], n: usize, scale: f64) -> Vec<Bispinor> {
        (0..n)
            .map(|j| {
                Bispinor::new(buf[j], buf[n + j], buf[2 * n + j], buf[3 * n + j])
                    .scale(Complex64::from(scale))
            })
            .collect()
    }

    /// Unnormalized DFT of each component, slot-ordered.
    pub fn to_momentum(&self, values: &[Bispinor]) -> Vec<Bispinor> {
        let n = self.grid.n_points;
        let mut buf = Self::pack(values, n);
        self.forward.process(&mut buf);
        Self::unpack(&buf, n, 1.0)
    }

    /// Inverse of [`Spectral::to_momentum`].
    pub fn to_position(&self, values: &[Bispinor]) -> Vec<Bispinor> {
        let n = self.grid.n_points;
        let mut buf = Self::pack(values, n);
        self.inverse.process(&mut buf);
        Self::unpack(&buf, n, 1.0 / n as f64)
    }

    /// Spectral ∂/∂z of every component.
    pub fn derivative(&self, values: &[Bispinor]) -> Vec<Bispinor> {
        let mut hat = self.to_momentum(values);
        for (n, v) in hat.iter_mut().enumerate() {
            *v = v.scale(Complex64::new(0.0, self.grid.derivative_wavenumber(n)));
        }
        self.to_position(&hat)
    }

    pub fn derivative_scalar(&self, values: &[f64]) -> Vec<f64> {
        let n = self.grid.n_points;
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::from(v)).collect();
        self.forward.process(&mut buf);
        for (slot, v) in buf.iter_mut().enumerate() {
            *v *= Complex64::new(0.0, self.grid.derivative_wavenumber(slot));
        }
        self.inverse.process(&mut buf);
        buf.iter().map(|v| v.re / n as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(4, 1.0).is_err());
        assert!(Grid1D::new(12, 1.0).is_err());
        assert!(Grid1D::new(16, 0.0).is_err());
        assert!(Grid1D::new(16, 2.0).is_ok());
    }

    #[test]
    fn positions_are_centered() {
        let g = Grid1D::new(8, 4.0).unwrap();
        assert_eq!(g.x(0), -2.0);
        assert_eq!(g.x(4), 0.0);
        assert_eq!(g.spacing(), 0.5);
    }

    #[test]
    fn wave_indices_follow_fft_order() {
        let g = Grid1D::new(8, 2.0 * std::f64::consts::PI).unwrap();
        let idx: Vec<i64> = (0..8).map(|n| g.wave_index(n)).collect();
        assert_eq!(idx, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert_eq!(g.derivative_wavenumber(4), 0.0);
        assert_eq!(g.lattice_index(-2.0), Some(6));
        assert_eq!(g.lattice_index(4.0), None);
        assert_eq!(g.lattice_index(0.5), None);
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let g = Grid1D::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let s = Spectral::new(g);
        let f: Vec<f64> = g.positions().iter().map(|x| (3.0 * x).sin()).collect();
        let d = s.derivative_scalar(&f);
        for (j, dv) in d.iter().enumerate() {
            assert!((dv - 3.0 * (3.0 * g.x(j)).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn fft_round_trip() {
        let g = Grid1D::new(16, 3.0).unwrap();
        let s = Spectral::new(g);
        let vals: Vec<Bispinor> = (0..16)
            .map(|j| {
                let t = j as f64;
                Bispinor::new(
                    Complex64::new(t.sin(), 0.1 * t),
                    Complex64::new(1.0, -t),
                    Complex64::new(0.0, t.cos()),
                    Complex64::new(t * t, 2.0),
                )
            })
            .collect();
        let back = s.to_position(&s.to_momentum(&vals));
        for (a, b) in vals.iter().zip(&back) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
    }
}
