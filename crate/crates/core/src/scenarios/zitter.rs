//! Mean-position jitter of free packets with and without negative-frequency
//! content.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::evolution::grid::{Grid1D, GridField};
use crate::evolution::potential::PotentialSpec;
use crate::evolution::propagate::{evolve, EvolutionConfig};
use crate::observables::position_expectation;
use crate::plane_waves::PhysicalConstants;
use crate::scenarios::packet::{make_packet, PacketContent, PacketParams};
use crate::spinor_algebra::GammaSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PacketKind {
    Mixed,
    PositiveOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZitterParams {
    pub packet: PacketParams,
    /// Weight of the conjugated antiparticle packet in the mixed run.
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZitterResult {
    pub times: Vec<f64>,
    pub mean_x: Vec<f64>,
    /// Half the peak-to-peak range of ⟨x⟩ after removing the linear drift.
    pub detrended_amplitude: f64,
    /// Angular frequency of the largest spectral peak of the detrended ⟨x⟩.
    pub dominant_frequency: f64,
    pub packet_kind: PacketKind,
}

/// 2mc²/ħ
pub fn jitter_frequency(consts: &PhysicalConstants) -> f64 {
    2.0 * consts.rest_energy() / consts.hbar
}

/// Residuals of the least-squares line through (t, y).
pub fn detrend(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxy: f64 = t.iter().zip(y).map(|(a, b)| (a - tm) * (b - ym)).sum();
    let sxx: f64 = t.iter().map(|a| (a - tm) * (a - tm)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    t.iter()
        .zip(y)
        .map(|(a, b)| b - ym - slope * (a - tm))
        .collect()
}

/// Peak of |DFT| over positive frequencies of a uniformly sampled series,
/// refined by a parabola through the three bins around the maximum.
pub fn dominant_frequency(series: &[f64], dt: f64) -> f64 {
    let n = series.len();
    if n < 4 {
        return 0.0;
    }
    let mut buf: Vec<Complex64> = series.iter().map(|v| Complex64::from(*v)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf.iter().map(|c| c.norm()).collect();
    let half = n / 2;
    let peak = (1..=half)
        .max_by(|a, b| mag[*a].total_cmp(&mag[*b]))
        .unwrap_or(1);
    let mut shift = 0.0;
    if peak > 1 && peak < half {
        let (l, c, r) = (mag[peak - 1], mag[peak], mag[peak + 1]);
        let denom = l - 2.0 * c + r;
        if denom != 0.0 {
            shift = 0.5 * (l - r) / denom;
        }
    }
    2.0 * std::f64::consts::PI * (peak as f64 + shift) / (n as f64 * dt)
}

fn run(
    field: &GridField,
    steps: usize,
    dt: f64,
    kind: PacketKind,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<ZitterResult> {
    let potential = PotentialSpec::free(&field.grid);
    let traj = evolve(
        field,
        &potential,
        &EvolutionConfig::new(dt, steps),
        consts,
        g,
    )?;
    let times = traj.times();
    let mean_x = traj
        .snapshots
        .iter()
        .map(position_expectation)
        .collect::<Result<Vec<_>>>()?;
    let residual = detrend(&times, &mean_x);
    let max = residual.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = residual.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ZitterResult {
        dominant_frequency: dominant_frequency(&residual, dt),
        detrended_amplitude: 0.5 * (max - min),
        times,
        mean_x,
        packet_kind: kind,
    })
}

/// Evolves a mixed packet (weight `alpha`) and the matching positive-only
/// packet freely and compares their mean-position time series.
pub fn zitterbewegung_compare(
    grid: &Grid1D,
    params: &ZitterParams,
    duration: f64,
    dt: f64,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<(ZitterResult, ZitterResult)> {
    let compton_period = 2.0 * std::f64::consts::PI * consts.compton_time();
    if !(duration >= 10.0 * compton_period) {
        return Err(DiracError::Precondition(format!(
            "duration {duration} is shorter than ten Compton periods ({})",
            10.0 * compton_period
        )));
    }
    let jitter_period = 2.0 * std::f64::consts::PI / jitter_frequency(consts);
    if !(dt > 0.0 && dt <= jitter_period / 20.0) {
        return Err(DiracError::Precondition(format!(
            "dt {dt} resolves the jitter period {jitter_period} with fewer than 20 samples"
        )));
    }
    let steps = (duration / dt).round() as usize;
    let positive = make_packet(grid, &params.packet, PacketContent::PositiveOnly, consts, g)?;
    let mixed = make_packet(
        grid,
        &params.packet,
        PacketContent::Mixed(params.alpha),
        consts,
        g,
    )?;
    Ok((
        run(&mixed, steps, dt, PacketKind::Mixed, consts, g)?,
        run(&positive, steps, dt, PacketKind::PositiveOnly, consts, g)?,
    ))
}
