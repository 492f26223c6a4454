use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::evolution::grid::{FrequencyContent, Grid1D, GridField, Spectral};
use crate::plane_waves::{mode_bispinor, PhysicalConstants, Species, Spin};
use crate::spinor_algebra::{Bispinor, GammaSet};

/// Gaussian packet: ρ has standard deviation `width` around `x0`, momentum
/// content centered on `k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub k0: f64,
    pub width: f64,
    pub x0: f64,
    #[serde(default = "default_spin")]
    pub spin: Spin,
}

fn default_spin() -> Spin {
    Spin::Up
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PacketContent {
    PositiveOnly,
    /// Adds α times the charge conjugate of an antiparticle packet.
    Mixed(f64),
}

fn check_resolvable(grid: &Grid1D, p: &PacketParams) -> Result<()> {
    if !(p.width >= 4.0 * grid.spacing()) {
        return Err(DiracError::UnresolvablePacket(format!(
            "width {} is below four grid spacings ({})",
            p.width,
            4.0 * grid.spacing()
        )));
    }
    if p.x0.abs() + 5.0 * p.width > 0.5 * grid.length {
        return Err(DiracError::UnresolvablePacket(format!(
            "packet at {} with width {} leaves the box of length {}",
            p.x0, p.width, grid.length
        )));
    }
    if p.k0.abs() + 4.0 / p.width > grid.max_wavenumber() {
        return Err(DiracError::UnresolvablePacket(format!(
            "momentum content around {} exceeds the grid cutoff {}",
            p.k0,
            grid.max_wavenumber()
        )));
    }
    Ok(())
}

/// Positive-frequency Gaussian packet of one species, normalized to 1.
fn positive_packet(
    grid: &Grid1D,
    p: &PacketParams,
    species: Species,
    consts: &PhysicalConstants,
) -> Result<GridField> {
    let spectral = Spectral::new(*grid);
    let shift = p.x0 + 0.5 * grid.length;
    let hat = (0..grid.n_points)
        .map(|n| {
            if grid.is_nyquist(n) {
                return Ok(Bispinor::ZERO);
            }
            let k = grid.derivative_wavenumber(n);
            let envelope = (-(k - p.k0).powi(2) * p.width * p.width).exp();
            let u = mode_bispinor(&[0.0, 0.0, k], p.spin, species, consts)?;
            Ok(u.scale(Complex64::from_polar(envelope, -k * shift)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut field = GridField::from_values(
        *grid,
        spectral.to_position(&hat),
        species,
        FrequencyContent::Positive,
    )?;
    field.normalize()?;
    Ok(field)
}

/// Gaussian particle packet built from positive-frequency plane waves, or a
/// mixed-frequency field ψ₊ + α·C*η̄̃₊ where η₊ is the same envelope for an
/// antiparticle with the opposite spin label (its conjugate then carries the
/// particle's spin projection). Normalized to 1.
pub fn make_packet(
    grid: &Grid1D,
    params: &PacketParams,
    content: PacketContent,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<GridField> {
    check_resolvable(grid, params)?;
    let psi = positive_packet(grid, params, Species::Particle, consts)?;
    let alpha = match content {
        PacketContent::PositiveOnly => return Ok(psi),
        PacketContent::Mixed(a) if a == 0.0 => return Ok(psi),
        PacketContent::Mixed(a) => a,
    };
    let eta_params = PacketParams {
        spin: params.spin.flipped(),
        ..*params
    };
    let eta = positive_packet(grid, &eta_params, Species::Antiparticle, consts)?;
    let minus = eta.charge_conjugated(g);
    let values = psi
        .values
        .iter()
        .zip(&minus.values)
        .map(|(a, b)| *a + b.scale(Complex64::from(alpha)))
        .collect();
    let mut field =
        GridField::from_values(*grid, values, Species::Particle, FrequencyContent::Mixed)?;
    field.normalize()?;
    Ok(field)
}
