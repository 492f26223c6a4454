//! Bilinear observables of a probability amplitude: density, current,
//! continuity residual, Lagrangian density, energy-momentum tensor and the
//! energy/momentum integrals.
//!
//! Time derivatives are passed in explicitly. For solutions they come from
//! the Hamiltonian ([`on_shell_time_derivative`]); any other source (finite
//! differences, a trial energy) is allowed and makes the Lagrangian density
//! a genuine off-shell measure.

use num_complex::Complex64;

use crate::error::{DiracError, Result};
use crate::evolution::grid::{GridField, Spectral};
use crate::evolution::hamiltonian::Hamiltonian;
use crate::evolution::potential::PotentialSpec;
use crate::evolution::propagate::Trajectory;
use crate::plane_waves::PhysicalConstants;
use crate::spinor_algebra::{dirac_adjoint, AdjointBispinor, Bispinor, GammaSet};

/// ρ = ψ⁺ψ
pub fn probability_density(field: &GridField) -> Vec<f64> {
    field.values.iter().map(Bispinor::norm_sqr).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentDensity {
    pub j_z: Vec<f64>,
    /// cρ
    pub j_0: Vec<f64>,
}

/// j_μ = icψ̄γ_μψ; returns j_z and j_0 = j₄/i.
pub fn current_density(
    field: &GridField,
    g: &GammaSet,
    consts: &PhysicalConstants,
) -> CurrentDensity {
    let ic = Complex64::new(0.0, consts.c);
    let (mut j_z, mut j_0) = (
        Vec::with_capacity(field.values.len()),
        Vec::with_capacity(field.values.len()),
    );
    for psi in &field.values {
        let bar = dirac_adjoint(psi, g);
        j_z.push((ic * bar.sandwich(g.gamma_mu(3), psi)).re);
        j_0.push((ic * bar.sandwich(g.gamma4(), psi) / Complex64::new(0.0, 1.0)).re);
    }
    CurrentDensity { j_z, j_0 }
}

/// max over interior snapshots and grid points of |∂ρ/∂t + ∂j_z/∂z|, with a
/// central difference in time and a spectral derivative in space.
pub fn continuity_residual(
    traj: &Trajectory,
    g: &GammaSet,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let snaps = &traj.snapshots;
    if snaps.len() < 3 {
        return Err(DiracError::TooFewSnapshots {
            needed: 3,
            found: snaps.len(),
        });
    }
    let dt = snaps[1].time - snaps[0].time;
    for w in snaps.windows(2) {
        if ((w[1].time - w[0].time) - dt).abs() > 1e-9 * dt.abs().max(1.0) {
            return Err(DiracError::InvalidConfig(
                "snapshots are not uniformly spaced".into(),
            ));
        }
    }
    let spectral = Spectral::new(snaps[0].grid);
    let mut worst: f64 = 0.0;
    for i in 1..snaps.len() - 1 {
        let before = probability_density(&snaps[i - 1]);
        let after = probability_density(&snaps[i + 1]);
        let div = spectral.derivative_scalar(&current_density(&snaps[i], g, consts).j_z);
        for ((a, b), d) in after.iter().zip(&before).zip(&div) {
            worst = worst.max(((a - b) / (2.0 * dt) + d).abs());
        }
    }
    Ok(worst)
}

/// ∂ψ/∂t = −(i/ħ)Hψ.
pub fn on_shell_time_derivative(field: &GridField, h: &Hamiltonian) -> Vec<Bispinor> {
    h.time_derivative(field)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMomentum {
    pub energy: f64,
    /// z-component.
    pub momentum: f64,
}

/// P = −iħ∫ψ⁺∂_zψ dz and W = iħ∫ψ⁺∂_tψ dz with ∂_tψ taken from H.
pub fn total_energy_momentum(field: &GridField, h: &Hamiltonian) -> EnergyMomentum {
    let dx = field.grid.spacing();
    let hbar = h.consts.hbar;
    let dz = h.spectral().derivative(&field.values);
    let hpsi = h.apply_field(field);
    let mut p = Complex64::from(0.0);
    let mut w = Complex64::from(0.0);
    for ((psi, d), hv) in field.values.iter().zip(&dz).zip(&hpsi) {
        p += psi.inner(d);
        w += psi.inner(hv);
    }
    EnergyMomentum {
        energy: (w * dx).re,
        momentum: (p * Complex64::new(0.0, -hbar) * dx).re,
    }
}

/// Derivatives ∂_μψ and ∂_μψ̄ in the Euclidean convention at one grid point,
/// μ = 1..4 stored at index μ−1. Transverse derivatives vanish in 1+1-D.
struct PointDerivatives {
    column: [Bispinor; 4],
    row: [AdjointBispinor; 4],
}

fn point_derivatives(
    dpsi_dz: &Bispinor,
    dpsi_dt: &Bispinor,
    g: &GammaSet,
    consts: &PhysicalConstants,
) -> PointDerivatives {
    let d4 = Complex64::new(0.0, -1.0 / consts.c);
    let zero_row = AdjointBispinor(nalgebra::RowVector4::zeros());
    let row_z = dirac_adjoint(dpsi_dz, g);
    let row_t = dirac_adjoint(dpsi_dt, g);
    PointDerivatives {
        column: [Bispinor::ZERO, Bispinor::ZERO, *dpsi_dz, dpsi_dt.scale(d4)],
        row: [zero_row, zero_row, row_z, AdjointBispinor(row_t.0 * d4)],
    }
}

/// Lagrangian density of a particle field (charge sign from the field's
/// species):
/// −(cħ/2)(ψ̄γ_μ∂_μψ − ∂_μψ̄γ_μψ) + iqA_μψ̄γ_μψ − mc²ψ̄ψ.
pub fn lagrangian_density(
    field: &GridField,
    dpsi_dt: &[Bispinor],
    potential: &PotentialSpec,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<Vec<f64>> {
    potential.check_grid(&field.grid)?;
    if dpsi_dt.len() != field.values.len() {
        return Err(DiracError::GridMismatch {
            expected: field.values.len(),
            found: dpsi_dt.len(),
        });
    }
    let spectral = Spectral::new(field.grid);
    let dz = spectral.derivative(&field.values);
    let q = field.charge_sign() * consts.e;
    let half_chbar = Complex64::from(0.5 * consts.c * consts.hbar);
    Ok(field
        .values
        .iter()
        .zip(&dz)
        .zip(dpsi_dt)
        .enumerate()
        .map(|(j, ((psi, d_z), d_t))| {
            let bar = dirac_adjoint(psi, g);
            let d = point_derivatives(d_z, d_t, g, consts);
            let (a0, az) = potential.at(j, field.time);
            let a_mu = [
                Complex64::from(0.0),
                Complex64::from(0.0),
                Complex64::from(az),
                Complex64::new(0.0, a0),
            ];
            let mut kinetic = Complex64::from(0.0);
            let mut coupling = Complex64::from(0.0);
            for mu in 0..4 {
                let gm = &g.gamma[mu];
                kinetic += bar.sandwich(gm, &d.column[mu]) - d.row[mu].sandwich(gm, psi);
                coupling += a_mu[mu] * bar.sandwich(gm, psi);
            }
            let value = -half_chbar * kinetic + Complex64::new(0.0, q) * coupling
                - Complex64::from(consts.rest_energy()) * bar.contract(psi);
            value.re
        })
        .collect())
}

/// T_μν = −(cħ/2)ψ̄γ_ν∂_μψ + (cħ/2)∂_μψ̄γ_νψ for μ, ν ∈ 1..=4.
pub fn stress_tensor_density(
    field: &GridField,
    dpsi_dt: &[Bispinor],
    mu: usize,
    nu: usize,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<Vec<Complex64>> {
    for idx in [mu, nu] {
        if !(1..=4).contains(&idx) {
            return Err(DiracError::InvalidConfig(format!(
                "tensor index {idx} outside 1..=4"
            )));
        }
    }
    if dpsi_dt.len() != field.values.len() {
        return Err(DiracError::GridMismatch {
            expected: field.values.len(),
            found: dpsi_dt.len(),
        });
    }
    let spectral = Spectral::new(field.grid);
    let dz = spectral.derivative(&field.values);
    let half_chbar = Complex64::from(0.5 * consts.c * consts.hbar);
    let gn = g.gamma_mu(nu);
    Ok(field
        .values
        .iter()
        .zip(&dz)
        .zip(dpsi_dt)
        .map(|((psi, d_z), d_t)| {
            let bar = dirac_adjoint(psi, g);
            let d = point_derivatives(d_z, d_t, g, consts);
            -half_chbar * bar.sandwich(gn, &d.column[mu - 1])
                + half_chbar * d.row[mu - 1].sandwich(gn, psi)
        })
        .collect())
}

/// W = ∫T₄₄ dz and P_z = (i/c)∫T₃₄ dz.
pub fn tensor_energy_momentum(
    field: &GridField,
    dpsi_dt: &[Bispinor],
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<EnergyMomentum> {
    let dx = field.grid.spacing();
    let t44: Complex64 = stress_tensor_density(field, dpsi_dt, 4, 4, consts, g)?
        .iter()
        .sum();
    let t34: Complex64 = stress_tensor_density(field, dpsi_dt, 3, 4, consts, g)?
        .iter()
        .sum();
    Ok(EnergyMomentum {
        energy: (t44 * dx).re,
        momentum: (Complex64::new(0.0, 1.0 / consts.c) * t34 * dx).re,
    })
}

/// ⟨z⟩ = ∫zρ dz / ∫ρ dz with the origin at the box center.
pub fn position_expectation(field: &GridField) -> Result<f64> {
    let rho = probability_density(field);
    let norm: f64 = rho.iter().sum::<f64>() * field.grid.spacing();
    if norm < 1e-12 {
        return Err(DiracError::VanishingNorm(norm));
    }
    let first: f64 = rho
        .iter()
        .enumerate()
        .map(|(j, r)| field.grid.x(j) * r)
        .sum::<f64>()
        * field.grid.spacing();
    Ok(first / norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableReport {
    pub time: f64,
    pub norm: f64,
    pub energy: f64,
    pub momentum: f64,
    pub mean_x: f64,
}

pub fn observe(field: &GridField, h: &Hamiltonian) -> Result<ObservableReport> {
    let em = total_energy_momentum(field, h);
    Ok(ObservableReport {
        time: field.time,
        norm: field.norm_sqr(),
        energy: em.energy,
        momentum: em.momentum,
        mean_x: position_expectation(field)?,
    })
}
