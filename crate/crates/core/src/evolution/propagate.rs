use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::evolution::grid::{FrequencyContent, GridField};
use crate::evolution::hamiltonian::{build_hamiltonian, Hamiltonian};
use crate::evolution::potential::PotentialSpec;
use crate::frequency_split::{stationary_spectrum, AmplitudePair, SpectralDecomposition};
use crate::plane_waves::PhysicalConstants;
use crate::spinor_algebra::{ComplexMatrix4, GammaSet};

/// What to remove from the field after every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    #[default]
    None,
    /// Per-momentum positive projector of the free Hamiltonian.
    PositiveFree,
    /// Positive eigenspace of the stationary part of the Hamiltonian.
    PositiveStationary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Second-order potential/kinetic splitting.
    #[default]
    Strang,
    /// Exact propagation in the stationary eigenbasis (stationary potentials only).
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub steps: usize,
    #[serde(default)]
    pub projection: Projection,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub integrator: Integrator,
}

fn default_record_every() -> usize {
    1
}

impl EvolutionConfig {
    pub fn new(dt: f64, steps: usize) -> Self {
        EvolutionConfig {
            dt,
            steps,
            projection: Projection::None,
            record_every: 1,
            integrator: Integrator::Strang,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(DiracError::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.steps == 0 {
            return Err(DiracError::InvalidConfig("steps must be at least 1".into()));
        }
        if self.record_every == 0 {
            return Err(DiracError::InvalidConfig(
                "record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Snapshots recorded every `record_every` steps, starting with the initial field.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<GridField>,
    pub record_interval: f64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    pub fn last(&self) -> &GridField {
        self.snapshots
            .last()
            .expect("trajectory always holds the initial field")
    }
}

/// exp(−iH(k)τ) = cos(Eτ) − i sin(Eτ)H(k)/E, applied per momentum slot.
fn free_propagator(symbol: &ComplexMatrix4, energy: f64, tau: f64) -> ComplexMatrix4 {
    let sinc = if energy == 0.0 {
        tau
    } else {
        (energy * tau).sin() / energy
    };
    ComplexMatrix4::identity() * Complex64::from((energy * tau).cos())
        - symbol * Complex64::new(0.0, sinc)
}

fn slot_energy(h: &Hamiltonian, k: f64) -> f64 {
    let c = &h.consts;
    (c.hbar * c.c * k).hypot(c.rest_energy())
}

/// Strang splitting with exact kinetic and potential factors.
#[derive(Debug, Clone)]
pub struct StrangPropagator {
    h: Hamiltonian,
    dt: f64,
    kinetic: Vec<ComplexMatrix4>,
    fixed_halves: Option<Vec<ComplexMatrix4>>,
}

impl StrangPropagator {
    pub fn new(h: Hamiltonian, dt: f64) -> Self {
        let tau = dt / h.consts.hbar;
        let kinetic = (0..h.grid.n_points)
            .map(|n| {
                let k = h.grid.derivative_wavenumber(n);
                free_propagator(&h.kinetic_symbol(k), slot_energy(&h, k), tau)
            })
            .collect();
        let mut p = StrangPropagator {
            h,
            dt,
            kinetic,
            fixed_halves: None,
        };
        if p.h.potential.is_stationary() {
            p.fixed_halves = Some(p.halves(0.0));
        }
        p
    }

    fn halves(&self, t: f64) -> Vec<ComplexMatrix4> {
        (0..self.h.grid.n_points)
            .map(|j| self.half_potential(j, t))
            .collect()
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.h
    }

    /// exp(−iV dt/2ħ) for V = q(A₀ − α_zA_z), using α_z² = 1.
    fn half_potential(&self, j: usize, t: f64) -> ComplexMatrix4 {
        let q = self.h.charge();
        let (a0, az) = self.h.potential.at(j, t);
        let tau = 0.5 * self.dt / self.h.consts.hbar;
        let theta = q * az * tau;
        (ComplexMatrix4::identity() * Complex64::from(theta.cos())
            + self.h.alpha_z() * Complex64::new(0.0, theta.sin()))
            * Complex64::from_polar(1.0, -q * a0 * tau)
    }

    pub fn step(&self, field: &mut GridField) {
        let computed;
        let halves = match &self.fixed_halves {
            Some(h) => h,
            None => {
                computed = self.halves(field.time + 0.5 * self.dt);
                &computed
            }
        };
        for (v, u) in field.values.iter_mut().zip(halves) {
            *v = u * *v;
        }
        let spectral = self.h.spectral();
        let mut hat = spectral.to_momentum(&field.values);
        for (v, u) in hat.iter_mut().zip(&self.kinetic) {
            *v = u * *v;
        }
        field.values = spectral.to_position(&hat);
        for (v, u) in field.values.iter_mut().zip(halves) {
            *v = u * *v;
        }
        field.time += self.dt;
    }
}

/// One Strang step of `field` in `potential`.
pub fn step_strang(
    field: &GridField,
    potential: &PotentialSpec,
    dt: f64,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<GridField> {
    let h = build_hamiltonian(&field.grid, potential, field.species, consts, g)?;
    let mut out = field.clone();
    StrangPropagator::new(h, dt).step(&mut out);
    Ok(out)
}

/// ½(1 + H_free(k)/E(k)) per momentum slot.
#[derive(Debug, Clone)]
pub struct FreePositiveProjector {
    h: Hamiltonian,
    projectors: Vec<ComplexMatrix4>,
}

impl FreePositiveProjector {
    pub fn new(h: Hamiltonian) -> Result<Self> {
        let projectors = (0..h.grid.n_points)
            .map(|n| {
                let k = h.grid.derivative_wavenumber(n);
                let e = slot_energy(&h, k);
                if e < crate::frequency_split::ZERO_MODE_TOL {
                    return Err(DiracError::ZeroMode(e));
                }
                Ok(
                    (ComplexMatrix4::identity() + h.kinetic_symbol(k) / Complex64::from(e))
                        * Complex64::from(0.5),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FreePositiveProjector { h, projectors })
    }

    pub fn project(&self, field: &GridField) -> GridField {
        let spectral = self.h.spectral();
        let mut hat = spectral.to_momentum(&field.values);
        for (v, p) in hat.iter_mut().zip(&self.projectors) {
            *v = p * *v;
        }
        GridField {
            values: spectral.to_position(&hat),
            frequency: FrequencyContent::Positive,
            ..field.clone()
        }
    }

    /// ||ψ − P₊ψ||²
    pub fn negative_weight(&self, field: &GridField) -> f64 {
        let p = self.project(field);
        let diff: Vec<_> = field
            .values
            .iter()
            .zip(&p.values)
            .map(|(a, b)| *a - *b)
            .collect();
        diff.iter().map(|v| v.norm_sqr()).sum::<f64>() * field.grid.spacing()
    }
}

enum Stepper<'a> {
    Strang(StrangPropagator),
    Exact(&'a SpectralDecomposition, f64),
}

enum Projector<'a> {
    Free(FreePositiveProjector),
    Stationary(&'a SpectralDecomposition),
}

/// Evolves `field`, building the stationary decomposition on demand.
pub fn evolve(
    field: &GridField,
    potential: &PotentialSpec,
    config: &EvolutionConfig,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<Trajectory> {
    let needs_spectrum = config.projection == Projection::PositiveStationary
        || config.integrator == Integrator::Spectral;
    if needs_spectrum {
        let spec = stationary_spectrum(
            &field.grid,
            &potential.stationary_part(),
            field.species,
            consts,
            g,
        )
        .map_err(|e| match e {
            DiracError::GridTooLarge { .. } | DiracError::ZeroMode(_) => {
                DiracError::SpectrumUnavailable
            }
            other => other,
        })?;
        evolve_with_spectrum(field, potential, config, consts, g, Some(&spec))
    } else {
        evolve_with_spectrum(field, potential, config, consts, g, None)
    }
}

/// As [`evolve`], reusing a precomputed stationary decomposition.
pub fn evolve_with_spectrum(
    field: &GridField,
    potential: &PotentialSpec,
    config: &EvolutionConfig,
    consts: &PhysicalConstants,
    g: &GammaSet,
    spectrum: Option<&SpectralDecomposition>,
) -> Result<Trajectory> {
    config.validate()?;
    let h = build_hamiltonian(&field.grid, potential, field.species, consts, g)?;
    if let Some(s) = spectrum {
        if s.species != field.species {
            return Err(DiracError::WrongSpecies {
                expected: s.species.name(),
                found: field.species.name(),
            });
        }
    }
    let stepper = match config.integrator {
        Integrator::Strang => Stepper::Strang(StrangPropagator::new(h.clone(), config.dt)),
        Integrator::Spectral => {
            if !potential.is_stationary() {
                return Err(DiracError::NotStationary);
            }
            Stepper::Exact(
                spectrum.ok_or(DiracError::SpectrumUnavailable)?,
                consts.hbar,
            )
        }
    };
    let projector = match config.projection {
        Projection::None => None,
        Projection::PositiveFree => Some(Projector::Free(FreePositiveProjector::new(h)?)),
        Projection::PositiveStationary => Some(Projector::Stationary(
            spectrum.ok_or(DiracError::SpectrumUnavailable)?,
        )),
    };

    let mut current = field.clone();
    let mut snapshots = Vec::with_capacity(config.steps / config.record_every + 1);
    snapshots.push(current.clone());
    for step in 1..=config.steps {
        match &stepper {
            Stepper::Strang(p) => p.step(&mut current),
            Stepper::Exact(s, hbar) => current = s.propagate(&current, config.dt, *hbar)?,
        }
        match &projector {
            Some(Projector::Free(p)) => current = p.project(&current),
            Some(Projector::Stationary(s)) => current = s.project_positive(&current)?,
            None => {}
        }
        if step % config.record_every == 0 {
            snapshots.push(current.clone());
        }
    }
    Ok(Trajectory {
        snapshots,
        record_interval: config.dt * config.record_every as f64,
    })
}

/// Evolves the particle and antiparticle amplitudes independently; each sees
/// the potential with its own charge sign.
pub fn evolve_pair(
    pair: &AmplitudePair,
    potential: &PotentialSpec,
    config: &EvolutionConfig,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<(Trajectory, Trajectory)> {
    Ok((
        evolve(&pair.psi_plus, potential, config, consts, g)?,
        evolve(&pair.eta_plus, potential, config, consts, g)?,
    ))
}
