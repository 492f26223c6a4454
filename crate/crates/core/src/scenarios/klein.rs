//! Scattering of a particle of energy E off a potential step of height v0.
//!
//! Region I (x < 0) carries the incident and reflected waves, region II the
//! transmitted one with local energy ε = E − v0. For spin along z the upper
//! and lower components of a wave with momentum ħk are tied by
//! a = ħck/(ε + mc²); matching at x = 0 gives r = (a − a′)/(a + a′) and
//! t = 2a/(a + a′), with fluxes proportional to Re a.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::evolution::grid::Grid1D;
use crate::evolution::potential::PotentialSpec;
use crate::evolution::propagate::{evolve, EvolutionConfig};
use crate::observables::probability_density;
use crate::plane_waves::{PhysicalConstants, Spin};
use crate::scenarios::packet::{make_packet, PacketContent, PacketParams};
use crate::spinor_algebra::GammaSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KleinRegime {
    /// v0 < E − mc²
    Transmitting,
    /// E − mc² ≤ v0 ≤ E + mc²
    Evanescent,
    /// v0 > E + mc²: the transmitted channel sits on the negative branch.
    KleinZone,
}

impl KleinRegime {
    pub fn name(self) -> &'static str {
        match self {
            KleinRegime::Transmitting => "transmitting",
            KleinRegime::Evanescent => "evanescent",
            KleinRegime::KleinZone => "klein_zone",
        }
    }
}

/// Grid packet run used to cross-check the matching result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KleinGridOptions {
    pub n_points: usize,
    pub length: f64,
    /// Spatial standard deviation of ρ.
    pub packet_width: f64,
    /// tanh width of the step in grid cells.
    pub smoothing_cells: f64,
    pub dt: f64,
}

impl Default for KleinGridOptions {
    fn default() -> Self {
        KleinGridOptions {
            n_points: 32768,
            length: 512.0,
            packet_width: 13.0,
            smoothing_cells: 2.0,
            dt: 0.05,
        }
    }
}

impl KleinGridOptions {
    /// Defaults expressed in Compton lengths and times of `consts`.
    pub fn scaled_to(consts: &PhysicalConstants) -> Self {
        let d = Self::default();
        let l = consts.compton_length();
        KleinGridOptions {
            length: d.length * l,
            packet_width: d.packet_width * l,
            dt: d.dt * consts.compton_time(),
            ..d
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleinResult {
    pub energy: f64,
    pub v0: f64,
    pub regime: KleinRegime,
    /// Flux ratios with the transmitted k′ chosen by group velocity.
    pub standard_r: f64,
    pub standard_t: f64,
    /// Negative-branch and evanescent channels carry no flux.
    pub restricted_r: f64,
    pub restricted_t: f64,
    /// Same matching with k′ > 0 in the Klein zone; R > 1 there.
    pub momentum_convention_r: f64,
    pub momentum_convention_t: f64,
    pub kprime_convention: &'static str,
    pub grid_r: Option<f64>,
    pub grid: Option<KleinGridOptions>,
}

pub fn classify(energy: f64, v0: f64, consts: &PhysicalConstants) -> KleinRegime {
    let mc2 = consts.rest_energy();
    if v0 < energy - mc2 {
        KleinRegime::Transmitting
    } else if v0 <= energy + mc2 {
        KleinRegime::Evanescent
    } else {
        KleinRegime::KleinZone
    }
}

/// (R, T) from the amplitude ratios of the incident and transmitted waves.
fn flux_ratios(a: f64, a_t: Complex64) -> (f64, f64) {
    let denom = Complex64::from(a) + a_t;
    let r = ((Complex64::from(a) - a_t) / denom).norm_sqr();
    let t = 4.0 * a * a_t.re / denom.norm_sqr();
    (r, t)
}

/// Plane-wave matching. Returns (standard, momentum convention).
pub fn matching_coefficients(
    energy: f64,
    v0: f64,
    consts: &PhysicalConstants,
) -> Result<((f64, f64), (f64, f64))> {
    let mc2 = consts.rest_energy();
    if !(energy > mc2) {
        return Err(DiracError::BelowRestEnergy { energy, rest: mc2 });
    }
    let hc = consts.hbar * consts.c;
    let a = (energy * energy - mc2 * mc2).sqrt() / (energy + mc2);
    let eps = energy - v0;
    let out = match classify(energy, v0, consts) {
        KleinRegime::Transmitting => {
            let kp = (eps * eps - mc2 * mc2).sqrt() / hc;
            let rt = flux_ratios(a, Complex64::from(hc * kp / (eps + mc2)));
            (rt, rt)
        }
        KleinRegime::Evanescent => {
            if eps + mc2 == 0.0 {
                ((1.0, 0.0), (1.0, 0.0))
            } else {
                // k′ = iκ, decaying into the step.
                let kappa = (mc2 * mc2 - eps * eps).sqrt() / hc;
                let rt = flux_ratios(a, Complex64::new(0.0, hc * kappa / (eps + mc2)));
                (rt, rt)
            }
        }
        KleinRegime::KleinZone => {
            let p = (eps * eps - mc2 * mc2).sqrt();
            // Outgoing group velocity c²ħk′/ε > 0 needs k′ < 0 since ε < 0.
            let group = flux_ratios(a, Complex64::from(-p / (eps + mc2)));
            let momentum = flux_ratios(a, Complex64::from(p / (eps + mc2)));
            (group, momentum)
        }
    };
    Ok(out)
}

pub fn klein_step(
    energy: f64,
    v0: f64,
    consts: &PhysicalConstants,
    grid_options: Option<&KleinGridOptions>,
    g: &GammaSet,
) -> Result<KleinResult> {
    let (standard, momentum) = matching_coefficients(energy, v0, consts)?;
    let regime = classify(energy, v0, consts);
    let restricted = match regime {
        KleinRegime::Transmitting => standard,
        _ => (1.0, 0.0),
    };
    let grid_r = match grid_options {
        Some(opts) => Some(grid_reflection(energy, v0, consts, opts, g)?),
        None => None,
    };
    Ok(KleinResult {
        energy,
        v0,
        regime,
        standard_r: standard.0,
        standard_t: standard.1,
        restricted_r: restricted.0,
        restricted_t: restricted.1,
        momentum_convention_r: momentum.0,
        momentum_convention_t: momentum.1,
        kprime_convention: "group_velocity",
        grid_r,
        grid: grid_options.copied(),
    })
}

/// Relative energy spread δE/E = v/(2w)/E of the probe packet.
pub fn packet_energy_spread(energy: f64, width: f64, consts: &PhysicalConstants) -> f64 {
    let mc2 = consts.rest_energy();
    let v = consts.c * consts.c * (energy * energy - mc2 * mc2).sqrt() / (consts.c * energy);
    consts.hbar * v / (2.0 * width) / energy
}

/// Sends a positive-frequency packet at the smoothed step and returns the
/// probability found left of the step once the scattering is over.
pub fn grid_reflection(
    energy: f64,
    v0: f64,
    consts: &PhysicalConstants,
    opts: &KleinGridOptions,
    g: &GammaSet,
) -> Result<f64> {
    let mc2 = consts.rest_energy();
    if !(energy > mc2) {
        return Err(DiracError::BelowRestEnergy { energy, rest: mc2 });
    }
    let grid = Grid1D::new(opts.n_points, opts.length)?;
    let c = consts.c;
    let hc = consts.hbar * c;
    let k0 = (energy * energy - mc2 * mc2).sqrt() / hc;
    let v_in = c * hc * k0 / energy;
    let w = opts.packet_width;
    let x0 = -6.0 * w;

    let eps = energy - v0;
    let v_out = match classify(energy, v0, consts) {
        KleinRegime::Evanescent => 0.0,
        _ => c * (eps * eps - mc2 * mc2).sqrt() / eps.abs(),
    };
    let mut t_end = (x0.abs() + 8.0 * w) / v_in;
    if v_out > 0.0 {
        t_end += 2.0 * w / v_out;
    }
    let reflected_reach = v_in * t_end - x0.abs() + 5.0 * w;
    let transmitted_reach = v_out * (t_end - x0.abs() / v_in).max(0.0) + 5.0 * w;
    if reflected_reach.max(transmitted_reach) > 0.5 * opts.length {
        return Err(DiracError::Precondition(format!(
            "box of length {} too short for the scattering run (needs {})",
            opts.length,
            2.0 * reflected_reach.max(transmitted_reach)
        )));
    }

    let params = PacketParams {
        k0,
        width: w,
        x0,
        spin: Spin::Up,
    };
    let field = make_packet(&grid, &params, PacketContent::PositiveOnly, consts, g)?;
    let potential = PotentialSpec::step(&grid, v0, opts.smoothing_cells * grid.spacing());
    let steps = (t_end / opts.dt).ceil() as usize;
    let mut config = EvolutionConfig::new(opts.dt, steps);
    config.record_every = steps;
    let traj = evolve(&field, &potential, &config, consts, g)?;
    let rho = probability_density(traj.last());
    let positions = grid.positions();
    let total: f64 = rho.iter().sum();
    let left: f64 = rho
        .iter()
        .zip(&positions)
        .filter(|(_, x)| **x < 0.0)
        .map(|(r, _)| r)
        .sum();
    Ok(left / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn no_step_transmits_everything() {
        let g = crate::spinor_algebra::make_gammas();
        let r = klein_step(1.25, 0.0, &unit(), None, &g).unwrap();
        assert_eq!(r.regime, KleinRegime::Transmitting);
        assert!(r.standard_r.abs() < 1e-15);
        assert!((r.standard_t - 1.0).abs() < 1e-15);
        assert_eq!(
            (r.restricted_r, r.restricted_t),
            (r.standard_r, r.standard_t)
        );
    }

    #[test]
    fn evanescent_point_reflects_totally() {
        let g = crate::spinor_algebra::make_gammas();
        let r = klein_step(1.25, 1.0, &unit(), None, &g).unwrap();
        assert_eq!(r.regime, KleinRegime::Evanescent);
        assert!((r.standard_r - 1.0).abs() < 1e-12);
        assert!(r.standard_t.abs() < 1e-12);
        assert_eq!((r.restricted_r, r.restricted_t), (1.0, 0.0));
    }

    #[test]
    fn klein_zone_point() {
        let g = crate::spinor_algebra::make_gammas();
        let r = klein_step(1.25, 3.0, &unit(), None, &g).unwrap();
        assert_eq!(r.regime, KleinRegime::KleinZone);
        // a = 0.75/2.25, a′ = √(1.75² − 1)/0.75, κ = a′/a = 5.744562646538029
        let kappa = (1.75f64 * 1.75 - 1.0).sqrt() / 0.75 / (0.75 / 2.25);
        let r_expect = ((1.0 - kappa) / (1.0 + kappa)).powi(2);
        assert!((r.standard_r - r_expect).abs() < 1e-12);
        assert!((r.standard_r - 0.4948627735066681).abs() < 1e-12);
        assert!(r.standard_t > 0.1);
        assert!((r.standard_r + r.standard_t - 1.0).abs() < 1e-12);
        assert!(r.momentum_convention_r > 1.0);
        assert!((r.momentum_convention_r + r.momentum_convention_t - 1.0).abs() < 1e-12);
        assert_eq!((r.restricted_r, r.restricted_t), (1.0, 0.0));
    }

    #[test]
    fn flux_balance_across_regimes() {
        for v0 in [
            -2.0, -0.3, 0.1, 0.24, 0.26, 1.0, 2.24, 2.25, 2.26, 5.0, 40.0,
        ] {
            let ((r, t), (rm, tm)) = matching_coefficients(1.25, v0, &unit()).unwrap();
            assert!((r + t - 1.0).abs() < 1e-12, "v0 = {v0}");
            assert!((rm + tm - 1.0).abs() < 1e-12, "v0 = {v0}");
            assert!((0.0..=1.0 + 1e-12).contains(&r));
        }
    }

    #[test]
    fn rejects_energy_below_rest_mass() {
        let g = crate::spinor_algebra::make_gammas();
        assert!(matches!(
            klein_step(1.0, 0.5, &unit(), None, &g),
            Err(DiracError::BelowRestEnergy { .. })
        ));
    }

    #[test]
    fn classification_boundaries() {
        let c = unit();
        assert_eq!(classify(1.25, 0.2, &c), KleinRegime::Transmitting);
        assert_eq!(classify(1.25, 0.25, &c), KleinRegime::Evanescent);
        assert_eq!(classify(1.25, 2.25, &c), KleinRegime::Evanescent);
        assert_eq!(classify(1.25, 2.2500001, &c), KleinRegime::KleinZone);
    }
}
