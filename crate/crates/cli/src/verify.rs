//! The identity, orthonormality and completeness suite behind `dirac verify`.

use dirac_core::frequency_split::{cross_orthogonality_check, stationary_spectrum};
use dirac_core::plane_waves::{
    check_completeness, check_orthonormality, dispersion, mode_bispinor, momentum_space_residual,
    plane_wave_cross_orthogonality, upper_weight, Vec3,
};
use dirac_core::spinor_algebra::{
    charge_conjugate, clifford_residual, hermiticity_residual, verify_c_identities, ComplexMatrix4,
};
use dirac_core::{
    make_gammas, Bispinor, GammaSet, Grid1D, PhysicalConstants, PotentialSpec, Species, Spin,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl CheckOutcome {
    fn measured(name: &'static str, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckOutcome {
            name,
            residual,
            tolerance,
            status,
        }
    }

    fn skipped(name: &'static str, tolerance: f64, why: &'static str) -> Self {
        CheckOutcome {
            name,
            residual: f64::NAN,
            tolerance,
            status: Status::Skipped(why),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Gamma set used by the suite, with the fault hook applied.
pub fn gamma_set(cfg: &RunConfig) -> GammaSet {
    let mut g = make_gammas();
    if cfg.verify.corrupt_c {
        g.c_matrix = ComplexMatrix4::identity();
    }
    g
}

fn random_bispinor(rng: &mut ChaCha8Rng) -> Bispinor {
    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    Bispinor::new(c(), c(), c(), c())
}

/// k = 0, |k| = 10 along z and along a random direction, then uniform samples
/// in the cube |k_i| ≤ 10. The zero momentum is dropped for massless fields.
fn sample_momenta(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Vec3> {
    let scale = 10.0 * cfg.constants.m * cfg.constants.c / cfg.constants.hbar;
    let scale = if scale > 0.0 {
        scale
    } else {
        10.0 / cfg.constants.hbar
    };
    let mut ks = Vec::with_capacity(cfg.verify.random_momenta + 3);
    if cfg.constants.m > 0.0 {
        ks.push([0.0; 3]);
    }
    ks.push([0.0, 0.0, scale]);
    let dir: Vec3 = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    let len = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
    ks.push(dir.map(|d| scale * d / len));
    for _ in 0..cfg.verify.random_momenta {
        ks.push([
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
            rng.gen_range(-scale..scale),
        ]);
    }
    ks
}

fn worst<I: IntoIterator<Item = Result<f64, dirac_core::DiracError>>>(
    it: I,
) -> Result<f64, CliError> {
    let mut w: f64 = 0.0;
    for r in it {
        w = w.max(r?);
    }
    Ok(w)
}

fn free_grid_dispersion(consts: &PhysicalConstants, g: &GammaSet) -> Result<f64, CliError> {
    let grid = Grid1D::new(64, 30.0)?;
    let spec = stationary_spectrum(
        &grid,
        &PotentialSpec::free(&grid),
        Species::Particle,
        consts,
        g,
    )?;
    let mut expected: Vec<f64> = (0..grid.n_points)
        .flat_map(|n| {
            let e = dispersion(&[0.0, 0.0, grid.derivative_wavenumber(n)], consts);
            [e, e]
        })
        .collect();
    expected.sort_by(f64::total_cmp);
    let positives = spec.positive_set.iter().map(|&i| spec.eigenvalues[i]);
    let negatives = spec
        .negative_set
        .iter()
        .rev()
        .map(|&i| -spec.eigenvalues[i]);
    let mut w: f64 = 0.0;
    for (a, b) in positives.zip(&expected).chain(negatives.zip(&expected)) {
        w = w.max((a - b).abs());
    }
    if spec.positive_set.len() != expected.len() {
        w = f64::INFINITY;
    }
    Ok(w)
}

fn well_cross_orthogonality(consts: &PhysicalConstants, g: &GammaSet) -> Result<f64, CliError> {
    let grid = Grid1D::new(64, 20.0)?;
    let depth = 0.3 * consts.rest_energy() / consts.e;
    let pot = PotentialSpec::smooth_well(&grid, depth, 2.0 * consts.compton_length());
    let sp = stationary_spectrum(&grid, &pot, Species::Particle, consts, g)?;
    let sa = stationary_spectrum(&grid, &pot, Species::Antiparticle, consts, g)?;
    Ok(cross_orthogonality_check(&sp, &sa, g)?)
}

/// Runs the whole suite. Checks that cannot apply (grid spectra of a massless
/// field have zero modes) are reported as skipped.
pub fn run_suite(cfg: &RunConfig) -> Result<Vec<CheckOutcome>, CliError> {
    let consts = cfg.constants;
    let g = gamma_set(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = vec![
        CheckOutcome::measured(
            "charge_conjugation_identities",
            verify_c_identities(&g),
            0.0,
        ),
        CheckOutcome::measured("clifford_anticommutators", clifford_residual(&g), 0.0),
        CheckOutcome::measured("gamma_hermiticity", hermiticity_residual(&g), 0.0),
    ];

    let spinors: Vec<Bispinor> = (0..cfg.verify.random_bispinors)
        .map(|_| random_bispinor(&mut rng))
        .collect();
    let involution = spinors
        .iter()
        .map(|p| charge_conjugate(&charge_conjugate(p, &g), &g).max_abs_diff(p))
        .fold(0.0, f64::max);
    out.push(CheckOutcome::measured(
        "conjugation_involution",
        involution,
        0.0,
    ));
    let isometry = spinors
        .iter()
        .map(|p| {
            (charge_conjugate(p, &g).norm_sqr() - p.norm_sqr()).abs() / p.norm_sqr().max(1e-300)
        })
        .fold(0.0, f64::max);
    out.push(CheckOutcome::measured(
        "conjugation_isometry",
        isometry,
        1e-14,
    ));

    let ks = sample_momenta(cfg, &mut rng);
    let mut momentum_eq: f64 = 0.0;
    let mut normalization: f64 = 0.0;
    for k in &ks {
        let e = dispersion(k, &consts);
        for r in Spin::BOTH {
            let u = mode_bispinor(k, r, Species::Particle, &consts)?;
            momentum_eq = momentum_eq.max(momentum_space_residual(k, &u, &consts, &g));
            let weight = 0.5 * (1.0 + consts.rest_energy() / e);
            normalization = normalization
                .max((upper_weight(&u) - weight).abs())
                .max((u.norm_sqr() - 1.0).abs());
        }
    }
    out.push(CheckOutcome::measured(
        "momentum_space_equation",
        momentum_eq,
        1e-13,
    ));
    out.push(CheckOutcome::measured(
        "spinor_normalization",
        normalization,
        1e-14,
    ));
    out.push(CheckOutcome::measured(
        "orthonormality",
        worst(ks.iter().map(|k| check_orthonormality(k, &consts)))?,
        1e-13,
    ));
    out.push(CheckOutcome::measured(
        "completeness",
        worst(ks.iter().map(|k| check_completeness(k, &consts, &g)))?,
        1e-13,
    ));
    out.push(CheckOutcome::measured(
        "plane_wave_cross_orthogonality",
        worst(
            ks.iter()
                .map(|k| plane_wave_cross_orthogonality(k, &consts, &g)),
        )?,
        1e-13,
    ));

    if consts.m > 0.0 {
        out.push(CheckOutcome::measured(
            "grid_dispersion",
            free_grid_dispersion(&consts, &g)?,
            1e-12,
        ));
        out.push(CheckOutcome::measured(
            "well_cross_orthogonality",
            well_cross_orthogonality(&consts, &g)?,
            1e-8,
        ));
    } else {
        out.push(CheckOutcome::skipped(
            "grid_dispersion",
            1e-12,
            "massless spectrum has zero modes",
        ));
        out.push(CheckOutcome::skipped(
            "well_cross_orthogonality",
            1e-8,
            "massless spectrum has zero modes",
        ));
    }
    Ok(out)
}
