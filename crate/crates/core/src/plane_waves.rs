//! Free positive-energy plane waves: dispersion, bispinors, orthonormality,
//! completeness and mode-sum energy/momentum.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::evolution::grid::{FrequencyContent, Grid1D, GridField};
use crate::spinor_algebra::{
    charge_conjugate, dirac_adjoint, max_abs, pauli, Bispinor, ComplexMatrix4, GammaSet,
};

pub type Vec3 = [f64; 3];

/// ħ, c, m and the coupling charge e. Defaults are natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub m: f64,
    #[serde(default = "one")]
    pub e: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: 1.0,
            c: 1.0,
            m: 1.0,
            e: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// ħ/mc
    pub fn compton_length(&self) -> f64 {
        self.hbar / (self.m * self.c)
    }

    /// ħ/mc²
    pub fn compton_time(&self) -> f64 {
        self.hbar / self.rest_energy()
    }
}

/// Rest-frame spin projection on z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn label(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    fn basis(self) -> Vector2<Complex64> {
        match self {
            Spin::Up => Vector2::new(Complex64::from(1.0), Complex64::from(0.0)),
            Spin::Down => Vector2::new(Complex64::from(0.0), Complex64::from(1.0)),
        }
    }
}

impl TryFrom<i32> for Spin {
    type Error = DiracError;

    fn try_from(r: i32) -> Result<Spin> {
        match r {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            other => Err(DiracError::InvalidSpin(other)),
        }
    }
}

/// Particle fields couple with charge e, antiparticle fields with −e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    Particle,
    Antiparticle,
}

impl Species {
    /// Sign of the coupling charge in units of e.
    pub fn charge_sign(self) -> f64 {
        match self {
            Species::Particle => 1.0,
            Species::Antiparticle => -1.0,
        }
    }

    /// Lepton number tag.
    pub fn lepton(self) -> i8 {
        match self {
            Species::Particle => 1,
            Species::Antiparticle => -1,
        }
    }

    pub fn conjugate(self) -> Species {
        match self {
            Species::Particle => Species::Antiparticle,
            Species::Antiparticle => Species::Particle,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Species::Particle => "particle",
            Species::Antiparticle => "antiparticle",
        }
    }
}

fn norm3(k: &Vec3) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

/// Positive root E = sqrt((ħc|k|)² + (mc²)²).
pub fn dispersion(k: &Vec3, consts: &PhysicalConstants) -> f64 {
    (consts.hbar * consts.c * norm3(k)).hypot(consts.rest_energy())
}

/// Group velocity ħc²k/E along each axis.
pub fn group_velocity(k: &Vec3, consts: &PhysicalConstants) -> Vec3 {
    let e = dispersion(k, consts);
    let f = consts.hbar * consts.c * consts.c / e;
    [f * k[0], f * k[1], f * k[2]]
}

/// σ·k
pub fn sigma_dot(k: &Vec3) -> Matrix2<Complex64> {
    let s = pauli();
    s[0] * Complex64::from(k[0]) + s[1] * Complex64::from(k[1]) + s[2] * Complex64::from(k[2])
}

/// Unit-norm positive-energy bispinor for momentum k and spin r.
///
/// The species only affects how the field couples to a potential; free
/// particle and antiparticle spinors coincide numerically.
pub fn mode_bispinor(
    k: &Vec3,
    r: Spin,
    _species: Species,
    consts: &PhysicalConstants,
) -> Result<Bispinor> {
    let e = dispersion(k, consts);
    if e == 0.0 {
        return Err(DiracError::ZeroEnergy);
    }
    let mc2 = consts.rest_energy();
    let upper = r.basis() * Complex64::from((0.5 * (1.0 + mc2 / e)).sqrt());
    let lower = sigma_dot(k) * upper * Complex64::from(consts.hbar * consts.c / (e + mc2));
    Ok(Bispinor::new(upper[0], upper[1], lower[0], lower[1]))
}

/// Upper-spinor weight φ⁺φ of [`mode_bispinor`].
pub fn upper_weight(psi: &Bispinor) -> f64 {
    psi.0[0].norm_sqr() + psi.0[1].norm_sqr()
}

/// [iħc k·γ − Eγ₄ + mc²] for the positive root E(k).
pub fn momentum_space_operator(
    k: &Vec3,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> ComplexMatrix4 {
    let e = dispersion(k, consts);
    let hc = consts.hbar * consts.c;
    let mut op = ComplexMatrix4::identity() * Complex64::from(consts.rest_energy());
    op -= g.gamma4() * Complex64::from(e);
    for (j, kj) in k.iter().enumerate() {
        op += g.gamma[j] * Complex64::new(0.0, hc * kj);
    }
    op
}

pub fn momentum_space_residual(
    k: &Vec3,
    psi: &Bispinor,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> f64 {
    let v = momentum_space_operator(k, consts, g) * psi.0;
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// max over r, r′ of |ψ⁺(k,r)ψ(k,r′) − δ_rr′| for both species.
pub fn check_orthonormality(k: &Vec3, consts: &PhysicalConstants) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for species in [Species::Particle, Species::Antiparticle] {
        for r in Spin::BOTH {
            let a = mode_bispinor(k, r, species, consts)?;
            for rp in Spin::BOTH {
                let b = mode_bispinor(k, rp, species, consts)?;
                let delta = if r == rp { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(&b) - delta).norm());
            }
        }
    }
    Ok(worst)
}

/// Which of the two equivalent completeness forms to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletenessForm {
    /// Σ ψψ̄ plus the conjugated antiparticle term.
    ParticleLed,
    /// Σ ηη̄ plus the conjugated particle term.
    AntiparticleLed,
}

/// Σ_r [ψ(k,r)ψ̄(k,r) + C* transpose(η̄(−k,r)) transpose(η(−k,r)) C], as written.
///
/// With unit-norm bispinors this sum equals γ₄, not the identity: both terms
/// are ψψ⁺γ₄ for the positive and negative projectors.
pub fn completeness_literal_sum(
    k: &Vec3,
    form: CompletenessForm,
    include_conjugate: bool,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<ComplexMatrix4> {
    let (lead, partner) = match form {
        CompletenessForm::ParticleLed => (Species::Particle, Species::Antiparticle),
        CompletenessForm::AntiparticleLed => (Species::Antiparticle, Species::Particle),
    };
    let minus_k = [-k[0], -k[1], -k[2]];
    let c_conj = g.c_matrix.map(|c| c.conj());
    let mut sum = ComplexMatrix4::zeros();
    for r in Spin::BOTH {
        let psi = mode_bispinor(k, r, lead, consts)?;
        sum += psi.0 * dirac_adjoint(&psi, g).0;
        if include_conjugate {
            let eta = mode_bispinor(&minus_k, r, partner, consts)?;
            let eta_bar_t = dirac_adjoint(&eta, g).0.transpose();
            sum += c_conj * eta_bar_t * eta.0.transpose() * g.c_matrix;
        }
    }
    Ok(sum)
}

/// Literal sum right-multiplied by γ₄; equals the identity.
pub fn completeness_sum(
    k: &Vec3,
    form: CompletenessForm,
    include_conjugate: bool,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<ComplexMatrix4> {
    Ok(completeness_literal_sum(k, form, include_conjugate, consts, g)? * g.gamma4())
}

/// Worst entrywise deviation from the identity over both completeness forms.
pub fn check_completeness(k: &Vec3, consts: &PhysicalConstants, g: &GammaSet) -> Result<f64> {
    let id = ComplexMatrix4::identity();
    let mut worst: f64 = 0.0;
    for form in [
        CompletenessForm::ParticleLed,
        CompletenessForm::AntiparticleLed,
    ] {
        worst = worst.max(max_abs(&(completeness_sum(k, form, true, consts, g)? - id)));
    }
    Ok(worst)
}

/// max |ψ⁺(k,r)·ψ₋| where ψ₋ = C*γ̃₄η*(−k,r′) is the negative-frequency
/// partner carrying spatial momentum k.
pub fn plane_wave_cross_orthogonality(
    k: &Vec3,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<f64> {
    let minus_k = [-k[0], -k[1], -k[2]];
    let mut worst: f64 = 0.0;
    for r in Spin::BOTH {
        let psi = mode_bispinor(k, r, Species::Particle, consts)?;
        for rp in Spin::BOTH {
            let eta = mode_bispinor(&minus_k, rp, Species::Antiparticle, consts)?;
            worst = worst.max(psi.inner(&charge_conjugate(&eta, g)).norm());
        }
    }
    Ok(worst)
}

/// One plane-wave label with its expansion coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumMode {
    pub k: Vec3,
    pub spin: Spin,
    pub species: Species,
    pub amplitude: Complex64,
    /// Lepton number tag; metadata only.
    pub lepton: i8,
}

impl MomentumMode {
    pub fn new(k: Vec3, spin: Spin, species: Species, amplitude: Complex64) -> Self {
        MomentumMode {
            k,
            spin,
            species,
            amplitude,
            lepton: species.lepton(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub modes: Vec<MomentumMode>,
    /// Box volume (a length for 1-D grids).
    pub volume: f64,
}

/// Mode-sum energy and momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSums {
    pub energy: f64,
    pub momentum: Vec3,
    pub total_weight: f64,
    /// Set when the weights do not sum to one.
    pub unnormalized: bool,
}

pub const MODE_NORMALIZATION_TOL: f64 = 1e-12;

impl ModeSet {
    pub fn total_weight(&self) -> f64 {
        self.modes.iter().map(|m| m.amplitude.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_weight() - 1.0).abs() <= MODE_NORMALIZATION_TOL
    }

    pub fn normalize(&mut self) {
        let w = self.total_weight().sqrt();
        if w > 0.0 {
            for m in &mut self.modes {
                m.amplitude /= w;
            }
        }
    }

    /// Builds the particle and antiparticle grid fields
    /// (1/√L) Σ a ψ(k,r) e^{ikz}. Every k must lie along z on the grid lattice.
    pub fn realize_on_grid(
        &self,
        grid: &Grid1D,
        consts: &PhysicalConstants,
    ) -> Result<(GridField, GridField)> {
        let mut particle = GridField::zeros(*grid, Species::Particle, FrequencyContent::Positive);
        let mut antiparticle =
            GridField::zeros(*grid, Species::Antiparticle, FrequencyContent::Positive);
        let norm = 1.0 / grid.length.sqrt();
        for mode in &self.modes {
            if mode.k[0] != 0.0 || mode.k[1] != 0.0 {
                return Err(DiracError::UnresolvablePacket(
                    "grid realization needs momenta along z".into(),
                ));
            }
            grid.lattice_index(mode.k[2]).ok_or_else(|| {
                DiracError::UnresolvablePacket(format!("k = {} is not a grid momentum", mode.k[2]))
            })?;
            let spinor = mode_bispinor(&mode.k, mode.spin, mode.species, consts)?;
            let target = match mode.species {
                Species::Particle => &mut particle,
                Species::Antiparticle => &mut antiparticle,
            };
            for (j, v) in target.values.iter_mut().enumerate() {
                let phase = Complex64::from_polar(norm, mode.k[2] * grid.x(j));
                *v = *v + spinor.scale(mode.amplitude * phase);
            }
        }
        Ok((particle, antiparticle))
    }
}

/// W = Σ E(k)|a|², P = Σ ħk|a|² over particle and antiparticle modes alike.
pub fn superposition_energy_momentum(ms: &ModeSet, consts: &PhysicalConstants) -> ModeSums {
    let mut energy = 0.0;
    let mut momentum = [0.0; 3];
    for mode in &ms.modes {
        let w = mode.amplitude.norm_sqr();
        energy += dispersion(&mode.k, consts) * w;
        for (p, kj) in momentum.iter_mut().zip(mode.k.iter()) {
            *p += consts.hbar * kj * w;
        }
    }
    ModeSums {
        energy,
        momentum,
        total_weight: ms.total_weight(),
        unnormalized: !ms.is_normalized(),
    }
}

/// ψ(x,t) = V^{-1/2} [a ψ(k,r) e^{i(kx−ωt)} + b C*η̄̃(k,r′) e^{−i(kx−ωt)}].
///
/// Mixes both frequency signs whenever `antiparticle_amp` is nonzero; such a
/// field solves the free equation but is not a probability amplitude.
#[derive(Debug, Clone, Copy)]
pub struct FreeSolution {
    pub k: Vec3,
    pub particle_amp: Complex64,
    pub antiparticle_amp: Complex64,
    pub omega: f64,
    pub volume: f64,
    particle_spinor: Bispinor,
    conjugated_spinor: Bispinor,
}

pub fn general_free_solution(
    k: &Vec3,
    particle_spin: Spin,
    antiparticle_spin: Spin,
    particle_amp: Complex64,
    antiparticle_amp: Complex64,
    volume: f64,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<FreeSolution> {
    let particle_spinor = mode_bispinor(k, particle_spin, Species::Particle, consts)?;
    let eta = mode_bispinor(k, antiparticle_spin, Species::Antiparticle, consts)?;
    Ok(FreeSolution {
        k: *k,
        particle_amp,
        antiparticle_amp,
        omega: dispersion(k, consts) / consts.hbar,
        volume,
        particle_spinor,
        conjugated_spinor: charge_conjugate(&eta, g),
    })
}

impl FreeSolution {
    pub fn is_probability_amplitude(&self) -> bool {
        self.antiparticle_amp == Complex64::from(0.0)
    }

    pub fn sample(&self, x: &Vec3, t: f64) -> Bispinor {
        let phase = self.k[0] * x[0] + self.k[1] * x[1] + self.k[2] * x[2] - self.omega * t;
        let norm = 1.0 / self.volume.sqrt();
        let forward = Complex64::from_polar(norm, phase);
        let backward = Complex64::from_polar(norm, -phase);
        self.particle_spinor.scale(self.particle_amp * forward)
            + self
                .conjugated_spinor
                .scale(self.antiparticle_amp * backward)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor_algebra::make_gammas;

    const NAT: PhysicalConstants = PhysicalConstants {
        hbar: 1.0,
        c: 1.0,
        m: 1.0,
        e: 1.0,
    };

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(&[0.0; 3], &NAT), 1.0);
        assert_eq!(dispersion(&[0.0, 0.0, 0.75], &NAT), 1.25);
    }

    #[test]
    fn rest_spinor() {
        let psi = mode_bispinor(&[0.0; 3], Spin::Up, Species::Particle, &NAT).unwrap();
        assert_eq!(psi, Bispinor::from_real([1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn spinor_at_three_quarters() {
        // E = 5/4: φ = sqrt(9/10), lower = (3/4)/(9/4)·φ = φ/3.
        let psi = mode_bispinor(&[0.0, 0.0, 0.75], Spin::Up, Species::Particle, &NAT).unwrap();
        let upper = (0.9f64).sqrt();
        let expected = Bispinor::from_real([upper, 0.0, upper / 3.0, 0.0]);
        assert!(psi.max_abs_diff(&expected) < 1e-15);
        assert!((psi.0[0].re - 0.948_683_298_050_513_8).abs() < 1e-15);
        assert!((psi.0[2].re - 0.316_227_766_016_837_94).abs() < 1e-15);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_spin_label() {
        assert_eq!(Spin::try_from(0), Err(DiracError::InvalidSpin(0)));
        assert_eq!(Spin::try_from(-1), Ok(Spin::Down));
    }

    #[test]
    fn massless_rest_mode_has_no_spinor() {
        let c = PhysicalConstants { m: 0.0, ..NAT };
        assert_eq!(
            mode_bispinor(&[0.0; 3], Spin::Up, Species::Particle, &c),
            Err(DiracError::ZeroEnergy)
        );
        let psi = mode_bispinor(&[0.3, -0.2, 0.5], Spin::Down, Species::Particle, &c).unwrap();
        assert!((upper_weight(&psi) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_at_rest_exactly() {
        assert_eq!(check_orthonormality(&[0.0; 3], &NAT).unwrap(), 0.0);
    }

    #[test]
    fn spin_flip_cross_term_vanishes_along_z() {
        let k = [0.0, 0.0, 0.75];
        let up = mode_bispinor(&k, Spin::Up, Species::Particle, &NAT).unwrap();
        let down = mode_bispinor(&k, Spin::Down, Species::Particle, &NAT).unwrap();
        assert_eq!(up.inner(&down), Complex64::from(0.0));
    }

    #[test]
    fn completeness_at_rest() {
        let g = make_gammas();
        assert!(check_completeness(&[0.0; 3], &NAT, &g).unwrap() < 1e-15);
    }

    #[test]
    fn literal_completeness_sum_is_gamma4() {
        let g = make_gammas();
        for k in [[0.0; 3], [0.3, -1.2, 0.7]] {
            for form in [
                CompletenessForm::ParticleLed,
                CompletenessForm::AntiparticleLed,
            ] {
                let s = completeness_literal_sum(&k, form, true, &NAT, &g).unwrap();
                assert!(max_abs(&(s - g.gamma4())) < 1e-14);
            }
        }
    }

    #[test]
    fn omitting_conjugated_term_leaves_projector() {
        let g = make_gammas();
        let k = [0.4, 0.1, -2.0];
        let partial = completeness_sum(&k, CompletenessForm::ParticleLed, false, &NAT, &g).unwrap();
        assert!(max_abs(&(partial - ComplexMatrix4::identity())) > 0.4);
    }

    #[test]
    fn mode_sum_examples() {
        let one = Complex64::from(1.0);
        let half = Complex64::from(0.5f64.sqrt());
        let single = ModeSet {
            modes: vec![MomentumMode::new(
                [0.0, 0.0, 0.75],
                Spin::Up,
                Species::Particle,
                one,
            )],
            volume: 1.0,
        };
        let s = superposition_energy_momentum(&single, &NAT);
        assert_eq!(s.energy, 1.25);
        assert_eq!(s.momentum, [0.0, 0.0, 0.75]);
        assert!(!s.unnormalized);

        let pair = ModeSet {
            modes: vec![
                MomentumMode::new([0.0, 0.0, 0.5], Spin::Up, Species::Particle, half),
                MomentumMode::new([0.0, 0.0, -0.5], Spin::Up, Species::Particle, half),
            ],
            volume: 1.0,
        };
        assert!(superposition_energy_momentum(&pair, &NAT).momentum[2].abs() < 1e-16);

        let both = ModeSet {
            modes: vec![
                MomentumMode::new([0.0; 3], Spin::Up, Species::Particle, half),
                MomentumMode::new([0.0; 3], Spin::Up, Species::Antiparticle, half),
            ],
            volume: 1.0,
        };
        assert!((superposition_energy_momentum(&both, &NAT).energy - 1.0).abs() < 1e-15);

        let loose = ModeSet {
            modes: vec![MomentumMode::new(
                [0.0; 3],
                Spin::Up,
                Species::Particle,
                one * 2.0,
            )],
            volume: 1.0,
        };
        assert!(superposition_energy_momentum(&loose, &NAT).unnormalized);
    }

    #[test]
    fn lepton_tag_follows_species() {
        let m = MomentumMode::new(
            [0.0; 3],
            Spin::Up,
            Species::Antiparticle,
            Complex64::from(1.0),
        );
        assert_eq!(m.lepton, -1);
    }

    #[test]
    fn pure_positive_solution_has_flat_density() {
        let g = make_gammas();
        let sol = general_free_solution(
            &[0.0, 0.0, 1.3],
            Spin::Up,
            Spin::Up,
            Complex64::from(1.0),
            Complex64::from(0.0),
            2.0,
            &NAT,
            &g,
        )
        .unwrap();
        assert!(sol.is_probability_amplitude());
        let rho0 = sol.sample(&[0.0; 3], 0.0).norm_sqr();
        for (z, t) in [(0.3, 0.1), (-4.0, 2.5), (10.0, -1.0)] {
            assert!((sol.sample(&[0.0, 0.0, z], t).norm_sqr() - rho0).abs() < 1e-15);
        }
        assert!((rho0 - 0.5).abs() < 1e-15);
    }
}
