//! Positive/negative frequency decomposition against a stationary Hamiltonian
//! and the conjugation map between the two branches.
//!
//! On a grid the frequency sign of a stationary field is read off the
//! eigenbasis of the discretized Hamiltonian; for stationary evolution this is
//! the same split a time-Fourier transform would produce.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{DiracError, Result};
use crate::evolution::grid::{FrequencyContent, Grid1D, GridField};
use crate::evolution::hamiltonian::{build_hamiltonian, hermiticity_residual};
use crate::evolution::potential::PotentialSpec;
use crate::plane_waves::{PhysicalConstants, Species};
use crate::spinor_algebra::{Bispinor, GammaSet};

/// Largest grid accepted by the dense decomposition (4N ≤ 4096).
pub const MAX_DENSE_POINTS: usize = 1024;
/// Eigenvalues with |E| below this have no frequency sign.
pub const ZERO_MODE_TOL: f64 = 1e-12;
const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub grid: Grid1D,
    pub species: Species,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are Euclidean-orthonormal in the flattened 4N index space.
    pub eigenvectors: DMatrix<Complex64>,
    pub positive_set: Vec<usize>,
    pub negative_set: Vec<usize>,
}

pub fn stationary_spectrum(
    grid: &Grid1D,
    potential: &PotentialSpec,
    species: Species,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<SpectralDecomposition> {
    if !potential.is_stationary() {
        return Err(DiracError::NotStationary);
    }
    if grid.n_points > MAX_DENSE_POINTS {
        return Err(DiracError::GridTooLarge {
            requested: grid.n_points,
            max: MAX_DENSE_POINTS,
        });
    }
    let h = build_hamiltonian(grid, potential, species, consts, g)?.dense();
    let herm = hermiticity_residual(&h);
    if herm > HERMITICITY_TOL {
        return Err(DiracError::NonHermitian(herm));
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let dim = order.len();
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut eigenvectors = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        let e = eig.eigenvalues[src];
        if e.abs() < ZERO_MODE_TOL {
            return Err(DiracError::ZeroMode(e));
        }
        eigenvalues.push(e);
        eigenvectors.set_column(col, &eig.eigenvectors.column(src));
    }
    let positive_set = (0..dim).filter(|&i| eigenvalues[i] > 0.0).collect();
    let negative_set = (0..dim).filter(|&i| eigenvalues[i] < 0.0).collect();
    Ok(SpectralDecomposition {
        grid: *grid,
        species,
        eigenvalues,
        eigenvectors,
        positive_set,
        negative_set,
    })
}

pub(crate) fn flatten(values: &[Bispinor]) -> DVector<Complex64> {
    DVector::from_iterator(
        values.len() * 4,
        values.iter().flat_map(|v| v.0.iter().copied()),
    )
}

pub(crate) fn unflatten(v: &DVector<Complex64>) -> Vec<Bispinor> {
    v.as_slice()
        .chunks_exact(4)
        .map(|c| Bispinor::new(c[0], c[1], c[2], c[3]))
        .collect()
}

impl SpectralDecomposition {
    fn check_field(&self, field: &GridField) -> Result<()> {
        if field.grid != self.grid {
            return Err(DiracError::GridMismatch {
                expected: self.grid.n_points,
                found: field.grid.n_points,
            });
        }
        Ok(())
    }

    fn project_onto(&self, field: &GridField, set: &[usize]) -> Vec<Bispinor> {
        let psi = flatten(&field.values);
        let mut out = DVector::<Complex64>::zeros(psi.len());
        for &i in set {
            let col = self.eigenvectors.column(i);
            let coeff = col.dotc(&psi);
            out.axpy(coeff, &col, Complex64::from(1.0));
        }
        unflatten(&out)
    }

    /// Grid-normalized eigenfield i.
    pub fn eigenfield(&self, i: usize) -> GridField {
        let scale = Complex64::from(1.0 / self.grid.spacing().sqrt());
        let col: DVector<Complex64> = self.eigenvectors.column(i).into_owned() * scale;
        GridField {
            values: unflatten(&col),
            grid: self.grid,
            time: 0.0,
            species: self.species,
            frequency: if self.eigenvalues[i] > 0.0 {
                FrequencyContent::Positive
            } else {
                FrequencyContent::Negative
            },
        }
    }

    /// Index of the lowest positive eigenvalue.
    pub fn lowest_positive(&self) -> Option<usize> {
        self.positive_set.first().copied()
    }

    pub fn project_positive(&self, field: &GridField) -> Result<GridField> {
        self.check_field(field)?;
        Ok(GridField {
            values: self.project_onto(field, &self.positive_set),
            frequency: FrequencyContent::Positive,
            ..field.clone()
        })
    }

    /// Exact stationary propagation by dt.
    pub fn propagate(&self, field: &GridField, dt: f64, hbar: f64) -> Result<GridField> {
        self.check_field(field)?;
        let psi = flatten(&field.values);
        let coeffs = self.eigenvectors.ad_mul(&psi);
        let phased = DVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(&self.eigenvalues)
                .map(|(c, e)| c * Complex64::from_polar(1.0, -e * dt / hbar)),
        );
        let out = &self.eigenvectors * phased;
        Ok(GridField {
            values: unflatten(&out),
            time: field.time + dt,
            ..field.clone()
        })
    }
}

/// Splits `field` into its positive- and negative-frequency parts.
pub fn split_frequencies(
    field: &GridField,
    spec: &SpectralDecomposition,
) -> Result<(GridField, GridField)> {
    spec.check_field(field)?;
    let pos = GridField {
        values: spec.project_onto(field, &spec.positive_set),
        frequency: FrequencyContent::Positive,
        ..field.clone()
    };
    let neg = GridField {
        values: spec.project_onto(field, &spec.negative_set),
        frequency: FrequencyContent::Negative,
        ..field.clone()
    };
    Ok((pos, neg))
}

/// Particle and antiparticle probability amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudePair {
    pub psi_plus: GridField,
    pub eta_plus: GridField,
}

/// ψ₋ = C*·transpose(η̄₊), pointwise.
pub fn negative_from_positive(eta_plus: &GridField, g: &GammaSet) -> Result<GridField> {
    if eta_plus.species != Species::Antiparticle {
        return Err(DiracError::WrongSpecies {
            expected: Species::Antiparticle.name(),
            found: eta_plus.species.name(),
        });
    }
    let mut out = eta_plus.charge_conjugated(g);
    out.frequency = FrequencyContent::Negative;
    Ok(out)
}

/// ψ = ψ₊ + C*·transpose(η̄₊). The result mixes frequency signs and is not a
/// probability amplitude.
pub fn reconstruct_general(pair: &AmplitudePair, g: &GammaSet) -> Result<GridField> {
    pair.psi_plus.check_same_grid(&pair.eta_plus)?;
    if pair.psi_plus.species != Species::Particle {
        return Err(DiracError::WrongSpecies {
            expected: Species::Particle.name(),
            found: pair.psi_plus.species.name(),
        });
    }
    let minus = negative_from_positive(&pair.eta_plus, g)?;
    Ok(GridField {
        values: pair
            .psi_plus
            .values
            .iter()
            .zip(&minus.values)
            .map(|(a, b)| *a + *b)
            .collect(),
        grid: pair.psi_plus.grid,
        time: pair.psi_plus.time,
        species: Species::Particle,
        frequency: FrequencyContent::Mixed,
    })
}

/// max over positive-branch pairs of |∫ψ⁺(x,ω′)γ₄C*η*(x,ω) dx|.
pub fn cross_orthogonality_check(
    spec_particle: &SpectralDecomposition,
    spec_antiparticle: &SpectralDecomposition,
    g: &GammaSet,
) -> Result<f64> {
    if spec_particle.grid != spec_antiparticle.grid {
        return Err(DiracError::GridMismatch {
            expected: spec_particle.grid.n_points,
            found: spec_antiparticle.grid.n_points,
        });
    }
    let kernel = g.gamma4() * g.c_matrix.map(|c| c.conj());
    let dim = spec_particle.eigenvectors.nrows();
    let n_anti = spec_antiparticle.positive_set.len();
    // Columns: γ₄C*η* for each positive antiparticle mode.
    let mut mapped = DMatrix::<Complex64>::zeros(dim, n_anti);
    for (col, &i) in spec_antiparticle.positive_set.iter().enumerate() {
        let eta = spec_antiparticle.eigenvectors.column(i);
        for j in 0..dim / 4 {
            let v = nalgebra::Vector4::new(
                eta[4 * j].conj(),
                eta[4 * j + 1].conj(),
                eta[4 * j + 2].conj(),
                eta[4 * j + 3].conj(),
            );
            let w = kernel * v;
            for a in 0..4 {
                mapped[(4 * j + a, col)] = w[a];
            }
        }
    }
    let mut worst: f64 = 0.0;
    for &i in &spec_particle.positive_set {
        let psi = spec_particle.eigenvectors.column(i);
        let overlaps = mapped.ad_mul(&psi);
        worst = overlaps.iter().fold(worst, |acc, c| acc.max(c.norm()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::hamiltonian::build_hamiltonian;
    use crate::plane_waves::{dispersion, mode_bispinor, Spin};
    use crate::spinor_algebra::make_gammas;

    fn setup(n: usize, length: f64) -> (Grid1D, PhysicalConstants, GammaSet) {
        (
            Grid1D::new(n, length).unwrap(),
            PhysicalConstants::default(),
            make_gammas(),
        )
    }

    fn plane_wave(grid: &Grid1D, n: i64, spin: Spin, species: Species) -> GridField {
        let k = 2.0 * std::f64::consts::PI * n as f64 / grid.length;
        let u =
            mode_bispinor(&[0.0, 0.0, k], spin, species, &PhysicalConstants::default()).unwrap();
        let amp = 1.0 / grid.length.sqrt();
        let values = grid
            .positions()
            .iter()
            .map(|x| u.scale(Complex64::from_polar(amp, k * x)))
            .collect();
        GridField::from_values(*grid, values, species, FrequencyContent::Positive).unwrap()
    }

    fn pseudo_random_field(grid: &Grid1D, seed: u64) -> GridField {
        let mut state = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let values = (0..grid.n_points)
            .map(|_| {
                Bispinor::new(
                    Complex64::new(next(), next()),
                    Complex64::new(next(), next()),
                    Complex64::new(next(), next()),
                    Complex64::new(next(), next()),
                )
            })
            .collect();
        GridField::from_values(*grid, values, Species::Particle, FrequencyContent::Mixed).unwrap()
    }

    #[test]
    fn free_spectrum_pairs_and_dispersion() {
        let (grid, consts, g) = setup(64, 30.0);
        let spec = stationary_spectrum(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &g,
        )
        .unwrap();
        assert_eq!(spec.positive_set.len(), 128);
        assert_eq!(spec.negative_set.len(), 128);
        let mut expected: Vec<f64> = (0..grid.n_points)
            .flat_map(|n| {
                let e = dispersion(&[0.0, 0.0, grid.derivative_wavenumber(n)], &consts);
                [e, e]
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        let positives: Vec<f64> = spec
            .positive_set
            .iter()
            .map(|&i| spec.eigenvalues[i])
            .collect();
        for (a, b) in positives.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let negatives: Vec<f64> = spec
            .negative_set
            .iter()
            .rev()
            .map(|&i| -spec.eigenvalues[i])
            .collect();
        for (a, b) in negatives.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_potential_shifts_spectrum_by_charge() {
        let (grid, consts, g) = setup(16, 10.0);
        let free = stationary_spectrum(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &g,
        )
        .unwrap();
        let v = 0.25;
        for (species, sign) in [(Species::Particle, 1.0), (Species::Antiparticle, -1.0)] {
            let s = stationary_spectrum(
                &grid,
                &PotentialSpec::constant(&grid, v),
                species,
                &consts,
                &g,
            )
            .unwrap();
            for (a, b) in s.eigenvalues.iter().zip(&free.eigenvalues) {
                assert!((a - b - sign * v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_large_and_nonstationary() {
        let (_, consts, g) = setup(8, 1.0);
        let big = Grid1D::new(2048, 100.0).unwrap();
        assert!(matches!(
            stationary_spectrum(
                &big,
                &PotentialSpec::free(&big),
                Species::Particle,
                &consts,
                &g
            ),
            Err(DiracError::GridTooLarge { .. })
        ));
        let grid = Grid1D::new(8, 4.0).unwrap();
        let driven = PotentialSpec::free(&grid)
            .with_drive(
                vec![0.1; 8],
                vec![0.0; 8],
                crate::evolution::potential::TimeProfile {
                    amplitude: 1.0,
                    omega: 1.0,
                    switch_off: None,
                },
            )
            .unwrap();
        assert_eq!(
            stationary_spectrum(&grid, &driven, Species::Particle, &consts, &g).unwrap_err(),
            DiracError::NotStationary
        );
    }

    #[test]
    fn massless_zero_modes_are_rejected() {
        let grid = Grid1D::new(8, 4.0).unwrap();
        let consts = PhysicalConstants {
            m: 0.0,
            ..PhysicalConstants::default()
        };
        let err = stationary_spectrum(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &make_gammas(),
        )
        .unwrap_err();
        assert!(matches!(err, DiracError::ZeroMode(_)));
    }

    #[test]
    fn split_examples() {
        let (grid, consts, g) = setup(32, 16.0);
        let spec = stationary_spectrum(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &g,
        )
        .unwrap();

        let eig = spec.eigenfield(spec.positive_set[5]);
        let (pos, neg) = split_frequencies(&eig, &spec).unwrap();
        assert!(pos.max_abs_diff(&eig) < 1e-12);
        assert!(neg.norm_sqr() < 1e-24);

        let wave = plane_wave(&grid, 3, Spin::Up, Species::Particle);
        let (_, neg) = split_frequencies(&wave, &spec).unwrap();
        assert!(neg
            .values
            .iter()
            .all(|v| v.0.iter().all(|c| c.norm() < 1e-12)));

        let f = pseudo_random_field(&grid, 7);
        let (pos, neg) = split_frequencies(&f, &spec).unwrap();
        assert!((pos.norm_sqr() + neg.norm_sqr() - f.norm_sqr()).abs() < 1e-12 * f.norm_sqr());
        let sum: Vec<Bispinor> = pos
            .values
            .iter()
            .zip(&neg.values)
            .map(|(a, b)| *a + *b)
            .collect();
        for (a, b) in sum.iter().zip(&f.values) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        let (pos2, neg2) = split_frequencies(&pos, &spec).unwrap();
        assert!(pos2.max_abs_diff(&pos) < 1e-12);
        assert!(neg2.norm_sqr() < 1e-24);
    }

    #[test]
    fn split_rejects_other_grid() {
        let (grid, consts, g) = setup(16, 8.0);
        let spec = stationary_spectrum(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &g,
        )
        .unwrap();
        let other = Grid1D::new(32, 8.0).unwrap();
        let f = GridField::zeros(other, Species::Particle, FrequencyContent::Mixed);
        assert!(matches!(
            split_frequencies(&f, &spec),
            Err(DiracError::GridMismatch { .. })
        ));
    }

    #[test]
    fn conjugated_antiparticle_wave_is_negative_energy_at_minus_k() {
        let (grid, consts, g) = setup(32, 12.0);
        let eta = plane_wave(&grid, 4, Spin::Down, Species::Antiparticle);
        let psi_minus = negative_from_positive(&eta, &g).unwrap();
        assert_eq!(psi_minus.species, Species::Particle);
        assert_eq!(psi_minus.frequency, FrequencyContent::Negative);
        let h = build_hamiltonian(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &g,
        )
        .unwrap();
        let k = 2.0 * std::f64::consts::PI * 4.0 / grid.length;
        let e = dispersion(&[0.0, 0.0, k], &consts);
        let hv = h.apply_field(&psi_minus);
        for (a, b) in hv.iter().zip(&psi_minus.values) {
            assert!(a.max_abs_diff(&b.scale(Complex64::from(-e))) < 1e-12);
        }
        // Momentum content sits at −k.
        let hat = h.spectral().to_momentum(&psi_minus.values);
        let slot = grid.lattice_index(-k).unwrap();
        let total: f64 = hat.iter().map(Bispinor::norm_sqr).sum();
        assert!((hat[slot].norm_sqr() - total).abs() < 1e-10 * total);
    }

    #[test]
    fn negative_map_round_trip_and_zero() {
        let (grid, _, g) = setup(16, 8.0);
        let mut eta = pseudo_random_field(&grid, 3);
        eta.species = Species::Antiparticle;
        let minus = negative_from_positive(&eta, &g).unwrap();
        let back = minus.charge_conjugated(&g);
        assert!(back.max_abs_diff(&eta) < 1e-15);

        let zero = GridField::zeros(grid, Species::Antiparticle, FrequencyContent::Positive);
        assert!(negative_from_positive(&zero, &g)
            .unwrap()
            .values
            .iter()
            .all(|v| v.norm_sqr() == 0.0));

        let wrong = GridField::zeros(grid, Species::Particle, FrequencyContent::Positive);
        assert!(matches!(
            negative_from_positive(&wrong, &g),
            Err(DiracError::WrongSpecies { .. })
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let (grid, consts, g) = setup(32, 16.0);
        let psi = plane_wave(&grid, 2, Spin::Up, Species::Particle);
        let zero = GridField::zeros(grid, Species::Antiparticle, FrequencyContent::Positive);
        let out = reconstruct_general(
            &AmplitudePair {
                psi_plus: psi.clone(),
                eta_plus: zero,
            },
            &g,
        )
        .unwrap();
        assert_eq!(out.values, psi.values);
        assert!(!out.is_probability_amplitude());

        let eta = plane_wave(&grid, -5, Spin::Down, Species::Antiparticle);
        let pair = AmplitudePair {
            psi_plus: psi.clone(),
            eta_plus: eta.clone(),
        };
        let general = reconstruct_general(&pair, &g).unwrap();
        let spec = stationary_spectrum(
            &grid,
            &PotentialSpec::free(&grid),
            Species::Particle,
            &consts,
            &g,
        )
        .unwrap();
        let (pos, neg) = split_frequencies(&general, &spec).unwrap();
        assert!(pos.max_abs_diff(&psi) < 1e-10);
        assert!(neg.max_abs_diff(&negative_from_positive(&eta, &g).unwrap()) < 1e-10);
    }

    #[test]
    fn free_cross_orthogonality() {
        let (grid, consts, g) = setup(32, 16.0);
        let free = PotentialSpec::free(&grid);
        let sp = stationary_spectrum(&grid, &free, Species::Particle, &consts, &g).unwrap();
        let sa = stationary_spectrum(&grid, &free, Species::Antiparticle, &consts, &g).unwrap();
        assert!(cross_orthogonality_check(&sp, &sa, &g).unwrap() < 1e-10);
    }
}
