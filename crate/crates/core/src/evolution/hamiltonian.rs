//! H = cα_z(p̂ − (q/c)A_z) + qA₀ + βmc² on the periodic grid, with q = ±e.
//!
//! Obtained from the covariant equation by multiplying with γ₄:
//! α = iγ₄γ, β = γ₄. The momentum operator is the spectral derivative.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::evolution::grid::{Grid1D, GridField, Spectral};
use crate::evolution::potential::PotentialSpec;
use crate::plane_waves::{PhysicalConstants, Species};
use crate::spinor_algebra::{max_abs, Bispinor, ComplexMatrix4, GammaSet};

#[derive(Debug, Clone)]
pub struct Hamiltonian {
    pub grid: Grid1D,
    pub potential: PotentialSpec,
    pub species: Species,
    pub consts: PhysicalConstants,
    alpha_z: ComplexMatrix4,
    beta: ComplexMatrix4,
    gamma_z: ComplexMatrix4,
    gamma4: ComplexMatrix4,
    spectral: Spectral,
}

pub fn build_hamiltonian(
    grid: &Grid1D,
    potential: &PotentialSpec,
    species: Species,
    consts: &PhysicalConstants,
    g: &GammaSet,
) -> Result<Hamiltonian> {
    potential.check_grid(grid)?;
    Ok(Hamiltonian {
        grid: *grid,
        potential: potential.clone(),
        species,
        consts: *consts,
        alpha_z: g.alpha(3),
        beta: g.beta(),
        gamma_z: *g.gamma_mu(3),
        gamma4: *g.gamma4(),
        spectral: Spectral::new(*grid),
    })
}

impl Hamiltonian {
    /// Coupling charge q = ±e.
    pub fn charge(&self) -> f64 {
        self.species.charge_sign() * self.consts.e
    }

    pub fn alpha_z(&self) -> &ComplexMatrix4 {
        &self.alpha_z
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// cħkα_z + βmc² for wave number k.
    pub fn kinetic_symbol(&self, k: f64) -> ComplexMatrix4 {
        let c = &self.consts;
        self.alpha_z * Complex64::from(c.hbar * c.c * k)
            + self.beta * Complex64::from(c.rest_energy())
    }

    /// q(A₀ − α_zA_z) at sample j and time t.
    pub fn local_potential(&self, j: usize, t: f64) -> ComplexMatrix4 {
        let q = self.charge();
        let (a0, az) = self.potential.at(j, t);
        ComplexMatrix4::identity() * Complex64::from(q * a0)
            - self.alpha_z * Complex64::from(q * az)
    }

    /// Hψ at time t (the drive enters through the potential).
    pub fn apply(&self, values: &[Bispinor], t: f64) -> Vec<Bispinor> {
        let mut hat = self.spectral.to_momentum(values);
        for (n, v) in hat.iter_mut().enumerate() {
            *v = &self.kinetic_symbol(self.grid.derivative_wavenumber(n)) * *v;
        }
        let mut out = self.spectral.to_position(&hat);
        for (j, (o, v)) in out.iter_mut().zip(values).enumerate() {
            *o = *o + &self.local_potential(j, t) * *v;
        }
        out
    }

    pub fn apply_field(&self, field: &GridField) -> Vec<Bispinor> {
        self.apply(&field.values, field.time)
    }

    /// ∂ψ/∂t = −(i/ħ)Hψ.
    pub fn time_derivative(&self, field: &GridField) -> Vec<Bispinor> {
        let s = Complex64::new(0.0, -1.0 / self.consts.hbar);
        self.apply_field(field)
            .into_iter()
            .map(|v| v.scale(s))
            .collect()
    }

    /// Real spectral first-derivative matrix D (Nyquist slot removed).
    pub fn derivative_matrix(&self) -> DMatrix<f64> {
        let n = self.grid.n_points;
        let mut d = DMatrix::<f64>::zeros(n, n);
        let mut unit = vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            let col = self.spectral.derivative_scalar(&unit);
            unit[j] = 0.0;
            for (i, v) in col.into_iter().enumerate() {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Dense 4N×4N matrix of the stationary part, index 4j + σ.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let n = self.grid.n_points;
        let c = &self.consts;
        let d = self.derivative_matrix();
        let kin = self.alpha_z * Complex64::new(0.0, -c.hbar * c.c);
        let mut h = DMatrix::<Complex64>::zeros(4 * n, 4 * n);
        let stationary = self.potential.stationary_part();
        let q = self.charge();
        for i in 0..n {
            for j in 0..n {
                let dij = d[(i, j)];
                if dij != 0.0 {
                    for a in 0..4 {
                        for b in 0..4 {
                            h[(4 * i + a, 4 * j + b)] += kin[(a, b)] * dij;
                        }
                    }
                }
            }
            let (a0, az) = stationary.at(i, 0.0);
            let local = self.beta * Complex64::from(c.rest_energy())
                + ComplexMatrix4::identity() * Complex64::from(q * a0)
                - self.alpha_z * Complex64::from(q * az);
            for a in 0..4 {
                for b in 0..4 {
                    h[(4 * i + a, 4 * i + b)] += local[(a, b)];
                }
            }
        }
        h
    }

    /// Residual of the covariant equation
    /// ħcγ_μ(∂_μ − (iq/ħc)A_μ)ψ + mc²ψ with ∂₄ = −(i/c)∂_t and A₄ = iA₀.
    pub fn covariant_residual(&self, field: &GridField, dpsi_dt: &[Bispinor]) -> Vec<Bispinor> {
        let c = &self.consts;
        let q = self.charge();
        let dz = self.spectral.derivative(&field.values);
        field
            .values
            .iter()
            .zip(&dz)
            .zip(dpsi_dt)
            .enumerate()
            .map(|(j, ((psi, dpsi_z), dpsi_t))| {
                let (a0, az) = self.potential.at(j, field.time);
                let spatial = dpsi_z.scale(Complex64::from(c.hbar * c.c))
                    - psi.scale(Complex64::new(0.0, q * az));
                let temporal =
                    dpsi_t.scale(Complex64::new(0.0, -c.hbar)) + psi.scale(Complex64::from(q * a0));
                &self.gamma_z * spatial
                    + &self.gamma4 * temporal
                    + psi.scale(Complex64::from(c.rest_energy()))
            })
            .collect()
    }
}

pub fn hermiticity_residual(h: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in i..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max over the 4×4 symbol of ||H(k)² − E(k)²||, a sanity check on α and β.
pub fn symbol_squares_to_energy(h: &Hamiltonian, k: f64) -> f64 {
    let s = h.kinetic_symbol(k);
    let e2 = (h.consts.hbar * h.consts.c * k).powi(2) + h.consts.rest_energy().powi(2);
    max_abs(&(s * s - ComplexMatrix4::identity() * Complex64::from(e2)))
}
