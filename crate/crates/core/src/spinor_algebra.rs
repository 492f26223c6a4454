//! Dirac matrices in the Dirac–Pauli representation, the charge-conjugation
//! matrix and the antilinear map between particle and antiparticle solutions.
//!
//! Index convention: `gamma[0..3]` are the spatial matrices γ₁, γ₂, γ₃ and
//! `gamma[3]` is γ₄ (Euclidean metric, x₄ = ict). All constants are built
//! from the Pauli matrices, never written out by hand.

use nalgebra::{Matrix2, Matrix4, RowVector4, Vector4};
use num_complex::Complex64;

pub type ComplexMatrix4 = Matrix4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Four complex amplitudes, a column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bispinor(pub Vector4<Complex64>);

/// Row object produced by the Dirac adjoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointBispinor(pub RowVector4<Complex64>);

impl Bispinor {
    pub const ZERO: Bispinor = Bispinor(Vector4::new(ZERO, ZERO, ZERO, ZERO));

    pub fn new(c0: Complex64, c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Bispinor(Vector4::new(c0, c1, c2, c3))
    }

    pub fn from_real(v: [f64; 4]) -> Self {
        Bispinor(Vector4::new(
            Complex64::from(v[0]),
            Complex64::from(v[1]),
            Complex64::from(v[2]),
            Complex64::from(v[3]),
        ))
    }

    /// ψ⁺ψ
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ψ⁺φ
    pub fn inner(&self, other: &Bispinor) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn conj(&self) -> Bispinor {
        Bispinor(self.0.map(|c| c.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Bispinor {
        Bispinor(self.0 * s)
    }

    pub fn max_abs_diff(&self, other: &Bispinor) -> f64 {
        (self.0 - other.0)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add for Bispinor {
    type Output = Bispinor;
    fn add(self, rhs: Bispinor) -> Bispinor {
        Bispinor(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Bispinor {
    type Output = Bispinor;
    fn sub(self, rhs: Bispinor) -> Bispinor {
        Bispinor(self.0 - rhs.0)
    }
}

impl std::ops::Mul<Bispinor> for &ComplexMatrix4 {
    type Output = Bispinor;
    fn mul(self, rhs: Bispinor) -> Bispinor {
        Bispinor(self * rhs.0)
    }
}

impl AdjointBispinor {
    /// ψ̄φ
    pub fn contract(&self, psi: &Bispinor) -> Complex64 {
        (self.0 * psi.0)[(0, 0)]
    }

    pub fn sandwich(&self, m: &ComplexMatrix4, psi: &Bispinor) -> Complex64 {
        (self.0 * m * psi.0)[(0, 0)]
    }
}

/// The three Pauli matrices.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

fn blocks(
    a: &Matrix2<Complex64>,
    b: &Matrix2<Complex64>,
    c: &Matrix2<Complex64>,
    d: &Matrix2<Complex64>,
) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    /// γ₁, γ₂, γ₃, γ₄
    pub gamma: [ComplexMatrix4; 4],
    pub c_matrix: ComplexMatrix4,
}

impl GammaSet {
    /// γ_μ with the physics label μ ∈ 1..=4.
    pub fn gamma_mu(&self, mu: usize) -> &ComplexMatrix4 {
        assert!((1..=4).contains(&mu), "gamma index {mu} outside 1..=4");
        &self.gamma[mu - 1]
    }

    pub fn gamma4(&self) -> &ComplexMatrix4 {
        &self.gamma[3]
    }

    /// β = γ₄
    pub fn beta(&self) -> ComplexMatrix4 {
        self.gamma[3]
    }

    /// α_j = iγ₄γ_j for j ∈ 1..=3.
    pub fn alpha(&self, j: usize) -> ComplexMatrix4 {
        assert!((1..=3).contains(&j), "alpha index {j} outside 1..=3");
        self.gamma[3] * self.gamma[j - 1] * I
    }

    /// C*γ₄, the linear factor of the charge-conjugation map.
    pub fn conjugation_kernel(&self) -> ComplexMatrix4 {
        self.c_matrix.map(|c| c.conj()) * self.gamma[3].transpose()
    }
}

/// Builds γ₁..γ₄ from the Pauli blocks and sets C = γ₂γ₄.
pub fn make_gammas() -> GammaSet {
    let z = Matrix2::<Complex64>::zeros();
    let id = Matrix2::<Complex64>::identity();
    let s = pauli();
    let spatial = |sigma: &Matrix2<Complex64>| blocks(&z, &(sigma * -I), &(sigma * I), &z);
    let g4 = blocks(&id, &z, &z, &(-id));
    let gamma = [spatial(&s[0]), spatial(&s[1]), spatial(&s[2]), g4];
    let c_matrix = gamma[1] * gamma[3];
    GammaSet { gamma, c_matrix }
}

/// ψ̄ = ψ⁺γ₄
pub fn dirac_adjoint(psi: &Bispinor, g: &GammaSet) -> AdjointBispinor {
    AdjointBispinor(psi.0.adjoint() * g.gamma4())
}

/// η = C*·transpose(ψ̄) = C*γ̃₄ψ*. Antilinear involution.
pub fn charge_conjugate(psi: &Bispinor, g: &GammaSet) -> Bispinor {
    Bispinor(g.conjugation_kernel() * psi.0.map(|c| c.conj()))
}

pub fn max_abs(m: &ComplexMatrix4) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Maximum entrywise residual of C⁺C = CC⁺ = 1, C = −C̃ and Cγ_μC⁺ = −γ̃_μ.
pub fn verify_c_identities(g: &GammaSet) -> f64 {
    let c = &g.c_matrix;
    let cd = c.adjoint();
    let id = ComplexMatrix4::identity();
    let mut worst = max_abs(&(cd * c - id))
        .max(max_abs(&(c * cd - id)))
        .max(max_abs(&(c + c.transpose())));
    for gm in &g.gamma {
        worst = worst.max(max_abs(&(c * gm * cd + gm.transpose())));
    }
    worst
}

/// Residuals ||γ_μγ_ν + γ_νγ_μ − 2δ_μν||_max, indexed [μ−1][ν−1].
pub fn clifford_residuals(g: &GammaSet) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    let id = ComplexMatrix4::identity();
    for (mu, row) in out.iter_mut().enumerate() {
        for (nu, cell) in row.iter_mut().enumerate() {
            let anti = g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu];
            let target = if mu == nu {
                id * Complex64::from(2.0)
            } else {
                ComplexMatrix4::zeros()
            };
            *cell = max_abs(&(anti - target));
        }
    }
    out
}

pub fn clifford_residual(g: &GammaSet) -> f64 {
    clifford_residuals(g)
        .iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max)
}

/// Largest deviation of any γ_μ from hermiticity.
pub fn hermiticity_residual(g: &GammaSet) -> f64 {
    g.gamma
        .iter()
        .map(|m| max_abs(&(m - m.adjoint())))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_matrix(rows: [[f64; 4]; 4]) -> ComplexMatrix4 {
        ComplexMatrix4::from_fn(|i, j| Complex64::from(rows[i][j]))
    }

    #[test]
    fn gamma4_is_diagonal_signature() {
        let g = make_gammas();
        let expected = real_matrix([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]);
        assert_eq!(*g.gamma4(), expected);
    }

    #[test]
    fn gamma2_expands_pauli_blocks() {
        let g = make_gammas();
        let expected = real_matrix([
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(*g.gamma_mu(2), expected);
    }

    #[test]
    fn c_matrix_is_gamma2_gamma4() {
        let g = make_gammas();
        let expected = real_matrix([
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(g.c_matrix, expected);
    }

    #[test]
    fn constructed_set_is_exact() {
        let g = make_gammas();
        assert_eq!(verify_c_identities(&g), 0.0);
        assert_eq!(clifford_residual(&g), 0.0);
        assert_eq!(hermiticity_residual(&g), 0.0);
    }

    #[test]
    fn identity_c_is_detected() {
        let mut g = make_gammas();
        g.c_matrix = ComplexMatrix4::identity();
        assert!(verify_c_identities(&g) >= 1.0);
    }

    #[test]
    fn scaled_gamma4_breaks_clifford_on_diagonal() {
        let mut g = make_gammas();
        g.gamma[3] *= Complex64::from(2.0);
        let r = clifford_residuals(&g);
        assert_eq!(r[3][3], 6.0);
        assert_eq!(r[0][0], 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let g = make_gammas();
        let up = Bispinor::from_real([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(dirac_adjoint(&up, &g).0, up.0.transpose());

        let low = Bispinor::from_real([0.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            dirac_adjoint(&low, &g).0,
            RowVector4::new(ZERO, ZERO, -ONE, ZERO)
        );

        let mixed = Bispinor::new(I, ZERO, ZERO, I);
        assert_eq!(
            dirac_adjoint(&mixed, &g).0,
            RowVector4::new(-I, ZERO, ZERO, I)
        );
    }

    #[test]
    fn charge_conjugate_of_rest_spin_up() {
        let g = make_gammas();
        let up = Bispinor::from_real([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            charge_conjugate(&up, &g),
            Bispinor::from_real([0.0, 0.0, 0.0, -1.0])
        );
    }

    #[test]
    fn alpha_beta_anticommute() {
        let g = make_gammas();
        let beta = g.beta();
        for j in 1..=3 {
            let a = g.alpha(j);
            assert_eq!(max_abs(&(a * beta + beta * a)), 0.0);
            assert_eq!(max_abs(&(a * a - ComplexMatrix4::identity())), 0.0);
            assert_eq!(max_abs(&(a - a.adjoint())), 0.0);
        }
    }
}
