//! Two-qubit concurrence and linear entropy.

use nalgebra::{Matrix4, SymmetricEigen};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::analytic::TwoQubitDensity;
use crate::{CMatrix, Error, Result, C64};

/// Admissible trace deviation and eigenvalue undershoot of an input state.
pub const VALIDITY_TOL: f64 = 1e-6;

/// The spin flip `σy ⊗ σy`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpinFlipOperator;

impl SpinFlipOperator {
    pub fn matrix(&self) -> Matrix4<C64> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        // σy ⊗ σy has real entries: anti-diagonal (−1, 1, 1, −1)
        let mut m = Matrix4::from_element(zero);
        m[(0, 3)] = -one;
        m[(1, 2)] = one;
        m[(2, 1)] = one;
        m[(3, 0)] = -one;
        m
    }

    /// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
    pub fn flip(&self, rho: &Matrix4<C64>) -> Matrix4<C64> {
        let s = self.matrix();
        s * rho.conjugate() * s
    }
}

fn hermitize<D: nalgebra::Dim, S>(m: &nalgebra::Matrix<C64, D, D, S>) -> nalgebra::OMatrix<C64, D, D>
where
    S: nalgebra::Storage<C64, D, D>,
    nalgebra::DefaultAllocator: nalgebra::allocator::Allocator<D, D>,
{
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn check_trace(trace: C64) -> Result<()> {
    let dev = (trace - C64::new(1.0, 0.0)).norm();
    if dev > VALIDITY_TOL {
        return Err(Error::InvalidDensityMatrix { reason: "trace deviates from 1", value: dev });
    }
    Ok(())
}

fn check_min_eigenvalue(min: f64) -> Result<()> {
    if min < -VALIDITY_TOL {
        return Err(Error::InvalidDensityMatrix { reason: "negative eigenvalue", value: min });
    }
    Ok(())
}

/// Wootters concurrence `max{0, λ1 − λ2 − λ3 − λ4}`.
///
/// The `λi` are the square roots of the eigenvalues of `ρρ̃`. Those equal the
/// eigenvalues of the Hermitian `√ρ ρ̃ √ρ = A A†` with `A = √ρ (σy⊗σy) √ρ*`,
/// so they are read off as the singular values of `A`. That keeps round-off in
/// the small `λi` at the level of machine epsilon instead of its square root.
pub fn wootters_concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let herm = hermitize(rho.matrix());
    check_trace(herm.trace())?;

    let eig = SymmetricEigen::new(herm);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    check_min_eigenvalue(min)?;

    let sqrt_vals = eig.eigenvalues.map(|v| C64::new(v.max(0.0).sqrt(), 0.0));
    let sqrt_rho = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();

    let a = sqrt_rho * SpinFlipOperator.matrix() * sqrt_rho.conjugate();
    let mut lambdas: [f64; 4] = a.singular_values().into();
    lambdas.sort_by(|a, b| b.total_cmp(a));

    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `1 − Tr(ρ²)` for a density matrix of any dimension.
pub fn linear_entropy_general(rho: &CMatrix) -> Result<f64> {
    if !rho.is_square() || rho.nrows() == 0 {
        return Err(Error::InvalidDensityMatrix { reason: "matrix is not square", value: rho.nrows() as f64 });
    }
    let herm = hermitize(rho);
    check_trace(herm.trace())?;
    let min = herm.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    check_min_eigenvalue(min)?;
    // Tr(ρ²) = Σ|ρij|² for Hermitian ρ
    Ok((1.0 - herm.norm_squared()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn pure(psi: [C64; 4]) -> TwoQubitDensity {
        let v = nalgebra::Vector4::from(psi);
        TwoQubitDensity(v * v.adjoint())
    }

    fn werner(p: f64) -> TwoQubitDensity {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = pure([c(h), c(0.0), c(0.0), c(h)]).0;
        TwoQubitDensity(bell * c(p) + Matrix4::identity() * c((1.0 - p) / 4.0))
    }

    #[test]
    fn spin_flip_is_involutive() {
        let s = SpinFlipOperator.matrix();
        assert_eq!(s * s, Matrix4::identity());
        assert!(s.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn bell_state_is_maximal() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let c_bell = wootters_concurrence(&pure([c(h), c(0.0), c(0.0), c(h)])).unwrap();
        assert_relative_eq!(c_bell, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_state_is_separable() {
        let a = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let b = [C64::new(0.28, 0.96), C64::new(0.0, 0.0)];
        let psi = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        assert!(wootters_concurrence(&pure(psi)).unwrap() < 1e-7);
    }

    #[test]
    fn werner_closed_form() {
        for p in [0.2f64, 1.0 / 3.0, 0.8, 1.0] {
            let expected = (0.5 * (3.0 * p - 1.0)).max(0.0);
            assert_relative_eq!(wootters_concurrence(&werner(p)).unwrap(), expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_bad_trace_and_negative_spectrum() {
        let mut w = werner(0.5);
        w.0 *= c(1.1);
        assert!(matches!(wootters_concurrence(&w), Err(Error::InvalidDensityMatrix { .. })));

        let neg = Matrix4::from_diagonal(&nalgebra::Vector4::new(c(0.6), c(0.6), c(-0.2), c(0.0)));
        assert!(matches!(
            wootters_concurrence(&TwoQubitDensity(neg)),
            Err(Error::InvalidDensityMatrix { reason: "negative eigenvalue", .. })
        ));
    }

    #[test]
    fn linear_entropy_examples() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let bell = CMatrix::from_iterator(4, 4, pure([c(h), c(0.0), c(0.0), c(h)]).0.iter().copied());
        assert_relative_eq!(linear_entropy_general(&bell).unwrap(), 0.0, epsilon = 1e-15);
        let mixed = CMatrix::identity(4, 4) * c(0.25);
        assert_relative_eq!(linear_entropy_general(&mixed).unwrap(), 0.75, epsilon = 1e-15);
        assert!(linear_entropy_general(&CMatrix::identity(3, 3)).is_err());
        assert!(linear_entropy_general(&CMatrix::zeros(2, 3)).is_err());
    }
}
