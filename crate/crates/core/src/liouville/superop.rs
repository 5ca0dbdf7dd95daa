//! Block generators as combinations of the shift superoperators
//! `M = a·a†`, `R = a†a·` and `L = ·a†a`.
//!
//! With `[R, M] = [L, M] = −M` and `[R, L] = 0`, any generator
//! `G = m·M + r·R + l·L + s` disentangles as
//!
//! ```text
//! e^{tG} = e^{st} · e^{φM} · e^{rtR} · e^{ltL},   φ = m·(1 − e^{−(r+l)t})/(r + l)
//! ```
//!
//! (`φ = m·t` when `r + l = 0`). On the truncated Fock space `M` is
//! nilpotent and only lowers photon number, so the identity holds exactly
//! there as well.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::analytic::one_minus_exp_neg_over;
use crate::liouville::fock::FockConfig;
use crate::{CMatrix, Error, Result, C64};

/// Largest Fock dimension accepted by [`dense_generator`].
pub const DENSE_DIM_GUARD: usize = 64;

/// Which field block a generator evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `ρ00`, evolving under `−iΩ(R − L) + k(2M − R − L)`.
    Block00,
    /// `ρ11`, evolving under `iΩ(R − L) + k(2M − R − L)`.
    Block11,
    /// `ρ01`, evolving under `−iΩ(R + L + 1) + k(2M − R − L)`.
    Block01,
    Custom,
}

impl GeneratorKind {
    pub const BLOCKS: [GeneratorKind; 3] = [GeneratorKind::Block00, GeneratorKind::Block11, GeneratorKind::Block01];

    pub fn label(&self) -> &'static str {
        match self {
            GeneratorKind::Block00 => "L00",
            GeneratorKind::Block11 => "L11",
            GeneratorKind::Block01 => "L01",
            GeneratorKind::Custom => "custom",
        }
    }
}

/// `G = m·M + r·R + l·L + scalar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperopSpec {
    pub kind: GeneratorKind,
    pub m: C64,
    pub r: C64,
    pub l: C64,
    pub scalar: C64,
}

/// Exponents of the ordered product `e^{scalar}·e^{m·M}·e^{r·R}·e^{l·L}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizedCoefficients {
    pub scalar: C64,
    pub m: C64,
    pub r: C64,
    pub l: C64,
}

impl SuperopSpec {
    pub fn custom(m: C64, r: C64, l: C64, scalar: C64) -> Self {
        Self { kind: GeneratorKind::Custom, m, r, l, scalar }
    }

    /// Generator of block `kind` for dispersive shift `shift` and decay `kappa`.
    pub fn block(kind: GeneratorKind, shift: f64, kappa: f64) -> Self {
        let i_shift = C64::new(0.0, shift);
        let k = C64::new(kappa, 0.0);
        let m = 2.0 * k;
        let zero = C64::new(0.0, 0.0);
        let (r, l, scalar) = match kind {
            GeneratorKind::Block00 => (-(i_shift + k), i_shift - k, zero),
            GeneratorKind::Block11 => (i_shift - k, -(i_shift + k), zero),
            GeneratorKind::Block01 => (-(i_shift + k), -(i_shift + k), -i_shift),
            GeneratorKind::Custom => (zero, zero, zero),
        };
        Self { kind, m, r, l, scalar }
    }

    pub fn is_finite(&self) -> bool {
        [self.m, self.r, self.l, self.scalar].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `G X`.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = x.nrows();
        let lowered = lower(x);
        CMatrix::from_fn(d, x.ncols(), |i, j| {
            lowered[(i, j)] * self.m + x[(i, j)] * (self.r * i as f64 + self.l * j as f64 + self.scalar)
        })
    }

    /// Coefficients of the ordered product equal to `e^{tG}`.
    pub fn factorize(&self, t: f64) -> FactorizedCoefficients {
        let z = (self.r + self.l) * t;
        FactorizedCoefficients {
            scalar: self.scalar * t,
            m: self.m * t * one_minus_exp_neg_over(z),
            r: self.r * t,
            l: self.l * t,
        }
    }
}

/// `X ↦ a X a†` on the truncated space.
fn lower(x: &CMatrix) -> CMatrix {
    let (rows, cols) = x.shape();
    CMatrix::from_fn(rows, cols, |i, j| {
        if i + 1 < rows && j + 1 < cols {
            x[(i + 1, j + 1)] * ((i + 1) as f64 * (j + 1) as f64).sqrt()
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Applies `e^{tG}` to `x` through the disentangled product.
///
/// `e^{rtR}` and `e^{ltL}` are diagonal scalings; `e^{φM}` is the series
/// `Σ φʲ/j! · aʲ X a†ʲ`, which terminates after `N` terms because `a` is
/// nilpotent on the truncated space.
pub fn apply_factorized(spec: &SuperopSpec, x: &CMatrix, t: f64) -> Result<CMatrix> {
    let c = spec.factorize(t);
    apply_coefficients(&c, x)
}

/// Largest entry modulus, `NaN` if any entry is `NaN` so a poisoned term
/// cannot read as zero.
fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

pub fn apply_coefficients(c: &FactorizedCoefficients, x: &CMatrix) -> Result<CMatrix> {
    let pre = c.scalar.exp();
    let mut term = CMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
        x[(i, j)] * pre * (c.r * i as f64).exp() * (c.l * j as f64).exp()
    });
    let mut acc = term.clone();
    for j in 1..x.nrows().max(1) {
        term = lower(&term) * (c.m / j as f64);
        let size = max_norm(&term);
        if size == 0.0 {
            break;
        }
        acc += &term;
        let norm = max_norm(&acc);
        if !size.is_finite() || !norm.is_finite() {
            return Err(Error::SeriesNotConverged { term: size, norm });
        }
    }
    Ok(acc)
}

/// Matrix of `G` acting on column-stacked operators: `vec(X)[i + N·j] = X[i, j]`.
///
/// Under this convention `R ↦ I ⊗ a†a`, `L ↦ a†a ⊗ I` and `M ↦ a ⊗ a`.
pub fn dense_generator(spec: &SuperopSpec, cfg: &FockConfig) -> Result<CMatrix> {
    let d = cfg.dim();
    if d > DENSE_DIM_GUARD {
        return Err(Error::DimensionGuard { dim: d, max: DENSE_DIM_GUARD });
    }
    let idx = |i: usize, j: usize| i + d * j;
    let mut g = CMatrix::zeros(d * d, d * d);
    for j in 0..d {
        for i in 0..d {
            g[(idx(i, j), idx(i, j))] = spec.r * i as f64 + spec.l * j as f64 + spec.scalar;
            if i + 1 < d && j + 1 < d {
                g[(idx(i, j), idx(i + 1, j + 1))] = spec.m * ((i + 1) as f64 * (j + 1) as f64).sqrt();
            }
        }
    }
    Ok(g)
}

/// Column-stacks `x`.
pub fn vectorize(x: &CMatrix) -> crate::CVector {
    crate::CVector::from_column_slice(x.as_slice())
}

/// Inverse of [`vectorize`] for a `d × d` operator.
pub fn unvectorize(v: &crate::CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(nmax: usize) -> FockConfig {
        FockConfig::new(nmax, 1e-12).unwrap()
    }

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    fn zero() -> C64 {
        C64::new(0.0, 0.0)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn sample(d: usize) -> CMatrix {
        CMatrix::from_fn(d, d, |i, j| C64::new((i as f64 + 1.0) / (j as f64 + 2.0), (i as f64 - j as f64) * 0.3))
    }

    #[test]
    fn r_only_is_left_number_multiplication() {
        let c = cfg(3);
        let d = c.dim();
        let g = dense_generator(&SuperopSpec::custom(zero(), C64::new(2.5, 0.0), zero(), zero()), &c).unwrap();
        let number = CMatrix::from_fn(d, d, |i, j| if i == j { C64::new(i as f64, 0.0) } else { zero() });
        let expected = CMatrix::identity(d, d).kronecker(&number) * C64::new(2.5, 0.0);
        assert_eq!(g, expected);
    }

    #[test]
    fn dense_matches_direct_application() {
        let c = cfg(4);
        let spec = SuperopSpec::custom(C64::new(0.2, 0.1), C64::new(-0.3, 0.4), C64::new(0.1, -0.7), C64::new(0.0, 0.2));
        let x = sample(c.dim());
        let via_dense = unvectorize(&(dense_generator(&spec, &c).unwrap() * vectorize(&x)), c.dim());
        assert!(max_abs(&(via_dense - spec.apply(&x))) < 1e-15);
    }

    #[test]
    fn shift_algebra_commutators() {
        let c = cfg(5);
        let m = dense_generator(&SuperopSpec::custom(one(), zero(), zero(), zero()), &c).unwrap();
        let r = dense_generator(&SuperopSpec::custom(zero(), one(), zero(), zero()), &c).unwrap();
        let l = dense_generator(&SuperopSpec::custom(zero(), zero(), one(), zero()), &c).unwrap();
        assert!(max_abs(&(&r * &m - &m * &r + &m)) < 1e-13);
        assert!(max_abs(&(&l * &m - &m * &l + &m)) < 1e-13);
        assert_eq!(&r * &l - &l * &r, CMatrix::zeros(36, 36));
    }

    #[test]
    fn zero_time_is_identity() {
        let x = sample(5);
        for kind in GeneratorKind::BLOCKS {
            let spec = SuperopSpec::block(kind, 1e-3, 1e-3);
            assert_eq!(apply_factorized(&spec, &x, 0.0).unwrap(), x);
        }
    }

    #[test]
    fn population_block_coefficient_grows() {
        let k = 1e-3;
        let t = 100.0;
        let c = SuperopSpec::block(GeneratorKind::Block00, -1e-3, k).factorize(t);
        assert_relative_eq!(c.m.re, (2.0 * k * t).exp() - 1.0, max_relative = 1e-14);
        assert_relative_eq!(c.m.im, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn coherence_block_coefficient_carries_decay_prefactor() {
        let (shift, k, t) = (1e-3, 1e-3, 100.0);
        let c = SuperopSpec::block(GeneratorKind::Block01, shift, k).factorize(t);
        let w = C64::new(k, shift);
        let expected = k * ((w * 2.0 * t).exp() - 1.0) / w;
        assert_relative_eq!((c.m - expected).norm(), 0.0, epsilon = 1e-15);
        // without decay nothing feeds the M series
        let c0 = SuperopSpec::block(GeneratorKind::Block01, shift, 0.0).factorize(t);
        assert_eq!(c0.m, zero());
    }

    #[test]
    fn lowering_transfers_population() {
        let mut x = CMatrix::zeros(4, 4);
        x[(1, 1)] = one();
        let spec = SuperopSpec::block(GeneratorKind::Block00, 0.0, 0.5);
        let out = apply_factorized(&spec, &x, 1.0).unwrap();
        let decay = (-1.0f64).exp();
        assert_relative_eq!(out[(1, 1)].re, decay, epsilon = 1e-15);
        assert_relative_eq!(out[(0, 0)].re, 1.0 - decay, epsilon = 1e-15);
        assert_relative_eq!(out.trace().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dense_guard() {
        let spec = SuperopSpec::block(GeneratorKind::Block00, 0.1, 0.1);
        assert!(matches!(dense_generator(&spec, &cfg(64)), Err(Error::DimensionGuard { dim: 65, .. })));
    }

    #[test]
    fn overflow_is_reported() {
        let spec = SuperopSpec::custom(C64::new(1e300, 0.0), zero(), zero(), zero());
        let x = CMatrix::from_element(4, 4, C64::new(1e10, 0.0));
        assert!(matches!(apply_factorized(&spec, &x, 1e10), Err(Error::SeriesNotConverged { .. })));
    }

    #[test]
    fn vectorization_round_trip() {
        let x = sample(3);
        assert_eq!(unvectorize(&vectorize(&x), 3), x);
        // column-major: second entry is X[1, 0]
        assert_eq!(vectorize(&x)[1], x[(1, 0)]);
    }
}
