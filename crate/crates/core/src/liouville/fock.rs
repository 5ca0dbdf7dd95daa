use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{CMatrix, CVector, Error, Result, C64};

/// Default admissible norm loss of a truncated coherent state.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-12;

/// Fock-space truncation: levels `0..=nmax` are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub nmax: usize,
    pub trunc_tol: f64,
}

impl FockConfig {
    pub fn new(nmax: usize, trunc_tol: f64) -> Result<Self> {
        let cfg = Self { nmax, trunc_tol };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `nmax = max(20, ⌈|α|² + 8|α| + 10⌉)`: more than eight standard
    /// deviations of the photon distribution above its mean.
    pub fn for_alpha(alpha: C64) -> Self {
        Self { nmax: default_nmax(alpha), trunc_tol: DEFAULT_TRUNC_TOL }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nmax < 1 {
            return Err(Error::InvalidParameter { name: "nmax", reason: "must be at least 1" });
        }
        if self.trunc_tol.is_nan() || self.trunc_tol <= 0.0 {
            return Err(Error::InvalidParameter { name: "trunc_tol", reason: "must be positive" });
        }
        Ok(())
    }

    /// Number of retained levels.
    pub fn dim(&self) -> usize {
        self.nmax + 1
    }
}

pub fn default_nmax(alpha: C64) -> usize {
    let a = alpha.norm();
    let n = (a * a + 8.0 * a + 10.0).ceil() as usize;
    n.max(20)
}

/// Truncated coherent state `cₙ = e^{−|α|²/2} αⁿ/√n!`.
///
/// Fails when the discarded tail `Σ_{n>nmax} |cₙ|²` reaches `trunc_tol`.
pub fn coherent_vector(alpha: C64, cfg: &FockConfig) -> Result<CVector> {
    cfg.validate()?;
    let mut amps = Vec::with_capacity(cfg.dim());
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 1..cfg.dim() {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let loss = tail_weight(alpha.norm_sqr(), c.norm_sqr(), cfg.nmax);
    if loss >= cfg.trunc_tol {
        return Err(Error::Truncation { nmax: cfg.nmax, loss, tol: cfg.trunc_tol });
    }
    Ok(CVector::from_vec(amps))
}

/// Poisson(mean) mass above `nmax`, given the mass `last` at `nmax`.
fn tail_weight(mean: f64, last: f64, nmax: usize) -> f64 {
    let mut term = last;
    let mut sum = 0.0;
    let mut n = nmax;
    loop {
        n += 1;
        term *= mean / n as f64;
        sum += term;
        if term == 0.0 || (n as f64 > mean && term < sum * 1e-17) {
            return sum;
        }
    }
}

/// Truncated annihilation operator, `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(cfg: &FockConfig) -> CMatrix {
    let d = cfg.dim();
    CMatrix::from_fn(d, d, |m, n| if n == m + 1 { C64::new((n as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

/// Diagonal of `a†a`.
pub fn number_diagonal(cfg: &FockConfig) -> Vec<f64> {
    (0..cfg.dim()).map(|n| n as f64).collect()
}
