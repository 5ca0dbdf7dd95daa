//! Physical parameters and the rotating-frame / dressed-state derivations.
//!
//! The driven atom is first moved into the frame rotating at the drive
//! frequency, where the atomic part diagonalizes into dressed states `|0⟩`,
//! `|1⟩` split by `Ω1 = √(Δ1² + 4λ²)`. A second local rotation leaves a
//! Jaynes–Cummings Hamiltonian with effective frequency `ω′ = Ω1 + ωc` and
//! coupling `g′ = g·cos²(θ/2)`. Far from resonance (`|Δ2| ≫ √(n+1)·g′`) the
//! exchange term reduces to the dispersive shift `Ω = g′²/Δ2`.

use nalgebra::Matrix2;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Below this `|Δ2|` the dispersive shift is treated as divergent.
pub const DEFAULT_DIVERGENCE_EPS: f64 = 1e-12;

/// Largest `√(n+1)·g′/|Δ2|` still regarded as dispersive.
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 0.2;

/// Tolerance on `|c0|² + |c1|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// The physical inputs of the model (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Cavity frequency ω.
    pub omega: f64,
    /// Atomic transition frequency ω0.
    pub omega0: f64,
    /// Classical drive frequency ωc.
    pub omega_c: f64,
    /// Atom–cavity coupling g.
    pub g: f64,
    /// Atom–drive coupling λ.
    pub lam: f64,
    /// Cavity decay rate k.
    pub kappa: f64,
    /// Initial coherent amplitude of the field.
    pub alpha: C64,
    /// Initial atomic amplitude on dressed state `|0⟩`.
    pub c0: C64,
    /// Initial atomic amplitude on dressed state `|1⟩`.
    pub c1: C64,
}

impl Default for ModelParams {
    /// α = 1, g = 10⁻², ω = 2, ω0 = 1.9, no drive, lossless cavity, atom in
    /// `(|0⟩ + |1⟩)/√2`.
    fn default() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            omega: 2.0,
            omega0: 1.9,
            omega_c: 0.0,
            g: 1e-2,
            lam: 0.0,
            kappa: 0.0,
            alpha: C64::new(1.0, 0.0),
            c0: C64::new(h, 0.0),
            c1: C64::new(h, 0.0),
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega, self.omega0, self.omega_c, self.g, self.lam, self.kappa]
            .iter()
            .chain([self.alpha.re, self.alpha.im, self.c0.re, self.c0.im, self.c1.re, self.c1.im].iter())
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter { name: "params", reason: "all inputs must be finite" });
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParameter { name: "g", reason: "must be non-negative" });
        }
        if self.lam < 0.0 {
            return Err(Error::InvalidParameter { name: "lambda", reason: "must be non-negative" });
        }
        if self.kappa < 0.0 {
            return Err(Error::InvalidParameter { name: "kappa", reason: "must be non-negative" });
        }
        let norm = self.c0.norm_sqr() + self.c1.norm_sqr();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParameter {
                name: "c0/c1",
                reason: "atomic amplitudes must satisfy |c0|^2 + |c1|^2 = 1",
            });
        }
        Ok(())
    }

    /// Mean photon number of the initial coherent field.
    pub fn mean_photons(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Quantities derived from [`ModelParams`] by the frame transformations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Δ1 = ω0 − ωc.
    pub delta1: f64,
    /// Ω1 = √(Δ1² + 4λ²).
    pub omega1: f64,
    /// Dressed-state mixing angle, in [0, π).
    pub theta: f64,
    /// g′ = g·cos²(θ/2).
    pub g_prime: f64,
    /// ω′ = Ω1 + ωc.
    pub omega_prime: f64,
    /// Δ2 = ω′ − ω.
    pub delta2: f64,
    /// Dispersive shift Ω = g′²/Δ2 (signed).
    pub omega_eff: f64,
}

/// Derives the dressed-frame parameters with the default divergence guard.
pub fn derive_params(p: &ModelParams) -> Result<DerivedParams> {
    derive_params_with(p, DEFAULT_DIVERGENCE_EPS)
}

pub fn derive_params_with(p: &ModelParams, eps: f64) -> Result<DerivedParams> {
    p.validate()?;
    let delta1 = p.omega0 - p.omega_c;
    let omega1 = delta1.hypot(2.0 * p.lam);
    // atan2 keeps the resonant drive (Δ1 = 0) at θ = π/2. The only way to reach
    // π is λ = 0 with Δ1 < 0; fold that onto 0 since it is the same dressed basis
    // up to relabelling and sign.
    let mut theta = (2.0 * p.lam).atan2(delta1);
    if theta >= core::f64::consts::PI {
        theta = 0.0;
    }
    let half_cos = (0.5 * theta).cos();
    let g_prime = p.g * half_cos * half_cos;
    let omega_prime = omega1 + p.omega_c;
    let delta2 = omega_prime - p.omega;
    if delta2.abs() < eps {
        return Err(Error::DegenerateDispersive { delta2, eps });
    }
    Ok(DerivedParams {
        delta1,
        omega1,
        theta,
        g_prime,
        omega_prime,
        delta2,
        omega_eff: g_prime * g_prime / delta2,
    })
}

/// Rotation taking bare amplitudes `(e, g)` to dressed amplitudes `(0, 1)`.
pub fn dressed_transform(theta: f64) -> Matrix2<C64> {
    let (s, c) = (0.5 * theta).sin_cos();
    Matrix2::new(
        C64::new(c, 0.0),
        C64::new(s, 0.0),
        C64::new(-s, 0.0),
        C64::new(c, 0.0),
    )
}

/// `√(n+1)·g′/|Δ2|`; small values mean the dispersive picture holds.
pub fn dispersive_ratio(d: &DerivedParams, n: u32) -> Result<f64> {
    if d.delta2 == 0.0 {
        return Err(Error::DegenerateDispersive { delta2: 0.0, eps: 0.0 });
    }
    Ok((f64::from(n) + 1.0).sqrt() * d.g_prime / d.delta2.abs())
}

/// Outcome of the dispersive validity check at photon number `n = ⌈|α|²⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveValidity {
    pub n: u32,
    pub ratio: f64,
    pub threshold: f64,
}

impl DispersiveValidity {
    pub fn is_valid(&self) -> bool {
        self.ratio <= self.threshold
    }
}

pub fn dispersive_validity(p: &ModelParams, d: &DerivedParams, threshold: f64) -> Result<DispersiveValidity> {
    let n = p.mean_photons().ceil() as u32;
    Ok(DispersiveValidity { n, ratio: dispersive_ratio(d, n)?, threshold })
}
