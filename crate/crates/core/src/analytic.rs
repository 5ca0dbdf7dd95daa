//! Closed-form evolution of the atom–field state and its observables.
//!
//! Starting from `(c0|0⟩ + c1|1⟩) ⊗ |α⟩`, each dressed branch carries a
//! coherent state: `|α₊(t)⟩` on `|0⟩` and `|α₋(t)⟩` on `|1⟩` with
//! `α± = α·e^{−(k ± iΩ)t}`. The atomic coherence is multiplied by the
//! decoherence factor `f(t)`; the field states overlap by `τ = ⟨α₊|α₋⟩`.
//! Because the field lives in `span{|α₊⟩, |α₋⟩}`, the joint state is exactly a
//! two-qubit state once that span is given an orthonormal basis `{|↑⟩, |↓⟩}`.

use nalgebra::Matrix4;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::model::{DerivedParams, ModelParams};
use crate::C64;

/// Below this value of `1 − |τ|²` the field branches are treated as one ray.
pub const SEPARATION_FLOOR: f64 = 1e-15;

/// `e^w − 1` without cancellation for small `|w|`.
pub(crate) fn exp_m1(w: C64) -> C64 {
    let (s, c) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    C64::new(w.re.exp_m1() * c - 2.0 * half * half, w.re.exp() * s)
}

/// `(1 − e^{−z})/z`, equal to 1 at `z = 0`.
pub(crate) fn one_minus_exp_neg_over(z: C64) -> C64 {
    if z == C64::new(0.0, 0.0) {
        return C64::new(1.0, 0.0);
    }
    -exp_m1(-z) / z
}

/// Logarithm of the coherent-state overlap `⟨β|γ⟩`, written so that the real
/// part `−|β − γ|²/2` has no cancellation.
fn coherent_overlap_ln(beta: C64, gamma: C64) -> C64 {
    C64::new(-0.5 * (beta - gamma).norm_sqr(), (beta.conj() * gamma).im)
}

/// Inner product `⟨β|γ⟩ = exp(−|β|²/2 − |γ|²/2 + β̄γ)` of normalized coherent
/// states.
pub fn coherent_overlap(beta: C64, gamma: C64) -> C64 {
    coherent_overlap_ln(beta, gamma).exp()
}

/// Exact state descriptors at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSnapshot {
    pub t: f64,
    /// Field amplitude on the `|0⟩` branch.
    pub alpha_plus: C64,
    /// Field amplitude on the `|1⟩` branch.
    pub alpha_minus: C64,
    /// Decoherence factor of the atomic coherence.
    pub f: C64,
    /// Overlap of the two field branches.
    pub tau: C64,
    pub c0: C64,
    pub c1: C64,
    // log-moduli keep |f| = 1 and |τ| = 1 exact where they should be
    ln_abs_f: f64,
    ln_abs_tau: f64,
}

impl AnalyticSnapshot {
    pub fn abs_f(&self) -> f64 {
        self.ln_abs_f.exp()
    }

    pub fn abs_tau(&self) -> f64 {
        self.ln_abs_tau.exp()
    }

    /// `1 − |f|²`.
    pub fn coherence_loss(&self) -> f64 {
        -(2.0 * self.ln_abs_f).exp_m1()
    }

    /// `√(1 − |τ|²)`, the weight of `|α₋⟩` orthogonal to `|α₊⟩`; zero once the
    /// branches are indistinguishable to working precision.
    pub fn branch_separation(&self) -> f64 {
        let gap = -(2.0 * self.ln_abs_tau).exp_m1();
        if gap < SEPARATION_FLOOR {
            0.0
        } else {
            gap.sqrt()
        }
    }
}

/// Closed-form state at time `t ≥ 0` for the dispersive shift in `d`.
pub fn evolve(p: &ModelParams, d: &DerivedParams, t: f64) -> AnalyticSnapshot {
    evolve_with_shift(p, d.omega_eff, t)
}

/// [`evolve`] with the dispersive shift `Ω` given directly.
pub fn evolve_with_shift(p: &ModelParams, shift: f64, t: f64) -> AnalyticSnapshot {
    debug_assert!(t >= 0.0, "evolve requires t >= 0");
    let k = p.kappa;
    let n0 = p.alpha.norm_sqr();
    let i = C64::i();

    let alpha_plus = p.alpha * (-(k + i * shift) * t).exp();
    let alpha_minus = p.alpha * (-(k - i * shift) * t).exp();

    // ln f = −iΩt + |α|²(e^{−2kt} − 1) + k|α|²/(k+iΩ)·(1 − e^{−2(k+iΩ)t})
    let mut ln_f = C64::new(n0 * (-2.0 * k * t).exp_m1(), -shift * t);
    if k != 0.0 {
        let z = 2.0 * (k + i * shift) * t;
        ln_f += 2.0 * k * t * n0 * one_minus_exp_neg_over(z);
    }
    let ln_tau = coherent_overlap_ln(alpha_plus, alpha_minus);

    AnalyticSnapshot {
        t,
        alpha_plus,
        alpha_minus,
        f: ln_f.exp(),
        tau: ln_tau.exp(),
        c0: p.c0,
        c1: p.c1,
        ln_abs_f: ln_f.re,
        ln_abs_tau: ln_tau.re,
    }
}

/// A 4×4 density matrix over `{|↑⟩, |↓⟩} ⊗ {|0⟩, |1⟩}`, indexed
/// `2·field + atom`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity(pub Matrix4<C64>);

impl TwoQubitDensity {
    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }
}

impl From<Matrix4<C64>> for TwoQubitDensity {
    fn from(m: Matrix4<C64>) -> Self {
        Self(m)
    }
}

/// Embeds the snapshot into the two-qubit basis with `|↑⟩ = |α₊⟩` and
/// `|↓⟩ ∝ |α₋⟩ − τ|α₊⟩`.
pub fn two_qubit_density(s: &AnalyticSnapshot) -> TwoQubitDensity {
    let zero = C64::new(0.0, 0.0);
    // field components of each atomic branch in the {↑, ↓} basis
    let branch = [[C64::new(1.0, 0.0), zero], [s.tau, C64::new(s.branch_separation(), 0.0)]];
    let coherence = s.c0 * s.c1.conj() * s.f;
    let weight = [[C64::new(s.c0.norm_sqr(), 0.0), coherence], [coherence.conj(), C64::new(s.c1.norm_sqr(), 0.0)]];

    let m = Matrix4::from_fn(|row, col| {
        let (fr, ar) = (row / 2, row % 2);
        let (fc, ac) = (col / 2, col % 2);
        weight[ar][ac] * branch[ar][fr] * branch[ac][fc].conj()
    });
    TwoQubitDensity(m)
}

/// `2|c0||c1|·|f|·√(1 − |τ|²)`.
pub fn concurrence_analytic(s: &AnalyticSnapshot) -> f64 {
    let c = 2.0 * s.c0.norm() * s.c1.norm() * s.abs_f() * s.branch_separation();
    c.clamp(0.0, 1.0)
}

/// `2|c0|²|c1|²·(1 − |f|²)`.
pub fn linear_entropy_analytic(s: &AnalyticSnapshot) -> f64 {
    // adding +0 turns the −0 of an exactly lossless run into 0
    2.0 * s.c0.norm_sqr() * s.c1.norm_sqr() * s.coherence_loss() + 0.0
}

/// Mean cavity photon number `|α|²·e^{−2kt}`.
pub fn photon_number(p: &ModelParams, t: f64) -> f64 {
    p.alpha.norm_sqr() * (-2.0 * p.kappa * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_params;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn params(kappa: f64) -> (ModelParams, DerivedParams) {
        let p = ModelParams { kappa, ..ModelParams::default() };
        let d = derive_params(&p).unwrap();
        (p, d)
    }

    #[test]
    fn overlap_examples() {
        let b = C64::new(0.3, -1.2);
        assert_eq!(coherent_overlap(b, b), C64::new(1.0, 0.0));
        let g = C64::new(0.7, 0.4);
        assert_relative_eq!(coherent_overlap(C64::new(0.0, 0.0), g).re, (-0.5 * g.norm_sqr()).exp(), epsilon = 1e-16);
        let o = coherent_overlap(C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        assert_relative_eq!(o.re, 0.19876611034641295, epsilon = 1e-15);
        assert_relative_eq!(o.im, 0.3095598756531122, epsilon = 1e-15);
    }

    #[test]
    fn overlap_matches_fock_dot_product() {
        // truncated Fock expansion as an independent route
        let (b, g) = (C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        let mut acc = C64::new(0.0, 0.0);
        let (mut tb, mut tg) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        for n in 0..40 {
            if n > 0 {
                tb = tb * b / (n as f64).sqrt();
                tg = tg * g / (n as f64).sqrt();
            }
            acc += tb.conj() * tg;
        }
        acc *= (-0.5 * b.norm_sqr() - 0.5 * g.norm_sqr()).exp();
        let o = coherent_overlap(b, g);
        assert_relative_eq!((acc - o).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn initial_snapshot() {
        let (p, d) = params(1e-3);
        let s = evolve(&p, &d, 0.0);
        assert_eq!(s.alpha_plus, p.alpha);
        assert_eq!(s.alpha_minus, p.alpha);
        assert_eq!(s.f, C64::new(1.0, 0.0));
        assert_eq!(s.tau, C64::new(1.0, 0.0));
        assert_eq!(concurrence_analytic(&s), 0.0);
        assert_eq!(linear_entropy_analytic(&s).to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn lossless_half_period() {
        let (p, d) = params(0.0);
        let t = PI / (2.0 * d.omega_eff.abs());
        let s = evolve(&p, &d, t);
        assert_eq!(s.abs_f(), 1.0);
        assert_relative_eq!(s.abs_tau(), (-2.0f64).exp(), epsilon = 1e-14);
        assert_relative_eq!(concurrence_analytic(&s), 0.9907998592608226, epsilon = 1e-14);
        assert_eq!(linear_entropy_analytic(&s), 0.0);
    }

    #[test]
    fn lossy_reference_point() {
        // frozen from a 40-digit evaluation of the closed form
        let (p, d) = params(1e-3);
        let s = evolve(&p, &d, 100.0);
        assert_relative_eq!(s.f.re, 0.9919710858591178, epsilon = 1e-13);
        assert_relative_eq!(s.f.im, 0.11706212071305531, epsilon = 1e-13);
        assert_relative_eq!(s.tau.re, 0.9708265546861804, epsilon = 1e-13);
        assert_relative_eq!(s.tau.im, -0.15931896375116655, epsilon = 1e-13);
        assert_relative_eq!(concurrence_analytic(&s), 0.1789964657459908, epsilon = 1e-12);
        assert_relative_eq!(linear_entropy_analytic(&s), 0.0011449123568224799, max_relative = 1e-10);
    }

    #[test]
    fn snapshot_invariants() {
        let (p, d) = params(1e-3);
        for &t in &[0.5, 10.0, 250.0, 4000.0] {
            let s = evolve(&p, &d, t);
            let decay = p.alpha.norm() * (-p.kappa * t).exp();
            assert_relative_eq!(s.alpha_plus.norm(), decay, max_relative = 1e-14);
            assert_relative_eq!(s.alpha_minus.norm(), decay, max_relative = 1e-14);
            assert!(s.abs_f() <= 1.0 && s.abs_tau() <= 1.0);
        }
    }

    #[test]
    fn product_branch_has_no_entanglement() {
        let p = ModelParams { kappa: 1e-3, c0: C64::new(1.0, 0.0), c1: C64::new(0.0, 0.0), ..ModelParams::default() };
        let d = derive_params(&p).unwrap();
        let s = evolve(&p, &d, 150.0);
        assert_eq!(concurrence_analytic(&s), 0.0);
        let rho = two_qubit_density(&s);
        assert_eq!(rho.0[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(rho.0.iter().filter(|z| z.norm() != 0.0).count(), 1);
    }

    #[test]
    fn initial_embedding_is_product() {
        let (p, d) = params(0.0);
        let rho = two_qubit_density(&evolve(&p, &d, 0.0));
        let h = C64::new(0.5, 0.0);
        // ½(|0⟩+|1⟩)(⟨0|+⟨1|) ⊗ |↑⟩⟨↑| occupies rows/cols 0 and 1
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_relative_eq!((rho.0[(r, c)] - h).norm(), 0.0, epsilon = 1e-15);
        }
        assert_relative_eq!(rho.0.norm_squared(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn lossless_embedding_stays_pure() {
        let (p, d) = params(0.0);
        let s = evolve(&p, &d, PI / (2.0 * d.omega_eff.abs()));
        let rho = two_qubit_density(&s);
        let purity = (rho.0 * rho.0).trace();
        assert_relative_eq!(purity.re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
        // Schmidt weights (1 ± e^{-2})/2: the reduced atomic state has det (1 − e^{-4})/4
        let reduced = nalgebra::Matrix2::from_fn(|a, b| rho.0[(a, b)] + rho.0[(2 + a, 2 + b)]);
        assert_relative_eq!(reduced.determinant().re, 0.25 * (1.0 - (-4.0f64).exp()), epsilon = 1e-14);
    }

    #[test]
    fn photon_number_examples() {
        let (p, _) = params(1e-3);
        assert_eq!(photon_number(&p, 0.0), 1.0);
        assert_relative_eq!(photon_number(&p, 100.0), 0.8187307530779818, epsilon = 1e-15);
        let (p, _) = params(0.0);
        assert_eq!(photon_number(&p, 1234.5), 1.0);
    }

    #[test]
    fn entropy_at_vanishing_coherence() {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let mut s = evolve(&ModelParams::default(), &derive_params(&ModelParams::default()).unwrap(), 0.0);
        s.c0 = h;
        s.c1 = h;
        s.ln_abs_f = f64::NEG_INFINITY;
        s.f = C64::new(0.0, 0.0);
        assert_relative_eq!(linear_entropy_analytic(&s), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn expm1_helpers() {
        let z = C64::new(1e-9, -2e-9);
        let direct = one_minus_exp_neg_over(z);
        assert_relative_eq!((direct - (1.0 - z / 2.0)).norm(), 0.0, epsilon = 4e-16);
        assert_eq!(one_minus_exp_neg_over(C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
        let w = C64::new(0.3, 1.1);
        assert_relative_eq!((exp_m1(w) - (w.exp() - 1.0)).norm(), 0.0, epsilon = 1e-15);
    }
}
