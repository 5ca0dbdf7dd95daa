use cavent_core::analytic::{
    concurrence_analytic, evolve, linear_entropy_analytic, two_qubit_density, TwoQubitDensity,
};
use cavent_core::entanglement::{linear_entropy_general, wootters_concurrence};
use cavent_core::model::{derive_params, dressed_transform, ModelParams};
use cavent_core::{CMatrix, C64};
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

/// Normalized `(c0, c1)` with neither amplitude vanishing.
fn amplitudes() -> impl Strategy<Value = (C64, C64)> {
    (0.05f64..1.5, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(mix, a, b)| {
        let (s, c) = mix.sin_cos();
        (C64::from_polar(c, a), C64::from_polar(s, b))
    })
}

fn model() -> impl Strategy<Value = ModelParams> {
    (0.0f64..0.6, 0.0f64..5e-3, c64(), amplitudes()).prop_map(|(lam, kappa, alpha, (c0, c1))| ModelParams {
        omega_c: lam,
        lam,
        kappa,
        alpha: alpha * 1.5,
        c0,
        c1,
        ..ModelParams::default()
    })
}

fn max_abs4(m: &Matrix4<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_density(entries: &[C64]) -> TwoQubitDensity {
    let a = Matrix4::from_iterator(entries.iter().copied());
    let rho = a * a.adjoint();
    let tr = rho.trace();
    TwoQubitDensity(rho / tr)
}

/// `e^{iφ}(cos r + i sin r n·σ)` for a unit vector `n`.
fn qubit_unitary(phase: f64, r: f64, polar: f64, azimuth: f64) -> Matrix2<C64> {
    let (nx, ny, nz) = (polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos());
    let i = C64::i();
    let (s, c) = r.sin_cos();
    let u = Matrix2::new(
        C64::new(c, 0.0) + i * s * nz,
        i * s * C64::new(nx, -ny),
        i * s * C64::new(nx, ny),
        C64::new(c, 0.0) - i * s * nz,
    );
    u * C64::from_polar(1.0, phase)
}

fn pure_qubit(v: (C64, C64)) -> Matrix2<C64> {
    let psi = Vector2::new(v.0, v.1);
    let n = psi.norm();
    let psi = psi / C64::new(n, 0.0);
    psi * psi.adjoint()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decoherence_factor_is_bounded(p in model(), t in 0.0f64..2000.0) {
        let s = evolve(&p, &derive_params(&p).unwrap(), t);
        prop_assert!(s.abs_f() <= 1.0 + 1e-15);
        prop_assert!(s.abs_tau() <= 1.0 + 1e-15);
    }

    #[test]
    fn closed_form_matches_embedding(p in model(), t in 0.0f64..2000.0) {
        let s = evolve(&p, &derive_params(&p).unwrap(), t);
        prop_assume!(s.abs_tau() < 1.0 - 1e-6);
        let rho = two_qubit_density(&s);
        let c = wootters_concurrence(&rho).unwrap();
        prop_assert!((c - concurrence_analytic(&s)).abs() < 1e-10, "C {} vs {}", c, concurrence_analytic(&s));
        let dense = CMatrix::from_iterator(4, 4, rho.0.iter().copied());
        let e = linear_entropy_general(&dense).unwrap();
        prop_assert!((e - linear_entropy_analytic(&s)).abs() < 1e-10);
    }

    #[test]
    fn outputs_stay_in_range(p in model(), t in 0.0f64..2000.0) {
        let s = evolve(&p, &derive_params(&p).unwrap(), t);
        let c = concurrence_analytic(&s);
        let e = linear_entropy_analytic(&s);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((0.0..=0.5).contains(&e));
    }

    #[test]
    fn lossless_evolution_keeps_purity(p in model(), t in 0.0f64..5000.0) {
        let p = ModelParams { kappa: 0.0, ..p };
        let s = evolve(&p, &derive_params(&p).unwrap(), t);
        prop_assert!(linear_entropy_analytic(&s).abs() < 1e-12);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(
        entries in prop::collection::vec(c64(), 16),
        ua in (0.0f64..6.3, 0.0f64..3.2, 0.0f64..3.2, 0.0f64..6.3),
        ub in (0.0f64..6.3, 0.0f64..3.2, 0.0f64..3.2, 0.0f64..6.3),
    ) {
        let rho = random_density(&entries);
        let u = qubit_unitary(ua.0, ua.1, ua.2, ua.3).kronecker(&qubit_unitary(ub.0, ub.1, ub.2, ub.3));
        let u = Matrix4::from_iterator(u.iter().copied());
        let rotated = TwoQubitDensity(u * rho.0 * u.adjoint());
        let (a, b) = (wootters_concurrence(&rho).unwrap(), wootters_concurrence(&rotated).unwrap());
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn separable_mixtures_are_unentangled(
        parts in prop::collection::vec(((c64(), c64()), (c64(), c64()), 0.01f64..1.0), 1..5),
    ) {
        prop_assume!(parts.iter().all(|(a, b, _)| a.0.norm() + a.1.norm() > 1e-3 && b.0.norm() + b.1.norm() > 1e-3));
        let total: f64 = parts.iter().map(|(_, _, w)| w).sum();
        let mut rho = Matrix4::<C64>::zeros();
        for (a, b, w) in &parts {
            let prod = pure_qubit(*a).kronecker(&pure_qubit(*b));
            rho += Matrix4::from_iterator(prod.iter().copied()) * C64::new(w / total, 0.0);
        }
        prop_assert!(wootters_concurrence(&TwoQubitDensity(rho)).unwrap() < 1e-10);
    }

    #[test]
    fn pure_state_concurrence(v in (c64(), c64(), c64(), c64())) {
        let psi = Vector4::new(v.0, v.1, v.2, v.3);
        let n = psi.norm();
        prop_assume!(n > 1e-3);
        let psi = psi / C64::new(n, 0.0);
        let rho = TwoQubitDensity(psi * psi.adjoint());
        let expected = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm();
        let c = wootters_concurrence(&rho).unwrap();
        prop_assert!((c - expected).abs() < 1e-12, "{} vs {}", c, expected);
        prop_assert!(max_abs4(&(rho.0 - rho.0.adjoint())) == 0.0);
    }

    #[test]
    fn entropy_bounds(entries in prop::collection::vec(c64(), 16)) {
        let rho = random_density(&entries);
        let dense = CMatrix::from_iterator(4, 4, rho.0.iter().copied());
        let e = linear_entropy_general(&dense).unwrap();
        prop_assert!((-1e-14..=0.75 + 1e-14).contains(&e));
    }

    #[test]
    fn dressed_transform_is_unitary(theta in 0.0f64..core::f64::consts::PI) {
        let u = dressed_transform(theta);
        let gap = (u * u.adjoint() - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-14);
    }

    #[test]
    fn derived_parameters_scale_with_frequencies(p in model(), scale in 0.1f64..10.0) {
        let base = derive_params(&p).unwrap();
        let q = ModelParams {
            omega: p.omega * scale,
            omega0: p.omega0 * scale,
            omega_c: p.omega_c * scale,
            g: p.g * scale,
            lam: p.lam * scale,
            ..p
        };
        let scaled = derive_params(&q).unwrap();
        prop_assert!((scaled.theta - base.theta).abs() < 1e-12);
        prop_assert!((scaled.omega_eff - base.omega_eff * scale).abs() < 1e-9 * base.omega_eff.abs());
        prop_assert!((scaled.omega1 - base.omega1 * scale).abs() < 1e-12 * scale.max(1.0));
    }

    #[test]
    fn weak_drive_limit(omega_c in 0.0f64..1.0, lam in 1e-9f64..1e-6) {
        let p = ModelParams { omega_c, lam, ..ModelParams::default() };
        let d = derive_params(&p).unwrap();
        let delta1 = p.omega0 - omega_c;
        prop_assert!(d.theta < 2.0 * lam / delta1 + 1e-15);
        prop_assert!((d.g_prime - p.g).abs() < p.g * d.theta * d.theta);
        prop_assert!((d.omega_prime - p.omega0).abs() < 4.0 * lam * lam / delta1 + 1e-15);
    }
}
