use cavent_core::liouville::{run_oracle, time_grid, FockConfig, OracleOptions, OracleSummary};
use cavent_core::model::{derive_params, ModelParams};

fn figure_two_sets() -> Vec<ModelParams> {
    let mut sets: Vec<_> = [0.0, 1e-4, 1e-3].iter().map(|&kappa| ModelParams { kappa, ..ModelParams::default() }).collect();
    sets.push(ModelParams { omega_c: 0.2, lam: 0.2, kappa: 1e-3, ..ModelParams::default() });
    sets
}

#[test]
fn integrated_dynamics_match_closed_form() {
    let cfg = FockConfig::new(20, 1e-12).unwrap();
    let times = time_grid(0.0, 300.0, 61);
    for p in figure_two_sets() {
        let d = derive_params(&p).unwrap();
        let s = OracleSummary::from_samples(&run_oracle(&p, &d, &cfg, &times, &OracleOptions::default()).unwrap());
        assert!(s.concurrence < 1e-6, "{p:?}: {s:?}");
        assert!(s.entropy < 1e-6, "{p:?}: {s:?}");
        assert!(s.photon < 1e-6, "{p:?}: {s:?}");
        assert!(s.block < 1e-8, "{p:?}: {s:?}");
    }
}

#[test]
fn truncation_is_converged() {
    let p = ModelParams { kappa: 1e-3, ..ModelParams::default() };
    let d = derive_params(&p).unwrap();
    let times = time_grid(0.0, 300.0, 16);
    let coarse = run_oracle(&p, &d, &FockConfig::new(20, 1e-12).unwrap(), &times, &OracleOptions::default()).unwrap();
    let fine = run_oracle(&p, &d, &FockConfig::new(25, 5e-13).unwrap(), &times, &OracleOptions::default()).unwrap();
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a.concurrence_numeric - b.concurrence_numeric).abs() < 1e-8);
        assert!((a.entropy_numeric - b.entropy_numeric).abs() < 1e-8);
        assert!((a.photon_numeric - b.photon_numeric).abs() < 1e-8);
    }
}
