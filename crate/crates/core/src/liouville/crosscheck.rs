//! Comparison of the integrated master equation against the closed form.

use alloc::vec::Vec;

use crate::analytic::{self, AnalyticSnapshot, TwoQubitDensity};
use crate::entanglement::{linear_entropy_general, wootters_concurrence};
use crate::liouville::fock::{coherent_vector, FockConfig};
use crate::liouville::hamiltonian::{build_interaction_v_with, ProjectorAssignment};
use crate::liouville::master::{JointState, LindbladPropagator};
use crate::model::{DerivedParams, ModelParams};
use crate::{CMatrix, CVector, Error, Result, C64};

/// The closed-form state expanded in the truncated Fock basis.
pub fn closed_form_joint_state(s: &AnalyticSnapshot, cfg: &FockConfig) -> Result<JointState> {
    let plus = coherent_vector(s.alpha_plus, cfg)?;
    let minus = coherent_vector(s.alpha_minus, cfg)?;
    let d = cfg.dim();
    let coherence = s.c0 * s.c1.conj() * s.f;
    let rho = CMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let (ar, m) = (r / d, r % d);
        let (ac, n) = (c / d, c % d);
        let ket = if ar == 0 { plus[m] } else { minus[m] };
        let bra = if ac == 0 { plus[n] } else { minus[n] }.conj();
        let w = match (ar, ac) {
            (0, 0) => C64::new(s.c0.norm_sqr(), 0.0),
            (1, 1) => C64::new(s.c1.norm_sqr(), 0.0),
            (0, 1) => coherence,
            _ => coherence.conj(),
        };
        w * ket * bra
    });
    JointState::new(rho, s.t, cfg)
}

/// Projects a joint state onto `{|↑⟩, |↓⟩} ⊗ {|0⟩, |1⟩}` built from the branch
/// amplitudes of `s`. The `|↓⟩` rows vanish when the branches coincide.
pub fn project_two_qubit(state: &JointState, s: &AnalyticSnapshot, cfg: &FockConfig) -> Result<TwoQubitDensity> {
    let up = coherent_vector(s.alpha_plus, cfg)?;
    let minus = coherent_vector(s.alpha_minus, cfg)?;
    let up = &up / C64::new(up.norm(), 0.0);
    let down = if s.branch_separation() == 0.0 {
        CVector::zeros(cfg.dim())
    } else {
        let overlap = up.dotc(&minus);
        let rest = &minus - &up * overlap;
        let norm = rest.norm();
        rest / C64::new(norm, 0.0)
    };
    let d = cfg.dim();
    let basis = [&up, &down];
    // row 2·field + atom holds ⟨field| ⊗ ⟨atom|
    let p = CMatrix::from_fn(4, 2 * d, |row, col| {
        let (f, a) = (row / 2, row % 2);
        if col / d == a {
            basis[f][col % d].conj()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let rho4 = &p * &state.rho * p.adjoint();
    Ok(TwoQubitDensity(nalgebra::Matrix4::from_iterator(rho4.iter().copied())))
}

/// One time point of an oracle run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub t: f64,
    pub concurrence_analytic: f64,
    pub concurrence_numeric: f64,
    pub entropy_analytic: f64,
    pub entropy_numeric: f64,
    pub photon_analytic: f64,
    pub photon_numeric: f64,
    /// Largest elementwise gap between integrated and closed-form blocks.
    pub block_deviation: f64,
    /// `|Tr ρ − 1|` of the integrated state.
    pub trace_error: f64,
    pub hermiticity_error: f64,
    /// Only computed when requested; `NaN` otherwise.
    pub min_eigenvalue: f64,
}

impl OracleSample {
    /// `|C_numeric − C_analytic|`, infinite when the projection was not a
    /// valid two-qubit state.
    pub fn concurrence_gap(&self) -> f64 {
        let gap = (self.concurrence_numeric - self.concurrence_analytic).abs();
        if gap.is_nan() { f64::INFINITY } else { gap }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub tol: f64,
    pub assignment: ProjectorAssignment,
    pub check_positivity: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { tol: crate::liouville::master::DEFAULT_TOL, assignment: ProjectorAssignment::Dispersive, check_positivity: false }
    }
}

/// Integrates from `(c0|0⟩ + c1|1⟩)⊗|α⟩` through the sorted `times` and
/// compares every sample with the closed form.
pub fn run_oracle(
    p: &ModelParams,
    d: &DerivedParams,
    cfg: &FockConfig,
    times: &[f64],
    opts: &OracleOptions,
) -> Result<Vec<OracleSample>> {
    let field = coherent_vector(p.alpha, cfg)?;
    let mut state = JointState::product(p.c0, p.c1, &field);
    let h = build_interaction_v_with(d.omega_eff, cfg, opts.assignment);
    let mut prop = LindbladPropagator::new(h, p.kappa, opts.tol)?;

    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        prop.advance(&mut state, t)?;
        let snap = analytic::evolve(p, d, t);
        let exact = closed_form_joint_state(&snap, cfg)?;
        let block_deviation = state.rho.iter().zip(exact.rho.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let projected = project_two_qubit(&state, &snap, cfg)?;
        out.push(OracleSample {
            t,
            concurrence_analytic: analytic::concurrence_analytic(&snap),
            concurrence_numeric: match wootters_concurrence(&projected) {
                // the integrated state has left the two-branch subspace
                Err(Error::InvalidDensityMatrix { .. }) => f64::NAN,
                other => other?,
            },
            entropy_analytic: analytic::linear_entropy_analytic(&snap),
            entropy_numeric: linear_entropy_general(&state.rho)?,
            photon_analytic: analytic::photon_number(p, t),
            photon_numeric: state.photon_number(),
            block_deviation,
            trace_error: (state.trace() - C64::new(1.0, 0.0)).norm(),
            hermiticity_error: state.hermiticity_error(),
            min_eigenvalue: if opts.check_positivity { state.min_eigenvalue() } else { f64::NAN },
        });
    }
    Ok(out)
}

/// Worst-case gaps over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleSummary {
    pub concurrence: f64,
    pub entropy: f64,
    pub photon: f64,
    pub block: f64,
    pub trace: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

impl OracleSummary {
    pub fn from_samples(samples: &[OracleSample]) -> Self {
        samples.iter().fold(Self { min_eigenvalue: f64::INFINITY, ..Self::default() }, |acc, s| Self {
            concurrence: acc.concurrence.max(s.concurrence_gap()),
            entropy: acc.entropy.max((s.entropy_numeric - s.entropy_analytic).abs()),
            photon: acc.photon.max((s.photon_numeric - s.photon_analytic).abs()),
            block: acc.block.max(s.block_deviation),
            trace: acc.trace.max(s.trace_error),
            hermiticity: acc.hermiticity.max(s.hermiticity_error),
            min_eigenvalue: if s.min_eigenvalue.is_nan() { acc.min_eigenvalue } else { acc.min_eigenvalue.min(s.min_eigenvalue) },
        })
    }
}

/// Evenly spaced grid of `steps` points over `[start, end]`.
pub fn time_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..steps).map(|k| start + (end - start) * k as f64 / (steps - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derive_params;

    #[test]
    fn closed_form_state_at_start_is_product() {
        let p = ModelParams::default();
        let d = derive_params(&p).unwrap();
        let cfg = FockConfig::for_alpha(p.alpha);
        let s = analytic::evolve(&p, &d, 0.0);
        let joint = closed_form_joint_state(&s, &cfg).unwrap();
        let field = coherent_vector(p.alpha, &cfg).unwrap();
        let product = JointState::product(p.c0, p.c1, &field);
        assert!((joint.rho - product.rho).iter().all(|z| z.norm() < 1e-16));
    }

    #[test]
    fn projection_of_closed_form_reproduces_embedding() {
        let p = ModelParams { kappa: 1e-3, ..ModelParams::default() };
        let d = derive_params(&p).unwrap();
        let cfg = FockConfig::for_alpha(p.alpha);
        for &t in &[0.0, 3.0, 120.0] {
            let s = analytic::evolve(&p, &d, t);
            let joint = closed_form_joint_state(&s, &cfg).unwrap();
            let projected = project_two_qubit(&joint, &s, &cfg).unwrap();
            let embedded = analytic::two_qubit_density(&s);
            let gap = (projected.0 - embedded.0).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(gap < 1e-12, "t = {t}: gap {gap:e}");
        }
    }

    #[test]
    fn misassigned_projector_is_detected() {
        let p = ModelParams { kappa: 1e-3, ..ModelParams::default() };
        let d = derive_params(&p).unwrap();
        let cfg = FockConfig::for_alpha(p.alpha);
        let opts = OracleOptions { assignment: ProjectorAssignment::Misassigned, ..OracleOptions::default() };
        let summary = OracleSummary::from_samples(&run_oracle(&p, &d, &cfg, &time_grid(0.0, 300.0, 7), &opts).unwrap());
        assert!(summary.concurrence > 1e-3);
        assert!(summary.block > 1e-3);
    }

    #[test]
    fn grid() {
        assert_eq!(time_grid(0.0, 1.0, 3), alloc::vec![0.0, 0.5, 1.0]);
        assert_eq!(time_grid(2.0, 5.0, 1), alloc::vec![2.0]);
        assert!(time_grid(0.0, 1.0, 0).is_empty());
    }
}
