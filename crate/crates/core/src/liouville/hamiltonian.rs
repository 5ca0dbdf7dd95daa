use crate::liouville::fock::FockConfig;
use crate::{CMatrix, C64};
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Which dressed state carries the `(a†a + 1)` shift.
///
/// `Dispersive` is the physical assignment. `Misassigned` puts both projectors
/// on `|1⟩`, collapsing the interaction to `Ω|1⟩⟨1|`; it exists so the
/// oracle checks can demonstrate they detect a wrong generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectorAssignment {
    #[default]
    Dispersive,
    Misassigned,
}

/// `V = Ω[(a†a + 1)⊗|0⟩⟨0| − a†a⊗|1⟩⟨1|]` in the joint basis `atom·N + n`.
pub fn build_interaction_v(omega_eff: f64, cfg: &FockConfig) -> CMatrix {
    build_interaction_v_with(omega_eff, cfg, ProjectorAssignment::Dispersive)
}

pub fn build_interaction_v_with(omega_eff: f64, cfg: &FockConfig, assignment: ProjectorAssignment) -> CMatrix {
    let d = cfg.dim();
    let mut v = CMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        let n_f = n as f64;
        let (upper, lower) = match assignment {
            ProjectorAssignment::Dispersive => (omega_eff * (n_f + 1.0), -omega_eff * n_f),
            ProjectorAssignment::Misassigned => (0.0, omega_eff),
        };
        v[(n, n)] = C64::new(upper, 0.0);
        v[(d + n, d + n)] = C64::new(lower, 0.0);
    }
    v
}

/// Dressed-frame Jaynes–Cummings Hamiltonian
/// `ω a†a + (ω′/2)σ̃z + g′(σ̃₊a + σ̃₋a†)` with `σ̃₊ = |0⟩⟨1|`.
pub fn build_h2(omega: f64, omega_prime: f64, g_prime: f64, cfg: &FockConfig) -> CMatrix {
    let d = cfg.dim();
    let mut h = CMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        let n_f = n as f64;
        h[(n, n)] = C64::new(omega * n_f + 0.5 * omega_prime, 0.0);
        h[(d + n, d + n)] = C64::new(omega * n_f - 0.5 * omega_prime, 0.0);
        if n + 1 < d {
            // σ̃₊a: |1, n+1⟩ → |0, n⟩
            let c = C64::new(g_prime * (n_f + 1.0).sqrt(), 0.0);
            h[(n, d + n + 1)] = c;
            h[(d + n + 1, n)] = c;
        }
    }
    h
}

/// Diagonal of the conserved excitation number `a†a + |0⟩⟨0|`.
pub fn excitation_number(cfg: &FockConfig) -> CMatrix {
    let d = cfg.dim();
    CMatrix::from_fn(2 * d, 2 * d, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if r < d {
            C64::new(r as f64 + 1.0, 0.0)
        } else {
            C64::new((r - d) as f64, 0.0)
        }
    })
}
