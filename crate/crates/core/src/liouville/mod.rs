//! Truncated Fock-space oracle for the dissipative dynamics.

pub mod crosscheck;
pub mod fock;
pub mod hamiltonian;
pub mod master;
pub mod ode;
pub mod superop;
#[cfg(feature = "std")]
pub mod verify;

pub use crosscheck::{run_oracle, time_grid, OracleOptions, OracleSample, OracleSummary};
pub use fock::{coherent_vector, default_nmax, FockConfig};
pub use hamiltonian::{build_h2, build_interaction_v, build_interaction_v_with, ProjectorAssignment};
pub use master::{integrate, JointState, LindbladPropagator, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL};
pub use superop::{apply_factorized, GeneratorKind, SuperopSpec};
#[cfg(feature = "std")]
pub use verify::{verify_disentangling, DisentanglingReport};
