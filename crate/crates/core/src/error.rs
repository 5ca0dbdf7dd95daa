use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The dispersive shift g'²/Δ2 diverges.
    #[error("dispersive limit undefined: |delta2| = {delta2:e} is below {eps:e}")]
    DegenerateDispersive { delta2: f64, eps: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    /// Coherent-state preparation lost too much norm to the Fock cutoff.
    #[error("Fock truncation at nmax = {nmax} loses norm {loss:e} (tolerance {tol:e})")]
    Truncation { nmax: usize, loss: f64, tol: f64 },

    #[error("step size underflow at t = {t}: h = {h:e} cannot meet tolerance")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("M-series did not converge: boundary term {term:e} vs running norm {norm:e}")]
    SeriesNotConverged { term: f64, norm: f64 },

    #[error("dimension {dim} exceeds the dense-oracle guard {max}")]
    DimensionGuard { dim: usize, max: usize },

    #[error("invalid density matrix: {reason} ({value:e})")]
    InvalidDensityMatrix { reason: &'static str, value: f64 },
}
