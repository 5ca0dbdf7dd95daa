use nalgebra::SymmetricEigen;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::liouville::fock::FockConfig;
use crate::liouville::ode::{Dopri5, StepStats};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Default per-step integrator tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Largest accepted `|Tr ρ − 1|` along an integration.
pub const TRACE_TOL: f64 = 1e-8;
/// Largest accepted `max |ρ − ρ†|` along an integration.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Most negative accepted eigenvalue of an integrated state.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Density matrix over `{|0⟩, |1⟩} ⊗ Fock`, indexed `atom·N + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub rho: CMatrix,
    pub t: f64,
    dim: usize,
}

impl JointState {
    pub fn new(rho: CMatrix, t: f64, cfg: &FockConfig) -> Result<Self> {
        let n = 2 * cfg.dim();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::InvalidParameter { name: "rho", reason: "shape must be 2(nmax+1) square" });
        }
        Ok(Self { rho, t, dim: cfg.dim() })
    }

    /// `(c0|0⟩ + c1|1⟩) ⊗ |field⟩` as a pure state at `t = 0`.
    pub fn product(c0: C64, c1: C64, field: &CVector) -> Self {
        let d = field.len();
        let psi = CVector::from_fn(2 * d, |i, _| if i < d { c0 * field[i] } else { c1 * field[i - d] });
        Self { rho: &psi * psi.adjoint(), t: 0.0, dim: d }
    }

    /// Number of retained Fock levels.
    pub fn fock_dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        let n = self.rho.nrows();
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.rho[(r, c)] - self.rho[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Tr[ρ (I ⊗ a†a)]`.
    pub fn photon_number(&self) -> f64 {
        let d = self.dim;
        (0..2 * d).map(|i| (i % d) as f64 * self.rho[(i, i)].re).sum()
    }

    /// Field block `ρij = ⟨i|ρ|j⟩`.
    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        block(self, i, j)
    }
}

/// Field block `ρij = ⟨i|ρ|j⟩` for dressed indices `i, j ∈ {0, 1}`.
pub fn block(rho: &JointState, i: usize, j: usize) -> CMatrix {
    assert!(i < 2 && j < 2, "atom indices must be 0 or 1");
    let d = rho.dim;
    rho.rho.view((i * d, j * d), (d, d)).into_owned()
}

/// `ρ ↦ a ρ a†` for `a` acting on the Fock factor of the joint space.
fn jump(rho: &CMatrix, d: usize) -> CMatrix {
    let n = rho.nrows();
    CMatrix::from_fn(n, n, |r, c| {
        let (ar, m) = (r / d, r % d);
        let (ac, k) = (c / d, c % d);
        if m + 1 < d && k + 1 < d {
            let w = ((m + 1) as f64 * (k + 1) as f64).sqrt();
            rho[(ar * d + m + 1, ac * d + k + 1)] * w
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `dρ/dt = −i[H, ρ] + k(2aρa† − a†aρ − ρa†a)`.
pub fn lindblad_rhs(h: &CMatrix, rho: &JointState, kappa: f64) -> CMatrix {
    lindblad_generator(h, &rho.rho, kappa, rho.dim)
}

fn lindblad_generator(h: &CMatrix, rho: &CMatrix, kappa: f64, d: usize) -> CMatrix {
    let mi = C64::new(0.0, -1.0);
    let mut out = (h * rho - rho * h) * mi;
    if kappa != 0.0 {
        let j = jump(rho, d);
        let n = rho.nrows();
        for c in 0..n {
            let nc = (c % d) as f64;
            for r in 0..n {
                let nr = (r % d) as f64;
                out[(r, c)] += (j[(r, c)] * 2.0 - rho[(r, c)] * (nr + nc)) * kappa;
            }
        }
    }
    out
}

/// Integrates the master equation along one trajectory.
#[derive(Debug, Clone)]
pub struct LindbladPropagator {
    h: CMatrix,
    kappa: f64,
    solver: Dopri5,
}

impl LindbladPropagator {
    /// The first trial step is `1/(100·(2k + max|Hij| + 10⁻¹²))`.
    pub fn new(h: CMatrix, kappa: f64, tol: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::InvalidParameter { name: "kappa", reason: "must be finite and non-negative" });
        }
        let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let h0 = 1.0 / (100.0 * (2.0 * kappa + scale + 1e-12));
        let solver = Dopri5::new(tol, h0)?;
        Ok(Self { h, kappa, solver })
    }

    pub fn advance(&mut self, state: &mut JointState, t_end: f64) -> Result<()> {
        if t_end < state.t {
            return Err(Error::InvalidParameter { name: "t_end", reason: "must not precede the state time" });
        }
        let (h, kappa, d) = (&self.h, self.kappa, state.dim);
        let mut rhs = |_t: f64, y: &CMatrix| lindblad_generator(h, y, kappa, d);
        self.solver.advance(&mut rhs, state.t, &mut state.rho, t_end)?;
        state.t = t_end;
        Ok(())
    }

    pub fn stats(&self) -> StepStats {
        self.solver.stats()
    }
}

/// Integrates from `rho0.t` to `t_end`.
pub fn integrate(h: &CMatrix, rho0: &JointState, kappa: f64, t_end: f64, tol: f64) -> Result<JointState> {
    let mut prop = LindbladPropagator::new(h.clone(), kappa, tol)?;
    let mut state = rho0.clone();
    prop.advance(&mut state, t_end)?;
    Ok(state)
}
