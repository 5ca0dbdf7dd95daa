//! Three-way check of the disentangled block propagators.
//!
//! For each block generator the map `X ↦ e^{tG}X` is computed by
//! (a) the dense matrix exponential of [`dense_generator`],
//! (b) [`apply_factorized`], and
//! (c) direct Runge–Kutta integration of `dX/dt = G X`,
//! on a handful of random Hermitian matrices. The `M` coefficient of the
//! product form is also fitted from the dense exponential, and the factorized
//! map is checked against the coherent-state closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::evolve_with_shift;
use crate::liouville::fock::{coherent_vector, default_nmax, FockConfig};
use crate::liouville::ode::Dopri5;
use crate::liouville::superop::{apply_factorized, dense_generator, unvectorize, vectorize, GeneratorKind, SuperopSpec};
use crate::model::ModelParams;
use crate::{CMatrix, Error, Result, C64};

/// Largest Fock dimension the verifier accepts.
pub const VERIFY_DIM_GUARD: usize = 32;
/// Pass threshold for the pairwise relative deviation of the three routes.
pub const PAIRWISE_THRESHOLD: f64 = 1e-8;
/// Pass threshold for the elementwise coherent-dyad comparison.
pub const DYAD_THRESHOLD: f64 = 1e-10;

const TEST_MATRICES: usize = 3;
const ODE_TOL: f64 = 1e-13;
const SEED: u64 = 0x5eed_d15e;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCheck {
    pub kind: GeneratorKind,
    pub dense_vs_factorized: f64,
    pub dense_vs_ode: f64,
    pub factorized_vs_ode: f64,
    /// `M` exponent read off the dense exponential.
    pub fitted_m: C64,
    /// `M` exponent of the closed-form factorization.
    pub closed_form_m: C64,
    /// Elementwise gap between the factorized map applied to `½|α⟩⟨α|` and the
    /// coherent-state closed form.
    pub dyad_deviation: f64,
}

impl GeneratorCheck {
    pub fn max_pairwise(&self) -> f64 {
        self.dense_vs_factorized.max(self.dense_vs_ode).max(self.factorized_vs_ode)
    }

    pub fn m_deviation(&self) -> f64 {
        (self.fitted_m - self.closed_form_m).norm() / self.closed_form_m.norm().max(1.0)
    }

    pub fn passed(&self) -> bool {
        self.max_pairwise() < PAIRWISE_THRESHOLD
            && self.m_deviation() < PAIRWISE_THRESHOLD
            && self.dyad_deviation < DYAD_THRESHOLD
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisentanglingReport {
    pub omega: f64,
    pub kappa: f64,
    pub t: f64,
    pub nmax: usize,
    /// Fock cutoff used for the coherent-dyad comparison.
    pub dyad_nmax: usize,
    pub checks: Vec<GeneratorCheck>,
}

impl DisentanglingReport {
    pub fn max_pairwise(&self) -> f64 {
        self.checks.iter().map(GeneratorCheck::max_pairwise).fold(0.0, f64::max)
    }

    pub fn max_dyad_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.dyad_deviation).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(GeneratorCheck::passed)
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn relative_gap(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b)) / max_abs(a).max(max_abs(b)).max(f64::MIN_POSITIVE)
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let raw = CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&raw + raw.adjoint()) * C64::new(0.5, 0.0)
}

/// `e^{tG}` as a dense `N² × N²` matrix.
pub fn dense_propagator(spec: &SuperopSpec, cfg: &FockConfig, t: f64) -> Result<CMatrix> {
    let g = dense_generator(spec, cfg)?;
    Ok((g * C64::new(t, 0.0)).exp())
}

/// Fits the `M` exponent from a dense propagator: applied to `|1⟩⟨1|`, the
/// product form leaves `φ` times the `|1⟩⟨1|` weight on `|0⟩⟨0|`.
pub fn fit_m_coefficient(propagator: &CMatrix, d: usize) -> C64 {
    let mut x = CMatrix::zeros(d, d);
    x[(1, 1)] = C64::new(1.0, 0.0);
    let out = unvectorize(&(propagator * vectorize(&x)), d);
    out[(0, 0)] / out[(1, 1)]
}

fn integrate_block(spec: &SuperopSpec, x: &CMatrix, t: f64) -> Result<CMatrix> {
    let mut y = x.clone();
    let rate = spec.m.norm() + spec.r.norm() * x.nrows() as f64 + spec.l.norm() * x.nrows() as f64 + spec.scalar.norm();
    let mut solver = Dopri5::new(ODE_TOL, 1.0 / (100.0 * (rate + 1e-12)))?;
    solver.advance(&mut |_, y: &CMatrix| spec.apply(y), 0.0, &mut y, t)?;
    Ok(y)
}

fn dyad_deviation(kind: GeneratorKind, omega: f64, kappa: f64, t: f64, cfg: &FockConfig) -> Result<f64> {
    let p = ModelParams { kappa, ..ModelParams::default() };
    let half = C64::new(0.5, 0.0);
    let initial = coherent_vector(p.alpha, cfg)?;
    let x0 = &initial * initial.adjoint() * half;
    let evolved = apply_factorized(&SuperopSpec::block(kind, omega, kappa), &x0, t)?;

    let s = evolve_with_shift(&p, omega, t);
    let plus = coherent_vector(s.alpha_plus, cfg)?;
    let minus = coherent_vector(s.alpha_minus, cfg)?;
    let expected = match kind {
        GeneratorKind::Block00 => &plus * plus.adjoint() * half,
        GeneratorKind::Block11 => &minus * minus.adjoint() * half,
        _ => &plus * minus.adjoint() * (half * s.f),
    };
    Ok(max_abs(&(evolved - expected)))
}

/// Runs the three-way comparison for the three block generators.
///
/// The coherent-dyad comparison uses `α = 1` at the larger of `cfg.nmax` and
/// the default cutoff for `α = 1`, since a coarse cutoff truncates the input
/// dyad itself.
pub fn verify_disentangling(omega: f64, kappa: f64, t: f64, cfg: &FockConfig) -> Result<DisentanglingReport> {
    cfg.validate()?;
    let d = cfg.dim();
    if d > VERIFY_DIM_GUARD {
        return Err(Error::DimensionGuard { dim: d, max: VERIFY_DIM_GUARD });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter { name: "t", reason: "must be finite and non-negative" });
    }
    let dyad_cfg = FockConfig { nmax: cfg.nmax.max(default_nmax(C64::new(1.0, 0.0))), ..*cfg };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut checks = Vec::with_capacity(3);
    for kind in GeneratorKind::BLOCKS {
        let spec = SuperopSpec::block(kind, omega, kappa);
        let propagator = dense_propagator(&spec, cfg, t)?;
        let (mut dvf, mut dvo, mut fvo) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..TEST_MATRICES {
            let x = random_hermitian(&mut rng, d);
            let dense = unvectorize(&(&propagator * vectorize(&x)), d);
            let factorized = apply_factorized(&spec, &x, t)?;
            let ode = integrate_block(&spec, &x, t)?;
            dvf = dvf.max(relative_gap(&dense, &factorized));
            dvo = dvo.max(relative_gap(&dense, &ode));
            fvo = fvo.max(relative_gap(&factorized, &ode));
        }
        checks.push(GeneratorCheck {
            kind,
            dense_vs_factorized: dvf,
            dense_vs_ode: dvo,
            factorized_vs_ode: fvo,
            fitted_m: fit_m_coefficient(&propagator, d),
            closed_form_m: spec.factorize(t).m,
            dyad_deviation: dyad_deviation(kind, omega, kappa, t, &dyad_cfg)?,
        });
    }
    Ok(DisentanglingReport { omega, kappa, t, nmax: cfg.nmax, dyad_nmax: dyad_cfg.nmax, checks })
}
