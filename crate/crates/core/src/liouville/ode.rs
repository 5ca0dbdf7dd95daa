//! Dormand–Prince 5(4) integrator for matrix-valued linear ODEs.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{CMatrix, Error, Result, C64};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 5.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Adaptive stepper that remembers its step size between calls, so a
/// trajectory can be advanced through a sequence of output times.
///
/// Each component is held to `|err| ≤ tol·(1 + |y|)` (max norm).
#[derive(Debug, Clone)]
pub struct Dopri5 {
    tol: f64,
    h: f64,
    stats: StepStats,
}

fn combine(y: &CMatrix, h: f64, terms: &[(f64, &CMatrix)]) -> CMatrix {
    let mut out = y.clone();
    for &(c, k) in terms {
        if c != 0.0 {
            out.zip_apply(k, |o, kv| *o += kv * (h * c));
        }
    }
    out
}

impl Dopri5 {
    pub fn new(tol: f64, initial_step: f64) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidParameter { name: "tol", reason: "must be positive" });
        }
        if initial_step.is_nan() || initial_step <= 0.0 {
            return Err(Error::InvalidParameter { name: "initial_step", reason: "must be positive" });
        }
        Ok(Self { tol, h: initial_step, stats: StepStats::default() })
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// Advances `y` from `t` to `t_end` in place.
    pub fn advance<F>(&mut self, rhs: &mut F, t: f64, y: &mut CMatrix, t_end: f64) -> Result<()>
    where
        F: FnMut(f64, &CMatrix) -> CMatrix,
    {
        let mut t = t;
        if t_end <= t {
            return Ok(());
        }
        let mut k1 = rhs(t, y);
        self.stats.evaluations += 1;

        while t < t_end {
            let remaining = t_end - t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h < 16.0 * f64::EPSILON * t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t, h });
            }

            let k2 = rhs(t + C2 * h, &combine(y, h, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * h, &combine(y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(t + C4 * h, &combine(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(t + C5 * h, &combine(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = rhs(t + h, &combine(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = combine(y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = rhs(t + h, &y_new);
            self.stats.evaluations += 6;

            let mut err = 0.0f64;
            for idx in 0..y.len() {
                let e: C64 = (k1[idx] * E1 + k3[idx] * E3 + k4[idx] * E4 + k5[idx] * E5 + k6[idx] * E6 + k7[idx] * E7) * h;
                let scale = self.tol * (1.0 + y[idx].norm().max(y_new[idx].norm()));
                err = err.max(e.norm() / scale);
            }
            if !err.is_finite() {
                return Err(Error::StepSizeUnderflow { t, h });
            }

            let factor = if err == 0.0 { MAX_SCALE } else { (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE) };
            if err <= 1.0 {
                t = if last { t_end } else { t + h };
                *y = y_new;
                k1 = k7;
                self.stats.accepted += 1;
                // a shortened final step says nothing about the natural step size
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.stats.rejected += 1;
                self.h = h * factor.min(1.0);
                if self.h < 16.0 * f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t, h: self.h });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scalar_exponential() {
        let rate = C64::new(-0.3, 2.0);
        let mut y = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        let mut solver = Dopri5::new(1e-12, 1e-3).unwrap();
        solver.advance(&mut |_, y: &CMatrix| y * rate, 0.0, &mut y, 5.0).unwrap();
        let exact = (rate * 5.0).exp();
        assert_relative_eq!((y[(0, 0)] - exact).norm(), 0.0, epsilon = 1e-10);
        assert!(solver.stats().accepted > 10);
    }

    #[test]
    fn chained_calls_match_single_call() {
        let rate = C64::new(-1.0, 0.5);
        let f = |_: f64, y: &CMatrix| y * rate;
        let mut a = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        let mut b = a.clone();
        let mut s1 = Dopri5::new(1e-11, 0.01).unwrap();
        s1.advance(&mut { f }, 0.0, &mut a, 3.0).unwrap();
        let mut s2 = Dopri5::new(1e-11, 0.01).unwrap();
        for k in 0..30 {
            s2.advance(&mut { f }, 0.1 * k as f64, &mut b, 0.1 * (k + 1) as f64).unwrap();
        }
        assert_relative_eq!((a - b).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(Dopri5::new(0.0, 1.0).is_err());
        assert!(Dopri5::new(1e-8, -1.0).is_err());
    }

    #[test]
    fn blow_up_underflows() {
        // y' = y² reaches infinity at t = 1
        let mut y = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        let mut solver = Dopri5::new(1e-10, 1e-3).unwrap();
        let r = solver.advance(&mut |_, y: &CMatrix| y.component_mul(y), 0.0, &mut y, 2.0);
        assert!(matches!(r, Err(Error::StepSizeUnderflow { .. })));
    }
}
