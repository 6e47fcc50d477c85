//! Monodromy of `g'' + Q(η) g = μ g` over `[0, 2π]` by direct integration.
//!
//! Fourth-order Magnus steps with two Gauss nodes: every step is the exact
//! exponential of a traceless 2×2 matrix, so the Wronskian stays one up to
//! rounding, and the nodes never land on `η = 0, π` where `sin η = 0`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::conformal::cut_distance;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyConfig {
    /// Step doubling stops once successive traces differ by less than
    /// `tol · max(1, |trace|)`.
    pub tol: f64,
    pub min_cut_distance: f64,
    pub initial_steps: usize,
    pub max_steps: usize,
}

impl Default for MonodromyConfig {
    fn default() -> Self {
        Self { tol: 1e-10, min_cut_distance: 1e-3, initial_steps: 64, max_steps: 1 << 22 }
    }
}

impl MonodromyConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyResult<T: Real> {
    pub m11: Complex<T>,
    pub m12: Complex<T>,
    pub m21: Complex<T>,
    pub m22: Complex<T>,
    pub trace: Complex<T>,
    pub multipliers: (Complex<T>, Complex<T>),
    pub est_error: T,
    pub steps: usize,
}

impl<T: Real> MonodromyResult<T> {
    pub fn det(&self) -> Complex<T> {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

type M2<T> = [Complex<T>; 4];

fn mat_mul<T: Real>(a: &M2<T>, b: &M2<T>) -> M2<T> {
    [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
}

/// `exp` of `[[α, β], [γ, −α]]`: `cosh(√q) I + sinh(√q)/√q Ω` with `q = α² + βγ`.
fn exp_traceless<T: Real>(alpha: Complex<T>, beta: Complex<T>, gamma: Complex<T>) -> M2<T> {
    let q = alpha * alpha + beta * gamma;
    let (ch, sh) = if q.norm() < T::lit(1e-3) {
        // Both are entire in q; six terms reach rounding for |q| < 1e-3.
        let mut ch = Complex::from(T::zero());
        let mut sh = Complex::from(T::zero());
        let mut term = Complex::from(T::one());
        for j in 0..6 {
            let jf = T::from_i32(2 * j).unwrap();
            ch = ch + term;
            sh = sh + term / (jf + T::one());
            term = term * q / ((jf + T::one()) * (jf + T::lit(2.0)));
        }
        (ch, sh)
    } else {
        let r = q.sqrt();
        (r.cosh(), r.sinh() / r)
    };
    [ch + sh * alpha, sh * beta, sh * gamma, ch - sh * alpha]
}

fn propagate<T: Real>(c: Complex<T>, mu: Complex<T>, steps: usize) -> M2<T> {
    let two_pi = T::PI() * T::lit(2.0);
    let h = two_pi / T::from_usize(steps).unwrap();
    let off = T::lit(3f64.sqrt() / 6.0);
    let half = T::lit(0.5);
    let comm = T::lit(3f64.sqrt() / 12.0) * h * h;
    let q = |t: T| {
        let sn = t.sin();
        Complex::from(sn) / (c + sn)
    };
    let one = Complex::from(T::one());
    let zero = Complex::from(T::zero());
    let mut m: M2<T> = [one, zero, zero, one];
    for j in 0..steps {
        let t0 = h * T::from_usize(j).unwrap();
        let a1 = mu - q(t0 + h * (half - off));
        let a2 = mu - q(t0 + h * (half + off));
        let alpha = (a1 - a2) * comm;
        let beta = Complex::from(h);
        let gamma = (a1 + a2) * (h * half);
        let e = exp_traceless(alpha, beta, gamma);
        m = mat_mul(&e, &m);
    }
    m
}

/// Roots of `ρ² − t ρ + 1`, larger modulus first.
fn multipliers<T: Real>(t: Complex<T>) -> (Complex<T>, Complex<T>) {
    let disc = (t * t - T::lit(4.0)).sqrt();
    let (a, b) = ((t + disc) * T::lit(0.5), (t - disc) * T::lit(0.5));
    let big = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
    if big.norm() == T::zero() {
        return (big, big);
    }
    (big, big.inv())
}

pub fn integrate_monodromy<T: Real>(
    c: Complex<T>,
    mu: Complex<T>,
    cfg: &MonodromyConfig,
) -> Result<MonodromyResult<T>> {
    if cut_distance(c) < T::lit(cfg.min_cut_distance) {
        return Err(Error::SingularPotential { re: c.re.as_f64(), im: c.im.as_f64() });
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 || cfg.initial_steps == 0 {
        return Err(Error::InvalidConfig("tol and initial_steps must be positive".into()));
    }
    let tol = T::lit(cfg.tol);
    let mut steps = cfg.initial_steps;
    let mut prev = propagate(c, mu, steps);
    loop {
        let next_steps = steps * 2;
        if next_steps > cfg.max_steps {
            return Err(Error::Convergence(format!(
                "monodromy at c = {}+{}i did not reach tol {} within {} steps",
                c.re.as_f64(),
                c.im.as_f64(),
                cfg.tol,
                cfg.max_steps
            )));
        }
        let m = propagate(c, mu, next_steps);
        let (t_prev, t) = (prev[0] + prev[3], m[0] + m[3]);
        let diff = (t - t_prev).norm();
        if diff < tol * T::one().max(t.norm()) {
            return Ok(MonodromyResult {
                m11: m[0],
                m12: m[1],
                m21: m[2],
                m22: m[3],
                trace: t,
                multipliers: multipliers(t),
                est_error: diff,
                steps: next_steps,
            });
        }
        prev = m;
        steps = next_steps;
    }
}

/// `trace − 2 cos 2πθ`; zero exactly when `μ` carries a θ-quasiperiodic solution.
pub fn quasiperiodic_residual<T: Real>(
    c: Complex<T>,
    mu: Complex<T>,
    theta: T,
    cfg: &MonodromyConfig,
) -> Result<Complex<T>> {
    let r = integrate_monodromy(c, mu, cfg)?;
    Ok(r.trace - (T::PI() * T::lit(2.0) * theta).cos() * T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;
    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn free_limit() {
        let r = integrate_monodromy(C::new(1e6, 0.0), C::new(0.25, 0.0), &MonodromyConfig::default()).unwrap();
        let want = 2.0 * (2.0 * PI * 0.5).cosh();
        assert!((r.trace - want).norm() < 1e-4);
    }

    #[test]
    fn periodic_at_mu_zero() {
        let cfg = MonodromyConfig::with_tol(1e-10);
        let r = integrate_monodromy(C::new(2.0, 0.0), C::new(0.0, 0.0), &cfg).unwrap();
        assert!((r.trace - 2.0).norm() < 1e-9);
        assert!((r.det() - 1.0).norm() < 1e-9);
        let res = quasiperiodic_residual(C::new(2.0, 0.0), C::new(0.0, 0.0), 0.0, &cfg).unwrap();
        assert!(res.norm() < 1e-9);
    }

    #[test]
    fn imaginary_c_gives_real_trace() {
        let cfg = MonodromyConfig::with_tol(1e-11);
        let mut below = false;
        for mu in [0.05, 0.1, 0.3, 0.6, 0.9] {
            let r = integrate_monodromy(C::new(0.0, 0.2), C::new(mu, 0.0), &cfg).unwrap();
            assert!(r.trace.im.abs() < 1e-8, "mu={mu}: {}", r.trace);
            below |= r.trace.re.abs() <= 2.0;
        }
        assert!(below, "some spectrum expected in 0 < mu < 1");
    }

    #[test]
    fn near_zero_c_recovers_circle() {
        let cfg = MonodromyConfig { tol: 1e-10, min_cut_distance: 1e-9, ..MonodromyConfig::default() };
        let theta: f64 = 0.3;
        let r = quasiperiodic_residual(C::new(0.0, 1e-8), C::new(1.0 - theta * theta, 0.0), theta, &cfg).unwrap();
        assert!(r.norm() < 1e-5, "{r}");
    }

    #[test]
    fn no_positive_mu_spectrum_for_real_c() {
        let r = quasiperiodic_residual(C::new(2.0, 0.0), C::new(1.0, 0.0), 0.25, &MonodromyConfig::default()).unwrap();
        assert!(r.norm() > 1.0);
    }

    #[test]
    fn multipliers_solve_quadratic() {
        let r = integrate_monodromy(C::new(0.5, 0.7), C::new(0.3, 0.1), &MonodromyConfig::default()).unwrap();
        for m in [r.multipliers.0, r.multipliers.1] {
            assert!((m * m - r.trace * m + 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_cut() {
        let r = integrate_monodromy(C::new(0.5, 1e-4), C::new(0.3, 0.0), &MonodromyConfig::default());
        assert!(matches!(r, Err(Error::SingularPotential { .. })));
    }

    #[test]
    fn budget_exhaustion() {
        let cfg = MonodromyConfig { tol: 1e-30, max_steps: 256, ..MonodromyConfig::default() };
        let r = integrate_monodromy(C::new(0.5, 0.7), C::new(0.3, 0.0), &cfg);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }
}
