//! Truncated Hill determinant and the pole-free Hill discriminant.
//!
//! With `Λ = g0 − μ` the cleared-denominator matrix is
//! `K(n, m) = (Λ − n²) δ_nm + g̃_{n−m}`, `n, m ∈ [−N, N]`, and
//!
//! ```text
//! Δ(μ) = 2 − 4π² · K(Λ) ∏ n⁻⁴ · ∏_{n>N} (1 − Λ/n²)² · (row tail factor)
//! ```
//!
//! Rows `n ≠ 0` are scaled by `1/n²` before factorising, so the determinant
//! that comes out is already `K ∏ n⁻⁴` and never overflows.
//!
//! Truncating at `N` alone converges only like `N⁻³`: far rows still couple
//! to each other through `g_{±1}, g_{±2}, …`. The row tail factor restores the
//! missing rows through the Schur complement on the outer block, to second
//! order, with the inner block resolved exactly. Third and fourth order
//! enter through their local approximations. Its size also drives the
//! adaptive choice of `N` near `c = ±1`, where `|s| → 1`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::conformal::{from_s, kappa_of_s, SpectralParam};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Lu};
use crate::scalar::{cplx, i_pow, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantConfig {
    /// Matrix half-width `N`.
    pub half_width: usize,
    /// Explicit range of the outer-row sums; beyond it asymptotic remainders are used.
    pub tail_cutoff: usize,
    /// `hill_determinant` refuses `|Λ − n²| < pole_guard`.
    pub pole_guard: f64,
    /// Apply the row tail factor (off: bare truncation, as in the 3×3 formula).
    pub tail_correction: bool,
    /// Double `N` until the neglected-order indicator drops below `adapt_tol`.
    pub adaptive: bool,
    pub max_half_width: usize,
    pub adapt_tol: f64,
}

impl Default for DiscriminantConfig {
    fn default() -> Self {
        Self {
            half_width: 16,
            tail_cutoff: 8192,
            pole_guard: 1e-12,
            tail_correction: true,
            adaptive: true,
            max_half_width: 256,
            adapt_tol: 1e-9,
        }
    }
}

impl DiscriminantConfig {
    /// Plain truncation at `n`, no tail factor, no adaptation.
    pub fn bare(n: usize) -> Self {
        Self { half_width: n, tail_correction: false, adaptive: false, ..Self::default() }
    }

    pub fn fixed(n: usize) -> Self {
        Self { half_width: n, adaptive: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let top = if self.adaptive { self.max_half_width.max(self.half_width) } else { self.half_width };
        if self.half_width < 1 {
            return Err(Error::InvalidConfig("half_width must be at least 1".into()));
        }
        if self.tail_cutoff <= top {
            return Err(Error::InvalidConfig(format!(
                "tail_cutoff {} must exceed the largest half-width {top}",
                self.tail_cutoff
            )));
        }
        if !(self.pole_guard >= 0.0 && self.adapt_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Cleared-denominator Hill matrix `K(Λ)` of half-width `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct HillMatrix<T: Real> {
    pub half_width: usize,
    pub lambda: Complex<T>,
    pub entries: CMatrix<T>,
}

impl<T: Real> HillMatrix<T> {
    /// Entry with signed indices `n, m ∈ [−N, N]`.
    pub fn entry(&self, n: i64, m: i64) -> Complex<T> {
        let w = self.half_width as i64;
        self.entries[((n + w) as usize, (m + w) as usize)]
    }

    pub fn side(&self) -> usize {
        2 * self.half_width + 1
    }
}

fn offdiag_table<T: Real>(sp: &SpectralParam<T>, n: usize) -> Vec<Complex<T>> {
    // g̃_k for k ∈ [−2N, 2N], index k + 2N.
    let n = n as i64;
    (-2 * n..=2 * n).map(|k| if k == 0 { Complex::from(T::zero()) } else { sp.fourier_coeff(k) }).collect()
}

fn build<T: Real>(sp: &SpectralParam<T>, lambda: Complex<T>, n: usize, scaled: bool) -> CMatrix<T> {
    let g = offdiag_table(sp, n);
    let w = n as i64;
    CMatrix::from_fn(2 * n + 1, |i, j| {
        let (a, b) = (i as i64 - w, j as i64 - w);
        let mut e = g[(a - b + 2 * w) as usize];
        if a == b {
            e = e + lambda - T::from_i64(a * a).unwrap();
        }
        if scaled && a != 0 {
            e / T::from_i64(a * a).unwrap()
        } else {
            e
        }
    })
}

pub fn hill_matrix<T: Real>(sp: &SpectralParam<T>, lambda: Complex<T>, cfg: &DiscriminantConfig) -> HillMatrix<T> {
    HillMatrix { half_width: cfg.half_width, lambda, entries: build(sp, lambda, cfg.half_width, false) }
}

/// `Σ_{n>M} n^{−k}` by Euler–Maclaurin.
fn zeta_tail<T: Real>(m: usize, k: i32) -> T {
    let m = T::from_usize(m).unwrap();
    let kf = T::from_i32(k).unwrap();
    m.powi(1 - k) / (kf - T::one()) - m.powi(-k) * T::lit(0.5) + kf * m.powi(-k - 1) / T::lit(12.0)
        - kf * (kf + T::one()) * (kf + T::lit(2.0)) * m.powi(-k - 3) / T::lit(720.0)
}

/// Result of one truncated evaluation.
#[derive(Debug, Clone, Copy)]
struct Eval<T: Real> {
    /// `K(Λ) ∏_{n≤N} n⁻⁴`.
    det_scaled: Complex<T>,
    /// `2 Σ_{n>N} log(1 − Λ/n²)`.
    sin_log: Complex<T>,
    /// Log of the row tail factor.
    corr_log: Complex<T>,
    /// Size of the third/fourth-order local terms.
    indicator: T,
    half_width: usize,
}

fn evaluate<T: Real>(sp: &SpectralParam<T>, lambda: Complex<T>, n: usize, cfg: &DiscriminantConfig) -> Eval<T> {
    let nt = cfg.tail_cutoff.max(n + 1);
    let zero = Complex::from(T::zero());
    let one = Complex::from(T::one());
    let m_scaled = build(sp, lambda, n, true);
    let lu: Lu<T> = m_scaled.lu();
    let det_scaled = lu.det();

    // w_m = 1/(Λ − m²) for m = N+1 … N_tail.
    let ws: Vec<Complex<T>> = (n + 1..=nt).map(|m| (lambda - T::from_usize(m * m).unwrap()).inv()).collect();

    // Only exp(sin_log) is used, so one log per block of factors is enough;
    // for m > N the factors stay well inside (0.5, 1.5) in modulus.
    let mut sin_log = zero;
    let mut block = one;
    for (i, m) in (n + 1..=nt).enumerate() {
        block = block * (one - lambda / T::from_usize(m * m).unwrap());
        if i % 32 == 31 {
            sin_log = sin_log + block.ln();
            block = one;
        }
    }
    sin_log = sin_log + block.ln();
    let l2 = lambda * lambda;
    sin_log = sin_log
        - lambda * zeta_tail::<T>(nt, 2)
        - l2 * T::lit(0.5) * zeta_tail::<T>(nt, 4)
        - l2 * lambda / T::lit(3.0) * zeta_tail::<T>(nt, 6);
    sin_log = sin_log * T::lit(2.0);

    if !cfg.tail_correction || (sp.kappa.re == T::zero() && sp.kappa.im == T::zero()) {
        return Eval { det_scaled, sin_log, corr_log: zero, indicator: T::zero(), half_width: n };
    }

    let s = sp.s;
    let rho = s * s;
    let kappa = sp.kappa;
    let k2 = kappa * kappa;
    let geo = rho / (one - rho);

    // Mixed inner/outer term −tr(W_o G_oi K_in⁻¹ G_io); the outer sum is
    // rank two: one vector per side, both weighted by σ = Σ_{m>N} w_m ρ^{m−N−1}.
    let mut sigma = zero;
    let mut rp = one;
    for &wm in &ws {
        sigma = sigma + wm * rp;
        rp = rp * rho;
    }
    let ntf = T::from_usize(nt).unwrap();
    sigma = sigma - rp / (one - rho) / (ntf * ntf);
    // Unscaled K_in⁻¹ from the row-scaled factorisation: K⁻¹ b = M'⁻¹ (R b).
    let w = n as i64;
    let scale = |j: i64| if j == 0 { T::one() } else { T::one() / T::from_i64(j * j).unwrap() };
    let mut mixed = zero;
    for sign in [1i64, -1] {
        // s^{N+1 − sign·j} for j ∈ [−N, N].
        let x: Vec<Complex<T>> = (-w..=w).map(|j| s.powi((w + 1 - sign * j) as i32)).collect();
        let a: Vec<Complex<T>> = (-w..=w).zip(&x).map(|(j, &xj)| i_pow::<T>(j) * xj * scale(j)).collect();
        let b: Vec<Complex<T>> = (-w..=w).zip(&x).map(|(j, &xj)| i_pow::<T>(-j) * xj).collect();
        if let Ok(y) = lu.solve(&a) {
            mixed = mixed + b.iter().zip(&y).fold(zero, |acc, (bi, yi)| acc + *bi * *yi);
        }
    }
    mixed = mixed * k2 * sigma;

    // Outer/outer second order −½κ² Σ_{m≠m'} ρ^{|m−m'|} w_m w_m' over both
    // sides, accumulated left to right with y_m = Σ_{m'<m} ρ^{m−m'} w_m'.
    let mut y = zero;
    let mut pair = zero;
    let mut sweep = |wm: Complex<T>| {
        pair = pair + wm * y;
        y = rho * (y + wm);
    };
    for &wm in ws.iter().rev() {
        sweep(wm);
    }
    for _ in 0..(2 * n + 1) {
        sweep(zero);
    }
    for &wm in &ws {
        sweep(wm);
    }
    let oo = pair * T::lit(2.0) + geo * T::lit(8.0) * zeta_tail::<T>(nt, 4);

    // Local third and fourth order.
    let om = one - rho;
    let s3 = kappa * k2 * rho * rho * T::lit(6.0) / (om * om);
    let s4 = k2 * k2 * (rho * rho * (one + rho) * T::lit(6.0) + rho * rho * rho * T::lit(8.0)) / (om * om * om);
    let (mut w3, mut w4) = (zero, zero);
    for &wm in &ws {
        let wm2 = wm * wm;
        w3 = w3 + wm2 * wm;
        w4 = w4 + wm2 * wm2;
    }
    w3 = w3 - zeta_tail::<T>(nt, 6);
    let higher = (s3 * w3 / T::lit(3.0) - s4 * w4 * T::lit(0.25)) * T::lit(2.0);

    let corr_log = -mixed - k2 * oo * T::lit(0.5) + higher;
    Eval { det_scaled, sin_log, corr_log, indicator: higher.norm(), half_width: n }
}

fn evaluate_adaptive<T: Real>(sp: &SpectralParam<T>, lambda: Complex<T>, cfg: &DiscriminantConfig) -> Eval<T> {
    let mut n = cfg.half_width;
    if !cfg.adaptive {
        return evaluate(sp, lambda, n, cfg);
    }
    // Keep every outer pole n² well away from Λ.
    let floor = (T::lit(2.0) * lambda.norm()).sqrt().ceil().to_usize().unwrap_or(usize::MAX).saturating_add(1);
    let top = cfg.max_half_width.max(cfg.half_width).min(cfg.tail_cutoff - 1);
    n = n.max(floor.min(top));
    let tol = T::lit(cfg.adapt_tol);
    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let product = |e: &Eval<T>| e.det_scaled * (e.sin_log + e.corr_log).exp() * four_pi2;
    loop {
        let e = evaluate(sp, lambda, n, cfg);
        if n >= top {
            return e;
        }
        // The indicator is relative to the product 2 − Δ; compare in absolute terms.
        let p = product(&e);
        if e.indicator * p.norm().max(T::one()) <= tol {
            // Convergence is algebraic in N, so a step N → N+5 measures the
            // remaining error; accept the wider value only if it agrees.
            let wider = evaluate(sp, lambda, (n + 5).min(top), cfg);
            if (product(&wider) - p).norm() <= tol {
                return wider;
            }
        }
        n = (2 * n).min(top);
    }
}

/// Pole-free Hill discriminant `Δ(μ; c)`.
pub fn discriminant<T: Real>(sp: &SpectralParam<T>, mu: Complex<T>, cfg: &DiscriminantConfig) -> Complex<T> {
    discriminant_info(sp, mu, cfg).value
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantInfo<T: Real> {
    pub value: Complex<T>,
    /// Half-width actually used after adaptation.
    pub half_width: usize,
    /// Magnitude of the neglected-order terms, a rough error scale.
    pub indicator: T,
}

pub fn discriminant_info<T: Real>(
    sp: &SpectralParam<T>,
    mu: Complex<T>,
    cfg: &DiscriminantConfig,
) -> DiscriminantInfo<T> {
    let lambda = sp.g0() - mu;
    let e = evaluate_adaptive(sp, lambda, cfg);
    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let value = Complex::from(T::lit(2.0)) - e.det_scaled * (e.sin_log + e.corr_log).exp() * four_pi2;
    DiscriminantInfo { value, half_width: e.half_width, indicator: e.indicator }
}

/// Hill determinant `D(Λ)`; fails within `pole_guard` of a pole `Λ = n²`, `|n| ≤ N`.
pub fn hill_determinant<T: Real>(
    sp: &SpectralParam<T>,
    lambda: Complex<T>,
    cfg: &DiscriminantConfig,
) -> Result<Complex<T>> {
    let guard = T::lit(cfg.pole_guard);
    for j in 0..=cfg.half_width {
        let n2 = T::from_usize(j * j).unwrap();
        if (lambda - n2).norm() < guard {
            return Err(Error::PoleProximity { re: lambda.re.as_f64(), im: lambda.im.as_f64(), n_sq: (j * j) as i64 });
        }
    }
    let e = evaluate(sp, lambda, cfg.half_width, cfg);
    let one = Complex::from(T::one());
    let mut den = lambda;
    for j in 1..=cfg.half_width {
        let f = one - lambda / T::from_usize(j * j).unwrap();
        den = den * f * f;
    }
    Ok(e.det_scaled * e.corr_log.exp() / den)
}

/// `(c² − 1)^{1/2}` on the branch analytic off `[−1, 1]` and positive for `c > 1`.
pub(crate) fn sqrt_c2m1<T: Real>(c: Complex<T>) -> Complex<T> {
    let one = T::one();
    (c - one).sqrt() * (c + one).sqrt()
}

/// `Δ′(0) = 2π² c (1 + 2c²) / (c² − 1)^{3/2}`.
pub fn discriminant_slope_at_zero<T: Real>(c: Complex<T>) -> Result<Complex<T>> {
    if c.im.abs() < T::lit(1e-14) && c.re.abs() <= T::one() {
        return Err(Error::BranchCut { re: c.re.as_f64(), im: c.im.as_f64() });
    }
    let r = sqrt_c2m1(c);
    let one = Complex::from(T::one());
    let two_pi2 = T::lit(2.0) * T::PI() * T::PI();
    Ok(c * (one + c * c * T::lit(2.0)) * two_pi2 / ((c * c - one) * r))
}

/// Closed form of the `N = 1` Hill determinant at `Λ = 1 + κ − d²`:
/// `d²((2+d²)κ − d²)(3κ² − d²κ − 1 + d²) / ((1+κ−d²)(d²−κ)²(1−κ)²)`.
/// Compare with [`hill_determinant`] under [`DiscriminantConfig::bare`]`(1)`.
pub fn determinant_3x3<T: Real>(kappa: Complex<T>, d: T) -> Complex<T> {
    let one = Complex::from(T::one());
    let d2 = Complex::from(d * d);
    let num = d2 * ((d2 + T::lit(2.0)) * kappa - d2) * truncated_3x3_curve(kappa, d);
    let den = (one + kappa - d2) * (d2 - kappa).powi(2) * (one - kappa).powi(2);
    num / den
}

/// The factor `3κ² − d²κ − 1 + d²` whose zero set joins `(d, κ) = (1, 0)` to `(0, −1/√3)`.
pub fn truncated_3x3_curve<T: Real>(kappa: Complex<T>, d: T) -> Complex<T> {
    let d2 = d * d;
    kappa * kappa * T::lit(3.0) - kappa * d2 + (d2 - T::one())
}

/// `s` for a given `κ`, from `s² = (κ + 1)/(κ − 1)`; the sign of `s` does not enter `D`.
pub fn s_of_kappa<T: Real>(kappa: Complex<T>) -> Complex<T> {
    let one = Complex::from(T::one());
    ((kappa + one) / (kappa - one)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Mu,
    C,
}

/// Normalised truncation `F = I + diag(1/(Λ − n²)) G̃` and its derivative.
fn fredholm_pair<T: Real>(
    sp: &SpectralParam<T>,
    lambda: Complex<T>,
    n: usize,
    dir: Direction,
) -> (CMatrix<T>, CMatrix<T>) {
    let g = offdiag_table(sp, n);
    let w = n as i64;
    let s = sp.s;
    let one = Complex::from(T::one());
    let om = one - s * s;
    let dkappa_ds = -s * T::lit(4.0) / (om * om);
    let dc_ds = (one - (s * s).inv()) * T::lit(0.5);
    let ds_dc = dc_ds.inv();
    let dg = |k: i64| -> Complex<T> {
        if k == 0 {
            return Complex::from(T::zero());
        }
        let a = k.unsigned_abs() as i32;
        let sa = s.powi(a);
        let sa1 = if a >= 1 { s.powi(a - 1) } else { one };
        i_pow::<T>(k) * (dkappa_ds * sa + sp.kappa * sa1 * T::from_i32(a).unwrap()) * ds_dc
    };
    let dlambda = match dir {
        Direction::Mu => -one,
        Direction::C => dkappa_ds * ds_dc,
    };
    let f = CMatrix::from_fn(2 * n + 1, |i, j| {
        let (a, b) = (i as i64 - w, j as i64 - w);
        let inv = (lambda - T::from_i64(a * a).unwrap()).inv();
        let e = g[(a - b + 2 * w) as usize] * inv;
        if a == b {
            e + one
        } else {
            e
        }
    });
    let df = CMatrix::from_fn(2 * n + 1, |i, j| {
        let (a, b) = (i as i64 - w, j as i64 - w);
        let inv = (lambda - T::from_i64(a * a).unwrap()).inv();
        let gt = g[(a - b + 2 * w) as usize];
        let dgt = if dir == Direction::C { dg(a - b) } else { Complex::from(T::zero()) };
        -gt * inv * inv * dlambda + dgt * inv
    });
    (f, df)
}

/// Finite-difference derivative of `D = det F` against `det F · tr(F⁻¹ dF)`.
///
/// For `Direction::C` the parameter `Λ` is understood as `g0(c) − μ` with `μ`
/// held fixed, and the difference is taken through `s`, which also works at `c = 0`.
pub fn fredholm_derivative_check<T: Real>(
    sp: &SpectralParam<T>,
    lambda: Complex<T>,
    cfg: &DiscriminantConfig,
    dir: Direction,
    step: T,
) -> Result<(Complex<T>, Complex<T>)> {
    let n = cfg.half_width;
    let (f, df) = fredholm_pair(sp, lambda, n, dir);
    let lu = f.lu();
    if lu.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let rhs = lu.det() * lu.trace_solve(&df)?;
    let det_at = |sp2: &SpectralParam<T>, lam: Complex<T>| fredholm_pair(sp2, lam, n, dir).0.det();
    let lhs = match dir {
        Direction::Mu => (det_at(sp, lambda - step) - det_at(sp, lambda + step)) / (step * T::lit(2.0)),
        Direction::C => {
            let mu = sp.g0() - lambda;
            let one = Complex::from(T::one());
            let dc_ds = (one - (sp.s * sp.s).inv()) * T::lit(0.5);
            let hs = cplx(step, T::zero());
            let (sa, sb) = (from_s(sp.s + hs, sp.side), from_s(sp.s - hs, sp.side));
            let at = |q: &SpectralParam<T>| det_at(q, Complex::from(T::one()) + kappa_of_s(q.s) - mu);
            (at(&sa) - at(&sb)) / (hs * T::lit(2.0)) / dc_ds
        }
    };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{s_at_origin, s_of_c, BranchSide};

    type C = Complex<f64>;

    #[test]
    fn zero_c_is_diagonal() {
        let sp = s_at_origin::<f64>(BranchSide::Upper).unwrap();
        let lam = C::new(0.3, 0.1);
        let h = hill_matrix(&sp, lam, &DiscriminantConfig::bare(3));
        for n in -3..=3i64 {
            for m in -3..=3i64 {
                let want = if n == m { lam - (n * n) as f64 } else { C::new(0.0, 0.0) };
                assert_eq!(h.entry(n, m), want);
            }
        }
    }

    #[test]
    fn toeplitz_offdiagonal() {
        let sp = s_of_c(C::new(0.1, 0.2)).unwrap();
        let lam = C::new(0.7, 0.0);
        let h = hill_matrix(&sp, lam, &DiscriminantConfig::bare(4));
        for n in -4..3i64 {
            for m in -4..3i64 {
                let d = |a: i64, b: i64| if a == b { lam - (a * a) as f64 } else { C::new(0.0, 0.0) };
                let x = h.entry(n, m) - d(n, m);
                let y = h.entry(n + 1, m + 1) - d(n + 1, m + 1);
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn determinant_is_one_at_zero_c() {
        let sp = s_at_origin::<f64>(BranchSide::Lower).unwrap();
        for lam in [C::new(0.3, 0.0), C::new(2.5, 0.4), C::new(-7.0, 0.0)] {
            let d = hill_determinant(&sp, lam, &DiscriminantConfig::default()).unwrap();
            assert!((d - 1.0).norm() < 1e-13, "{lam}: {d}");
        }
    }

    #[test]
    fn determinant_vanishes_at_g0() {
        for c in [C::new(2.0, 0.0), C::new(0.1, 0.4), C::new(0.0, 0.7)] {
            let sp = s_of_c(c).unwrap();
            let d = hill_determinant(&sp, sp.g0(), &DiscriminantConfig::default()).unwrap();
            assert!(d.norm() < 1e-8, "{c}: {d}");
        }
    }

    #[test]
    fn pole_guard() {
        let sp = s_of_c(C::new(2.0, 0.0)).unwrap();
        let r = hill_determinant(&sp, C::new(4.0, 0.0), &DiscriminantConfig::default());
        assert!(matches!(r, Err(Error::PoleProximity { n_sq: 4, .. })));
    }

    #[test]
    fn closed_form_at_zero_c() {
        for side in [BranchSide::Upper, BranchSide::Lower] {
            let sp = s_at_origin::<f64>(side).unwrap();
            for d in [0.0, 0.3, 0.5, 0.9, 1.0] {
                let got = discriminant(&sp, C::new(d * d, 0.0), &DiscriminantConfig::default());
                let want = 2.0 * (2.0 * std::f64::consts::PI * (1.0 - d * d).sqrt()).cos();
                assert!((got - want).norm() < 1e-10, "d={d}");
            }
        }
    }

    #[test]
    fn periodic_solution_at_mu_zero() {
        for c in [C::new(2.0, 0.0), C::new(0.0, 0.2), C::new(0.5, 0.7), C::new(-3.0, 1.0)] {
            let sp = s_of_c(c).unwrap();
            let got = discriminant(&sp, C::new(0.0, 0.0), &DiscriminantConfig::default());
            assert!((got - 2.0).norm() < 1e-9, "{c}: {got}");
        }
    }

    #[test]
    fn slope_examples() {
        let z = discriminant_slope_at_zero(C::new(0.0, 0.5f64.sqrt())).unwrap();
        assert!(z.norm() < 1e-13);
        let v = discriminant_slope_at_zero(C::new(0.0, 0.4)).unwrap();
        assert!(v.re < 0.0 && v.im.abs() < 1e-12);
        let v = discriminant_slope_at_zero(C::new(2.0, 0.0)).unwrap();
        let want = 12.0 * std::f64::consts::PI.powi(2) / 3f64.sqrt();
        assert!((v - want).norm() < 1e-12 * want);
        assert!(discriminant_slope_at_zero(C::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn fredholm_identity() {
        let sp = s_of_c(C::new(0.1, 0.2)).unwrap();
        let cfg = DiscriminantConfig::bare(8);
        for dir in [Direction::Mu, Direction::C] {
            let (l, r) = fredholm_derivative_check(&sp, C::new(0.3, 0.0), &cfg, dir, 1e-5).unwrap();
            assert!((l - r).norm() < 1e-6, "{dir:?}: {l} vs {r}");
        }
        let sp0 = s_at_origin::<f64>(BranchSide::Upper).unwrap();
        for dir in [Direction::Mu, Direction::C] {
            let (l, r) = fredholm_derivative_check(&sp0, C::new(0.3, 0.0), &cfg, dir, 1e-5).unwrap();
            assert!(l.norm() < 1e-8 && r.norm() < 1e-12, "{dir:?}: {l} {r}");
        }
    }

    #[test]
    fn identity_perturbation_trace() {
        let a = CMatrix::<f64>::identity(4);
        let p = CMatrix::from_fn(4, |i, j| C::new((i + 2 * j) as f64, (i * j) as f64 * 0.5));
        let rhs = a.lu().det() * a.lu().trace_solve(&p).unwrap();
        assert!((rhs - p.trace()).norm() < 1e-14);
    }

    #[test]
    fn three_by_three_closed_form() {
        for (k, d) in [(C::new(0.3, 0.2), 0.4f64), (C::new(-2.0, 0.0), 0.7), (C::new(0.1, -1.3), 0.95)] {
            let sp = crate::conformal::from_s(s_of_kappa(k), BranchSide::NotOnCut);
            assert!((sp.kappa - k).norm() < 1e-12);
            let got = hill_determinant(&sp, C::new(1.0 - d * d, 0.0) + k, &DiscriminantConfig::bare(1)).unwrap();
            let want = determinant_3x3(k, d);
            assert!((got - want).norm() <= 1e-12 * want.norm(), "{got} vs {want}");
        }
        assert_eq!(truncated_3x3_curve(C::new(0.0, 0.0), 1.0), C::new(0.0, 0.0));
        assert!(truncated_3x3_curve(C::new(-1.0 / 3f64.sqrt(), 0.0), 0.0).norm() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(DiscriminantConfig::default().validate().is_ok());
        let bad = DiscriminantConfig { tail_cutoff: 10, ..DiscriminantConfig::default() };
        assert!(bad.validate().is_err());
    }
}
