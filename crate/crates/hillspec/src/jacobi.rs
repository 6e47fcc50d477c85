//! Truncated Jacobi operator of a class, an oracle independent of the Hill
//! determinant.
//!
//! In Fourier space the class `a = a0 + j p` obeys
//! `R(j)(a_{j+1} − a_{j−1}) = λ_J a_j` with `R(j) = 1/p² − 1/|a0 + jp|²`.
//! The linearised vorticity equation carries an extra factor `k p²/2` in
//! front of this recursion, so physical eigenvalues are `λ = (k p²/2) λ_J`.
//! Those pair with Evans roots through `λ = −ikc`.

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evans::{find_roots, EvansConfig};
use crate::lattice::{class_point, companion_basis, Wavevector};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiTruncation<T: Real> {
    pub p: Wavevector,
    pub k: i64,
    pub a0: (i64, i64),
    pub half_width: usize,
    /// `R(j)` for `j ∈ [−M, M]`.
    pub r: Vec<T>,
    pub matrix: DMatrix<T>,
}

impl<T: Real> JacobiTruncation<T> {
    pub fn r_at(&self, j: i64) -> T {
        self.r[(j + self.half_width as i64) as usize]
    }

    /// Factor turning eigenvalues of the recursion into Euler eigenvalues.
    pub fn physical_scale(&self) -> T {
        T::from_i64(self.k * self.p.p_sq).unwrap() * T::lit(0.5)
    }
}

/// Default truncation `4p²`, and never below 40.
pub fn default_half_width(p: &Wavevector) -> usize {
    (4 * p.p_sq as usize).max(40)
}

pub fn jacobi_matrix<T: Real + RealField>(p: &Wavevector, k: i64, m: usize) -> Result<JacobiTruncation<T>> {
    if k <= 0 || k >= p.p_sq {
        return Err(Error::ClassRange { k, p_sq: p.p_sq });
    }
    if (m as i64) < p.p_sq {
        return Err(Error::InvalidConfig(format!("half-width {m} below p² = {}", p.p_sq)));
    }
    let q = companion_basis(p)?;
    let cp = class_point(p, &q, k)?;
    let a0 = cp.a0;
    let w = m as i64;
    let p_sq = p.p_sq;
    // R(j) = (|a|² − p²) / (p² |a|²), exact in the integers before the division.
    let r: Vec<T> = (-w..=w)
        .map(|j| {
            let a = (a0.0 + j * p.p1, a0.1 + j * p.p2);
            let n2 = a.0 * a.0 + a.1 * a.1;
            T::from_i64(n2 - p_sq).unwrap() / T::from_i64(p_sq * n2).unwrap()
        })
        .collect();
    let n = 2 * m + 1;
    let mut matrix = DMatrix::<T>::zeros(n, n);
    for i in 0..n {
        if i + 1 < n {
            matrix[(i, i + 1)] = r[i];
        }
        if i > 0 {
            matrix[(i, i - 1)] = -r[i];
        }
    }
    Ok(JacobiTruncation { p: *p, k, a0, half_width: m, r, matrix })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiSpectrum {
    pub k: i64,
    pub half_width: usize,
    /// Physical eigenvalues `λ` with `|Re λ_J| > tol`, sorted.
    #[serde(with = "complex_vec")]
    pub eigenvalues: Vec<C64>,
    pub scale: f64,
    /// Largest `‖L v − λ_J v‖ / ‖v‖` over the kept eigenpairs.
    pub max_residual: f64,
}

mod complex_vec {
    use num_complex::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(v: &[Complex<f64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| ReIm { re: z.re, im: z.im }).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex<f64>>, D::Error> {
        Ok(Vec::<ReIm>::deserialize(d)?.into_iter().map(|z| Complex::new(z.re, z.im)).collect())
    }
}

/// Residual of the eigenpair at `lambda` after a few steps of inverse iteration.
fn eigen_residual<T: Real + RealField>(mat: &DMatrix<T>, lambda: Complex<T>) -> Result<f64> {
    let n = mat.nrows();
    let shift = lambda + Complex::new(T::lit(1e-10), T::lit(1e-10)) * (T::one() + lambda.norm());
    let a = CMatrix::from_fn(n, |i, j| {
        let v = Complex::from(mat[(i, j)]);
        if i == j {
            v - shift
        } else {
            v
        }
    });
    let lu = a.lu();
    let mut v: Vec<Complex<T>> =
        (0..n).map(|i| Complex::from(T::one() + T::from_usize(i % 7).unwrap() * T::lit(0.1))).collect();
    for _ in 0..3 {
        v = lu.solve(&v)?;
        let nrm = num_traits::Float::sqrt(v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()));
        v.iter_mut().for_each(|z| *z /= nrm);
    }
    let mut res = T::zero();
    for i in 0..n {
        let mut lv = Complex::from(T::zero());
        for j in i.saturating_sub(1)..(i + 2).min(n) {
            lv += v[j] * mat[(i, j)];
        }
        res += (lv - v[i] * lambda).norm_sqr();
    }
    Ok(num_traits::Float::sqrt(res).as_f64())
}

/// QR on the bare matrix stalls: its spectrum is symmetric under `λ → −λ`
/// and the diagonal is zero, which defeats the Francis shifts. A real shift
/// breaks the symmetry and is subtracted again afterwards.
fn shifted_eigenvalues<T: Real + RealField>(jt: &JacobiTruncation<T>) -> Result<Vec<Complex<T>>> {
    let n = jt.matrix.nrows();
    let scale = jt.r.iter().fold(T::zero(), |m, r| num_traits::Float::max(m, num_traits::Float::abs(*r)));
    for sigma in [0.123456, 0.29, -0.271828] {
        let shift = T::lit(sigma) * scale;
        let shifted = &jt.matrix + DMatrix::<T>::identity(n, n) * shift;
        if let Some(schur) = Schur::try_new(shifted, T::lit(1e-15), 100 * n) {
            return Ok(schur.complex_eigenvalues().iter().map(|z| z - shift).collect());
        }
    }
    Err(Error::Eigen(format!("Schur iteration did not converge for class k = {}", jt.k)))
}

pub fn jacobi_spectrum<T: Real + RealField>(p: &Wavevector, k: i64, m: usize, tol: f64) -> Result<JacobiSpectrum> {
    let jt = jacobi_matrix::<T>(p, k, m)?;
    let eig = shifted_eigenvalues(&jt)?;
    let scale = jt.physical_scale().as_f64();
    let mut kept: Vec<Complex<T>> = eig.iter().copied().filter(|z| z.re.as_f64().abs() > tol).collect();
    if eig.iter().any(|z| !z.re.as_f64().is_finite() || !z.im.as_f64().is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    let mut max_residual = 0.0f64;
    for z in &kept {
        max_residual = max_residual.max(eigen_residual(&jt.matrix, *z)?);
    }
    kept.sort_by(|a, b| a.re.as_f64().total_cmp(&b.re.as_f64()).then(a.im.as_f64().total_cmp(&b.im.as_f64())));
    let eigenvalues = kept.iter().map(|z| C64::new(z.re.as_f64(), z.im.as_f64()) * scale).collect();
    Ok(JacobiSpectrum { k, half_width: m, eigenvalues, scale, max_residual })
}

/// Largest half-width [`jacobi_spectrum_adaptive`] will try.
pub const MAX_HALF_WIDTH: usize = 640;

/// Per-step decay `ln|z|` of an eigenvector far from the class centre, where
/// `R ≈ 1/p²` and the recursion has solutions `z^j` with `z − 1/z = p² λ_J`.
fn decay_rate(p_sq: f64, lambda_j: C64) -> f64 {
    let b = lambda_j * p_sq;
    let root = (b * b + 4.0).sqrt();
    let z = ((b + root) * 0.5).norm().max(((b - root) * 0.5).norm());
    z.ln()
}

/// `jacobi_spectrum` with the half-width grown until every kept eigenvector
/// has decayed by `e⁻¹⁴` per side (eigenvalue error ~ the square of that).
/// Modes close to the imaginary axis decay slowly and need `M ≫ 4p²`.
pub fn jacobi_spectrum_adaptive(p: &Wavevector, k: i64, tol: f64) -> Result<JacobiSpectrum> {
    let mut m = default_half_width(p);
    loop {
        let spec = jacobi_spectrum::<f64>(p, k, m, tol)?;
        let gamma =
            spec.eigenvalues.iter().map(|l| decay_rate(p.p_sq as f64, *l / spec.scale)).fold(f64::INFINITY, f64::min);
        let need = if gamma.is_finite() { (14.0 / gamma).ceil() as usize } else { 0 };
        if need <= m {
            return Ok(spec);
        }
        if m >= MAX_HALF_WIDTH {
            return Err(Error::Convergence(format!(
                "class k = {k}: Jacobi eigenvector decay {gamma:e} needs half-width {need} > {MAX_HALF_WIDTH}"
            )));
        }
        m = (need + 10).min(MAX_HALF_WIDTH);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    #[serde(with = "crate::scalar::complex_serde")]
    pub lambda_jacobi: C64,
    #[serde(with = "crate::scalar::complex_serde")]
    pub c_evans: C64,
    #[serde(with = "crate::scalar::complex_serde")]
    pub lambda_evans: C64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub k: i64,
    pub theta: f64,
    pub d: f64,
    pub half_width: usize,
    pub pairs: Vec<Pairing>,
    pub max_distance: f64,
}

/// Pairs every Jacobi eigenvalue with an Evans root of the same class via
/// `λ = −ikc`. `m = None` picks the half-width adaptively.
pub fn cross_validate(
    p: &Wavevector,
    k: i64,
    m: Option<usize>,
    cfg: &EvansConfig,
    tol: f64,
) -> Result<CrossValidation> {
    let spec = match m {
        Some(m) => jacobi_spectrum::<f64>(p, k, m, 1e-6)?,
        None => jacobi_spectrum_adaptive(p, k, 1e-6)?,
    };
    let q = companion_basis(p)?;
    let cp = class_point(p, &q, k)?;
    let roots = find_roots(cp.theta_f64(), cp.d_f64(), cfg)?;
    let kf = k as f64;
    let mut evans: Vec<(C64, C64)> = Vec::new();
    for r in &roots.roots {
        for _ in 0..r.multiplicity {
            evans.push((r.c, C64::new(0.0, -kf) * r.c));
        }
    }
    if evans.len() != spec.eigenvalues.len() {
        return Err(Error::OracleMismatch(format!(
            "class k = {k}: {} Jacobi eigenvalues vs {} Evans roots",
            spec.eigenvalues.len(),
            evans.len()
        )));
    }
    let mut pairs = Vec::new();
    for &lj in &spec.eigenvalues {
        let (idx, dist) = evans
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (e.1 - lj).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("counts agree and are nonzero here");
        let (c, le) = evans.swap_remove(idx);
        pairs.push(Pairing { lambda_jacobi: lj, c_evans: c, lambda_evans: le, distance: dist });
    }
    let max_distance = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    if max_distance > tol {
        return Err(Error::OracleMismatch(format!("class k = {k}: pairing distance {max_distance:e} exceeds {tol:e}")));
    }
    Ok(CrossValidation { k, theta: cp.theta_f64(), d: cp.d_f64(), half_width: spec.half_width, pairs, max_distance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_limits_and_signs() {
        let p = Wavevector::new(1, 2).unwrap();
        let jt = jacobi_matrix::<f64>(&p, 1, 40).unwrap();
        let inv = 1.0 / 5.0;
        // R(j) − 1/p² = −1/|a|² with |a|² ≈ j² p².
        assert!((jt.r_at(40) - inv).abs() < 2.0 / (40.0f64 * 40.0 * 5.0));
        for j in -40..=40i64 {
            let a = (jt.a0.0 + j * p.p1, jt.a0.1 + j * p.p2);
            let n2 = a.0 * a.0 + a.1 * a.1;
            assert_eq!(jt.r_at(j) < 0.0, n2 < 5);
            assert_eq!(jt.r_at(j) == 0.0, n2 == 5);
        }
    }

    #[test]
    fn structure() {
        let p = Wavevector::new(1, 1).unwrap();
        let jt = jacobi_matrix::<f64>(&p, 1, 4).unwrap();
        let n = 9;
        for i in 0..n {
            for j in 0..n {
                let want = if j == i + 1 {
                    jt.r[i]
                } else if j + 1 == i {
                    -jt.r[i]
                } else {
                    0.0
                };
                assert_eq!(jt.matrix[(i, j)], want);
            }
        }
    }

    #[test]
    fn range_checked() {
        let p = Wavevector::new(1, 2).unwrap();
        assert!(matches!(jacobi_matrix::<f64>(&p, 0, 40), Err(Error::ClassRange { .. })));
        assert!(matches!(jacobi_matrix::<f64>(&p, 5, 40), Err(Error::ClassRange { .. })));
    }
}
