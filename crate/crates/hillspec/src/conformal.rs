//! Joukowski variable `2c = s + 1/s`, the factor `κ` and the Fourier
//! coefficients of the potential `Q(η) = sin η / (c + sin η)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, i_pow, Real};

/// Which side of the cut `[-1, 1]` a limit onto it is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchSide {
    /// `Im c ↓ 0`.
    Upper,
    /// `Im c ↑ 0`.
    Lower,
    NotOnCut,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam<T: Real> {
    pub c: Complex<T>,
    pub s: Complex<T>,
    pub kappa: Complex<T>,
    pub side: BranchSide,
}

impl<T: Real> SpectralParam<T> {
    /// `g_k = κ i^k s^|k|` for `k ≠ 0`, `g_0 = 1 + κ`.
    pub fn fourier_coeff(&self, k: i64) -> Complex<T> {
        fourier_coeff(self, k)
    }

    pub fn g0(&self) -> Complex<T> {
        Complex::from(T::one()) + self.kappa
    }
}

pub(crate) fn kappa_of_s<T: Real>(s: Complex<T>) -> Complex<T> {
    let s2 = s * s;
    let one = Complex::from(T::one());
    -(one + s2) / (one - s2)
}

/// Distance from `c` to the segment `[-1, 1]`.
pub fn cut_distance<T: Real>(c: Complex<T>) -> T {
    let x = c.re.abs();
    if x <= T::one() {
        c.im.abs()
    } else {
        (x - T::one()).hypot(c.im)
    }
}

fn on_cut<T: Real>(c: Complex<T>) -> bool {
    c.im.abs() < T::lit(1e-14) && c.re.abs() < T::one()
}

pub fn s_of_c<T: Real>(c: Complex<T>) -> Result<SpectralParam<T>> {
    let one = T::one();
    let eps = T::epsilon() * T::lit(4.0);
    if (c - Complex::from(one)).norm() <= eps || (c + Complex::from(one)).norm() <= eps {
        return Err(Error::SingularPotential { re: c.re.as_f64(), im: c.im.as_f64() });
    }
    if on_cut(c) {
        return Err(Error::BranchCut { re: c.re.as_f64(), im: c.im.as_f64() });
    }
    // Roots c ± √(c²−1) multiply to one: take the larger one accurately and
    // invert it, which avoids cancellation for large |c|.
    let r = ((c - Complex::from(one)) * (c + Complex::from(one))).sqrt();
    let (a, b) = (c + r, c - r);
    let big = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
    let s = big.inv();
    Ok(SpectralParam { c, s, kappa: kappa_of_s(s), side: BranchSide::NotOnCut })
}

/// The two one-sided limits at `c = 0`: `s = −i` from above, `s = +i` from below.
pub fn s_at_origin<T: Real>(side: BranchSide) -> Result<SpectralParam<T>> {
    let s = match side {
        BranchSide::Upper => cplx(T::zero(), -T::one()),
        BranchSide::Lower => cplx(T::zero(), T::one()),
        BranchSide::NotOnCut => return Err(Error::InvalidConfig("c = 0 needs an explicit branch side".into())),
    };
    Ok(SpectralParam { c: Complex::from(T::zero()), s, kappa: Complex::from(T::zero()), side })
}

/// Parameter from an `s` inside the closed unit disk (`c = (s + 1/s)/2`).
pub fn from_s<T: Real>(s: Complex<T>, side: BranchSide) -> SpectralParam<T> {
    let c = (s + s.inv()) * T::lit(0.5);
    SpectralParam { c, s, kappa: kappa_of_s(s), side }
}

pub fn fourier_coeff<T: Real>(sp: &SpectralParam<T>, k: i64) -> Complex<T> {
    if k == 0 {
        return sp.g0();
    }
    sp.kappa * i_pow::<T>(k) * sp.s.powi(k.unsigned_abs() as i32)
}

pub fn potential<T: Real>(eta: T, c: Complex<T>) -> Result<Complex<T>> {
    let sn = eta.sin();
    let den = c + sn;
    if den.norm() <= T::epsilon() * (T::one() + c.norm()) {
        return Err(Error::PotentialPole { eta: eta.as_f64() });
    }
    Ok(Complex::from(sn) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn s_examples() {
        let sp = s_of_c(C::new(2.0, 0.0)).unwrap();
        assert!((sp.s - C::new(2.0 - 3f64.sqrt(), 0.0)).norm() < 1e-15);

        let sp = s_of_c(C::new(0.0, 0.5f64.sqrt())).unwrap();
        let want = C::new(0.0, 0.5f64.sqrt() - 1.5f64.sqrt());
        assert!((sp.s - want).norm() < 1e-15);
        assert!((sp.kappa - C::new(-1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-14);

        let sp = s_of_c(C::new(10.0, 0.0)).unwrap();
        assert!(sp.s.norm() < 0.06);
        assert!(((sp.s + sp.s.inv()) * 0.5 - sp.c).norm() < 1e-12);
    }

    #[test]
    fn cut_and_endpoints_rejected() {
        assert!(matches!(s_of_c(C::new(0.3, 0.0)), Err(Error::BranchCut { .. })));
        assert!(matches!(s_of_c(C::new(0.0, 0.0)), Err(Error::BranchCut { .. })));
        assert!(matches!(s_of_c(C::new(1.0, 0.0)), Err(Error::SingularPotential { .. })));
        assert!(matches!(s_of_c(C::new(-1.0, 0.0)), Err(Error::SingularPotential { .. })));
        assert!(s_of_c(C::new(0.3, 1e-10)).is_ok());
    }

    #[test]
    fn origin_sides() {
        let up = s_at_origin::<f64>(BranchSide::Upper).unwrap();
        let lo = s_at_origin::<f64>(BranchSide::Lower).unwrap();
        assert_eq!(up.s, C::new(0.0, -1.0));
        assert_eq!(lo.s, C::new(0.0, 1.0));
        for sp in [up, lo] {
            assert_eq!(sp.kappa, C::new(0.0, 0.0));
            assert_eq!(sp.g0(), C::new(1.0, 0.0));
            assert_eq!(sp.fourier_coeff(3), C::new(0.0, 0.0));
        }
        assert!(s_at_origin::<f64>(BranchSide::NotOnCut).is_err());
        // The limits agree with nearby off-cut values.
        let near = s_of_c(C::new(0.0, 1e-9)).unwrap();
        assert!((near.s - up.s).norm() < 1e-8);
        let near = s_of_c(C::new(0.0, -1e-9)).unwrap();
        assert!((near.s - lo.s).norm() < 1e-8);
    }

    #[test]
    fn coefficient_c2_k1() {
        let sp = s_of_c(C::new(2.0, 0.0)).unwrap();
        let s = 2.0 - 3f64.sqrt();
        let kappa = -(1.0 + s * s) / (1.0 - s * s);
        assert!((sp.fourier_coeff(1) - C::new(0.0, kappa * s)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_coefficients() {
        let sp = s_of_c(C::new(0.3, 0.7)).unwrap();
        let spc = s_of_c(C::new(0.3, -0.7)).unwrap();
        for k in -6..=6i64 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let lhs = spc.fourier_coeff(k);
            let rhs = sp.fourier_coeff(k).conj() * sign;
            assert!((lhs - rhs).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(0.0, C::new(0.3, 0.4)).unwrap(), C::new(0.0, 0.0));
        let q = potential(std::f64::consts::FRAC_PI_2, C::new(2.0, 0.0)).unwrap();
        assert!((q - C::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(potential(-std::f64::consts::FRAC_PI_2, C::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn f32_works() {
        let sp = s_of_c(Complex::<f32>::new(2.0, 0.0)).unwrap();
        assert!((sp.s.re - (2.0 - 3f32.sqrt())).abs() < 1e-6);
    }
}
