use hillspec::conformal::*;
use hillspec::{Error, C64};
use proptest::prelude::*;

fn off_cut() -> impl Strategy<Value = C64> {
    (-3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(x, y)| C64::new(x, y))
        .prop_filter("off the cut", |c| cut_distance(*c) > 1e-6)
}

proptest! {
    #[test]
    fn branch_symmetries(c in off_cut()) {
        let s = s_of_c(c).unwrap().s;
        prop_assert!((s_of_c(-c).unwrap().s + s).norm() < 1e-12);
        prop_assert!((s_of_c(c.conj()).unwrap().s - s.conj()).norm() < 1e-12);
        prop_assert!(s.norm() <= 1.0);
        prop_assert!(((s + s.inv()) * 0.5 - c).norm() < 1e-9 * (1.0 + c.norm()));
    }

    #[test]
    fn kappa_in_left_half_plane(c in off_cut()) {
        let sp = s_of_c(c).unwrap();
        prop_assert!(sp.kappa.re < 0.0, "c = {c}, kappa = {}", sp.kappa);
    }

    #[test]
    fn coefficients_conjugate(c in off_cut(), k in -12i64..=12) {
        let a = s_of_c(c).unwrap();
        let b = s_of_c(c.conj()).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((b.fourier_coeff(k) - a.fourier_coeff(k).conj() * sign).norm() < 1e-12);
    }
}

#[test]
fn modulus_tends_to_one_at_the_cut() {
    for x in [-0.9, -0.5, 0.0, 0.3, 0.99] {
        for side in [1.0, -1.0] {
            let s = s_of_c(C64::new(x, side * 1e-3)).unwrap().s;
            assert!(s.norm() > 0.99 && s.norm() <= 1.0, "x = {x}: |s| = {}", s.norm());
        }
    }
}

/// `Σ_{|k|≤K} g_k e^{ikη}` against `sin η/(c + sin η)`.
fn series_error(c: C64, kmax: i64) -> (f64, f64) {
    let sp = s_of_c(c).unwrap();
    let mut worst: f64 = 0.0;
    for j in 0..64 {
        let eta = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
        let sum: C64 = (-kmax..=kmax).map(|k| sp.fourier_coeff(k) * C64::from_polar(1.0, k as f64 * eta)).sum();
        worst = worst.max((sum - potential(eta, c).unwrap()).norm());
    }
    let r = sp.s.norm();
    // Tail of the geometric series Σ_{|k|>K} |κ| |s|^|k|.
    (worst, 2.0 * sp.kappa.norm() * r.powi(kmax as i32 + 1) / (1.0 - r))
}

#[test]
fn fourier_series_converges_geometrically() {
    for c in [C64::new(2.0, 0.0), C64::new(0.0, 0.2), C64::new(0.1, 0.2)] {
        let (err, bound) = series_error(c, 30);
        assert!(err <= bound * (1.0 + 1e-6) + 1e-14, "c = {c}: {err:e} > {bound:e}");
        // |s| ≈ 0.82 for the two near-cut values, so 1e-8 needs K ≈ 120.
        let k = if c.im == 0.0 { 30 } else { 120 };
        let (err, _) = series_error(c, k);
        assert!(err <= 1e-8, "c = {c}, K = {k}: {err:e}");
    }
}

#[test]
fn paper_values() {
    let sp = s_of_c(C64::new(0.0, 0.5f64.sqrt())).unwrap();
    assert!((sp.kappa - C64::new(-1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-14);
    let sp = s_of_c(C64::new(2.0, 0.0)).unwrap();
    assert!((sp.s - (2.0 - 3f64.sqrt())).norm() < 1e-15);
    for side in [BranchSide::Upper, BranchSide::Lower] {
        let sp = s_at_origin::<f64>(side).unwrap();
        assert_eq!(sp.kappa, C64::new(0.0, 0.0));
        assert_eq!(sp.fourier_coeff(3), C64::new(0.0, 0.0));
    }
    assert!(matches!(s_at_origin::<f64>(BranchSide::NotOnCut), Err(Error::InvalidConfig(_))));
}

#[test]
fn single_precision_agrees() {
    let c64 = s_of_c(C64::new(0.3, 0.4)).unwrap();
    let c32 = s_of_c(num_complex::Complex::<f32>::new(0.3, 0.4)).unwrap();
    assert!((c32.s.re as f64 - c64.s.re).abs() < 1e-6 && (c32.s.im as f64 - c64.s.im).abs() < 1e-6);
}
