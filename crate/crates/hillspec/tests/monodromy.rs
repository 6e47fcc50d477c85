use hillspec::monodromy::*;
use hillspec::{Error, C64};
use proptest::prelude::*;

fn off_cut() -> impl Strategy<Value = C64> {
    (-2.5f64..2.5, 0.1f64..2.5, any::<bool>()).prop_map(|(x, y, up)| C64::new(x, if up { y } else { -y }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn unit_determinant(c in off_cut(), mr in -1.0f64..2.0, mi in -0.5f64..0.5) {
        let cfg = MonodromyConfig::with_tol(1e-10);
        let m = integrate_monodromy(c, C64::new(mr, mi), &cfg).unwrap();
        prop_assert!((m.det() - 1.0).norm() <= 10.0 * cfg.tol * (1.0 + m.trace.norm()));
        let (a, b) = m.multipliers;
        prop_assert!((a * b - 1.0).norm() < 1e-9 * (1.0 + a.norm() * b.norm()));
        prop_assert!((a + b - m.trace).norm() < 1e-9 * (1.0 + m.trace.norm()));
    }

    #[test]
    fn trace_symmetries(c in off_cut(), mu in -1.0f64..2.0) {
        let cfg = MonodromyConfig::with_tol(1e-10);
        let mu = C64::new(mu, 0.0);
        let t = integrate_monodromy(c, mu, &cfg).unwrap().trace;
        let scale = 1e-7 * (1.0 + t.norm());
        prop_assert!((integrate_monodromy(-c, mu, &cfg).unwrap().trace - t).norm() < scale);
        prop_assert!((integrate_monodromy(c.conj(), mu, &cfg).unwrap().trace - t.conj()).norm() < scale);
    }
}

#[test]
fn quasiperiodic_residual_vanishes_on_the_free_circle() {
    // Large |c| switches the potential off, so μ = d² with cos 2πθ = cosh 2πd is impossible
    // for d > 0, while μ = −θ² gives trace 2 cos 2πθ.
    let cfg = MonodromyConfig::with_tol(1e-10);
    let r = quasiperiodic_residual(C64::new(1e7, 0.0), C64::new(-0.09, 0.0), 0.3, &cfg).unwrap();
    assert!(r.norm() < 1e-5, "{r}");
}

#[test]
fn refuses_the_cut() {
    let e = integrate_monodromy(C64::new(0.5, 0.0), C64::new(0.1, 0.0), &MonodromyConfig::default());
    assert!(matches!(e, Err(Error::SingularPotential { .. })));
}
