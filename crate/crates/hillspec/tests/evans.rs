use hillspec::conformal::BranchSide;
use hillspec::evans::*;
use hillspec::hill::DiscriminantConfig;
use hillspec::lattice::RegionTag;
use hillspec::{Error, C64};
use proptest::prelude::*;

fn e(c: C64, th: f64, d: f64) -> C64 {
    evans(c, th, d, &DiscriminantConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_and_evenness(x in -2.0f64..2.0, y in 0.05f64..2.0, th in -0.5f64..0.5, d in 0.0f64..1.0) {
        let c = C64::new(x, y);
        let v = e(c, th, d);
        prop_assert!((e(c.conj(), th, d) - v.conj()).norm() <= 1e-10 * (1.0 + v.norm()));
        prop_assert!((e(-c, th, d) - v).norm() <= 1e-9 * (1.0 + v.norm()));
        prop_assert!((e(c, -th, d) - v).norm() <= 1e-12 * (1.0 + v.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_on_both_axes(t in 0.01f64..4.0, th in -0.5f64..0.5, d in 0.0f64..1.0) {
        prop_assert!(e(C64::new(0.0, t), th, d).im.abs() < 1e-9);
        prop_assert!(e(C64::new(1.0 + t, 0.0), th, d).im.abs() < 1e-9);
    }

    #[test]
    fn no_roots_on_the_real_axis(x in 1.001f64..10.0, th in -0.5f64..0.5, d in 0.01f64..1.0) {
        // Δ(d²; c) > 2 for real c > 1, so E < 0 there.
        prop_assert!(e(C64::new(x, 0.0), th, d).re < 0.0);
    }
}

#[test]
fn far_field() {
    for (th, d) in [(0.0, 0.3), (0.25, 0.8), (-0.4, 0.95), (0.5, 0.1)] {
        let want = 2.0 * (2.0 * std::f64::consts::PI * th).cos() - 2.0 * (2.0 * std::f64::consts::PI * d).cosh();
        for phi in [0.3, 1.6, 2.9, -1.2] {
            let got = e(C64::from_polar(1e3, phi), th, d);
            assert!((got - want).norm() < 1e-3, "({th}, {d}) at angle {phi}: {got} vs {want}");
        }
    }
}

#[test]
fn roots_are_zeros_with_the_quadrant_symmetry() {
    let cfg = EvansConfig::default();
    let set = find_roots(0.4, 0.6, &cfg).unwrap();
    assert_eq!(set.count, 4);
    assert_eq!(set.region_predicted, RegionTag::RegionII);
    let cs: Vec<C64> = set.roots.iter().map(|r| r.c).collect();
    for r in &set.roots {
        assert!(r.residual <= 1e-8, "{r:?}");
        assert!(e(r.c, 0.4, 0.6).norm() <= 1e-8);
        for image in [-r.c, r.c.conj(), -r.c.conj()] {
            assert!(cs.iter().any(|z| (z - image).norm() < 1e-8), "missing image {image}");
        }
    }
}

#[test]
fn imaginary_pair_in_region_one() {
    let set = find_roots(0.1, 0.6, &EvansConfig::default()).unwrap();
    assert_eq!((set.count, set.imaginary_count()), (2, 2));
    let c = set.roots[0].c;
    assert_eq!(c.re, 0.0);
    assert!((set.roots[1].c + c).norm() < 1e-12);
}

#[test]
fn counts_follow_the_regions() {
    let cfg = EvansConfig::count_only();
    for (th, d) in [(0.45, 0.95), (0.0, 1.05), (0.1, 0.6), (0.22, 0.6)] {
        let tag = RegionTag::from_coordinates(th, d, 1e-12);
        assert_eq!(Some(count_roots(th, d, &cfg).unwrap()), tag.predicted_root_count(), "({th}, {d}) {tag:?}");
    }
}

#[test]
fn count_only_skips_refinement() {
    let set = find_roots(0.1, 0.6, &EvansConfig::count_only()).unwrap();
    assert!(set.roots.is_empty());
    assert_eq!(set.count, 2);
}

#[test]
fn derivative_lemma() {
    let cfg = EvansConfig::default();
    for side in [BranchSide::Upper, BranchSide::Lower] {
        for d in [0.5, 0.9] {
            let r = derivative_checks(d, side, &cfg).unwrap();
            let v = r.closed_form;
            assert!((r.rotated_de_dc - v).norm() < 1e-4 * v.abs());
            assert!((r.de_dd - r.de_dd_expected).abs() < 1e-4 * v.abs());
            assert!((r.normal_derivative - r.normal_derivative_expected).abs() < 1e-4 * v.abs());
            assert!((r.root_velocity - r.root_velocity_expected).norm() < 1e-4);
            assert!((r.root_velocity_expected.norm() - 2.0).abs() < 1e-12);
        }
    }
    assert!(matches!(
        derivative_checks(0.75f64.sqrt(), BranchSide::Upper, &cfg),
        Err(Error::DegenerateParameter { .. })
    ));
}

#[test]
fn rejects_bad_config() {
    let cfg = EvansConfig { c_max: -1.0, ..EvansConfig::default() };
    assert!(matches!(find_roots(0.1, 0.6, &cfg), Err(Error::InvalidConfig(_))));
    assert!(evans(C64::new(0.3, 0.0), 0.1, 0.5, &DiscriminantConfig::default()).is_err());
}
