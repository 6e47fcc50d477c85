use hillspec::euler::*;
use hillspec::evans::EvansConfig;
use hillspec::lattice::{RegionTag, Wavevector};
use hillspec::{Error, C64};

fn count_only() -> EulerConfig {
    EulerConfig { evans: EvansConfig::count_only(), normalize: false }
}

#[test]
fn sharp_for_small_wavevectors() {
    for ((p1, p2), lattice) in [((1, 1), 4), ((1, 2), 12)] {
        let r = spectrum_report(&Wavevector::new(p1, p2).unwrap(), &count_only()).unwrap();
        assert_eq!(r.lattice_count, lattice);
        assert_eq!(r.total_count, 2 * lattice);
        assert!(r.sharp, "{:?}", r.notes);
        assert!(r.per_class.iter().all(|c| c.count == 2 * c.class_line_count));
    }
}

#[test]
fn refined_roots_are_lambda_zeros() {
    let p = Wavevector::new(1, 1).unwrap();
    let cfg = EulerConfig::default();
    let r = spectrum_report(&p, &cfg).unwrap();
    assert_eq!(r.per_class[0].region, RegionTag::RegionII);
    let roots = &r.per_class[0].roots;
    assert_eq!(roots.len(), 4);
    for root in roots {
        assert!(root.lambda.re.abs() > 1e-3, "{root:?}");
        assert!(full_evans(&p, root.lambda, &cfg).unwrap().norm() < 1e-12);
    }
}

#[test]
fn normalised_product_tends_to_one() {
    let p = Wavevector::new(1, 2).unwrap();
    let cfg = EulerConfig { normalize: true, ..Default::default() };
    let v = full_evans(&p, C64::new(3e3, 1e3), &cfg).unwrap();
    assert!((v.norm() - 1.0).abs() < 1e-2, "{v}");
}

#[test]
fn factor_on_the_cut_is_reported() {
    let p = Wavevector::new(1, 2).unwrap();
    // λ = 0.5i puts c = iλ/k = −0.5/k on the cut for every class.
    let e = full_evans(&p, C64::new(0.0, 0.5), &EulerConfig::default());
    assert!(matches!(e, Err(Error::FactorOnCut { k: 1, .. })));
}

#[test]
fn report_serialises() {
    let r = spectrum_report(&Wavevector::new(1, 1).unwrap(), &count_only()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["total_count"], 8);
}
