//! The full Evans function `E_p(λ) = ∏_{k=1}^{p²−1} E(iλ/k; θ_k, d_k)²` and
//! the global eigenvalue count for a wavevector `p`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evans::{evans, find_roots, EvansConfig};
use crate::lattice::{class_line_count, classes, companion_basis, lattice_points_in_disk, RegionTag, Wavevector};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerConfig {
    pub evans: EvansConfig,
    /// Divide each factor by its modulus at infinity, `|2cos 2πθ − 2cosh 2πd|`.
    pub normalize: bool,
}

pub fn full_evans(p: &Wavevector, lambda: C64, cfg: &EulerConfig) -> Result<C64> {
    let pi = std::f64::consts::PI;
    let mut prod = C64::new(1.0, 0.0);
    for cp in classes(p)? {
        let k = cp.k;
        let c = C64::new(0.0, 1.0) * lambda / k as f64;
        let (theta, d) = (cp.theta_f64(), cp.d_f64());
        let mut f = evans(c, theta, d, &cfg.evans.disc).map_err(|e| match e {
            Error::BranchCut { re, im } | Error::SingularPotential { re, im } => Error::FactorOnCut { k, re, im },
            other => other,
        })?;
        if cfg.normalize {
            f /= (2.0 * (2.0 * pi * theta).cos() - 2.0 * (2.0 * pi * d).cosh()).abs();
        }
        prod *= f * f;
    }
    Ok(prod)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRoot {
    #[serde(with = "crate::scalar::complex_serde")]
    pub lambda: C64,
    #[serde(with = "crate::scalar::complex_serde")]
    pub c: C64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub k: i64,
    /// Exact `θ` as `"num/den"`.
    pub theta_exact: String,
    pub theta: f64,
    pub d: f64,
    pub region: RegionTag,
    /// Roots as `λ = −ikc`; empty in count-only mode.
    pub roots: Vec<LambdaRoot>,
    /// Roots of the class factor, with multiplicity.
    pub count: usize,
    /// Lattice points of the class line inside the unstable disk.
    pub class_line_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub schema_version: u32,
    pub p: Wavevector,
    pub per_class: Vec<ClassReport>,
    /// `Σ_k count`, the eigenvalues carried by `k = 1 … p²−1`.
    pub positive_k_count: usize,
    /// Twice `positive_k_count`: each factor is squared (classes `±k`).
    pub total_count: usize,
    pub lattice_count: usize,
    pub sharp: bool,
    pub tallies: BTreeMap<RegionTag, usize>,
    pub notes: Vec<String>,
}

pub fn spectrum_report(p: &Wavevector, cfg: &EulerConfig) -> Result<SpectrumReport> {
    let q = companion_basis(p)?;
    let cls = classes(p)?;
    let per_class: Vec<ClassReport> = cls
        .par_iter()
        .map(|cp| {
            let set = find_roots(cp.theta_f64(), cp.d_f64(), &cfg.evans).map_err(|e| annotate(cp.k, e))?;
            let kf = cp.k as f64;
            let roots = set
                .roots
                .iter()
                .map(|r| LambdaRoot {
                    lambda: C64::new(0.0, -kf) * r.c,
                    c: r.c,
                    multiplicity: r.multiplicity,
                    residual: r.residual,
                })
                .collect();
            Ok(ClassReport {
                k: cp.k,
                theta_exact: format!("{}", cp.theta()),
                theta: cp.theta_f64(),
                d: cp.d_f64(),
                region: cp.region,
                roots,
                count: set.count,
                class_line_count: class_line_count(p, &q, cp.k)?,
            })
        })
        .collect::<Result<_>>()?;

    let positive_k_count: usize = per_class.iter().map(|c| c.count).sum();
    let total_count = 2 * positive_k_count;
    let lattice_count = lattice_points_in_disk(p).0;
    let mut tallies = BTreeMap::new();
    for c in &per_class {
        *tallies.entry(c.region).or_insert(0) += 1;
    }
    let mut notes = Vec::new();
    for c in &per_class {
        if c.count != 2 * c.class_line_count {
            notes.push(format!(
                "class k = {}: {} roots but {} lattice points on the class line",
                c.k, c.count, c.class_line_count
            ));
        }
        if let Some(want) = c.region.predicted_root_count() {
            if want != c.count {
                notes.push(format!("class k = {}: {} roots, region {:?} predicts {want}", c.k, c.count, c.region));
            }
        }
    }
    let on_disk: Vec<i64> = per_class.iter().filter(|c| c.region == RegionTag::Boundary0I).map(|c| c.k).collect();
    let outside: Vec<i64> = per_class.iter().filter(|c| c.region == RegionTag::Region0).map(|c| c.k).collect();
    if !on_disk.is_empty() {
        notes.push(format!("classes exactly on the unstable-disk circle: k = {on_disk:?}"));
    }
    if !outside.is_empty() {
        notes.push(format!("classes outside all circles: k = {outside:?}"));
    }
    if (p.p1.abs(), p.p2.abs()) == (4, 5) || (p.p1.abs(), p.p2.abs()) == (5, 4) {
        notes.push(
            "exact arithmetic puts k = 40 on the disk circle (9² + 40² = 41²) and k = 39 in region 0; \
             the published tallies for this example name the two the other way round"
                .into(),
        );
    }
    let sharp = total_count == 2 * lattice_count;
    Ok(SpectrumReport {
        schema_version: SCHEMA_VERSION,
        p: *p,
        per_class,
        positive_k_count,
        total_count,
        lattice_count,
        sharp,
        tallies,
        notes,
    })
}

fn annotate(k: i64, e: Error) -> Error {
    match e {
        Error::Convergence(m) => Error::Convergence(format!("class k = {k}: {m}")),
        Error::ContourThroughRoot(m) => Error::ContourThroughRoot(format!("class k = {k}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_wavevector() {
        let p = Wavevector::new(0, 1).unwrap();
        let cfg = EulerConfig::default();
        assert_eq!(full_evans(&p, C64::new(0.3, 2.0), &cfg).unwrap(), C64::new(1.0, 0.0));
        let r = spectrum_report(&p, &cfg).unwrap();
        assert_eq!((r.total_count, r.lattice_count, r.sharp), (0, 0, true));
    }

    #[test]
    fn factor_on_cut_names_class() {
        let p = Wavevector::new(1, 2).unwrap();
        // λ = −0.5i gives c = 0.5/k, on the cut for every k.
        let r = full_evans(&p, C64::new(0.0, -0.5), &EulerConfig::default());
        assert!(matches!(r, Err(Error::FactorOnCut { k: 1, .. })));
    }
}
