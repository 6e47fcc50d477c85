//! Oracle-agreement and invariant suites behind `hillspec verify`.

use std::f64::consts::PI;
use std::time::Instant;

use clap::ValueEnum;
use hillspec::conformal::{from_s, s_at_origin, s_of_c, BranchSide};
use hillspec::euler::spectrum_report;
use hillspec::evans::{count_roots, derivative_checks, evans, find_roots, EvansConfig};
use hillspec::hill::{
    determinant_3x3, discriminant, discriminant_slope_at_zero, hill_determinant, s_of_kappa, truncated_3x3_curve,
    DiscriminantConfig,
};
use hillspec::jacobi::{cross_validate, jacobi_spectrum, jacobi_spectrum_adaptive};
use hillspec::lattice::{RegionTag, Wavevector};
use hillspec::monodromy::{integrate_monodromy, MonodromyConfig};
use hillspec::C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type CheckFn = fn(&RunConfig) -> anyhow::Result<(bool, String)>;

fn quick_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("discriminant closed form at c = 0", closed_form_at_zero),
        ("discriminant realness on the axes", discriminant_realness),
        ("discriminant is pole-free", pole_free),
        ("truncation convergence N vs N+5", truncation_convergence),
        ("hill vs monodromy trace", hill_vs_monodromy),
        ("monodromy unit determinant and symmetry", monodromy_symmetry),
        ("slope at mu = 0", slope_formula),
        ("3x3 truncation closed form", three_by_three),
        ("evans symmetries and far field", evans_symmetries),
        ("evans root phenomenology", root_phenomenology),
        ("derivative lemma at c = 0", derivative_lemma),
        ("jacobi oracle p = (1,1)", |cfg| jacobi_triangle(cfg, &[(1, 1)])),
    ]
}

fn full_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("region/count law", region_count_law),
        ("jacobi oracle p = (1,2), (2,3)", |cfg| jacobi_triangle(cfg, &[(1, 2), (2, 3)])),
        ("jacobi truncation stability", jacobi_stability),
        ("sharpness for p^2 <= 25", sharpness),
        ("p = (4,5) count-only report", flagship),
    ]
}

pub fn run(cfg: &RunConfig, level: Level) -> Vec<Outcome> {
    let mut checks = quick_checks();
    if level == Level::Full {
        checks.extend(full_checks());
    }
    checks
        .into_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let (passed, detail) = match f(cfg) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e:#}")),
            };
            let o = Outcome { name, passed, detail, seconds: t.elapsed().as_secs_f64() };
            println!("{} {} ({:.1} s): {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.seconds, o.detail);
            o
        })
        .collect()
}

fn verdict(err: f64, tol: f64) -> (bool, String) {
    (err <= tol, format!("max error {err:.2e} (tol {tol:.0e})"))
}

fn closed_form_at_zero(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let disc = cfg.disc();
    let mut err: f64 = 0.0;
    for side in [BranchSide::Upper, BranchSide::Lower] {
        let sp = s_at_origin::<f64>(side)?;
        for j in 0..200 {
            let d = j as f64 / 199.0;
            let want = 2.0 * (2.0 * PI * (1.0 - d * d).sqrt()).cos();
            err = err.max((discriminant(&sp, C64::new(d * d, 0.0), &disc) - want).norm());
        }
    }
    Ok(verdict(err, 1e-9))
}

fn discriminant_realness(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let disc = cfg.disc();
    let mut err: f64 = 0.0;
    let cs = [C64::new(0.0, 0.2), C64::new(0.0, 0.7), C64::new(0.0, -1.5), C64::new(1.5, 0.0), C64::new(-3.0, 0.0)];
    for c in cs {
        let sp = s_of_c(c)?;
        for j in 0..16 {
            let mu = -2.0 + 0.25 * j as f64;
            err = err.max(discriminant(&sp, C64::new(mu, 0.0), &disc).im.abs());
        }
    }
    Ok(verdict(err, 1e-10))
}

fn pole_free(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let disc = cfg.disc();
    let mut err: f64 = 0.0;
    for c in [C64::new(0.0, 0.3), C64::new(0.1, 0.2), C64::new(2.0, 0.0)] {
        let sp = s_of_c(c)?;
        for n in 0..4 {
            let mu = sp.g0() - (n * n) as f64;
            let at = discriminant(&sp, mu, &disc);
            anyhow::ensure!(at.re.is_finite() && at.im.is_finite(), "non-finite value at a pole");
            let h = 1e-7;
            let near = (discriminant(&sp, mu + h, &disc) + discriminant(&sp, mu - h, &disc)) * 0.5;
            err = err.max((at - near).norm());
        }
    }
    Ok(verdict(err, 1e-8))
}

fn truncation_convergence(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let mut err: f64 = 0.0;
    let cs = [C64::new(0.0, 0.2), C64::new(0.0, 0.5), C64::new(0.1, 0.2), C64::new(2.0, 0.0)];
    for c in cs {
        let sp = s_of_c(c)?;
        for n in [12, 16] {
            let (a, b) = (
                DiscriminantConfig { half_width: n, ..cfg.disc() },
                DiscriminantConfig { half_width: n + 5, ..cfg.disc() },
            );
            for j in 0..=6 {
                let mu = C64::new(0.25 * j as f64, 0.0);
                err = err.max((discriminant(&sp, mu, &a) - discriminant(&sp, mu, &b)).norm());
            }
        }
    }
    Ok(verdict(err, 1e-9))
}

const ORACLE_CS: [(f64, f64); 5] =
    [(2.0, 0.0), (0.0, 0.2), (0.0, std::f64::consts::FRAC_1_SQRT_2), (0.1, 0.2), (0.5, 0.7)];
const ORACLE_MUS: [f64; 5] = [0.0, 0.09, 0.25, 0.5, 1.0];

fn hill_vs_monodromy(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let disc = cfg.disc();
    let mcfg = MonodromyConfig::with_tol(cfg.integrator_tol.min(1e-9));
    let mut err: f64 = 0.0;
    for (re, im) in ORACLE_CS {
        let c = C64::new(re, im);
        let sp = s_of_c(c)?;
        for mu in ORACLE_MUS {
            let m = integrate_monodromy(c, C64::new(mu, 0.0), &mcfg)?;
            err = err.max((m.trace - discriminant(&sp, C64::new(mu, 0.0), &disc)).norm());
        }
    }
    Ok(verdict(err, 1e-6))
}

fn monodromy_symmetry(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let mcfg = cfg.monodromy();
    let (mut det_err, mut sym_err): (f64, f64) = (0.0, 0.0);
    for (re, im) in ORACLE_CS {
        let c = C64::new(re, im);
        for mu in [0.09, 0.5] {
            let mu = C64::new(mu, 0.0);
            let a = integrate_monodromy(c, mu, &mcfg)?;
            let b = integrate_monodromy(-c, mu, &mcfg)?;
            let cc = integrate_monodromy(c.conj(), mu, &mcfg)?;
            det_err = det_err.max((a.det() - 1.0).norm());
            sym_err = sym_err.max((a.trace - b.trace).norm()).max((cc.trace - a.trace.conj()).norm());
        }
    }
    let tol = 10.0 * mcfg.tol;
    let sym_tol = 10.0 * mcfg.tol * 100.0;
    Ok((
        det_err <= tol && sym_err <= sym_tol,
        format!("|det - 1| {det_err:.2e} (tol {tol:.0e}), symmetry {sym_err:.2e} (tol {sym_tol:.0e})"),
    ))
}

/// Fourth-order central difference of `Δ(·; c)` at `μ = 0`. A fixed
/// truncation keeps the stencil free of adaptation jumps.
fn slope_fd(c: C64, tail_cutoff: usize) -> anyhow::Result<C64> {
    let disc = DiscriminantConfig { tail_cutoff, ..DiscriminantConfig::fixed(32) };
    let sp = s_of_c(c)?;
    let h = 1e-3;
    let f = |x: f64| discriminant(&sp, C64::new(x, 0.0), &disc);
    Ok((f(-2.0 * h) - f(2.0 * h) + (f(h) - f(-h)) * 8.0) / (12.0 * h))
}

fn slope_formula(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let mut rel: f64 = 0.0;
    for c in [C64::new(2.0, 0.0), C64::new(0.0, 3.0), C64::new(0.5, 0.7)] {
        let want = discriminant_slope_at_zero(c)?;
        rel = rel.max((slope_fd(c, cfg.tail_cutoff)? - want).norm() / want.norm());
    }
    let zero = slope_fd(C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2), cfg.tail_cutoff)?.norm();
    Ok((rel <= 1e-5 && zero <= 1e-7, format!("relative {rel:.2e} (tol 1e-5), slope at i/sqrt2 {zero:.2e} (tol 1e-7)")))
}

fn three_by_three(_: &RunConfig) -> anyhow::Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(33);
    let mut rel: f64 = 0.0;
    for _ in 0..50 {
        let kappa = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let d: f64 = rng.gen_range(0.05..0.95);
        let sp = from_s(s_of_kappa(kappa), BranchSide::NotOnCut);
        let got = hill_determinant(&sp, kappa + (1.0 - d * d), &DiscriminantConfig::bare(1))?;
        let want = determinant_3x3(kappa, d);
        rel = rel.max((got - want).norm() / want.norm());
    }
    let ends = truncated_3x3_curve(C64::new(0.0, 0.0), 1.0).norm()
        + truncated_3x3_curve(C64::new(-1.0 / 3f64.sqrt(), 0.0), 0.0).norm();
    Ok((rel <= 1e-12 && ends <= 1e-15, format!("relative {rel:.2e} (tol 1e-12), endpoint residual {ends:.1e}")))
}

fn evans_symmetries(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let disc = cfg.disc();
    let mut rng = StdRng::seed_from_u64(11);
    let (mut conj, mut axes, mut far): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..40 {
        // Class points have d < 1; beyond that the O(cosh(2πd)/|c|²) remainder exceeds 1e-3 at |c| = 10³.
        let (th, d) = (rng.gen_range(-0.5..0.5), rng.gen_range(0.0..1.0));
        let c = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..2.0));
        conj = conj.max((evans(c.conj(), th, d, &disc)? - evans(c, th, d, &disc)?.conj()).norm());
        let y = rng.gen_range(0.01..3.0);
        axes = axes.max(evans(C64::new(0.0, y), th, d, &disc)?.im.abs());
        axes = axes.max(evans(C64::new(1.0 + y, 0.0), th, d, &disc)?.im.abs());
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let big = C64::from_polar(1e3, phi);
        let want = 2.0 * (2.0 * PI * th).cos() - 2.0 * (2.0 * PI * d).cosh();
        far = far.max((evans(big, th, d, &disc)? - want).norm());
    }
    Ok((
        conj <= 1e-10 && axes <= 1e-9 && far <= 1e-3,
        format!("conjugation {conj:.1e} (1e-10), axis realness {axes:.1e} (1e-9), far field {far:.1e} (1e-3)"),
    ))
}

fn evans_cfg(cfg: &RunConfig) -> EvansConfig {
    cfg.evans()
}

fn root_phenomenology(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let ecfg = evans_cfg(cfg);
    let a = find_roots(0.1, 0.6, &ecfg)?;
    let b = find_roots(0.22, 0.6, &ecfg)?;
    let c = find_roots(0.4, 0.6, &ecfg)?;
    let z = count_roots(0.45, 0.95, &ecfg)?;
    let axis_free = c.roots.iter().all(|r| r.c.re.abs() > 1e-6 && r.c.im.abs() > 1e-6);
    let ok = a.count == 2
        && a.imaginary_count() == 2
        && b.count == 4
        && b.imaginary_count() == 4
        && c.count == 4
        && axis_free
        && z == 0;
    Ok((ok, format!("counts {}/{}/{}/{} (want 2 imag, 4 imag, 4 complex, 0)", a.count, b.count, c.count, z)))
}

fn derivative_lemma(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let ecfg = evans_cfg(cfg);
    let mut worst: f64 = 0.0;
    let mut signs = Vec::new();
    for d in [0.5, 0.6, 0.9] {
        for side in [BranchSide::Upper, BranchSide::Lower] {
            let r = derivative_checks(d, side, &ecfg)?;
            let v = r.closed_form;
            worst = worst
                .max((r.rotated_de_dc - v).norm() / v.abs())
                .max((r.de_dd - r.de_dd_expected).abs() / v.abs())
                .max((r.normal_derivative - r.normal_derivative_expected).abs() / v.abs())
                .max((r.root_velocity - r.root_velocity_expected).norm() / 2.0);
            signs.push(r.normal_derivative.signum());
        }
    }
    // The normal derivative changes sign across d = √3/2.
    let flip = signs[0] == signs[2] && signs[2] != signs[4];
    Ok((worst <= 1e-4 && flip, format!("relative {worst:.2e} (tol 1e-4), sign flip across sqrt3/2: {flip}")))
}

fn jacobi_triangle(cfg: &RunConfig, ps: &[(i64, i64)]) -> anyhow::Result<(bool, String)> {
    let ecfg = evans_cfg(cfg);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for &(p1, p2) in ps {
        let p = Wavevector::new(p1, p2)?;
        for k in 1..p.p_sq {
            let cv = cross_validate(&p, k, None, &ecfg, 1e-4)?;
            worst = worst.max(cv.max_distance);
            n += cv.pairs.len();
        }
    }
    let (ok, s) = verdict(worst, 1e-4);
    Ok((ok, format!("{n} pairs, {s}")))
}

fn jacobi_stability(_: &RunConfig) -> anyhow::Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for (p1, p2) in [(1, 2), (2, 3)] {
        let p = Wavevector::new(p1, p2)?;
        for k in 1..p.p_sq {
            let a = jacobi_spectrum_adaptive(&p, k, 1e-6)?;
            let b = jacobi_spectrum::<f64>(&p, k, a.half_width + 10, 1e-6)?;
            anyhow::ensure!(a.eigenvalues.len() == b.eigenvalues.len(), "class {k}: count changed with M");
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                worst = worst.max((x - y).norm());
            }
            for x in &a.eigenvalues {
                let near = |z: C64| a.eigenvalues.iter().map(|y| (y - z).norm()).fold(f64::INFINITY, f64::min);
                sym = sym.max(near(-x)).max(near(x.conj()));
            }
        }
    }
    Ok((worst <= 1e-6 && sym <= 1e-8, format!("M vs M+10 {worst:.1e} (1e-6), symmetry {sym:.1e} (1e-8)")))
}

/// Rational points in every region, including `(θ, d)` exactly on a circle.
pub fn region_points() -> Vec<(f64, f64, RegionTag)> {
    let mut pts = Vec::new();
    #[rustfmt::skip]
    let table = [
        (0.45, 0.95), (0.5, 0.9), (0.35, 0.97), (0.25, 1.1), (0.0, 1.05), (0.4, 0.99),
        (0.1, 0.6), (0.05, 0.6), (0.15, 0.8), (0.3, 0.9), (0.0, 0.5), (0.2, 0.95),
        (0.4, 0.6), (0.5, 0.5), (0.45, 0.3), (0.3, 0.5), (0.35, 0.7), (0.22, 0.6),
        (0.4, 0.8), (0.2, 0.6), (1.0 / 13.0, 5.0 / 13.0), (2.0 / 17.0, 8.0 / 17.0),
        (1.0 / 25.0, 7.0 / 25.0), (9.0 / 29.0, 21.0 / 29.0), (8.0 / 29.0, 20.0 / 29.0),
        (-0.4, 0.8), (-0.2, 0.6), (-0.1, 0.6), (-0.4, 0.6), (-0.45, 0.95),
    ];
    for (th, d) in table {
        pts.push((th, d, RegionTag::from_coordinates(th, d, 1e-12)));
    }
    pts
}

fn region_count_law(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let ecfg = EvansConfig { refine: false, ..evans_cfg(cfg) };
    let mut bad = Vec::new();
    let pts = region_points();
    for &(th, d, tag) in &pts {
        let n = count_roots(th, d, &ecfg)?;
        if Some(n) != tag.predicted_root_count() {
            bad.push(format!("({th:.4}, {d:.4}) {tag:?}: {n}"));
        }
    }
    Ok((bad.is_empty(), format!("{} points, mismatches: {bad:?}", pts.len())))
}

fn sharpness(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let ecfg = cfg.euler(true);
    let mut out = Vec::new();
    let mut ok = true;
    for (p1, p2) in [(0, 1), (1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4)] {
        let r = spectrum_report(&Wavevector::new(p1, p2)?, &ecfg)?;
        ok &= r.sharp;
        out.push(format!("({p1},{p2}) {}/{}", r.total_count, r.lattice_count));
    }
    Ok((ok, out.join(", ")))
}

fn flagship(cfg: &RunConfig) -> anyhow::Result<(bool, String)> {
    let r = spectrum_report(&Wavevector::new(4, 5)?, &cfg.euler(true))?;
    let t = |tag| r.tallies.get(&tag).copied().unwrap_or(0);
    let tallies = [
        t(RegionTag::RegionI),
        t(RegionTag::RegionII),
        t(RegionTag::BoundaryIII),
        t(RegionTag::Boundary0I),
        t(RegionTag::Region0),
    ];
    let ok = r.positive_k_count == 128 && r.sharp && tallies == [11, 26, 1, 1, 1];
    Ok((ok, format!("{} eigenvalues, lattice {}, tallies {tallies:?}", r.positive_k_count, r.lattice_count)))
}
