//! Per-class Evans function `E(c; θ, d) = 2cos 2πθ − Δ(d²; c)` and its zeros.
//!
//! `E(−c̄) = conj E(c)` and `E(c̄) = conj E(c)`, so all bookkeeping happens in
//! the upper half plane and mostly in the first quadrant:
//!
//! * imaginary roots come from a sign scan of the real function `t ↦ E(it)`;
//! * the winding of `E` around the symmetric box `[−X, X] × [y₀, X]` equals
//!   (imaginary roots above `y₀`) + 2·(first-quadrant roots), and by the
//!   mirror symmetry it is `Δarg/π` along the right half of the box alone;
//! * first-quadrant roots are isolated by recursive quadrisection on winding
//!   numbers, then polished by damped Newton.

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::conformal::{s_at_origin, s_of_c, BranchSide, SpectralParam};
use crate::error::{Error, Result};
use crate::hill::{discriminant, DiscriminantConfig};
use crate::lattice::RegionTag;
use crate::scalar::Real;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvansConfig {
    pub disc: DiscriminantConfig,
    /// Search box half-size `X`.
    pub c_max: f64,
    /// Height `y₀` of the bottom edge above the cut.
    pub cut_margin: f64,
    /// Distance of the first-quadrant search region from the imaginary axis, relative to `c_max`.
    pub axis_margin: f64,
    /// Newton stops once `|E| ≤ root_tol`.
    pub root_tol: f64,
    /// Roots with `|Re c| < snap_tol · c_max` are put on the imaginary axis.
    pub snap_tol: f64,
    /// Smallest cell edge before a winding `> 1` is declared a multiple root.
    pub min_cell: f64,
    pub max_depth: usize,
    /// Check that no roots lie between `c_max` and `4 c_max`.
    pub guard: bool,
    /// Locate and polish roots; when off only counts are produced.
    pub refine: bool,
    /// Samples of the imaginary-axis scan.
    pub axis_samples: usize,
}

impl Default for EvansConfig {
    fn default() -> Self {
        Self {
            disc: DiscriminantConfig { adapt_tol: 1e-8, ..DiscriminantConfig::default() },
            c_max: 2.0,
            cut_margin: 5e-3,
            axis_margin: 1e-6,
            root_tol: 1e-10,
            snap_tol: 1e-8,
            min_cell: 1e-7,
            max_depth: 40,
            guard: true,
            refine: true,
            axis_samples: 240,
        }
    }
}

impl EvansConfig {
    pub fn count_only() -> Self {
        Self { refine: false, ..Self::default() }
    }
}

/// `E(c; θ, d)` at a parameter already mapped to `s`.
pub fn evans_at<T: Real>(sp: &SpectralParam<T>, theta: T, d: T, cfg: &DiscriminantConfig) -> Complex<T> {
    let two_pi = T::PI() * T::lit(2.0);
    let delta = discriminant(sp, Complex::from(d * d), cfg);
    Complex::from((two_pi * theta).cos() * T::lit(2.0)) - delta
}

/// `E(c; θ, d)`; `c` must be off the cut (use [`evans_at_origin`] for `c = 0`).
pub fn evans<T: Real>(c: Complex<T>, theta: T, d: T, cfg: &DiscriminantConfig) -> Result<Complex<T>> {
    Ok(evans_at(&s_of_c(c)?, theta, d, cfg))
}

pub fn evans_at_origin<T: Real>(side: BranchSide, theta: T, d: T, cfg: &DiscriminantConfig) -> Result<Complex<T>> {
    Ok(evans_at(&s_at_origin(side)?, theta, d, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    fn corners(&self) -> [C64; 4] {
        [C64::new(self.x0, self.y0), C64::new(self.x1, self.y0), C64::new(self.x1, self.y1), C64::new(self.x0, self.y1)]
    }

    fn centre(&self) -> C64 {
        C64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn size(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    fn contains(&self, z: C64, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }

    fn quarters(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvansRoot {
    #[serde(with = "crate::scalar::complex_serde")]
    pub c: C64,
    pub multiplicity: usize,
    /// `|E|` at the reported point.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvansRootSet {
    pub theta: f64,
    pub d: f64,
    /// All roots, closed under `c → −c, c̄, −c̄`. Empty in count-only mode.
    pub roots: Vec<EvansRoot>,
    /// Total count with multiplicity over the whole plane.
    pub count: usize,
    pub region_predicted: RegionTag,
    /// Upper-half search box `[−X, X] × [y₀, X]`.
    #[serde(rename = "box")]
    pub search_box: Rect,
    /// Winding of `E` around `search_box`.
    pub winding_total: i64,
    /// Roots on the imaginary axis below `y₀`, found by the axis scan.
    pub axis_below: usize,
}

impl EvansRootSet {
    pub fn imaginary_count(&self) -> usize {
        self.roots.iter().filter(|r| r.c.re == 0.0).map(|r| r.multiplicity).sum()
    }
}

/// Memoised evaluation of `E` for fixed `(θ, d)`.
struct Evaluator<'a> {
    theta: f64,
    d: f64,
    cfg: &'a EvansConfig,
    cache: RefCell<HashMap<(u64, u64), C64>>,
}

impl<'a> Evaluator<'a> {
    fn new(theta: f64, d: f64, cfg: &'a EvansConfig) -> Self {
        Self { theta, d, cfg, cache: RefCell::new(HashMap::new()) }
    }

    fn at(&self, c: C64) -> Result<C64> {
        let key = (c.re.to_bits(), c.im.to_bits());
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = evans(c, self.theta, self.d, &self.cfg.disc)?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn axis(&self, t: f64) -> Result<f64> {
        Ok(self.at(C64::new(0.0, t))?.re)
    }

    /// Argument change along the segment `a → b`, refined until each step turns by less than π/3.
    fn arg_change(&self, a: C64, b: C64, pieces: usize) -> Result<f64> {
        let mut total = 0.0;
        let mut za = a;
        let mut fa = self.at(a)?;
        for j in 1..=pieces {
            let zb = if j == pieces { b } else { a + (b - a) * (j as f64 / pieces as f64) };
            let fb = self.at(zb)?;
            total += self.arg_segment(za, zb, fa, fb, 0)?;
            za = zb;
            fa = fb;
        }
        Ok(total)
    }

    fn arg_segment(&self, a: C64, b: C64, fa: C64, fb: C64, depth: usize) -> Result<f64> {
        let scale = 1e-300_f64.max(1e-14 * (fa.norm() + fb.norm()));
        if fa.norm() <= scale || fb.norm() <= scale {
            return Err(Error::ContourThroughRoot(format!("E vanishes near {a}")));
        }
        let step = (fb / fa).arg();
        if step.abs() < std::f64::consts::FRAC_PI_3 && depth >= 1 {
            return Ok(step);
        }
        if depth >= self.cfg.max_depth {
            if step.abs() < std::f64::consts::FRAC_PI_2 {
                return Ok(step);
            }
            return Err(Error::ContourThroughRoot(format!("argument unresolved between {a} and {b}")));
        }
        let m = (a + b) * 0.5;
        let fm = self.at(m)?;
        Ok(self.arg_segment(a, m, fa, fm, depth + 1)? + self.arg_segment(m, b, fm, fb, depth + 1)?)
    }

    fn pieces(&self, len: f64) -> usize {
        ((8.0 * len / self.cfg.c_max).ceil() as usize).clamp(2, 16)
    }

    fn winding(&self, r: &Rect) -> Result<i64> {
        let k = r.corners();
        let mut total = 0.0;
        for j in 0..4 {
            let (a, b) = (k[j], k[(j + 1) % 4]);
            total += self.arg_change(a, b, self.pieces((b - a).norm()))?;
        }
        let w = total / std::f64::consts::TAU;
        if (w - w.round()).abs() > 0.05 {
            return Err(Error::ContourThroughRoot(format!("non-integer winding {w} around {r:?}")));
        }
        Ok(w.round() as i64)
    }

    /// Winding of the symmetric box `[−x, x] × [y0, y1]` via its right half.
    fn half_winding(&self, y0: f64, x: f64, y1: f64) -> Result<i64> {
        let path = [C64::new(0.0, y0), C64::new(x, y0), C64::new(x, y1), C64::new(0.0, y1)];
        let mut total = 0.0;
        for j in 0..3 {
            let (a, b) = (path[j], path[j + 1]);
            total += self.arg_change(a, b, self.pieces((b - a).norm()))?;
        }
        let w = total / std::f64::consts::PI;
        if (w - w.round()).abs() > 0.05 {
            return Err(Error::ContourThroughRoot(format!("non-integer half winding {w}")));
        }
        Ok(w.round() as i64)
    }

    fn derivative(&self, z: C64) -> Result<C64> {
        let h = 1e-6 * z.norm().max(0.1);
        let hc = C64::new(h, 0.0);
        Ok((self.at(z + hc)? - self.at(z - hc)?) / (2.0 * h))
    }

    /// Damped Newton from `z`, staying within `cell` (with slack).
    fn newton(&self, mut z: C64, cell: &Rect) -> Result<Option<(C64, f64)>> {
        let tol = self.cfg.root_tol;
        let mut fz = self.at(z)?;
        for _ in 0..60 {
            if fz.norm() <= tol {
                return Ok(Some((z, fz.norm())));
            }
            let dfz = self.derivative(z)?;
            if dfz.norm() == 0.0 {
                return Ok(None);
            }
            let step = fz / dfz;
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let zn = z - step * alpha;
                if cell.contains(zn, 0.25 * cell.size()) && zn.im > 0.0 {
                    let fn_ = self.at(zn)?;
                    if fn_.norm() < fz.norm() {
                        z = zn;
                        fz = fn_;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted || (step * alpha).norm() <= 1e-15 * z.norm() {
                break;
            }
        }
        if fz.norm() <= tol.max(1e-13) * 10.0 && cell.contains(z, 1e-9) {
            return Ok(Some((z, fz.norm())));
        }
        Ok(None)
    }

    /// Sign-change roots of `t ↦ E(it)` on `(lo, hi]`, plus double roots
    /// seen as sign-preserving dips when `dips` is set.
    fn scan_axis(&self, lo: f64, hi: f64, samples: usize, dips: bool) -> Result<Vec<(f64, usize)>> {
        let mut ts: Vec<f64> = Vec::with_capacity(samples + 1);
        let knee = (0.05 * hi).max(lo * 10.0);
        let n_log = samples / 4;
        for j in 0..n_log {
            ts.push(lo * (knee / lo).powf(j as f64 / n_log as f64));
        }
        let n_lin = samples - n_log;
        for j in 0..=n_lin {
            ts.push(knee + (hi - knee) * j as f64 / n_lin as f64);
        }
        let fs: Vec<f64> = ts.iter().map(|&t| self.axis(t)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for j in 0..ts.len() - 1 {
            if fs[j] == 0.0 {
                out.push((ts[j], 1));
                continue;
            }
            if fs[j] * fs[j + 1] < 0.0 {
                out.push((self.bracket(ts[j], ts[j + 1], fs[j], fs[j + 1])?, 1));
            }
        }
        if dips {
            for j in 1..ts.len() - 1 {
                let (a, b, c) = (fs[j - 1], fs[j], fs[j + 1]);
                if a * b > 0.0 && b * c > 0.0 && b.abs() < a.abs() && b.abs() < c.abs() {
                    if let Some(t) = self.dip(ts[j - 1], ts[j + 1])? {
                        out.push((t, 2));
                    }
                }
            }
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        Ok(out)
    }

    /// Regula falsi (Illinois) on a sign-changing bracket.
    fn bracket(&self, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64> {
        let mut side: i32 = 0;
        for _ in 0..200 {
            let t = if side.abs() > 2 { 0.5 * (a + b) } else { (a * fb - b * fa) / (fb - fa) };
            let ft = self.axis(t)?;
            if ft.abs() <= self.cfg.root_tol || (b - a).abs() <= 1e-15 * b.abs() {
                return Ok(t);
            }
            if ft * fa < 0.0 {
                b = t;
                fb = ft;
                if side == -1 {
                    fa *= 0.5;
                }
                side = if side < 0 { side - 1 } else { -1 };
            } else {
                a = t;
                fa = ft;
                if side == 1 {
                    fb *= 0.5;
                }
                side = if side > 0 { side + 1 } else { 1 };
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Golden-section minimum of `|E(it)|`; a double root if it reaches zero.
    fn dip(&self, mut a: f64, mut b: f64) -> Result<Option<f64>> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let mut f1 = self.axis(x1)?.abs();
        let mut f2 = self.axis(x2)?.abs();
        for _ in 0..200 {
            if (b - a) <= 1e-13 * b {
                break;
            }
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = self.axis(x1)?.abs();
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = self.axis(x2)?.abs();
            }
        }
        let t = 0.5 * (a + b);
        // A double root has |E| ~ |E''| δt²; accept at the square root of the tolerance.
        Ok((self.axis(t)?.abs() <= self.cfg.root_tol.sqrt()).then_some(t))
    }

    /// Isolate first-quadrant roots in `cell` carrying winding `w`.
    fn isolate(&self, cell: Rect, w: i64, depth: usize, out: &mut Vec<EvansRoot>) -> Result<()> {
        if w <= 0 {
            return Ok(());
        }
        if w == 1 && (cell.size() < 0.05 * self.cfg.c_max || depth >= 6) {
            if let Some((z, r)) = self.newton(cell.centre(), &cell)? {
                out.push(EvansRoot { c: z, multiplicity: 1, residual: r });
                return Ok(());
            }
        }
        if cell.size() < self.cfg.min_cell || depth >= self.cfg.max_depth {
            let z = cell.centre();
            let r = self.at(z)?.norm();
            out.push(EvansRoot { c: z, multiplicity: w as usize, residual: r });
            return Ok(());
        }
        let quarters = cell.quarters();
        let mut ws = [0i64; 4];
        for (j, q) in quarters.iter().enumerate() {
            ws[j] = self.winding(q)?;
        }
        if ws.iter().sum::<i64>() != w {
            return Err(Error::ContourThroughRoot(format!(
                "windings of the quarters of {cell:?} do not add up to {w}"
            )));
        }
        for (q, wq) in quarters.iter().zip(ws) {
            self.isolate(*q, wq, depth + 1, out)?;
        }
        Ok(())
    }
}

fn one_attempt(theta: f64, d: f64, cfg: &EvansConfig, jitter: f64) -> Result<EvansRootSet> {
    let ev = Evaluator::new(theta, d, cfg);
    let x = cfg.c_max * (1.0 + 0.0137 * jitter);
    let mut y0 = cfg.cut_margin * (1.0 + 0.31 * jitter);
    let t_min = 1e-9 * cfg.c_max;

    let mut axis = ev.scan_axis(t_min, x, cfg.axis_samples, false)?;
    // Keep the bottom edge away from imaginary roots.
    while axis.iter().any(|&(t, _)| (t / y0 - 1.0).abs() < 0.2) {
        y0 *= 0.6;
    }
    let below: usize = axis.iter().filter(|r| r.0 < y0).map(|r| r.1).sum();
    let w = ev.half_winding(y0, x, x)?;
    let search_box = Rect { x0: -x, x1: x, y0, y1: x };

    if cfg.guard {
        let wg = ev.half_winding(y0, 4.0 * x, 4.0 * x)?;
        if wg != w {
            return Err(Error::Convergence(format!(
                "{} root(s) between |c| = {x} and {}; enlarge c_max",
                wg - w,
                4.0 * x
            )));
        }
    }

    let mut above: usize = axis.iter().filter(|r| r.0 >= y0).map(|r| r.1).sum();
    let mut rest = w - above as i64;
    if rest < 0 {
        return Err(Error::Convergence(format!("winding {w} is below the {above} imaginary roots found above y0")));
    }
    if rest % 2 == 1 {
        // An imaginary pair straddles a sample interval without a sign change
        // in the coarse scan; rescan finely.
        axis = ev.scan_axis(t_min, x, cfg.axis_samples * 8, false)?;
        above = axis.iter().filter(|r| r.0 >= y0).map(|r| r.1).sum();
        rest = w - above as i64;
        if rest < 0 || rest % 2 == 1 {
            return Err(Error::Convergence(format!("winding {w} inconsistent with {above} imaginary roots")));
        }
    }

    let upper_count = below as i64 + w;
    let count = (2 * upper_count) as usize;
    let region_predicted = RegionTag::from_coordinates(theta, d, 1e-12);

    let mut roots = Vec::new();
    if cfg.refine {
        let mut quad: Vec<EvansRoot> = Vec::new();
        if rest > 0 {
            let cell = Rect { x0: cfg.axis_margin * x, x1: x, y0, y1: x };
            let wq = ev.winding(&cell)?;
            ev.isolate(cell, wq, 0, &mut quad)?;
            let found: i64 = quad.iter().map(|r| r.multiplicity as i64).sum();
            if found * 2 < rest {
                // Remaining pairs sit on (or within axis_margin of) the
                // imaginary axis as double roots.
                let dips = ev.scan_axis(y0, x, cfg.axis_samples * 8, true)?;
                let extra: Vec<_> = dips.into_iter().filter(|r| r.1 == 2).collect();
                let got: i64 = extra.iter().map(|r| r.1 as i64).sum();
                if found * 2 + got != rest {
                    return Err(Error::Convergence(format!(
                        "located {} off-axis and {got} double axis roots, winding demands {rest}",
                        2 * found
                    )));
                }
                for (t, m) in extra {
                    axis.push((t, m));
                }
            } else if found * 2 > rest {
                return Err(Error::Convergence("more first-quadrant roots than the winding allows".into()));
            }
        }
        let snap = cfg.snap_tol * cfg.c_max;
        for (t, m) in &axis {
            let r = ev.at(C64::new(0.0, *t))?.norm();
            roots.push(EvansRoot { c: C64::new(0.0, *t), multiplicity: *m, residual: r });
            roots.push(EvansRoot { c: C64::new(0.0, -*t), multiplicity: *m, residual: r });
        }
        for r in quad {
            if r.c.re.abs() < snap {
                let c = C64::new(0.0, r.c.im);
                let res = ev.at(c)?.norm();
                // A snapped first-quadrant root stands for a pair on the axis.
                for c in [c, c.conj()] {
                    roots.push(EvansRoot { c, multiplicity: 2 * r.multiplicity, residual: res });
                }
                continue;
            }
            for c in [r.c, -r.c.conj(), r.c.conj(), -r.c] {
                roots.push(EvansRoot { c, multiplicity: r.multiplicity, residual: r.residual });
            }
        }
        roots.sort_by(|a, b| b.c.im.total_cmp(&a.c.im).then(a.c.re.total_cmp(&b.c.re)));
    }

    Ok(EvansRootSet { theta, d, roots, count, region_predicted, search_box, winding_total: w, axis_below: below })
}

/// All zeros of `E(·; θ, d)` off the cut, with multiplicity.
pub fn find_roots(theta: f64, d: f64, cfg: &EvansConfig) -> Result<EvansRootSet> {
    cfg.disc.validate()?;
    if !(cfg.c_max > 0.0 && cfg.cut_margin > 0.0 && cfg.root_tol > 0.0) {
        return Err(Error::InvalidConfig("c_max, cut_margin and root_tol must be positive".into()));
    }
    let mut last = None;
    for attempt in 0..4 {
        match one_attempt(theta, d, cfg, attempt as f64) {
            Ok(r) => return Ok(r),
            Err(e @ Error::ContourThroughRoot(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Total number of roots over all four quadrants, with multiplicity.
pub fn count_roots(theta: f64, d: f64, cfg: &EvansConfig) -> Result<usize> {
    let cfg = EvansConfig { refine: false, ..*cfg };
    Ok(find_roots(theta, d, &cfg)?.count)
}

/// Checks of the `c = 0` derivative lemma and the root birth velocity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub d: f64,
    pub side: BranchSide,
    /// `V = 2π sin(2π√(1−d²))/√(1−d²)`.
    pub closed_form: f64,
    /// `∂E/∂c` at `c = 0` from the given side, by finite differences.
    #[serde(with = "crate::scalar::complex_serde")]
    pub de_dc: C64,
    /// `±i ∂E/∂c` with the sign of the side (`s = ±i`); equals `V`.
    #[serde(with = "crate::scalar::complex_serde")]
    pub rotated_de_dc: C64,
    pub de_dd: f64,
    /// `−2dV`.
    pub de_dd_expected: f64,
    /// Outward normal derivative of `E(0; θ, d)` on the circle.
    pub normal_derivative: f64,
    /// `−4π sin(2π√(1−d²))/√(1−d²)`.
    pub normal_derivative_expected: f64,
    /// Velocity `dc/dt` of the root born as the point moves inward across the circle.
    #[serde(with = "crate::scalar::complex_serde")]
    pub root_velocity: C64,
    /// `−(∂E/∂n_in)/(∂E/∂c)` from the closed forms.
    #[serde(with = "crate::scalar::complex_serde")]
    pub root_velocity_expected: C64,
}

pub fn derivative_checks(d: f64, side: BranchSide, cfg: &EvansConfig) -> Result<DerivativeReport> {
    let bad = [0.0, 0.75f64.sqrt(), 1.0];
    if bad.iter().any(|b| (d.abs() - b).abs() < 1e-9) {
        return Err(Error::DegenerateParameter { d });
    }
    if side == BranchSide::NotOnCut {
        return Err(Error::InvalidConfig("derivative checks need a branch side".into()));
    }
    let disc = &cfg.disc;
    let pi = std::f64::consts::PI;
    let r = (1.0 - d * d).sqrt();
    let v = 2.0 * pi * (2.0 * pi * r).sin() / r;
    let sgn = if side == BranchSide::Upper { 1.0 } else { -1.0 };
    // A point on the circle (θ+1)² + d² = 1.
    let theta = r - 1.0;

    let e0 = evans_at_origin(side, theta, d, disc)?;
    let eps = 1e-7;
    let ce = C64::new(0.0, sgn * eps);
    let de_dc = (evans(ce, theta, d, disc)? - e0) / ce;
    // s = −i on the upper side, +i on the lower: the lemma's ±i is −sgn·i.
    let rotated_de_dc = C64::new(0.0, -sgn) * de_dc;

    let h = 1e-5;
    let e_at = |th: f64, dd: f64| evans_at_origin(side, th, dd, disc).map(|z| z.re);
    let de_dd = (e_at(theta, d + h)? - e_at(theta, d - h)?) / (2.0 * h);
    let (nx, ny) = (theta + 1.0, d);
    let normal_derivative = (e_at(theta + h * nx, d + h * ny)? - e_at(theta - h * nx, d - h * ny)?) / (2.0 * h);

    // Move inward by t and follow the root along the imaginary axis; the
    // O(t) bias of z(t)/t is removed by one Richardson step.
    let expected_de_dc = C64::new(0.0, sgn * v);
    let root_velocity_expected = -C64::new(2.0 * v, 0.0) / expected_de_dc;
    let follow = |t: f64| -> Result<C64> {
        let (th_in, d_in) = (theta - t * nx, d - t * ny);
        let mut z = root_velocity_expected * t;
        for _ in 0..50 {
            let f = evans(z, th_in, d_in, disc)?;
            let hz = 1e-9;
            let df = (evans(z + C64::new(0.0, hz), th_in, d_in, disc)?
                - evans(z - C64::new(0.0, hz), th_in, d_in, disc)?)
                / C64::new(0.0, 2.0 * hz);
            let step = f / df;
            z -= step;
            if step.norm() < 1e-15 {
                break;
            }
        }
        Ok(z / t)
    };
    let t = 2e-4;
    let root_velocity = follow(t / 2.0)? * 2.0 - follow(t)?;
    Ok(DerivativeReport {
        d,
        side,
        closed_form: v,
        de_dc,
        rotated_de_dc,
        de_dd,
        de_dd_expected: -2.0 * d * v,
        normal_derivative,
        normal_derivative_expected: -2.0 * v,
        root_velocity,
        root_velocity_expected,
    })
}
