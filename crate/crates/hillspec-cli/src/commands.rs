use anyhow::Context;
use hillspec::conformal::{cut_distance, s_of_c};
use hillspec::euler::{full_evans, spectrum_report};
use hillspec::evans::find_roots;
use hillspec::hill::discriminant;
use hillspec::lattice::{classes, RegionTag, Wavevector};
use hillspec::monodromy::integrate_monodromy;
use hillspec::C64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::output::{complex_json, with_writer, write_json, Cell, Table, SCHEMA_VERSION};

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { b } else { a + step * i as f64 })
}

fn params(cfg: &RunConfig, extra: Value) -> Value {
    json!({ "config": cfg, "args": extra })
}

fn check_grid(n: usize, what: &str) -> anyhow::Result<()> {
    anyhow::ensure!(n >= 1, "{what} must be at least 1");
    Ok(())
}

/// Δ(μ; c) over a uniform μ grid, optionally next to the monodromy trace.
pub fn discriminant_cmd(
    cfg: &RunConfig,
    c: C64,
    mu_min: f64,
    mu_max: f64,
    points: usize,
    monodromy: bool,
) -> anyhow::Result<()> {
    check_grid(points, "points")?;
    let sp = s_of_c(c)?;
    let disc = cfg.disc();
    let mcfg = cfg.monodromy();
    let mus: Vec<f64> = linspace(mu_min, mu_max, points).collect();
    let rows: Vec<Vec<Cell>> = mus
        .par_iter()
        .map(|&mu| {
            let d = discriminant(&sp, C64::new(mu, 0.0), &disc);
            let mut row = vec![Cell::Real(mu), Cell::Complex(d)];
            if monodromy {
                let t = integrate_monodromy(c, C64::new(mu, 0.0), &mcfg).map(|r| r.trace);
                row.push(Cell::Complex(t.unwrap_or(C64::new(f64::NAN, f64::NAN))));
            }
            row
        })
        .collect();
    let mut cols = vec!["mu", "delta"];
    if monodromy {
        cols.push("trace");
    }
    let mut t = Table::new(cols).complex(&["delta", "trace"]);
    rows.into_iter().for_each(|r| t.push(r));
    let extra = json!({ "c": complex_json(c), "mu_min": mu_min, "mu_max": mu_max, "points": points });
    t.emit("discriminant", params(cfg, extra), cfg.format_or(Format::Csv), cfg.output.as_deref())
}

/// Grid of values with a flag on cells where `Im` changes sign towards the
/// right or upper neighbour.
fn flagged_grid(values: &[C64], nx: usize, ny: usize) -> Vec<i64> {
    let mut flags = vec![0i64; values.len()];
    let flips =
        |a: C64, b: C64| a.im.is_finite() && b.im.is_finite() && (a.im == 0.0 || a.im.signum() != b.im.signum());
    for j in 0..ny {
        for i in 0..nx {
            let at = j * nx + i;
            let right = i + 1 < nx && flips(values[at], values[at + 1]);
            let up = j + 1 < ny && flips(values[at], values[at + nx]);
            flags[at] = (right || up) as i64;
        }
    }
    flags
}

pub struct Grid {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    fn points(&self) -> Vec<C64> {
        let xs: Vec<f64> = linspace(self.re.0, self.re.1, self.nx).collect();
        linspace(self.im.0, self.im.1, self.ny).flat_map(|y| xs.iter().map(move |&x| C64::new(x, y))).collect()
    }

    fn json(&self) -> Value {
        json!({ "re": [self.re.0, self.re.1], "im": [self.im.0, self.im.1], "nx": self.nx, "ny": self.ny })
    }
}

/// Δ(d²; c) over a grid in the c-plane; points on the cut become NaN.
pub fn contour_c(cfg: &RunConfig, d: f64, grid: &Grid) -> anyhow::Result<()> {
    check_grid(grid.nx, "nx")?;
    check_grid(grid.ny, "ny")?;
    let disc = cfg.disc();
    let pts = grid.points();
    let vals: Vec<C64> = pts
        .par_iter()
        .map(|&c| match s_of_c(c) {
            Ok(sp) if cut_distance(c) > 1e-12 => discriminant(&sp, C64::new(d * d, 0.0), &disc),
            _ => C64::new(f64::NAN, f64::NAN),
        })
        .collect();
    let skipped = vals.iter().filter(|v| v.re.is_nan()).count();
    if skipped > 0 {
        eprintln!("warning: {skipped} grid points lie on the cut [-1, 1] and are reported as NaN");
    }
    let flags = flagged_grid(&vals, grid.nx, grid.ny);
    let mut t = Table::new(vec!["c", "delta", "im_zero"]).complex(&["c", "delta"]);
    for ((c, v), f) in pts.iter().zip(&vals).zip(&flags) {
        t.push(vec![Cell::Complex(*c), Cell::Complex(*v), Cell::Int(*f)]);
    }
    let extra = json!({ "d": d, "grid": grid.json() });
    t.emit("contour-c", params(cfg, extra), cfg.format_or(Format::Csv), cfg.output.as_deref())
}

/// Δ(μ; c) over a grid in the complex μ-plane.
pub fn contour_mu(cfg: &RunConfig, c: C64, grid: &Grid) -> anyhow::Result<()> {
    check_grid(grid.nx, "nx")?;
    check_grid(grid.ny, "ny")?;
    let sp = s_of_c(c)?;
    let disc = cfg.disc();
    let pts = grid.points();
    let vals: Vec<C64> = pts.par_iter().map(|&mu| discriminant(&sp, mu, &disc)).collect();
    let flags = flagged_grid(&vals, grid.nx, grid.ny);
    let mut t = Table::new(vec!["mu", "delta", "im_zero"]).complex(&["mu", "delta"]);
    for ((m, v), f) in pts.iter().zip(&vals).zip(&flags) {
        t.push(vec![Cell::Complex(*m), Cell::Complex(*v), Cell::Int(*f)]);
    }
    let extra = json!({ "c": complex_json(c), "grid": grid.json() });
    t.emit("contour-mu", params(cfg, extra), cfg.format_or(Format::Csv), cfg.output.as_deref())
}

fn predicted(tag: RegionTag) -> i64 {
    tag.predicted_root_count().map_or(-1, |n| n as i64)
}

/// Region map over `θ ∈ [−1/2, 1/2]`, `d ∈ [0, d_max]`, or the exact class
/// points of a wavevector when `p` is given.
pub fn circles(cfg: &RunConfig, n_theta: usize, n_d: usize, d_max: f64, p: Option<(i64, i64)>) -> anyhow::Result<()> {
    let format = cfg.format_or(Format::Csv);
    if let Some((p1, p2)) = p {
        let wv = Wavevector::new(p1, p2)?;
        let mut t = Table::new(vec!["k", "theta", "d", "region", "predicted_count"]);
        for cp in classes(&wv)? {
            t.push(vec![
                Cell::Int(cp.k),
                Cell::Real(cp.theta_f64()),
                Cell::Real(cp.d_f64()),
                Cell::Text(format!("{:?}", cp.region)),
                Cell::Int(predicted(cp.region)),
            ]);
        }
        return t.emit("circles", params(cfg, json!({ "p": [p1, p2] })), format, cfg.output.as_deref());
    }
    check_grid(n_theta, "n-theta")?;
    check_grid(n_d, "n-d")?;
    let mut t = Table::new(vec!["theta", "d", "region", "predicted_count"]);
    for d in linspace(0.0, d_max, n_d) {
        for th in linspace(-0.5, 0.5, n_theta) {
            let tag = RegionTag::from_coordinates(th, d, 1e-12);
            t.push(vec![Cell::Real(th), Cell::Real(d), Cell::Text(format!("{tag:?}")), Cell::Int(predicted(tag))]);
        }
    }
    let extra = json!({ "n_theta": n_theta, "n_d": n_d, "d_max": d_max });
    t.emit("circles", params(cfg, extra), format, cfg.output.as_deref())
}

pub fn evans_roots(cfg: &RunConfig, theta: f64, d: f64, count_only: bool) -> anyhow::Result<()> {
    let ecfg = hillspec::evans::EvansConfig { refine: !count_only, ..cfg.evans() };
    let set = find_roots(theta, d, &ecfg)?;
    match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(vec!["c", "multiplicity", "residual"]).complex(&["c"]);
            for r in &set.roots {
                t.push(vec![Cell::Complex(r.c), Cell::Int(r.multiplicity as i64), Cell::Real(r.residual)]);
            }
            if count_only {
                eprintln!("count = {}", set.count);
            }
            t.emit("evans-roots", Value::Null, Format::Csv, cfg.output.as_deref())
        }
        Format::Json => {
            let mut v = serde_json::to_value(&set)?;
            v["schema_version"] = json!(SCHEMA_VERSION);
            v["params"] = params(cfg, json!({ "theta": theta, "d": d, "count_only": count_only }));
            with_writer(cfg.output.as_deref(), |w| write_json(w, &v))
        }
    }
}

pub fn spectrum(cfg: &RunConfig, p1: i64, p2: i64, count_only: bool) -> anyhow::Result<()> {
    let p = Wavevector::new(p1, p2)?;
    let report =
        spectrum_report(&p, &cfg.euler(count_only)).with_context(|| format!("spectrum of p = ({p1}, {p2})"))?;
    match cfg.format_or(Format::Json) {
        Format::Json => {
            let v = serde_json::to_value(&report)?;
            with_writer(cfg.output.as_deref(), |w| write_json(w, &v))
        }
        Format::Csv => {
            let mut t = Table::new(vec!["k", "theta", "d", "region", "count", "class_line_count"]);
            for c in &report.per_class {
                t.push(vec![
                    Cell::Int(c.k),
                    Cell::Real(c.theta),
                    Cell::Real(c.d),
                    Cell::Text(format!("{:?}", c.region)),
                    Cell::Int(c.count as i64),
                    Cell::Int(c.class_line_count as i64),
                ]);
            }
            eprintln!(
                "total_count = {}, lattice_count = {}, sharp = {}",
                report.total_count, report.lattice_count, report.sharp
            );
            t.emit("spectrum", Value::Null, Format::Csv, cfg.output.as_deref())
        }
    }
}

pub fn full_evans_cmd(cfg: &RunConfig, p1: i64, p2: i64, lambda: C64) -> anyhow::Result<()> {
    let p = Wavevector::new(p1, p2)?;
    let v = full_evans(&p, lambda, &cfg.euler(true))?;
    let mut t = Table::new(vec!["lambda", "e_p"]).complex(&["lambda", "e_p"]);
    t.push(vec![Cell::Complex(lambda), Cell::Complex(v)]);
    let extra = json!({ "p": [p1, p2], "lambda": complex_json(lambda) });
    t.emit("full-evans", params(cfg, extra), cfg.format_or(Format::Csv), cfg.output.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let v: Vec<f64> = linspace(-6.0, 2.0, 400).collect();
        assert_eq!((v[0], v[399], v.len()), (-6.0, 2.0, 400));
        assert_eq!(linspace(1.0, 5.0, 1).collect::<Vec<_>>(), vec![1.0]);
    }

    #[test]
    fn flags_mark_sign_changes() {
        let v = [C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 2.0)];
        assert_eq!(flagged_grid(&v, 2, 2), vec![1, 1, 0, 0]);
    }
}
