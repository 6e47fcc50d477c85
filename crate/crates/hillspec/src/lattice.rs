//! Integer lattice geometry of the wavevector `p`: companion basis, class
//! coordinates `(θ, d)`, exact region tags and lattice-point counts.
//!
//! Everything here is exact integer arithmetic; no floating point enters a
//! membership decision.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coprime, nonzero wavevector `p = (p1, p2)` of the shear flow `cos(p·x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wavevector {
    pub p1: i64,
    pub p2: i64,
    pub p_sq: i64,
}

impl Wavevector {
    pub fn new(p1: i64, p2: i64) -> Result<Self> {
        if (p1, p2) == (0, 0) || p1.gcd(&p2) != 1 {
            return Err(Error::Coprimality { p1, p2 });
        }
        Ok(Self { p1, p2, p_sq: p1 * p1 + p2 * p2 })
    }

    pub fn dot(&self, a: (i64, i64)) -> i64 {
        self.p1 * a.0 + self.p2 * a.1
    }
}

/// `q` with `p2·q1 − p1·q2 = 1` and `|p·q|` minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionBasis {
    pub q1: i64,
    pub q2: i64,
    pub dot_pq: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionTag {
    /// Outside every circle `(θ+l)² + d² = 1`.
    Region0,
    /// Inside exactly one circle.
    RegionI,
    /// Inside two circles.
    RegionII,
    /// On a circle, inside none.
    Boundary0I,
    /// On one circle while inside another.
    BoundaryIII,
    /// `d = 0`, or on two circles at once.
    Corner,
}

impl RegionTag {
    pub const ALL: [RegionTag; 6] = [
        RegionTag::Region0,
        RegionTag::RegionI,
        RegionTag::RegionII,
        RegionTag::Boundary0I,
        RegionTag::BoundaryIII,
        RegionTag::Corner,
    ];

    /// Number of Evans roots (all four quadrants, with multiplicity) the
    /// region predicts. `None` at a corner.
    pub fn predicted_root_count(self) -> Option<usize> {
        match self {
            RegionTag::Region0 | RegionTag::Boundary0I => Some(0),
            RegionTag::RegionI | RegionTag::BoundaryIII => Some(2),
            RegionTag::RegionII => Some(4),
            RegionTag::Corner => None,
        }
    }

    /// Tag from circle membership counts: `inside` open disks, `on` circles.
    fn from_counts(inside: usize, on: usize, d_is_zero: bool) -> Self {
        if d_is_zero || on >= 2 {
            return RegionTag::Corner;
        }
        match (inside, on) {
            (0, 0) => RegionTag::Region0,
            (1, 0) => RegionTag::RegionI,
            (_, 0) => RegionTag::RegionII,
            (0, _) => RegionTag::Boundary0I,
            _ => RegionTag::BoundaryIII,
        }
    }

    /// Floating-point classification of an arbitrary `(θ, d)`; points within
    /// `tol` of a circle count as on it.
    pub fn from_coordinates(theta: f64, d: f64, tol: f64) -> Self {
        let theta = theta - theta.round();
        let (mut inside, mut on) = (0, 0);
        for l in -2..=2 {
            let r = (theta + l as f64).powi(2) + d * d - 1.0;
            if r.abs() <= tol {
                on += 1;
            } else if r < 0.0 {
                inside += 1;
            }
        }
        Self::from_counts(inside, on, d.abs() <= tol)
    }
}

/// Parameters of the class with wave number `k`.
///
/// `θ = theta_num / p_sq ∈ (−1/2, 1/2]`, `d = k / p_sq`, and the class
/// representative is `a0 = k q + l p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPoint {
    pub k: i64,
    pub theta_num: i64,
    pub p_sq: i64,
    pub l: i64,
    pub a0: (i64, i64),
    pub region: RegionTag,
}

impl ClassPoint {
    pub fn theta(&self) -> Ratio<i64> {
        Ratio::new(self.theta_num, self.p_sq)
    }

    pub fn d(&self) -> Ratio<i64> {
        Ratio::new(self.k, self.p_sq)
    }

    pub fn theta_f64(&self) -> f64 {
        self.theta_num as f64 / self.p_sq as f64
    }

    pub fn d_f64(&self) -> f64 {
        self.k as f64 / self.p_sq as f64
    }
}

/// Extended Euclid: `(g, x, y)` with `a x + b y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn companion_basis(p: &Wavevector) -> Result<CompanionBasis> {
    let (p1, p2) = (p.p1, p.p2);
    if (p1, p2) == (0, 0) || p1.gcd(&p2) != 1 {
        return Err(Error::Coprimality { p1, p2 });
    }
    // p2 x + p1 y = g = ±1, so q = g (x, −y) has p2 q1 − p1 q2 = g² = 1.
    let (g, x, y) = ext_gcd(p2, p1);
    let (mut q1, mut q2) = (g * x, -g * y);
    let p_sq = p1 * p1 + p2 * p2;
    let dot = p1 * q1 + p2 * q2;
    // Shift q by t p so that p·q lands in (−p²/2, p²/2].
    let mut r = dot.rem_euclid(p_sq);
    if 2 * r > p_sq {
        r -= p_sq;
    }
    let t = (dot - r) / p_sq;
    q1 -= t * p1;
    q2 -= t * p2;
    Ok(CompanionBasis { q1, q2, dot_pq: r })
}

pub fn class_point(p: &Wavevector, q: &CompanionBasis, k: i64) -> Result<ClassPoint> {
    if k == 0 {
        return Err(Error::TrivialClass);
    }
    let p_sq = p.p_sq;
    let raw = k * q.dot_pq;
    let mut num = raw.rem_euclid(p_sq);
    if 2 * num > p_sq {
        num -= p_sq;
    }
    let l = (num - raw) / p_sq;
    let a0 = (k * q.q1 + l * p.p1, k * q.q2 + l * p.p2);
    let mut cp = ClassPoint { k, theta_num: num, p_sq, l, a0, region: RegionTag::Corner };
    cp.region = classify(&cp);
    Ok(cp)
}

/// Exact region tag: compares `(θ_num + l p²)² + k²` against `p⁴`.
pub fn classify(cp: &ClassPoint) -> RegionTag {
    let p_sq = cp.p_sq as i128;
    let rhs = p_sq * p_sq;
    let k = cp.k as i128;
    let (mut inside, mut on) = (0, 0);
    for l in -1..=1i128 {
        let x = cp.theta_num as i128 + l * p_sq;
        let lhs = x * x + k * k;
        if lhs == rhs {
            on += 1;
        } else if lhs < rhs {
            inside += 1;
        }
    }
    RegionTag::from_counts(inside, on, cp.k == 0)
}

/// Nonzero lattice points strictly inside the disk `|a|² < p²`, sorted.
pub fn lattice_points_in_disk(p: &Wavevector) -> (usize, Vec<(i64, i64)>) {
    let r = (p.p_sq as f64).sqrt().ceil() as i64;
    let mut pts = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            let n = x * x + y * y;
            // Multiples of a coprime p other than 0 have norm ≥ p², so the
            // origin is the only one to exclude.
            if n > 0 && n < p.p_sq {
                pts.push((x, y));
            }
        }
    }
    (pts.len(), pts)
}

/// Number of integers `m` with `|k q + m p|² < p²`.
pub fn class_line_count(p: &Wavevector, q: &CompanionBasis, k: i64) -> Result<usize> {
    if k == 0 {
        return Err(Error::TrivialClass);
    }
    // |kq + mp|² is a quadratic in m minimised near −k(p·q)/p²; the disk has
    // radius 1 in m-units, so a window of ±2 around the centre suffices.
    let centre = Ratio::new(-k * q.dot_pq, p.p_sq).round().to_integer();
    let count = (centre - 2..=centre + 2)
        .filter(|m| {
            let a = (k * q.q1 + m * p.p1, k * q.q2 + m * p.p2);
            a.0 * a.0 + a.1 * a.1 < p.p_sq
        })
        .count();
    Ok(count)
}

/// Classes `k = 1 … p²−1` of `p`.
pub fn classes(p: &Wavevector) -> Result<Vec<ClassPoint>> {
    let q = companion_basis(p)?;
    (1..p.p_sq).map(|k| class_point(p, &q, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(a: i64, b: i64) -> Wavevector {
        Wavevector::new(a, b).unwrap()
    }

    #[test]
    fn companion_examples() {
        let q = companion_basis(&wv(4, 5)).unwrap();
        assert_eq!((q.q1, q.q2, q.dot_pq), (1, 1, 9));
        let q = companion_basis(&wv(0, 1)).unwrap();
        assert_eq!((q.q1, q.q2, q.dot_pq), (1, 0, 0));
        let q = companion_basis(&wv(1, 2)).unwrap();
        assert_eq!((q.q1, q.q2, q.dot_pq), (0, -1, -2));
    }

    #[test]
    fn tie_goes_to_positive_dot() {
        let q = companion_basis(&wv(1, 1)).unwrap();
        assert_eq!(q.dot_pq, 1);
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(matches!(Wavevector::new(2, 4), Err(Error::Coprimality { .. })));
        assert!(matches!(Wavevector::new(0, 0), Err(Error::Coprimality { .. })));
    }

    #[test]
    fn class_point_examples() {
        let p = wv(4, 5);
        let q = companion_basis(&p).unwrap();
        let cp = class_point(&p, &q, 9).unwrap();
        assert_eq!((cp.theta(), cp.d()), (Ratio::new(-1, 41), Ratio::new(9, 41)));
        let cp = class_point(&p, &q, 1).unwrap();
        assert_eq!((cp.theta(), cp.d()), (Ratio::new(9, 41), Ratio::new(1, 41)));

        let p = wv(1, 2);
        let q = companion_basis(&p).unwrap();
        let cp = class_point(&p, &q, 3).unwrap();
        assert_eq!((cp.theta(), cp.d(), cp.l), (Ratio::new(-1, 5), Ratio::new(3, 5), 1));
        assert_eq!(class_point(&p, &q, 0), Err(Error::TrivialClass));
    }

    #[test]
    fn classify_examples() {
        let p = wv(4, 5);
        let q = companion_basis(&p).unwrap();
        assert_eq!(class_point(&p, &q, 9).unwrap().region, RegionTag::BoundaryIII);
        assert_eq!(class_point(&p, &q, 40).unwrap().region, RegionTag::Boundary0I);
        assert_eq!(class_point(&p, &q, 39).unwrap().region, RegionTag::Region0);
        let p = wv(1, 2);
        let q = companion_basis(&p).unwrap();
        assert_eq!(class_point(&p, &q, 1).unwrap().region, RegionTag::RegionII);
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(lattice_points_in_disk(&wv(4, 5)).0, 128);
        assert_eq!(lattice_points_in_disk(&wv(0, 1)).0, 0);
        assert_eq!(lattice_points_in_disk(&wv(1, 2)).0, 12);
    }

    #[test]
    fn class_line_examples() {
        let p = wv(4, 5);
        let q = companion_basis(&p).unwrap();
        assert_eq!(class_line_count(&p, &q, 40).unwrap(), 0);
        let p12 = wv(1, 2);
        let q12 = companion_basis(&p12).unwrap();
        assert_eq!(class_line_count(&p12, &q12, 1).unwrap(), 2);
    }

    #[test]
    fn float_classification_matches_exact() {
        for (a, b) in [(1, 2), (4, 5), (2, 3), (3, 7)] {
            let p = wv(a, b);
            for cp in classes(&p).unwrap() {
                assert_eq!(
                    RegionTag::from_coordinates(cp.theta_f64(), cp.d_f64(), 1e-12),
                    cp.region,
                    "p=({a},{b}) k={}",
                    cp.k
                );
            }
        }
    }
}
