//! Polygonal approximation of black-box norms and certified edge bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpoly::FloatPolygon;
use crate::geometry::{turn, Vec2};
use crate::norm::{BlackBoxNorm, PolygonNorm};
use crate::rational::{self, Rat};

#[derive(Clone, Debug)]
pub struct Approximation {
    pub polygon: PolygonNorm,
    /// Largest radial gap between the true sphere and the inscribed polygon,
    /// sampled on `resolution + 1` fixed directions. Bounds the Hausdorff
    /// distance from above on those directions.
    pub hausdorff: f64,
    pub n: usize,
}

/// Inscribed polygon through the boundary points at `theta_k = k*pi/(2n)`.
pub fn approximate_polygon(bb: &BlackBoxNorm, n: usize) -> Result<Approximation> {
    if n < 2 {
        return Err(crate::error::contract("approximate_polygon needs n >= 2"));
    }
    let report = crate::norm::validate_norm(&crate::norm::NormCandidate::BlackBox(bb.clone()))?;
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    let mut pts: Vec<Vec2> = Vec::with_capacity(n + 1);
    pts.push(Vec2::e1());
    for k in 1..n {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / n as f64;
        let [x, y] = bb.boundary_point(theta);
        let p = Vec2::new(snap(x)?, snap(y)?);
        let one = rational::one();
        if p.a1 > one || p.a2 > one || &p.a1 + &p.a2 < one {
            continue;
        }
        pts.push(p);
    }
    pts.push(Vec2::e2());
    let hull = upper_hull(pts);
    let polygon = PolygonNorm::new(hull)?;
    let hausdorff = radial_gap(bb, &polygon);
    Ok(Approximation {
        polygon,
        hausdorff,
        n,
    })
}

/// Exact rational for a float coordinate; values within 1e-15 of 0 or 1 snap.
fn snap(x: f64) -> Result<Rat> {
    if x.abs() < 1e-15 {
        return Ok(rational::zero());
    }
    if (x - 1.0).abs() < 1e-15 {
        return Ok(rational::one());
    }
    rational::from_f64(x)
}

/// Keeps only clear left turns, so rounding cannot produce a dent or a
/// spurious corner on a straight piece of the sphere.
fn upper_hull(pts: Vec<Vec2>) -> Vec<Vec2> {
    let tol = rational::ratio(1, 1_000_000_000_000);
    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn radial_gap(bb: &BlackBoxNorm, polygon: &PolygonNorm) -> f64 {
    let fp = FloatPolygon::new(polygon);
    let m = bb.resolution.max(2);
    (0..=m)
        .map(|j| {
            let theta = std::f64::consts::FRAC_PI_2 * j as f64 / m as f64;
            let (s, c) = theta.sin_cos();
            let (c, s) = (c.max(0.0), s.max(0.0));
            let r_true = 1.0 / bb.eval(c, s);
            let r_poly = 1.0 / fp.norm_pos([c, s]);
            (r_true - r_poly).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// Lower bound on the number of edges of the positive sphere of a black-box
/// norm, from `probes + 1` boundary points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeBound {
    pub lower_bound: usize,
    pub probes: usize,
    pub strict_turns: Vec<usize>,
}

/// A strictly convex probe triple `(p_{i-1}, p_i, p_{i+1})` forces a corner
/// strictly inside that arc. Windows centred at odd (or at even) indices
/// cover disjoint arcs, so each certifies a distinct corner; the edge count
/// is at least one more than the number of corners.
pub fn edge_lower_bound(bb: &BlackBoxNorm, probes: usize, tol: f64) -> Result<EdgeBound> {
    let probes = probes.max(2);
    let mut pts = Vec::with_capacity(probes + 1);
    for k in 0..=probes {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / probes as f64;
        let [x, y] = bb.boundary_point(theta);
        pts.push(Vec2::new(snap(x)?, snap(y)?));
    }
    let tol = rational::from_f64(tol)?;
    let strict: Vec<usize> = (1..probes)
        .filter(|&i| turn(&pts[i - 1], &pts[i], &pts[i + 1]) > tol)
        .collect();
    let odd = strict.iter().filter(|i| *i % 2 == 1).count();
    let even = strict.len() - odd;
    Ok(EdgeBound {
        lower_bound: 1 + odd.max(even),
        probes,
        strict_turns: strict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_quarter_square() {
        let a = approximate_polygon(&BlackBoxNorm::euclidean(), 2).unwrap();
        let vs = a.polygon.vertices();
        assert_eq!(vs.len(), 3);
        let [x, y] = vs[1].to_f64();
        assert!((x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((y - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn max_norm_is_recovered_exactly() {
        let a = approximate_polygon(&BlackBoxNorm::lp(f64::INFINITY), 2).unwrap();
        assert!(a.polygon.is_linf());
        let a = approximate_polygon(&BlackBoxNorm::lp(f64::INFINITY), 16).unwrap();
        assert!(a.polygon.is_linf());
        let a = approximate_polygon(&BlackBoxNorm::lp(1.0), 16).unwrap();
        assert!(a.polygon.is_l1());
    }

    #[test]
    fn gap_bound_for_the_circle() {
        let a = approximate_polygon(&BlackBoxNorm::euclidean(), 64).unwrap();
        let bound = 1.0 - (std::f64::consts::PI / 256.0).cos();
        assert!(a.hausdorff <= bound + 1e-12, "{} > {}", a.hausdorff, bound);
        assert!(a.hausdorff > 0.5 * bound);
        assert_eq!(a.polygon.edge_count(), 64);
    }

    #[test]
    fn refinement_never_increases_gap() {
        let bb = BlackBoxNorm::lp(3.0).with_resolution(1024);
        let mut last = f64::INFINITY;
        for n in [2, 4, 8, 16, 32, 64] {
            let gap = approximate_polygon(&bb, n).unwrap().hausdorff;
            assert!(gap <= last, "n={n}: {gap} > {last}");
            last = gap;
        }
    }

    #[test]
    fn invalid_black_box_is_rejected() {
        let bad = BlackBoxNorm::from_fn("half", |a, b| 0.5 * a.hypot(b));
        assert!(matches!(approximate_polygon(&bad, 8), Err(Error::Validation(_))));
    }

    #[test]
    fn edge_bounds() {
        let e = edge_lower_bound(&BlackBoxNorm::euclidean(), 16, 1e-9).unwrap();
        assert!(e.lower_bound > 3, "{e:?}");
        let sq = edge_lower_bound(&BlackBoxNorm::lp(f64::INFINITY), 16, 1e-9).unwrap();
        assert!(sq.lower_bound <= 2, "{sq:?}");
        let l1 = edge_lower_bound(&BlackBoxNorm::lp(1.0), 16, 1e-9).unwrap();
        assert_eq!(l1.lower_bound, 1);
    }
}
