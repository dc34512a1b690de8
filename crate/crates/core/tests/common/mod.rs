#![allow(dead_code)]

use absnorm_core::rational::{int, ratio, Rat};
use absnorm_core::{Functional2, PolygonNorm, Vec2};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

pub fn v(a: Rat, b: Rat) -> Vec2 {
    Vec2::new(a, b)
}

pub fn poly(pts: &[(i64, i64, i64, i64)]) -> PolygonNorm {
    PolygonNorm::new(pts.iter().map(|&(a, b, c, d)| v(ratio(a, b), ratio(c, d))).collect()).unwrap()
}

pub fn l1() -> PolygonNorm {
    poly(&[(1, 1, 0, 1), (0, 1, 1, 1)])
}
pub fn linf() -> PolygonNorm {
    poly(&[(1, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1)])
}
pub fn f22() -> PolygonNorm {
    poly(&[(1, 1, 0, 1), (1, 1, 1, 2), (0, 1, 1, 1)])
}
pub fn f32() -> PolygonNorm {
    poly(&[(1, 1, 0, 1), (9, 10, 9, 10), (0, 1, 1, 1)])
}
pub fn f23() -> PolygonNorm {
    poly(&[(1, 1, 0, 1), (1, 1, 3, 10), (3, 10, 1, 1), (0, 1, 1, 1)])
}

/// Random positive sphere with exactly `edges` edges: distinct primitive
/// directions `(-p, q)` ordered from steep to flat, random lengths, then each
/// axis rescaled so the path runs from `(1, 0)` to `(0, 1)`.
pub fn random_polygon(rng: &mut impl Rng, edges: usize) -> Vec<Vec2> {
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    // axis-parallel end edges make nonzero hats; force them often
    for axis in [(0, 1), (1, 0)] {
        if dirs.len() < edges && rng.gen_bool(0.5) {
            dirs.push(axis);
        }
    }
    while dirs.len() < edges {
        let (p, q) = (rng.gen_range(0..9i64), rng.gen_range(0..9i64));
        if p == 0 && q == 0 {
            continue;
        }
        let g = p.gcd(&q);
        let d = (p / g, q / g);
        if !dirs.contains(&d) {
            dirs.push(d);
        }
    }
    if dirs.iter().all(|d| d.0 == 0) || dirs.iter().all(|d| d.1 == 0) {
        return random_polygon(rng, edges);
    }
    // steep first: decreasing q/p, i.e. p1*q2 < p2*q1
    dirs.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    let steps: Vec<(Rat, Rat)> = dirs
        .iter()
        .map(|&(p, q)| {
            let len = int(rng.gen_range(1..6));
            (&len * int(p), len * int(q))
        })
        .collect();
    let sx: Rat = steps.iter().map(|s| s.0.clone()).sum();
    let sy: Rat = steps.iter().map(|s| s.1.clone()).sum();
    let mut out = vec![v(Rat::one(), Rat::zero())];
    let (mut x, mut y) = (Rat::one(), Rat::zero());
    for (dx, dy) in steps {
        x -= dx / &sx;
        y += dy / &sy;
        out.push(v(x.clone(), y.clone()));
    }
    out
}

pub fn corpus(rng: &mut impl Rng, count: usize) -> Vec<PolygonNorm> {
    (0..count)
        .map(|k| {
            let edges = 1 + k % 8;
            PolygonNorm::new(random_polygon(rng, edges)).expect("generated polygons are valid")
        })
        .collect()
}

/// Edge count and hats read off a raw vertex list, merging collinear runs.
pub fn shape(vertices: &[Vec2]) -> (usize, Rat, Rat) {
    let mut pts: Vec<Vec2> = Vec::new();
    for p in vertices {
        if pts.len() >= 2 {
            let (a, b) = (&pts[pts.len() - 2], &pts[pts.len() - 1]);
            let cr = (&b.a1 - &a.a1) * (&p.a2 - &a.a2) - (&b.a2 - &a.a2) * (&p.a1 - &a.a1);
            if cr.is_zero() {
                pts.pop();
            }
        }
        pts.push(p.clone());
    }
    let n = pts.len() - 1;
    let second = &pts[1];
    let hat1 = if second.a1.is_one() && n > 1 { second.a2.clone() } else { Rat::zero() };
    let penult = &pts[pts.len() - 2];
    let hat2 = if penult.a2.is_one() && n > 1 { penult.a1.clone() } else { Rat::zero() };
    (n, hat1, hat2)
}

/// `(in_M2, in_N2)` from edge count and hats alone.
pub fn membership_oracle(vertices: &[Vec2]) -> (bool, bool) {
    let (n, h1, h2) = shape(vertices);
    let m2 = match n {
        1 => true,
        2 => !h1.is_zero() || !h2.is_zero(),
        3 => !h1.is_zero() && !h2.is_zero(),
        _ => false,
    };
    (m2, n <= 2)
}

/// Point `t` of the way along edge `i` of a vertex path.
pub fn on_path(pts: &[Vec2], i: usize, t: &Rat) -> Vec2 {
    let (p, q) = (&pts[i], &pts[i + 1]);
    v(&p.a1 + (&q.a1 - &p.a1) * t, &p.a2 + (&q.a2 - &p.a2) * t)
}

pub fn random_sphere_point(rng: &mut impl Rng, pts: &[Vec2]) -> Vec2 {
    let i = rng.gen_range(0..pts.len() - 1);
    on_path(pts, i, &ratio(rng.gen_range(0..=16), 16))
}

/// Positive unit functionals: the vertices of the dual sphere are the edge
/// normals `(q2 - p2, p1 - q1) / (p1 q2 - p2 q1)` plus the axes.
pub fn dual_vertices(pts: &[Vec2]) -> Vec<Vec2> {
    let mut out = vec![v(Rat::one(), Rat::zero())];
    for w in pts.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let det = &p.a1 * &q.a2 - &p.a2 * &q.a1;
        let g = v((&q.a2 - &p.a2) / &det, (&p.a1 - &q.a1) / &det);
        if out.last() != Some(&g) {
            out.push(g);
        }
    }
    if out.last() != Some(&v(Rat::zero(), Rat::one())) {
        out.push(v(Rat::zero(), Rat::one()));
    }
    out
}

pub fn as_functional(p: &Vec2) -> Functional2 {
    Functional2::new(p.a1.clone(), p.a2.clone())
}

/// Float gauge of a polygon from its vertex path: max over edge normals.
pub fn gauge(pts: &[[f64; 2]], x: [f64; 2]) -> f64 {
    let (a, b) = (x[0].abs(), x[1].abs());
    pts.windows(2)
        .map(|w| {
            let (p, q) = (w[0], w[1]);
            let det = p[0] * q[1] - p[1] * q[0];
            ((q[1] - p[1]) * a + (p[0] - q[0]) * b) / det
        })
        .fold(0.0, f64::max)
}

pub fn to_f64(p: &Vec2) -> [f64; 2] {
    use num_traits::ToPrimitive;
    [p.a1.to_f64().unwrap(), p.a2.to_f64().unwrap()]
}
