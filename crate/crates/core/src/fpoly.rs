//! Floating mirror of a [`PolygonNorm`] for dense searches.
//!
//! Searches run here; whatever they return is re-evaluated exactly before it
//! is reported.

use crate::norm::PolygonNorm;

pub(crate) type P2 = [f64; 2];

#[derive(Clone, Debug)]
pub(crate) struct FloatPolygon {
    pub verts: Vec<P2>,
    pub funcs: Vec<P2>,
}

#[inline]
pub(crate) fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub(crate) fn cross(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub(crate) fn lerp(p: P2, q: P2, t: f64) -> P2 {
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
}

impl FloatPolygon {
    pub fn new(p: &PolygonNorm) -> Self {
        Self {
            verts: p.vertices().iter().map(|v| v.to_f64()).collect(),
            funcs: p.edge_functionals().iter().map(|w| w.to_f64()).collect(),
        }
    }

    /// Norm of a nonnegative point. The edge hit by the ray through `x` is
    /// located by bisection on angle; neighbours are included to absorb
    /// rounding at corners.
    #[inline]
    pub fn norm_pos(&self, x: P2) -> f64 {
        let k = self.funcs.len();
        if k <= 4 {
            return self.funcs.iter().map(|w| dot(*w, x)).fold(0.0, f64::max);
        }
        let idx = self.verts[1..k].partition_point(|v| cross(*v, x) > 0.0);
        let lo = idx.saturating_sub(1);
        let hi = (idx + 1).min(k - 1);
        (lo..=hi).map(|i| dot(self.funcs[i], x)).fold(0.0, f64::max)
    }

    pub fn norm(&self, x: P2) -> f64 {
        self.norm_pos([x[0].abs(), x[1].abs()])
    }

    /// `‖Id + f⊗a‖` for `f, a >= 0`. Only positive corners are needed: for any
    /// corner `v`, `|v + f(v)a| <= |v| + f(|v|)a` componentwise.
    pub fn rank1_pos(&self, f: P2, a: P2) -> f64 {
        self.verts
            .iter()
            .map(|&v| {
                let t = dot(f, v);
                self.norm_pos([v[0] + t * a[0], v[1] + t * a[1]])
            })
            .fold(0.0, f64::max)
    }

    /// Corners of `{b in B_F^+ : <f,b> >= level}`.
    pub fn clip_positive_ball(&self, f: P2, level: f64) -> Vec<P2> {
        let mut ring = Vec::with_capacity(self.verts.len() + 1);
        ring.push([0.0, 0.0]);
        ring.extend_from_slice(&self.verts);
        clip_f64(&ring, f, level)
    }
}

/// Sutherland–Hodgman clip of a convex ring against `<f,x> >= level`.
pub(crate) fn clip_f64(ring: &[P2], f: P2, level: f64) -> Vec<P2> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let cur = ring[i];
        let prev = ring[(i + n - 1) % n];
        let vc = dot(f, cur) - level;
        let vp = dot(f, prev) - level;
        if vc >= 0.0 {
            if vp < 0.0 {
                out.push(lerp(prev, cur, vp / (vp - vc)));
            }
            out.push(cur);
        } else if vp >= 0.0 {
            out.push(lerp(prev, cur, vp / (vp - vc)));
        }
    }
    out
}

/// Golden-section minimization of a function convex on `[0,1]`.
pub(crate) fn golden_min(g: impl Fn(f64) -> f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while hi - lo > tol {
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INV_PHI * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INV_PHI * (hi - lo);
            g2 = g(x2);
        }
    }
    let mut best = (0.0, g(0.0));
    for t in [1.0, x1, x2] {
        let val = g(t);
        if val < best.1 {
            best = (t, val);
        }
    }
    best
}
