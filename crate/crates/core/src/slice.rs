//! Slices of the positive unit ball cut by a functional.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::geometry::{turn, Functional2, Vec2};
use crate::norm::{require_unit_functional, PolygonNorm};
use crate::rational::{self, Rat};

/// `S(B_F, f, eps) ∩ B_F^+` stored as its closure. The side
/// `<f, b> = 1 - eps` is open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRegion {
    pub functional: Functional2,
    #[serde(with = "rational::serde_text")]
    pub epsilon: Rat,
    /// Corners of the closed region, counter-clockwise. Empty when the slice is empty.
    pub corners: Vec<Vec2>,
    /// The part of the positive sphere inside the closed slice, from the `e1` side.
    pub arc: Vec<Vec2>,
}

impl SliceRegion {
    pub fn level(&self) -> Rat {
        rational::one() - &self.epsilon
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    /// Membership in the open slice.
    pub fn contains(&self, norm: &PolygonNorm, b: &Vec2) -> bool {
        b.is_nonneg() && norm.eval(b) <= rational::one() && self.functional.apply(b) > self.level()
    }

    /// Membership in the closure.
    pub fn contains_closed(&self, norm: &PolygonNorm, b: &Vec2) -> bool {
        b.is_nonneg() && norm.eval(b) <= rational::one() && self.functional.apply(b) >= self.level()
    }
}

pub fn slice_positive(norm: &PolygonNorm, f: &Functional2, eps: &Rat) -> Result<SliceRegion> {
    require_unit_functional(norm, f)?;
    if !eps.is_positive() || *eps >= rational::one() {
        return Err(contract(format!(
            "slice width {} outside (0,1)",
            rational::format(eps)
        )));
    }
    Ok(slice_unchecked(norm, f, eps))
}

pub(crate) fn slice_unchecked(norm: &PolygonNorm, f: &Functional2, eps: &Rat) -> SliceRegion {
    let level = rational::one() - eps;
    let mut ring = Vec::with_capacity(norm.vertices().len() + 1);
    ring.push(Vec2::zero());
    ring.extend(norm.vertices().iter().cloned());
    let corners = tidy_ring(clip_ring(&ring, f, &level));
    let arc = clip_polyline(norm.vertices(), f, &level);
    SliceRegion {
        functional: f.clone(),
        epsilon: eps.clone(),
        corners,
        arc,
    }
}

fn crossing(p: &Vec2, q: &Vec2, vp: &Rat, vq: &Rat) -> Vec2 {
    let t = vp / (vp - vq);
    p.lerp(q, &t)
}

/// Exact Sutherland–Hodgman clip of a convex ring against `<f,x> >= level`.
pub(crate) fn clip_ring(ring: &[Vec2], f: &Functional2, level: &Rat) -> Vec<Vec2> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let cur = &ring[i];
        let prev = &ring[(i + n - 1) % n];
        let vc = f.apply(cur) - level;
        let vp = f.apply(prev) - level;
        if !vc.is_negative() {
            if vp.is_negative() {
                out.push(crossing(prev, cur, &vp, &vc));
            }
            out.push(cur.clone());
        } else if !vp.is_negative() {
            out.push(crossing(prev, cur, &vp, &vc));
        }
    }
    out
}

/// Removes repeated and collinear corners of a closed ring.
pub(crate) fn tidy_ring(mut ring: Vec<Vec2>) -> Vec<Vec2> {
    ring.dedup();
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    let mut changed = true;
    while changed && ring.len() > 2 {
        changed = false;
        let n = ring.len();
        for i in 0..n {
            if turn(&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]).is_zero() {
                ring.remove(i);
                changed = true;
                break;
            }
        }
    }
    ring
}

/// Part of an open polyline where `<f,x> >= level`. The superlevel set of a
/// linear functional along a convex curve is connected, so one run suffices.
pub(crate) fn clip_polyline(pts: &[Vec2], f: &Functional2, level: &Rat) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::new();
    let push = |out: &mut Vec<Vec2>, p: Vec2| {
        if out.last() != Some(&p) {
            out.push(p);
        }
    };
    for w in pts.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let vp = f.apply(p) - level;
        let vq = f.apply(q) - level;
        match (vp.is_negative(), vq.is_negative()) {
            (false, false) => {
                push(&mut out, p.clone());
                push(&mut out, q.clone());
            }
            (false, true) => {
                push(&mut out, p.clone());
                push(&mut out, crossing(p, q, &vp, &vq));
            }
            (true, false) => {
                push(&mut out, crossing(p, q, &vp, &vq));
                push(&mut out, q.clone());
            }
            (true, true) => {}
        }
    }
    if pts.len() == 1 && !(f.apply(&pts[0]) - level).is_negative() {
        out.push(pts[0].clone());
    }
    out
}
