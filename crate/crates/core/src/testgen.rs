//! Random valid polygons for property tests.

use proptest::prelude::*;

use crate::geometry::Vec2;
use crate::norm::PolygonNorm;
use crate::rational::{self, Rat};

/// Builds the polygon whose edges run along `(-p, q)` with lengths `len`,
/// sorted by angle and rescaled per axis so the chain ends at `e2`.
/// Directions with equal angle are merged; `None` if the chain is degenerate.
pub fn polygon_from_directions(dirs: &[(i64, i64, i64)]) -> Option<PolygonNorm> {
    let mut ds: Vec<(i64, i64, i64)> = dirs
        .iter()
        .copied()
        .filter(|&(p, q, l)| (p > 0 || q > 0) && p >= 0 && q >= 0 && l > 0)
        .collect();
    // increasing angle of (-p, q): p/q increasing
    ds.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    ds.dedup_by(|b, a| {
        if a.0 * b.1 == b.0 * a.1 {
            a.2 += b.2;
            true
        } else {
            false
        }
    });
    let sp: i64 = ds.iter().map(|d| d.0 * d.2).sum();
    let sq: i64 = ds.iter().map(|d| d.1 * d.2).sum();
    if sp == 0 || sq == 0 {
        return None;
    }
    let mut verts = vec![Vec2::e1()];
    let (mut x, mut y) = (rational::one(), rational::zero());
    for &(p, q, l) in &ds {
        x -= rational::ratio(p * l, sp);
        y += rational::ratio(q * l, sq);
        verts.push(Vec2::new(x.clone(), y.clone()));
    }
    debug_assert_eq!(verts.last(), Some(&Vec2::e2()));
    PolygonNorm::new(verts).ok()
}

pub fn arb_polygon() -> impl Strategy<Value = PolygonNorm> {
    prop::collection::vec((0i64..7, 0i64..7, 1i64..6), 1..9)
        .prop_filter_map("degenerate", |d| polygon_from_directions(&d))
}

/// Point of the positive sphere on edge `i` at parameter `t`.
pub fn sphere_point(p: &PolygonNorm, i: usize, t: &Rat) -> Vec2 {
    let i = i % p.edge_count();
    let (a, b) = p.edge(i);
    a.lerp(b, t)
}

pub fn arb_param() -> impl Strategy<Value = Rat> {
    (0i64..=16).prop_map(|k| rational::ratio(k, 16))
}

#[test]
fn generator_covers_all_shapes() {
    let l1 = polygon_from_directions(&[(1, 1, 1)]).unwrap();
    assert!(l1.is_l1());
    let linf = polygon_from_directions(&[(0, 1, 1), (1, 0, 1)]).unwrap();
    assert!(linf.is_linf());
    let f23 = polygon_from_directions(&[(0, 1, 3), (1, 1, 7), (1, 0, 3)]).unwrap();
    assert_eq!(f23.edge_count(), 3);
}
