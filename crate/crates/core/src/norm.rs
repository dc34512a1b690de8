//! Absolute normalized norms on the plane.
//!
//! A polygonal norm is stored as the corner points of its positive unit
//! sphere, ordered from `e1 = (1,0)` to `e2 = (0,1)`. Everything else (the
//! full ball, the dual sphere, the gauge) is derived from that list exactly.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::geometry::{turn, Functional2, Vec2};
use crate::rational::{self, Rat};

/// Polygonal absolute normalized norm in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolygonNorm {
    vertices: Vec<Vec2>,
    functionals: Vec<Functional2>,
}

/// Numerically evaluated norm. `resolution` sets the probe density used by
/// sampling-based operations.
#[derive(Clone)]
pub struct BlackBoxNorm {
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub resolution: usize,
    pub label: String,
}

#[derive(Clone, Debug)]
pub enum AbsNorm2 {
    Polygonal(PolygonNorm),
    BlackBox(BlackBoxNorm),
}

/// Unvalidated input to [`validate_norm`].
#[derive(Clone, Debug)]
pub enum NormCandidate {
    Polygon(Vec<Vec2>),
    BlackBox(BlackBoxNorm),
}

/// Value of a norm: exact for polygons, floating for black boxes.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational::to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    AtLeastTwoVertices,
    StartsAtE1,
    EndsAtE2,
    Nonnegative,
    FirstCoordNonIncreasing,
    SecondCoordNonDecreasing,
    DistinctVertices,
    MaxBound,
    SumBound,
    Convex,
    UnitAxes,
    Absolute,
    Triangle,
    Monotone,
    Finite,
}

impl Invariant {
    pub fn describe(self) -> &'static str {
        match self {
            Invariant::AtLeastTwoVertices => "at least two vertices",
            Invariant::StartsAtE1 => "first vertex = (1,0)",
            Invariant::EndsAtE2 => "last vertex = (0,1)",
            Invariant::Nonnegative => "coordinates >= 0",
            Invariant::FirstCoordNonIncreasing => "first coordinates non-increasing",
            Invariant::SecondCoordNonDecreasing => "second coordinates non-decreasing",
            Invariant::DistinctVertices => "consecutive vertices distinct",
            Invariant::MaxBound => "max(v1,v2) ≤ 1",
            Invariant::SumBound => "v1+v2 ≥ 1",
            Invariant::Convex => "polyline concave toward the origin",
            Invariant::UnitAxes => "eval(1,0) = eval(0,1) = 1",
            Invariant::Absolute => "eval(a1,a2) = eval(|a1|,|a2|)",
            Invariant::Triangle => "triangle inequality",
            Invariant::Monotone => "monotone in |a1|, |a2|",
            Invariant::Finite => "finite nonnegative values",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: Invariant,
    pub witness: Vec2,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.invariant.describe(), self.witness)
    }
}

/// Outcome of [`validate_norm`]. Collinear or repeated vertices are not
/// violations; they are merged by canonicalization and listed in `merged`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub merged: Vec<Vec2>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, invariant: Invariant) -> bool {
        self.violations.iter().any(|v| v.invariant == invariant)
    }

    fn push(&mut self, invariant: Invariant, witness: &Vec2) {
        self.violations.push(Violation {
            invariant,
            witness: witness.clone(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_norm(candidate: &NormCandidate) -> Result<ValidationReport> {
    match candidate {
        NormCandidate::Polygon(vertices) => validate_vertices(vertices),
        NormCandidate::BlackBox(bb) => Ok(bb.validate()),
    }
}

fn validate_vertices(vertices: &[Vec2]) -> Result<ValidationReport> {
    let Some(first) = vertices.first() else {
        return Err(Error::Malformed("empty vertex list".into()));
    };
    let mut report = ValidationReport::default();
    let last = vertices.last().expect("non-empty");
    if vertices.len() < 2 {
        report.push(Invariant::AtLeastTwoVertices, first);
    }
    if *first != Vec2::e1() {
        report.push(Invariant::StartsAtE1, first);
    }
    if *last != Vec2::e2() {
        report.push(Invariant::EndsAtE2, last);
    }
    let one = rational::one();
    for p in vertices {
        if !p.is_nonneg() {
            report.push(Invariant::Nonnegative, p);
        }
        if p.a1 > one || p.a2 > one {
            report.push(Invariant::MaxBound, p);
        }
        if &p.a1 + &p.a2 < one {
            report.push(Invariant::SumBound, p);
        }
    }
    for w in vertices.windows(2) {
        if w[1].a1 > w[0].a1 {
            report.push(Invariant::FirstCoordNonIncreasing, &w[1]);
        }
        if w[1].a2 < w[0].a2 {
            report.push(Invariant::SecondCoordNonDecreasing, &w[1]);
        }
    }
    let deduped = dedupe_consecutive(vertices, &mut report.merged);
    for w in deduped.windows(3) {
        if turn(&w[0], &w[1], &w[2]).is_negative() {
            report.push(Invariant::Convex, &w[1]);
        }
    }
    canonicalize_into(deduped, &mut report.merged);
    Ok(report)
}

fn dedupe_consecutive(vertices: &[Vec2], merged: &mut Vec<Vec2>) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(vertices.len());
    for p in vertices {
        if out.last() == Some(p) {
            merged.push(p.clone());
        } else {
            out.push(p.clone());
        }
    }
    out
}

/// Drops middle points of collinear triples until none remain.
fn canonicalize_into(mut pts: Vec<Vec2>, merged: &mut Vec<Vec2>) -> Vec<Vec2> {
    let mut i = 1;
    while pts.len() > 2 && i + 1 < pts.len() {
        if turn(&pts[i - 1], &pts[i], &pts[i + 1]).is_zero() {
            merged.push(pts.remove(i));
            i = i.saturating_sub(1).max(1);
        } else {
            i += 1;
        }
    }
    pts
}

/// Canonical form of a vertex list: consecutive duplicates and collinear
/// middle points removed.
pub fn canonicalize(vertices: &[Vec2]) -> Vec<Vec2> {
    let mut sink = Vec::new();
    let d = dedupe_consecutive(vertices, &mut sink);
    canonicalize_into(d, &mut sink)
}

/// Supporting functional of the line through `p` and `q` (normalized to take
/// the value 1 there). Requires the line to miss the origin.
pub(crate) fn line_functional(p: &Vec2, q: &Vec2) -> Functional2 {
    let d = q.sub(p);
    let n = Functional2::new(d.a2.clone(), -d.a1.clone());
    let at = n.apply(p);
    Functional2::new(&n.f1 / &at, &n.f2 / &at)
}

impl PolygonNorm {
    /// Validates and canonicalizes a vertex list.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let report = validate_vertices(&vertices)?;
        if !report.is_ok() {
            return Err(Error::Validation(report));
        }
        Ok(Self::from_canonical(canonicalize(&vertices)))
    }

    fn from_canonical(vertices: Vec<Vec2>) -> Self {
        let functionals = vertices
            .windows(2)
            .map(|w| line_functional(&w[0], &w[1]))
            .collect();
        Self {
            vertices,
            functionals,
        }
    }

    pub fn l1() -> Self {
        Self::from_canonical(vec![Vec2::e1(), Vec2::e2()])
    }

    pub fn linf() -> Self {
        Self::from_canonical(vec![Vec2::e1(), Vec2::ints(1, 1), Vec2::e2()])
    }

    /// Corner points of the positive sphere, `e1` first, `e2` last.
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// One supporting functional per edge, in edge order. These are exactly
    /// the corners of the dual sphere other than possibly `e1`, `e2`.
    pub fn edge_functionals(&self) -> &[Functional2] {
        &self.functionals
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edge(&self, i: usize) -> (&Vec2, &Vec2) {
        (&self.vertices[i], &self.vertices[i + 1])
    }

    /// Exact norm: the largest edge functional evaluated at `|a|`.
    pub fn eval(&self, a: &Vec2) -> Rat {
        let b = a.abs();
        self.functionals
            .iter()
            .map(|w| w.apply(&b))
            .max()
            .expect("at least one edge")
    }

    /// Dual norm `max_{B_F} |f1 a1 + f2 a2|`, attained at a positive corner
    /// once the signs of `f` are dropped.
    pub fn dual_eval(&self, f: &Functional2) -> Rat {
        let g = Functional2::new(f.f1.abs(), f.f2.abs());
        self.vertices
            .iter()
            .map(|v| g.apply(v))
            .max()
            .expect("non-empty")
    }

    /// Exact polar polygon. Edge functionals become corners; `e1`/`e2` are
    /// added when the first/last edge is not axis-parallel.
    pub fn dual(&self) -> PolygonNorm {
        let (verts, _) = self.dual_with_provenance();
        Self::from_canonical(verts)
    }

    /// Dual corners with the index of the primal edge each one supports
    /// (`None` for the axis points added at either end).
    pub fn dual_with_provenance(&self) -> (Vec<Vec2>, Vec<Option<usize>>) {
        let mut verts = Vec::with_capacity(self.functionals.len() + 2);
        let mut prov = Vec::with_capacity(self.functionals.len() + 2);
        let first = self.functionals.first().expect("edge").as_vec();
        let last = self.functionals.last().expect("edge").as_vec();
        if first != Vec2::e1() {
            verts.push(Vec2::e1());
            prov.push(None);
        }
        for (i, w) in self.functionals.iter().enumerate() {
            verts.push(w.as_vec());
            prov.push(Some(i));
        }
        if last != Vec2::e2() {
            verts.push(Vec2::e2());
            prov.push(None);
        }
        (verts, prov)
    }

    /// Extreme points of the full ball, counter-clockwise from the positive
    /// quadrant.
    pub fn extreme_points(&self) -> Vec<Vec2> {
        let mut ring: Vec<Vec2> = Vec::with_capacity(4 * self.vertices.len());
        let quadrants: [(bool, bool, bool); 4] = [
            (false, false, false),
            (true, false, true),
            (true, true, false),
            (false, true, true),
        ];
        for (neg1, neg2, reversed) in quadrants {
            let mut pts: Vec<Vec2> = self
                .vertices
                .iter()
                .map(|p| {
                    Vec2::new(
                        if neg1 { -p.a1.clone() } else { p.a1.clone() },
                        if neg2 { -p.a2.clone() } else { p.a2.clone() },
                    )
                })
                .collect();
            if reversed {
                pts.reverse();
            }
            for p in pts {
                if ring.last() != Some(&p) {
                    ring.push(p);
                }
            }
        }
        while ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        // cyclic collinearity sweep
        let mut changed = true;
        while changed && ring.len() > 3 {
            changed = false;
            let n = ring.len();
            for i in 0..n {
                let prev = &ring[(i + n - 1) % n];
                let next = &ring[(i + 1) % n];
                if turn(prev, &ring[i], next).is_zero() {
                    ring.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        ring
    }

    pub fn is_l1(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn is_linf(&self) -> bool {
        self.vertices == [Vec2::e1(), Vec2::ints(1, 1), Vec2::e2()]
    }

    /// `a` lies on the positive unit sphere.
    pub fn on_positive_sphere(&self, a: &Vec2) -> bool {
        a.is_nonneg() && self.eval(a) == rational::one()
    }

    /// Index of an edge containing the positive-sphere point `a`; vertices
    /// belong to the edge that starts at them (the last vertex to the last edge).
    pub fn locate(&self, a: &Vec2) -> Option<usize> {
        (0..self.edge_count()).find(|&i| {
            let (p, q) = self.edge(i);
            turn(p, a, q).is_zero() && between(p, q, a)
        })
    }

    pub fn to_candidate(&self) -> NormCandidate {
        NormCandidate::Polygon(self.vertices.clone())
    }
}

/// `a` lies in the closed box spanned by `p` and `q`.
pub(crate) fn between(p: &Vec2, q: &Vec2, a: &Vec2) -> bool {
    let lo1 = if p.a1 <= q.a1 { &p.a1 } else { &q.a1 };
    let hi1 = if p.a1 <= q.a1 { &q.a1 } else { &p.a1 };
    let lo2 = if p.a2 <= q.a2 { &p.a2 } else { &q.a2 };
    let hi2 = if p.a2 <= q.a2 { &q.a2 } else { &p.a2 };
    &a.a1 >= lo1 && &a.a1 <= hi1 && &a.a2 >= lo2 && &a.a2 <= hi2
}

impl BlackBoxNorm {
    pub const DEFAULT_RESOLUTION: usize = 4096;

    pub fn from_fn(
        label: impl Into<String>,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            resolution: Self::DEFAULT_RESOLUTION,
            label: label.into(),
        }
    }

    /// The `p`-norm; `p = ∞` gives the max norm.
    pub fn lp(p: f64) -> Self {
        if p.is_infinite() {
            return Self::from_fn("lp:inf", |a, b| a.abs().max(b.abs()));
        }
        Self::from_fn(format!("lp:{p}"), move |a, b| {
            (a.abs().powf(p) + b.abs().powf(p)).powf(1.0 / p)
        })
    }

    pub fn euclidean() -> Self {
        Self::from_fn("lp:2", |a, b| a.hypot(b))
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution.max(2);
        self
    }

    pub fn eval(&self, a1: f64, a2: f64) -> f64 {
        (self.eval)(a1, a2)
    }

    /// Boundary point of the positive sphere in direction `theta`.
    pub fn boundary_point(&self, theta: f64) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        let (c, s) = (c.max(0.0), s.max(0.0));
        let r = self.eval(c, s);
        [c / r, s / r]
    }

    fn validate(&self) -> ValidationReport {
        const TOL: f64 = 1e-9;
        let mut report = ValidationReport::default();
        let wit = |x: f64, y: f64| {
            Vec2::new(
                rational::from_f64(x).unwrap_or_else(|_| rational::zero()),
                rational::from_f64(y).unwrap_or_else(|_| rational::zero()),
            )
        };
        for (x, y) in [(1.0, 0.0), (0.0, 1.0)] {
            if (self.eval(x, y) - 1.0).abs() > TOL {
                report.push(Invariant::UnitAxes, &wit(x, y));
            }
        }
        let probes = 64usize;
        let dirs: Vec<[f64; 2]> = (0..probes)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / probes as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        for &[x, y] in &dirs {
            let v = self.eval(x, y);
            if !v.is_finite() || v <= 0.0 {
                report.push(Invariant::Finite, &wit(x, y));
                continue;
            }
            if (v - self.eval(x.abs(), y.abs())).abs() > TOL * v.max(1.0) {
                report.push(Invariant::Absolute, &wit(x, y));
            }
            for t in [0.0, 0.25, 0.5, 0.75] {
                let (ax, ay) = (x.abs(), y.abs());
                let scale = 1.0 + TOL;
                if self.eval(ax * t, ay) > self.eval(ax, ay) * scale + TOL
                    || self.eval(ax, ay * t) > self.eval(ax, ay) * scale + TOL
                {
                    report.push(Invariant::Monotone, &wit(x, y));
                    break;
                }
            }
        }
        'tri: for (i, &[x1, y1]) in dirs.iter().enumerate() {
            for &[x2, y2] in dirs.iter().skip(i + 1).step_by(3) {
                let lhs = self.eval(x1 + x2, y1 + y2);
                let rhs = self.eval(x1, y1) + self.eval(x2, y2);
                if lhs > rhs * (1.0 + TOL) + TOL {
                    report.push(Invariant::Triangle, &wit(x1 + x2, y1 + y2));
                    break 'tri;
                }
            }
        }
        report
    }
}

impl fmt::Debug for BlackBoxNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxNorm")
            .field("label", &self.label)
            .field("resolution", &self.resolution)
            .finish()
    }
}

impl AbsNorm2 {
    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        PolygonNorm::new(vertices).map(AbsNorm2::Polygonal)
    }

    pub fn as_polygon(&self) -> Option<&PolygonNorm> {
        match self {
            AbsNorm2::Polygonal(p) => Some(p),
            AbsNorm2::BlackBox(_) => None,
        }
    }

    pub fn require_polygon(&self, op: &str) -> Result<&PolygonNorm> {
        self.as_polygon().ok_or_else(|| {
            Error::Unsupported(format!("{op} needs a polygonal norm; approximate it first"))
        })
    }

    pub fn norm_eval(&self, a: &Vec2) -> Scalar {
        match self {
            AbsNorm2::Polygonal(p) => Scalar::Exact(p.eval(a)),
            AbsNorm2::BlackBox(b) => {
                let [x, y] = a.to_f64();
                Scalar::Float(b.eval(x, y))
            }
        }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        match self {
            AbsNorm2::Polygonal(p) => crate::fpoly::FloatPolygon::new(p).norm([x, y]),
            AbsNorm2::BlackBox(b) => b.eval(x, y),
        }
    }

    pub fn dual_norm(&self) -> Result<AbsNorm2> {
        Ok(AbsNorm2::Polygonal(self.require_polygon("dual_norm")?.dual()))
    }

    pub fn extreme_points(&self) -> Result<Vec<Vec2>> {
        Ok(self.require_polygon("extreme_points")?.extreme_points())
    }

    pub fn validate(&self) -> ValidationReport {
        match self {
            AbsNorm2::Polygonal(p) => {
                validate_vertices(p.vertices()).expect("non-empty canonical polygon")
            }
            AbsNorm2::BlackBox(b) => b.validate(),
        }
    }
}

pub(crate) fn require_unit_functional(norm: &PolygonNorm, f: &Functional2) -> Result<()> {
    let n = norm.dual_eval(f);
    if n != rational::one() {
        return Err(contract(format!(
            "functional {f} has dual norm {}, expected 1",
            rational::format(&n)
        )));
    }
    Ok(())
}

pub(crate) fn require_unit_vector(norm: &PolygonNorm, a: &Vec2) -> Result<()> {
    let n = norm.eval(a);
    if n != rational::one() {
        return Err(contract(format!(
            "vector {a} has norm {}, expected 1",
            rational::format(&n)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::v;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn f22() -> PolygonNorm {
        PolygonNorm::new(vec![Vec2::e1(), v(1, 1, 1, 2), Vec2::e2()]).unwrap()
    }

    #[test]
    fn l1_and_linf_validate() {
        let l1 = NormCandidate::Polygon(vec![Vec2::e1(), Vec2::e2()]);
        assert!(validate_norm(&l1).unwrap().is_ok());
        let linf = NormCandidate::Polygon(vec![Vec2::e1(), Vec2::ints(1, 1), Vec2::e2()]);
        assert!(validate_norm(&linf).unwrap().is_ok());
    }

    #[test]
    fn point_inside_l1_ball_is_rejected() {
        let bad = NormCandidate::Polygon(vec![Vec2::e1(), v(1, 2, 1, 4), Vec2::e2()]);
        let report = validate_norm(&bad).unwrap();
        assert!(!report.is_ok());
        let sum = report
            .violations
            .iter()
            .find(|x| x.invariant == Invariant::SumBound)
            .expect("sum bound violation");
        assert_eq!(sum.witness, v(1, 2, 1, 4));
        assert_eq!(sum.to_string(), "v1+v2 ≥ 1 fails at (1/2, 1/4)");
    }

    #[test]
    fn empty_list_is_malformed() {
        let err = validate_norm(&NormCandidate::Polygon(vec![])).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn other_violations_are_named() {
        let r = validate_vertices(&[v(1, 1, 1, 10), Vec2::e2()]).unwrap();
        assert!(r.has(Invariant::StartsAtE1));
        let r = validate_vertices(&[Vec2::e1(), Vec2::ints(2, 1), Vec2::e2()]).unwrap();
        assert!(r.has(Invariant::MaxBound) && r.has(Invariant::FirstCoordNonIncreasing));
        // dent at (3/5,3/5)
        let r = validate_vertices(&[Vec2::e1(), v(1, 1, 1, 2), v(3, 5, 3, 5), v(1, 2, 1, 1), Vec2::e2()])
            .unwrap();
        assert!(r.has(Invariant::Convex));
        let r = validate_vertices(&[Vec2::e1()]).unwrap();
        assert!(r.has(Invariant::AtLeastTwoVertices));
    }

    #[test]
    fn collinear_points_are_merged_not_rejected() {
        let p = PolygonNorm::new(vec![Vec2::e1(), v(1, 2, 1, 2), Vec2::e2()]).unwrap();
        assert!(p.is_l1());
        let r = validate_vertices(&[Vec2::e1(), v(1, 2, 1, 2), Vec2::e2()]).unwrap();
        assert!(r.is_ok());
        assert_eq!(r.merged, vec![v(1, 2, 1, 2)]);
        let p = PolygonNorm::new(vec![Vec2::e1(), v(1, 1, 1, 3), Vec2::ints(1, 1), Vec2::ints(1, 1), Vec2::e2()])
            .unwrap();
        assert!(p.is_linf());
    }

    #[test]
    fn norm_eval_examples() {
        assert_eq!(PolygonNorm::l1().eval(&v(1, 2, 1, 2)), int(1));
        assert_eq!(PolygonNorm::linf().eval(&v(-1, 1, 1, 3)), int(1));
        assert_eq!(f22().eval(&Vec2::ints(1, 1)), ratio(3, 2));
        assert_eq!(f22().eval(&Vec2::zero()), int(0));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(PolygonNorm::l1().dual(), PolygonNorm::linf());
        assert_eq!(PolygonNorm::linf().dual(), PolygonNorm::l1());
        assert_eq!(f22().dual().vertices(), &[Vec2::e1(), v(1, 2, 1, 1), Vec2::e2()]);
        let p = PolygonNorm::new(vec![Vec2::e1(), v(9, 10, 9, 10), Vec2::e2()]).unwrap();
        assert_eq!(p.dual().dual(), p);
        assert_eq!(
            p.dual().vertices(),
            &[Vec2::e1(), v(1, 1, 1, 9), v(1, 9, 1, 1), Vec2::e2()]
        );
    }

    #[test]
    fn dual_provenance_points_at_edges() {
        let (verts, prov) = f22().dual_with_provenance();
        assert_eq!(verts.len(), 3);
        assert_eq!(prov, vec![Some(0), Some(1), None]);
    }

    #[test]
    fn extreme_point_examples() {
        let l1 = PolygonNorm::l1().extreme_points();
        assert_eq!(l1.len(), 4);
        for p in [Vec2::ints(1, 0), Vec2::ints(-1, 0), Vec2::ints(0, 1), Vec2::ints(0, -1)] {
            assert!(l1.contains(&p));
        }
        let linf = PolygonNorm::linf().extreme_points();
        assert_eq!(linf.len(), 4);
        assert!(!linf.contains(&Vec2::e1()));
        // (1,0) is the midpoint of (1,1/2) and (1,-1/2), so it is not extreme.
        let ext = f22().extreme_points();
        assert_eq!(ext.len(), 6);
        assert!(!ext.contains(&Vec2::e1()));
        for p in [v(1, 1, 1, 2), v(-1, 1, 1, 2), v(-1, 1, -1, 2), v(1, 1, -1, 2), Vec2::e2(), Vec2::ints(0, -1)] {
            assert!(ext.contains(&p), "missing {p}");
        }
    }

    #[test]
    fn locate_finds_edges() {
        let p = f22();
        assert_eq!(p.locate(&Vec2::e1()), Some(0));
        assert_eq!(p.locate(&v(1, 1, 1, 4)), Some(0));
        assert_eq!(p.locate(&v(1, 2, 3, 4)), Some(1));
        assert_eq!(p.locate(&Vec2::ints(1, 1)), None);
    }

    #[test]
    fn black_box_lp_validates() {
        assert!(BlackBoxNorm::euclidean().validate().is_ok());
        assert!(BlackBoxNorm::lp(f64::INFINITY).validate().is_ok());
        assert!(BlackBoxNorm::lp(1.0).validate().is_ok());
        let not_absolute = BlackBoxNorm::from_fn("skew", |a, b| (a + 0.5 * b).abs().max(b.abs()));
        assert!(!not_absolute.validate().is_ok());
        let not_normalized = BlackBoxNorm::from_fn("big", |a, b| 2.0 * a.hypot(b));
        assert!(not_normalized.validate().has(Invariant::UnitAxes));
        let not_convex = BlackBoxNorm::lp(0.5);
        assert!(not_convex.validate().has(Invariant::Triangle));
    }

    fn small_rational() -> impl Strategy<Value = Rat> {
        (-12i64..=12, 1i64..=6).prop_map(|(p, q)| ratio(p, q))
    }

    fn some_polygon() -> impl Strategy<Value = PolygonNorm> {
        prop_oneof![
            Just(PolygonNorm::l1()),
            Just(PolygonNorm::linf()),
            Just(f22()),
            Just(PolygonNorm::new(vec![Vec2::e1(), v(9, 10, 9, 10), Vec2::e2()]).unwrap()),
            Just(PolygonNorm::new(vec![Vec2::e1(), v(1, 1, 3, 10), v(3, 10, 1, 1), Vec2::e2()]).unwrap()),
            Just(PolygonNorm::new(vec![Vec2::e1(), v(1, 1, 1, 4), v(4, 5, 4, 5), v(1, 4, 1, 1), Vec2::e2()]).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn sandwich_and_absoluteness(p in some_polygon(), a1 in small_rational(), a2 in small_rational()) {
            let a = Vec2::new(a1.clone(), a2.clone());
            let n = p.eval(&a);
            prop_assert_eq!(&n, &p.eval(&a.abs()));
            prop_assert!(n >= rational::max(a1.abs(), a2.abs()));
            prop_assert!(n <= a1.abs() + a2.abs());
        }

        #[test]
        fn monotone(p in some_polygon(), a1 in small_rational(), a2 in small_rational(), t1 in 0i64..=6, t2 in 0i64..=6) {
            let big = Vec2::new(a1.abs(), a2.abs());
            let small = Vec2::new(&big.a1 * ratio(t1, 6), &big.a2 * ratio(t2, 6));
            prop_assert!(p.eval(&small) <= p.eval(&big));
        }

        #[test]
        fn dual_pairing(p in some_polygon()) {
            let d = p.dual();
            for w in d.vertices() {
                let vals: Vec<Rat> = p.vertices().iter().map(|x| w.as_functional().apply(x)).collect();
                prop_assert!(vals.iter().all(|x| *x <= rational::one()));
                prop_assert!(vals.iter().any(|x| *x == rational::one()));
            }
            for x in p.vertices() {
                prop_assert!(d.vertices().iter().any(|w| w.as_functional().apply(x) == rational::one()));
            }
            prop_assert_eq!(d.dual(), p);
        }
    }
}
