//! Rank-one perturbations of the identity on a two-dimensional lattice and
//! the margins by which they stay below norm 2.
//!
//! For `f` in the positive dual sphere and `a` in the positive sphere,
//! `r(f, a) = ‖Id + f⊗a‖`. A point `a` is denied with margin `ε` when some `f`
//! gives `r(f, a) <= 2 - ε`; a functional `f` is star-denied when some `a`
//! does. Both margins are 1-Lipschitz in the point, which is what turns a
//! finite sample into a certificate for a whole arc.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::fpoly::{golden_min, FloatPolygon, P2};
use crate::geometry::{Functional2, Vec2};
use crate::norm::{require_unit_functional, require_unit_vector, AbsNorm2, BlackBoxNorm, PolygonNorm, Scalar};
use crate::rational::{self, Rat};
use crate::slice::{clip_polyline, slice_unchecked};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Points of `S_F^+`, witnesses in `S_{F*}^+`.
    Deny,
    /// Points of `S_{F*}^+`, witnesses in `S_F^+`.
    StarDeny,
}

/// Exact `‖Id + f⊗a‖` without precondition checks.
pub fn rank1_exact(norm: &PolygonNorm, f: &Functional2, a: &Vec2) -> Rat {
    let positive = !f.f1.is_negative() && !f.f2.is_negative() && a.is_nonneg();
    if positive {
        return rank1_exact_pos(norm, &FloatPolygon::new(norm), f, a);
    }
    let image = |v: &Vec2| norm.eval(&v.add(&a.scale(&f.apply(v))));
    norm.extreme_points().iter().map(image).max().expect("extreme points")
}

/// Float values closer than this to a float maximum are settled exactly.
const EXACT_SCREEN: f64 = 1e-9;

/// Positive case: `|v + f(v)a| <= |v| + f(|v|)a` componentwise, so positive
/// corners suffice. Corners and edge functionals are screened in floats and
/// only near-maximal ones are evaluated exactly.
fn rank1_exact_pos(norm: &PolygonNorm, fp: &FloatPolygon, f: &Functional2, a: &Vec2) -> Rat {
    let (ff, af) = (f.to_f64(), a.to_f64());
    let images: Vec<(P2, f64)> = fp
        .verts
        .iter()
        .map(|&v| {
            let t = crate::fpoly::dot(ff, v);
            let x = [v[0] + t * af[0], v[1] + t * af[1]];
            (x, fp.norm_pos(x))
        })
        .collect();
    let best = images.iter().map(|p| p.1).fold(0.0, f64::max);
    norm.vertices()
        .iter()
        .zip(&images)
        .filter(|(_, (_, val))| *val >= best - EXACT_SCREEN)
        .map(|(v, (x, _))| {
            let b = v.add(&a.scale(&f.apply(v)));
            let top = fp.funcs.iter().map(|w| crate::fpoly::dot(*w, *x)).fold(0.0, f64::max);
            norm.edge_functionals()
                .iter()
                .zip(&fp.funcs)
                .filter(|(_, w)| crate::fpoly::dot(**w, *x) >= top - EXACT_SCREEN)
                .map(|(w, _)| w.apply(&b))
                .max()
                .expect("edge functional")
        })
        .max()
        .expect("vertices")
}

/// `‖Id + f⊗a‖` on `F`. Exact for polygons; for black boxes the supremum over
/// the sphere is sampled at the norm's resolution and refined locally.
pub fn rank1_norm(norm: &AbsNorm2, f: &Functional2, a: &Vec2) -> Result<Scalar> {
    match norm {
        AbsNorm2::Polygonal(p) => {
            require_unit_functional(p, f)?;
            require_unit_vector(p, a)?;
            Ok(Scalar::Exact(rank1_exact(p, f, a)))
        }
        AbsNorm2::BlackBox(bb) => rank1_black_box(bb, f.to_f64(), a.to_f64()).map(Scalar::Float),
    }
}

fn rank1_black_box(bb: &BlackBoxNorm, f: P2, a: P2) -> Result<f64> {
    const TOL: f64 = 1e-6;
    let norm_a = bb.eval(a[0], a[1]);
    if (norm_a - 1.0).abs() > TOL {
        return Err(contract(format!("vector has norm {norm_a}, expected 1")));
    }
    let m = bb.resolution.max(16);
    let full = 2.0 * std::f64::consts::PI;
    let point = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let r = bb.eval(c, s);
        [c / r, s / r]
    };
    let dual = (0..4 * m)
        .map(|k| {
            let p = point(full * k as f64 / (4 * m) as f64);
            (f[0] * p[0] + f[1] * p[1]).abs()
        })
        .fold(0.0, f64::max);
    if (dual - 1.0).abs() > TOL {
        return Err(contract(format!("functional has dual norm about {dual}, expected 1")));
    }
    let image = |theta: f64| {
        let p = point(theta);
        let t = f[0] * p[0] + f[1] * p[1];
        -bb.eval(p[0] + t * a[0], p[1] + t * a[1])
    };
    let step = full / (4 * m) as f64;
    let (best_k, _) = (0..4 * m)
        .map(|k| (k, image(k as f64 * step)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let lo = (best_k as f64 - 1.0) * step;
    let (_, val) = golden_min(|t| image(lo + 2.0 * step * t), 1e-13);
    Ok(-val)
}

/// Checks `r_F(f, a) = r_{F*}(a, f)` exactly.
pub fn adjoint_symmetry_check(norm: &PolygonNorm, f: &Functional2, a: &Vec2) -> Result<bool> {
    require_unit_functional(norm, f)?;
    require_unit_vector(norm, a)?;
    let lhs = rank1_exact(norm, f, a);
    let rhs = rank1_exact(&norm.dual(), &a.as_functional(), &f.as_vec());
    Ok(lhs == rhs)
}

/// Result of a pointwise margin search. The true margin lies in
/// `[margin, margin + gap]`: `witness` attains `margin` exactly, and no
/// unsampled witness can beat the samples by more than `gap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMargin<W> {
    #[serde(with = "rational::serde_text")]
    pub margin: Rat,
    pub witness: W,
    #[serde(with = "rational::serde_text")]
    pub value: Rat,
    #[serde(with = "rational::serde_text")]
    pub gap: Rat,
}

/// The pair of spheres a mode works on, sharing one float mirror of `F`.
struct Setting<'a> {
    norm: &'a PolygonNorm,
    dual: PolygonNorm,
    fp: FloatPolygon,
    mode: Mode,
}

impl<'a> Setting<'a> {
    fn new(norm: &'a PolygonNorm, mode: Mode) -> Self {
        Self {
            norm,
            dual: norm.dual(),
            fp: FloatPolygon::new(norm),
            mode,
        }
    }

    /// Sphere carrying the points.
    fn outer(&self) -> &PolygonNorm {
        match self.mode {
            Mode::Deny => self.norm,
            Mode::StarDeny => &self.dual,
        }
    }

    /// Sphere carrying the witnesses.
    fn inner(&self) -> &PolygonNorm {
        match self.mode {
            Mode::Deny => &self.dual,
            Mode::StarDeny => self.norm,
        }
    }

    fn r_float(&self, p: P2, q: P2) -> f64 {
        match self.mode {
            Mode::Deny => self.fp.rank1_pos(q, p),
            Mode::StarDeny => self.fp.rank1_pos(p, q),
        }
    }

    fn r_exact(&self, p: &Vec2, q: &Vec2) -> Rat {
        match self.mode {
            Mode::Deny => rank1_exact_pos(self.norm, &self.fp, &q.as_functional(), p),
            Mode::StarDeny => rank1_exact_pos(self.norm, &self.fp, &p.as_functional(), q),
        }
    }

    /// Exact minimum over a finite candidate list, screened in floats. At
    /// most `SETTLE_CAP` of the best float candidates are evaluated exactly.
    fn settle(&self, p: &Vec2, mut cands: Vec<(Vec2, f64)>) -> (Rat, Vec2) {
        const SETTLE_CAP: usize = 32;
        let best = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        cands.retain(|c| c.1 <= best + EXACT_SCREEN);
        cands.sort_by(|x, y| x.1.total_cmp(&y.1));
        cands.truncate(SETTLE_CAP);
        cands
            .into_iter()
            .map(|(q, _)| (self.r_exact(p, &q), q))
            .min_by(|x, y| x.0.cmp(&y.0))
            .expect("non-empty candidate list")
    }

    /// Minimum of `r` over the vertices and `grid` equal steps of every inner edge.
    fn grid_min(&self, p: &Vec2, grid: usize) -> (Rat, Vec2) {
        let pf = p.to_f64();
        let inner = self.inner();
        let grid = grid.max(1);
        let mut cands = Vec::with_capacity(inner.edge_count() * grid + 1);
        for i in 0..inner.edge_count() {
            let (a, b) = inner.edge(i);
            let last = if i + 1 == inner.edge_count() { grid } else { grid - 1 };
            for j in 0..=last {
                let q = a.lerp(b, &rational::ratio(j as i64, grid as i64));
                let val = self.r_float(pf, q.to_f64());
                cands.push((q, val));
            }
        }
        self.settle(p, cands)
    }

    /// Half the largest inner edge step, measured in the inner norm.
    fn grid_gap(&self, grid: usize) -> Rat {
        let inner = self.inner();
        let k = rational::int(2 * grid.max(1) as i64);
        (0..inner.edge_count())
            .map(|i| {
                let (a, b) = inner.edge(i);
                inner.eval(&b.sub(a)) / &k
            })
            .max()
            .expect("edges")
    }

    /// Minimum of `r` along each inner edge by golden section (`r` is convex
    /// in the witness), then settled exactly.
    fn golden_inner(&self, p: &Vec2) -> (Rat, Vec2) {
        let pf = p.to_f64();
        let inner = self.inner();
        let mut cands = Vec::with_capacity(inner.edge_count() * 2 + 1);
        for i in 0..inner.edge_count() {
            let (a, b) = inner.edge(i);
            let (af, bf) = (a.to_f64(), b.to_f64());
            let g = |t: f64| self.r_float(pf, crate::fpoly::lerp(af, bf, t));
            let (t, val) = golden_min(g, 1e-10);
            cands.push((a.lerp(b, &param(t)), val));
        }
        let last = inner.vertices().last().expect("vertex").clone();
        let val = self.r_float(pf, last.to_f64());
        cands.push((last, val));
        self.settle(p, cands)
    }
}

/// Dyadic rational close to `t`, clamped to `[0,1]`.
fn param(t: f64) -> Rat {
    const DEN: i64 = 1 << 30;
    let k = (t.clamp(0.0, 1.0) * DEN as f64).round() as i64;
    rational::ratio(k, DEN)
}

fn point_margin<W>(s: &Setting<'_>, p: &Vec2, grid: usize, wit: impl Fn(Vec2) -> W) -> PointMargin<W> {
    let (value, q) = s.grid_min(p, grid);
    PointMargin {
        margin: rational::two() - &value,
        witness: wit(q),
        value,
        gap: s.grid_gap(grid),
    }
}

/// `2 - min_f r(f, a)` over dual-sphere vertices and `grid` points per dual edge.
pub fn deny_margin(norm: &PolygonNorm, a: &Vec2, grid: usize) -> Result<PointMargin<Functional2>> {
    require_unit_vector(norm, a)?;
    if !a.is_nonneg() {
        return Err(contract(format!("{a} is not in the positive quadrant")));
    }
    let s = Setting::new(norm, Mode::Deny);
    Ok(point_margin(&s, a, grid, |q| q.as_functional()))
}

/// `2 - min_a r(f, a)` over sphere vertices and `grid` points per edge.
pub fn star_deny_margin(norm: &PolygonNorm, f: &Functional2, grid: usize) -> Result<PointMargin<Vec2>> {
    require_unit_functional(norm, f)?;
    if f.f1.is_negative() || f.f2.is_negative() {
        return Err(contract(format!("{f} is not positive")));
    }
    let s = Setting::new(norm, Mode::StarDeny);
    Ok(point_margin(&s, &f.as_vec(), grid, |q| q))
}

/// Largest `ε` for which some `a` in `S_F^+` keeps `‖a + b‖ < 2 - ε` for every
/// `b` in the slice `S(B_F, f, ε) ∩ B_F^+`, up to `tol`. Candidates for `a` are
/// the vertices and `grid` points per edge; the slice enters through its
/// corners since `b ↦ ‖a + b‖` is convex.
pub fn u_function(norm: &PolygonNorm, f: &Functional2, tol: f64, grid: usize) -> Result<f64> {
    const GUARD: f64 = 1e-12;
    require_unit_functional(norm, f)?;
    let fp = FloatPolygon::new(norm);
    let ff = f.to_f64();
    let grid = grid.max(1);
    let mut cands: Vec<P2> = Vec::new();
    for w in fp.verts.windows(2) {
        for j in 0..grid {
            cands.push(crate::fpoly::lerp(w[0], w[1], j as f64 / grid as f64));
        }
    }
    cands.push(*fp.verts.last().expect("vertex"));
    let holds = |eps: f64| {
        let corners = fp.clip_positive_ball(ff, 1.0 - eps);
        cands.par_iter().any(|a| {
            corners
                .iter()
                .all(|b| fp.norm_pos([a[0] + b[0], a[1] + b[1]]) < 2.0 - eps - GUARD)
        })
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if holds(hi) {
        return Ok(hi);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Face `Δ = {b ∈ S_F^+ : f(b) = 1}` meets an edge through `a` (or contains
/// `a`): returns the endpoint of that intersection farthest from `a`, so
/// `[a, b0]` lies on the sphere and `f(b0) = 1`.
pub fn segment_witness(norm: &PolygonNorm, a: &Vec2, f: &Functional2) -> Result<Option<Vec2>> {
    require_unit_vector(norm, a)?;
    require_unit_functional(norm, f)?;
    let one = rational::one();
    let face: Vec<usize> = (0..norm.vertices().len())
        .filter(|&i| f.apply(&norm.vertices()[i]) == one)
        .collect();
    let mut cands: Vec<Vec2> = Vec::new();
    if f.apply(a) == one {
        cands.push(a.clone());
    }
    for i in 0..norm.edge_count() {
        let (p, q) = norm.edge(i);
        if !crate::geometry::turn(p, a, q).is_zero() || !crate::norm::between(p, q, a) {
            continue;
        }
        for k in [i, i + 1] {
            if face.contains(&k) {
                cands.push(norm.vertices()[k].clone());
            }
        }
    }
    let dist = |b: &Vec2| {
        let d = b.sub(a);
        &d.a1 * &d.a1 + &d.a2 * &d.a2
    };
    Ok(cands.into_iter().max_by(|x, y| dist(x).cmp(&dist(y))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exceptional {
    pub w: Functional2,
    pub h1: Vec2,
    pub h2: Vec2,
}

/// For a three-edge sphere: the corners `h1`, `h2` and the unique positive
/// functional `w` whose face is the middle edge `[h1, h2]`.
pub fn three_edge_exceptional(norm: &PolygonNorm) -> Result<Exceptional> {
    if norm.edge_count() != 3 {
        return Err(contract(format!(
            "three_edge_exceptional needs 3 edges, got {}",
            norm.edge_count()
        )));
    }
    let w = norm.edge_functionals()[1].clone();
    let one = rational::one();
    if w.f1 >= one || w.f2 >= one {
        return Err(contract(format!("middle functional {w} is not interior")));
    }
    Ok(Exceptional {
        w,
        h1: norm.vertices()[1].clone(),
        h2: norm.vertices()[2].clone(),
    })
}

/// `δ` for the slice of the dual sphere about `e1`: `(1 - w1)/4` for three
/// edges, keeping `δ0 = (1 - w1)/2` and `δ < 1 - w1 - δ0` both slack; `1/4`
/// otherwise.
pub fn default_delta(norm: &PolygonNorm) -> Rat {
    match three_edge_exceptional(norm) {
        Ok(ex) => (rational::one() - &ex.w.f1) / rational::int(4),
        Err(_) => rational::ratio(1, 4),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereRegion {
    Whole,
    /// Points `p` of the sphere with `<by, p> > 1 - delta`.
    Slice {
        by: Vec2,
        #[serde(with = "rational::serde_text")]
        delta: Rat,
    },
    /// Arc between two sphere points.
    Arc { from: Vec2, to: Vec2 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub point: Vec2,
    pub witness: Vec2,
    #[serde(with = "rational::serde_text")]
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenialCertificate {
    pub mode: Mode,
    pub region: SphereRegion,
    /// Certified lower bound on the margin over the whole region, floored at 0.
    #[serde(with = "rational::serde_text")]
    pub epsilon: Rat,
    pub certified: bool,
    /// Smallest margin among the sampled points.
    #[serde(with = "rational::serde_text")]
    pub sampled_margin: Rat,
    /// Largest distance from a region point to its nearest sample.
    #[serde(with = "rational::serde_text")]
    pub gap: Rat,
    pub witness_rows: Vec<WitnessRow>,
}

impl DenialCertificate {
    pub fn epsilon_f64(&self) -> f64 {
        rational::to_f64(&self.epsilon)
    }

    /// Recomputes every row exactly; each must stay at or below `2 - epsilon`.
    pub fn verify(&self, norm: &PolygonNorm) -> bool {
        let bound = rational::two() - &self.epsilon;
        self.witness_rows.iter().all(|row| {
            let r = match self.mode {
                Mode::Deny => rank1_exact(norm, &row.witness.as_functional(), &row.point),
                Mode::StarDeny => rank1_exact(norm, &row.point.as_functional(), &row.witness),
            };
            r == row.value && r <= bound
        })
    }
}

/// Polyline of the region along the outer sphere, in sphere order.
fn region_polyline(sphere: &PolygonNorm, region: &SphereRegion) -> Result<Vec<Vec2>> {
    match region {
        SphereRegion::Whole => Ok(sphere.vertices().to_vec()),
        SphereRegion::Slice { by, delta } => {
            let by_f = by.as_functional();
            if sphere.dual_eval(&by_f) != rational::one() {
                return Err(contract(format!("slicing element {by} is not of norm one")));
            }
            if !delta.is_positive() {
                return Err(contract("slice width must be positive"));
            }
            let level = rational::one() - delta;
            let pts = clip_polyline(sphere.vertices(), &by_f, &level);
            if pts.is_empty() {
                return Err(contract("slice region is empty"));
            }
            Ok(pts)
        }
        SphereRegion::Arc { from, to } => {
            for p in [from, to] {
                if !sphere.on_positive_sphere(p) {
                    return Err(contract(format!("{p} is not on the positive sphere")));
                }
            }
            // sphere order: a1 non-increasing, a2 non-decreasing
            let before = |p: &Vec2, q: &Vec2| p.a1 > q.a1 || (p.a1 == q.a1 && p.a2 < q.a2);
            let (s, e) = if before(to, from) { (to.clone(), from.clone()) } else { (from.clone(), to.clone()) };
            let mut pts = vec![s.clone()];
            for v in sphere.vertices() {
                if before(&s, v) && before(v, &e) {
                    pts.push(v.clone());
                }
            }
            if pts.last() != Some(&e) {
                pts.push(e);
            }
            Ok(pts)
        }
    }
}

/// Spreads about `grid` samples along the polyline. Returns the samples and
/// half the largest step, in the sphere's norm.
fn sample_polyline(sphere: &PolygonNorm, pts: &[Vec2], grid: usize) -> (Vec<Vec2>, Rat) {
    if pts.len() == 1 {
        return (pts.to_vec(), rational::zero());
    }
    let lens: Vec<f64> = pts
        .windows(2)
        .map(|w| {
            let [x, y] = w[1].sub(&w[0]).to_f64();
            x.hypot(y)
        })
        .collect();
    let total: f64 = lens.iter().sum();
    let budget = grid.saturating_sub(pts.len()).max(pts.len() - 1);
    let mut out = Vec::with_capacity(budget + pts.len());
    let mut gap = rational::zero();
    for (w, len) in pts.windows(2).zip(&lens) {
        let k = ((budget as f64 * len / total.max(f64::MIN_POSITIVE)).round() as usize).max(1);
        for j in 0..k {
            out.push(w[0].lerp(&w[1], &rational::ratio(j as i64, k as i64)));
        }
        let h = sphere.eval(&w[1].sub(&w[0])) / rational::int(2 * k as i64);
        if h > gap {
            gap = h;
        }
    }
    out.push(pts.last().expect("point").clone());
    (out, gap)
}

/// Uniform margin over a region of the positive sphere (deny) or of the
/// positive dual sphere (star deny). `grid` is the number of region samples;
/// at each sample the witness is optimized per edge and checked exactly.
pub fn set_denial_certificate(
    norm: &PolygonNorm,
    mode: Mode,
    region: &SphereRegion,
    grid: usize,
) -> Result<DenialCertificate> {
    let s = Setting::new(norm, mode);
    let line = region_polyline(s.outer(), region)?;
    let (samples, gap) = sample_polyline(s.outer(), &line, grid);
    let rows: Vec<WitnessRow> = samples
        .par_iter()
        .map(|p| {
            let (value, q) = s.golden_inner(p);
            WitnessRow {
                point: p.clone(),
                witness: q,
                value,
            }
        })
        .collect();
    let worst = rows.iter().map(|r| &r.value).max().expect("samples").clone();
    let sampled_margin = rational::two() - worst;
    let lower = &sampled_margin - &gap;
    let certified = lower.is_positive();
    Ok(DenialCertificate {
        mode,
        region: region.clone(),
        epsilon: if certified { lower } else { rational::zero() },
        certified,
        sampled_margin,
        gap,
        witness_rows: rows,
    })
}

/// Star-denial over the slice of the dual sphere about `e1` of width
/// [`default_delta`].
pub fn e1_slice_star_certificate(norm: &PolygonNorm, grid: usize) -> Result<DenialCertificate> {
    let region = SphereRegion::Slice {
        by: Vec2::e1(),
        delta: default_delta(norm),
    };
    set_denial_certificate(norm, Mode::StarDeny, &region, grid)
}

/// Cross-check of the operator, slice and dual-slice forms of denial at one
/// pair `(f, a)`, including the halving of `ε` between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharReport {
    pub mode: Mode,
    pub f: Functional2,
    pub a: Vec2,
    #[serde(with = "rational::serde_text")]
    pub epsilon: Rat,
    /// `‖Id + f⊗a‖`.
    #[serde(with = "rational::serde_text")]
    pub r: Rat,
    /// `max ‖a + b‖` over the closed slice of `B_F^+` by `f` of width `ε`, `ε/2`.
    #[serde(with = "rational::serde_text")]
    pub s_eps: Rat,
    #[serde(with = "rational::serde_text")]
    pub s_half: Rat,
    /// `max ‖f + g‖` over the closed slice of `B_{F*}^+` by `a` of width `ε`, `ε/2`.
    #[serde(with = "rational::serde_text")]
    pub t_eps: Rat,
    #[serde(with = "rational::serde_text")]
    pub t_half: Rat,
    pub i_eps: bool,
    pub ii_eps: bool,
    pub iii_eps: bool,
    pub i_half: bool,
    pub ii_half: bool,
    pub iii_half: bool,
    pub holds: bool,
}

fn slice_max(norm: &PolygonNorm, f: &Functional2, eps: &Rat, a: &Vec2) -> Rat {
    slice_unchecked(norm, f, eps)
        .corners
        .iter()
        .map(|b| norm.eval(&a.add(b)))
        .max()
        .unwrap_or_else(rational::zero)
}

/// `point` is `a` (deny) or `f` as coordinates (star deny). Without an
/// explicit witness the best grid witness is used.
pub fn char_equiv_check(
    norm: &PolygonNorm,
    mode: Mode,
    point: &Vec2,
    witness: Option<&Vec2>,
    eps: &Rat,
    grid: usize,
) -> Result<CharReport> {
    if !eps.is_positive() || *eps >= rational::one() {
        return Err(contract("ε must lie in (0,1)"));
    }
    let (f, a) = match mode {
        Mode::Deny => {
            let w = match witness {
                Some(w) => w.as_functional(),
                None => deny_margin(norm, point, grid)?.witness,
            };
            (w, point.clone())
        }
        Mode::StarDeny => {
            let f = point.as_functional();
            let a = match witness {
                Some(w) => w.clone(),
                None => star_deny_margin(norm, &f, grid)?.witness,
            };
            (f, a)
        }
    };
    require_unit_functional(norm, &f)?;
    require_unit_vector(norm, &a)?;
    let dual = norm.dual();
    let half = eps / rational::two();
    let two = rational::two();
    let r = rank1_exact(norm, &f, &a);
    let s_eps = slice_max(norm, &f, eps, &a);
    let s_half = slice_max(norm, &f, &half, &a);
    let t_eps = slice_max(&dual, &a.as_functional(), eps, &f.as_vec());
    let t_half = slice_max(&dual, &a.as_functional(), &half, &f.as_vec());
    let i_eps = r < &two - eps;
    let ii_eps = s_eps < &two - eps;
    let iii_eps = t_eps < &two - eps;
    let i_half = r <= &two - &half;
    let ii_half = s_half < &two - &half;
    let iii_half = t_half < &two - &half;
    let holds = (!i_eps || (ii_half && iii_half)) && (!ii_eps || i_half) && (!iii_eps || i_half);
    Ok(CharReport {
        mode,
        f,
        a,
        epsilon: eps.clone(),
        r,
        s_eps,
        s_half,
        t_eps,
        t_half,
        i_eps,
        ii_eps,
        iii_eps,
        i_half,
        ii_half,
        iii_half,
        holds,
    })
}
