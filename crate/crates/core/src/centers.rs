//! Explicit centers on discretized `L1[0,1]` and their F-sums, with exact
//! operator norms and Daugavet defects against rank-one perturbations.
//!
//! Vectors are coordinate lists; functionals are densities, so
//! `<x*, x> = Σ w_i x*_i x_i` and the dual norm is a weighted sup.

use std::ops::Range;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_polygon, hat_values, ClassKind};
use crate::error::{contract, Error, Result};
use crate::geometry::{Functional2, Vec2};
use crate::norm::{line_functional, PolygonNorm};
use crate::rational::{self, Rat};

/// Uniform discretization of `L1[0,1]` with `n` atoms of weight `1/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpace {
    pub n: usize,
    pub weights: Vec<Rat>,
}

pub fn make_discrete_l1(n: usize) -> Result<ModelSpace> {
    if n == 0 {
        return Err(contract("a model space needs at least one atom"));
    }
    Ok(ModelSpace {
        n,
        weights: vec![rational::ratio(1, n as i64); n],
    })
}

impl ModelSpace {
    pub fn norm(&self, x: &[Rat]) -> Rat {
        x.iter().zip(&self.weights).map(|(x, w)| w * x.abs()).sum()
    }

    pub fn dual_norm(&self, x: &[Rat]) -> Rat {
        x.iter().map(|x| x.abs()).max().unwrap_or_else(rational::zero)
    }

    fn norm_f64(&self, x: &[f64]) -> f64 {
        x.iter().map(|x| x.abs()).sum::<f64>() / self.n as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    L1(ModelSpace),
    /// `X1 ⊕_F X2`; coordinates of `X1` come first.
    Sum {
        f: PolygonNorm,
        x1: ModelSpace,
        x2: ModelSpace,
    },
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::L1(x) => x.n,
            Space::Sum { x1, x2, .. } => x1.n + x2.n,
        }
    }

    pub fn components(&self) -> Vec<(Range<usize>, &ModelSpace)> {
        match self {
            Space::L1(x) => vec![(0..x.n, x)],
            Space::Sum { x1, x2, .. } => vec![(0..x1.n, x1), (x1.n..x1.n + x2.n, x2)],
        }
    }

    pub fn weights(&self) -> Vec<Rat> {
        self.components()
            .into_iter()
            .flat_map(|(_, x)| x.weights.iter().cloned())
            .collect()
    }

    pub fn norm(&self, x: &[Rat]) -> Rat {
        match self {
            Space::L1(m) => m.norm(x),
            Space::Sum { f, x1, x2 } => {
                f.eval(&Vec2::new(x1.norm(&x[..x1.n]), x2.norm(&x[x1.n..])))
            }
        }
    }

    pub fn dual_norm(&self, x: &[Rat]) -> Rat {
        match self {
            Space::L1(m) => m.dual_norm(x),
            Space::Sum { f, x1, x2 } => f.dual_eval(&Functional2::new(
                x1.dual_norm(&x[..x1.n]),
                x2.dual_norm(&x[x1.n..]),
            )),
        }
    }

    pub fn pairing(&self, xstar: &[Rat], x: &[Rat]) -> Rat {
        self.weights()
            .iter()
            .zip(xstar.iter().zip(x))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    fn norm_f64(&self, x: &[f64]) -> f64 {
        match self {
            Space::L1(m) => m.norm_f64(x),
            Space::Sum { f, x1, x2 } => {
                let a = [x1.norm_f64(&x[..x1.n]), x2.norm_f64(&x[x1.n..])];
                crate::fpoly::FloatPolygon::new(f).norm(a)
            }
        }
    }

    fn float_norm(&self) -> FloatNorm {
        match self {
            Space::L1(m) => FloatNorm {
                split: m.n,
                poly: None,
            },
            Space::Sum { f, x1, .. } => FloatNorm {
                split: x1.n,
                poly: Some(crate::fpoly::FloatPolygon::new(f)),
            },
        }
    }
}

/// Cached float evaluator for a space's norm, used for screening.
struct FloatNorm {
    split: usize,
    poly: Option<crate::fpoly::FloatPolygon>,
}

impl FloatNorm {
    fn eval(&self, x: &[f64]) -> f64 {
        match &self.poly {
            None => x.iter().map(|v| v.abs()).sum::<f64>() / self.split as f64,
            Some(p) => {
                let n2 = x.len() - self.split;
                let a = x[..self.split].iter().map(|v| v.abs()).sum::<f64>() / self.split as f64;
                let b = x[self.split..].iter().map(|v| v.abs()).sum::<f64>() / n2 as f64;
                p.norm([a, b])
            }
        }
    }
}

/// One summand of a linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// `c` times the identity from domain coordinates `cols` to codomain `rows`.
    Diag {
        rows: Range<usize>,
        cols: Range<usize>,
        c: Rat,
    },
    /// The matrix `u vᵀ`.
    Outer { u: Vec<Rat>, v: Vec<Rat> },
    Dense(Vec<Vec<Rat>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub domain: Space,
    pub codomain: Space,
    pub terms: Vec<Term>,
}

impl LinearMap {
    pub fn new(domain: Space, codomain: Space, terms: Vec<Term>) -> Result<Self> {
        let (m, n) = (codomain.dim(), domain.dim());
        for t in &terms {
            let ok = match t {
                Term::Diag { rows, cols, .. } => rows.len() == cols.len() && rows.end <= m && cols.end <= n,
                Term::Outer { u, v } => u.len() == m && v.len() == n,
                Term::Dense(a) => a.len() == m && a.iter().all(|r| r.len() == n),
            };
            if !ok {
                return Err(contract("term shape does not match the spaces"));
            }
        }
        Ok(Self {
            domain,
            codomain,
            terms,
        })
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        let mut y = vec![rational::zero(); self.codomain.dim()];
        for t in &self.terms {
            match t {
                Term::Diag { rows, cols, c } => {
                    for (i, j) in rows.clone().zip(cols.clone()) {
                        if !x[j].is_zero() {
                            y[i] += c * &x[j];
                        }
                    }
                }
                Term::Outer { u, v } => {
                    let s: Rat = v.iter().zip(x).filter(|(_, b)| !b.is_zero()).map(|(a, b)| a * b).sum();
                    if !s.is_zero() {
                        for (yi, ui) in y.iter_mut().zip(u) {
                            *yi += ui * &s;
                        }
                    }
                }
                Term::Dense(a) => {
                    for (yi, row) in y.iter_mut().zip(a) {
                        *yi += row.iter().zip(x).map(|(p, q)| p * q).sum::<Rat>();
                    }
                }
            }
        }
        y
    }

    fn apply_f64(&self, x: &[f64], terms: &[FloatTerm]) -> Vec<f64> {
        let mut y = vec![0.0; self.codomain.dim()];
        for t in terms {
            match t {
                FloatTerm::Diag { rows, cols, c } => {
                    for (i, j) in rows.clone().zip(cols.clone()) {
                        y[i] += c * x[j];
                    }
                }
                FloatTerm::Outer { u, v } => {
                    let s: f64 = v.iter().zip(x).map(|(a, b)| a * b).sum();
                    for (yi, ui) in y.iter_mut().zip(u) {
                        *yi += ui * s;
                    }
                }
                FloatTerm::Dense(a) => {
                    for (yi, row) in y.iter_mut().zip(a) {
                        *yi += row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>();
                    }
                }
            }
        }
        y
    }

    fn float_terms(&self) -> Vec<FloatTerm> {
        let f = |v: &[Rat]| v.iter().map(rational::to_f64).collect::<Vec<f64>>();
        self.terms
            .iter()
            .map(|t| match t {
                Term::Diag { rows, cols, c } => FloatTerm::Diag {
                    rows: rows.clone(),
                    cols: cols.clone(),
                    c: rational::to_f64(c),
                },
                Term::Outer { u, v } => FloatTerm::Outer { u: f(u), v: f(v) },
                Term::Dense(a) => FloatTerm::Dense(a.iter().map(|r| f(r)).collect()),
            })
            .collect()
    }

    /// Dense matrix, rows indexed by codomain coordinates.
    pub fn matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.domain.dim();
        let cols: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                let mut e = vec![rational::zero(); n];
                e[j] = rational::one();
                self.apply(&e)
            })
            .collect();
        (0..self.codomain.dim())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    /// Matrix of the adjoint acting on densities: `W_X⁻¹ Aᵀ W_Y`.
    pub fn adjoint_matrix(&self) -> Vec<Vec<Rat>> {
        let a = self.matrix();
        let wx = self.domain.weights();
        let wy = self.codomain.weights();
        (0..self.domain.dim())
            .map(|j| {
                (0..self.codomain.dim())
                    .map(|i| &a[i][j] * &wy[i] / &wx[j])
                    .collect()
            })
            .collect()
    }

    pub fn plus(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(contract("operators act between different spaces"));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LinearMap::new(self.domain.clone(), self.codomain.clone(), terms)
    }
}

enum FloatTerm {
    Diag { rows: Range<usize>, cols: Range<usize>, c: f64 },
    Outer { u: Vec<f64>, v: Vec<f64> },
    Dense(Vec<Vec<f64>>),
}

/// Extreme points of the domain ball that can carry the operator norm:
/// `e_i / w_i` on an L1 domain, and `(a1 u, a2 v)` on a sum domain with
/// `(a1, a2)` a positive corner of `B_F` and `u`, `v` such spikes. Signs are
/// absorbed by absoluteness up to the relative sign of the two spikes.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Extreme {
    parts: Vec<(usize, Rat)>,
}

fn domain_extremes(space: &Space) -> Vec<Extreme> {
    match space {
        Space::L1(m) => (0..m.n)
            .map(|i| Extreme {
                parts: vec![(i, rational::one() / &m.weights[i])],
            })
            .collect(),
        Space::Sum { f, x1, x2 } => {
            let mut out = Vec::new();
            for v in f.vertices() {
                match (v.a1.is_zero(), v.a2.is_zero()) {
                    (false, true) => out.extend((0..x1.n).map(|i| Extreme {
                        parts: vec![(i, &v.a1 / &x1.weights[i])],
                    })),
                    (true, false) => out.extend((0..x2.n).map(|j| Extreme {
                        parts: vec![(x1.n + j, &v.a2 / &x2.weights[j])],
                    })),
                    _ => {
                        for i in 0..x1.n {
                            for j in 0..x2.n {
                                for s in [1i64, -1] {
                                    out.push(Extreme {
                                        parts: vec![
                                            (i, &v.a1 / &x1.weights[i]),
                                            (x1.n + j, rational::int(s) * &v.a2 / &x2.weights[j]),
                                        ],
                                    });
                                }
                            }
                        }
                    }
                }
            }
            out
        }
    }
}

/// Cap on exact evaluations; centers have many extreme points tied at the maximum.
const EXACT_CANDIDATES: usize = 64;

/// Operator norm by enumeration of domain extreme points. Candidates are
/// screened in floats; the best ones within `1e-9` of the float maximum
/// (at most [`EXACT_CANDIDATES`]) are evaluated exactly and the largest
/// exact value is returned.
pub fn op_norm(a: &LinearMap) -> Rat {
    let ext = domain_extremes(&a.domain);
    let dim_in = a.domain.dim();
    let dim_out = a.codomain.dim();
    // float columns of the matrix
    let fterms = a.float_terms();
    let cols: Vec<Vec<f64>> = (0..dim_in)
        .into_par_iter()
        .map(|j| {
            let mut e = vec![0.0; dim_in];
            e[j] = 1.0;
            a.apply_f64(&e, &fterms)
        })
        .collect();
    let fnorm = a.codomain.float_norm();
    let vals: Vec<f64> = ext
        .par_iter()
        .map_init(
            || vec![0.0; dim_out],
            |buf, e| {
                buf.iter_mut().for_each(|b| *b = 0.0);
                for (j, c) in &e.parts {
                    let c = rational::to_f64(c);
                    for (b, v) in buf.iter_mut().zip(&cols[*j]) {
                        *b += c * v;
                    }
                }
                fnorm.eval(buf)
            },
        )
        .collect();
    let best = vals.iter().cloned().fold(0.0, f64::max);
    let screen = 1e-9 * best.max(1.0);
    let mut near: Vec<usize> = (0..ext.len()).filter(|&k| vals[k] >= best - screen).collect();
    near.sort_by(|&p, &q| vals[q].total_cmp(&vals[p]));
    near.truncate(EXACT_CANDIDATES);
    near.into_par_iter()
        .map(|k| &ext[k])
        .map(|e| {
            let mut x = vec![rational::zero(); dim_in];
            for (j, c) in &e.parts {
                x[*j] = c.clone();
            }
            a.codomain.norm(&a.apply(&x))
        })
        .max()
        .unwrap_or_else(rational::zero)
}

/// Coefficients `(f1, f2)` of the line through `c1 = (1, hat1)` and
/// `c2 = (hat2, 1)`.
pub fn face_functional(norm: &PolygonNorm) -> Functional2 {
    let (h1, h2) = hat_values(norm);
    let c1 = Vec2::new(rational::one(), h1);
    let c2 = Vec2::new(h2, rational::one());
    line_functional(&c1, &c2)
}

fn diag(rows: Range<usize>, cols: Range<usize>, c: Rat) -> Term {
    Term::Diag { rows, cols, c }
}

pub fn identity(x: &ModelSpace) -> LinearMap {
    let n = x.n;
    LinearMap {
        domain: Space::L1(x.clone()),
        codomain: Space::L1(x.clone()),
        terms: vec![diag(0..n, 0..n, rational::one())],
    }
}

fn sum_space(f: &PolygonNorm, x: &ModelSpace) -> Space {
    Space::Sum {
        f: f.clone(),
        x1: x.clone(),
        x2: x.clone(),
    }
}

fn from_sum_map(f: &PolygonNorm, x: &ModelSpace, coef: &Functional2) -> LinearMap {
    let n = x.n;
    LinearMap {
        domain: sum_space(f, x),
        codomain: Space::L1(x.clone()),
        terms: vec![diag(0..n, 0..n, coef.f1.clone()), diag(0..n, n..2 * n, coef.f2.clone())],
    }
}

fn into_sum_map(f: &PolygonNorm, x: &ModelSpace, coef: &Vec2) -> LinearMap {
    let n = x.n;
    LinearMap {
        domain: Space::L1(x.clone()),
        codomain: sum_space(f, x),
        terms: vec![diag(0..n, 0..n, coef.a1.clone()), diag(n..2 * n, 0..n, coef.a2.clone())],
    }
}

/// `G(x1, x2) = f1 x1 + f2 x2` on `X ⊕_F X`, with `(f1, f2)` supporting the
/// face `[c1, c2]`.
pub fn center_from_sum(f: &PolygonNorm, x: &ModelSpace) -> Result<LinearMap> {
    match classify_polygon(f).kind {
        ClassKind::F { m: 2, n: 2 } | ClassKind::F { m: 2, n: 3 } => {}
        other => {
            return Err(contract(format!(
                "no center from the sum for {other}: F must be F_{{2,2}} or F_{{2,3}} (M2 without the classical sums)"
            )))
        }
    }
    Ok(from_sum_map(f, x, &face_functional(f)))
}

/// `G x = (f1 x, f2 x)` into `X ⊕_F X`, with `(f1, f2)` the face functional
/// of the dual norm read as a vector.
pub fn center_into_sum(f: &PolygonNorm, x: &ModelSpace) -> Result<LinearMap> {
    match classify_polygon(f).kind {
        ClassKind::F { m: 2, n: 2 } | ClassKind::F { m: 3, n: 2 } => {}
        other => {
            return Err(contract(format!(
                "no center into the sum for {other}: F must be F_{{2,2}} or F_{{3,2}} (N2 without the classical sums)"
            )))
        }
    }
    Ok(into_sum_map(f, x, &face_functional(&f.dual()).as_vec()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalSum {
    L1Sum,
    LinfSum,
}

fn positive_coefficients(f1: &Rat, f2: &Rat) -> Result<()> {
    if !f1.is_positive() || !f2.is_positive() {
        return Err(contract("coefficients must be positive"));
    }
    Ok(())
}

fn classical_norm(kind: ClassicalSum) -> PolygonNorm {
    match kind {
        ClassicalSum::L1Sum => PolygonNorm::l1(),
        ClassicalSum::LinfSum => PolygonNorm::linf(),
    }
}

/// `x1 + x2` on the 1-sum, or `f1 x1 + f2 x2` on the ∞-sum (norm `f1 + f2`).
pub fn center_from_sum_classical(kind: ClassicalSum, f1: &Rat, f2: &Rat, x: &ModelSpace) -> Result<LinearMap> {
    positive_coefficients(f1, f2)?;
    if kind == ClassicalSum::L1Sum && (!f1.is_one_rat() || !f2.is_one_rat()) {
        return Err(contract("the 1-sum center uses f1 = f2 = 1"));
    }
    Ok(from_sum_map(&classical_norm(kind), x, &Functional2::new(f1.clone(), f2.clone())))
}

/// `(x, x)` into the ∞-sum, or `(f1 x, f2 x)` into the 1-sum (norm `f1 + f2`).
pub fn center_into_sum_classical(kind: ClassicalSum, f1: &Rat, f2: &Rat, x: &ModelSpace) -> Result<LinearMap> {
    positive_coefficients(f1, f2)?;
    if kind == ClassicalSum::LinfSum && (!f1.is_one_rat() || !f2.is_one_rat()) {
        return Err(contract("the ∞-sum center uses f1 = f2 = 1"));
    }
    Ok(into_sum_map(&classical_norm(kind), x, &Vec2::new(f1.clone(), f2.clone())))
}

trait IsOne {
    fn is_one_rat(&self) -> bool;
}

impl IsOne for Rat {
    fn is_one_rat(&self) -> bool {
        *self == rational::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneOp {
    pub functional: Vec<Rat>,
    pub vector: Vec<Rat>,
    pub map: LinearMap,
}

/// `x ↦ <functional, x> vector`; the functional is a density on the domain.
pub fn rank_one(space_in: &Space, space_out: &Space, functional: Vec<Rat>, vector: Vec<Rat>) -> Result<RankOneOp> {
    if functional.len() != space_in.dim() || vector.len() != space_out.dim() {
        return Err(contract(format!(
            "rank-one shapes {}x{} do not match spaces {}x{}",
            vector.len(),
            functional.len(),
            space_out.dim(),
            space_in.dim()
        )));
    }
    let row: Vec<Rat> = functional.iter().zip(space_in.weights()).map(|(a, w)| a * w).collect();
    let map = LinearMap::new(
        space_in.clone(),
        space_out.clone(),
        vec![Term::Outer {
            u: vector.clone(),
            v: row,
        }],
    )?;
    Ok(RankOneOp {
        functional,
        vector,
        map,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub n: usize,
    #[serde(rename = "normG", with = "rational::serde_text")]
    pub norm_g: Rat,
    #[serde(rename = "normT", with = "rational::serde_text")]
    pub norm_t: Rat,
    #[serde(rename = "normSum", with = "rational::serde_text")]
    pub norm_sum: Rat,
    #[serde(with = "rational::serde_text")]
    pub defect: Rat,
    pub label: String,
}

impl DefectReport {
    pub fn defect_f64(&self) -> f64 {
        rational::to_f64(&self.defect)
    }
}

/// `‖G‖ + ‖T‖ - ‖G + T‖`, all exact.
pub fn daugavet_defect(g: &LinearMap, t: &RankOneOp) -> Result<DefectReport> {
    let sum = g.plus(&t.map)?;
    let norm_g = op_norm(g);
    let norm_t = op_norm(&t.map);
    let norm_sum = op_norm(&sum);
    let defect = &norm_g + &norm_t - &norm_sum;
    Ok(DefectReport {
        n: g.domain.components()[0].1.n,
        norm_g,
        norm_t,
        norm_sum,
        defect,
        label: String::new(),
    })
}

/// Which operator a convergence study refines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CenterSpec {
    Identity,
    FromSum(PolygonNorm),
    IntoSum(PolygonNorm),
}

impl CenterSpec {
    pub fn build(&self, n: usize) -> Result<LinearMap> {
        let x = make_discrete_l1(n)?;
        match self {
            CenterSpec::Identity => Ok(identity(&x)),
            CenterSpec::FromSum(f) => center_from_sum(f, &x),
            CenterSpec::IntoSum(f) => center_into_sum(f, &x),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CenterSpec::Identity => "identity".into(),
            CenterSpec::FromSum(f) => format!("from_sum {}", classify_polygon(f).kind),
            CenterSpec::IntoSum(f) => format!("into_sum {}", classify_polygon(f).kind),
        }
    }
}

/// Rank-one operator given by step data at a coarse resolution `m`: one
/// step list per component of the domain (functional) and codomain (vector).
/// Both are normalized to norm one when embedded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRankOne {
    pub m: usize,
    pub functional: Vec<Vec<i64>>,
    pub vector: Vec<Vec<i64>>,
}

/// Step function with values `steps` on `n` atoms; `n` must be a multiple of the step count.
pub fn embed_steps(steps: &[Rat], n: usize) -> Result<Vec<Rat>> {
    let m = steps.len();
    if m == 0 || n % m != 0 {
        return Err(contract(format!("resolution {n} is not a multiple of {m}")));
    }
    Ok((0..n).map(|i| steps[i * m / n].clone()).collect())
}

impl StepRankOne {
    pub fn build(&self, g: &LinearMap) -> Result<RankOneOp> {
        let comps_in = g.domain.components();
        let comps_out = g.codomain.components();
        if self.functional.len() != comps_in.len() || self.vector.len() != comps_out.len() {
            return Err(contract("step data does not match the component structure"));
        }
        let lift = |data: &[Vec<i64>], comps: &[(Range<usize>, &ModelSpace)]| -> Result<Vec<Rat>> {
            let mut out = Vec::new();
            for (steps, (_, x)) in data.iter().zip(comps) {
                if steps.len() != self.m {
                    return Err(contract(format!("expected {} steps", self.m)));
                }
                let r: Vec<Rat> = steps.iter().map(|s| rational::int(*s)).collect();
                out.extend(embed_steps(&r, x.n)?);
            }
            Ok(out)
        };
        let mut phi = lift(&self.functional, &comps_in)?;
        let mut v = lift(&self.vector, &comps_out)?;
        let nphi = g.domain.dual_norm(&phi);
        let nv = g.codomain.norm(&v);
        if nphi.is_zero() || nv.is_zero() {
            return Err(contract("step data must be nonzero"));
        }
        phi.iter_mut().for_each(|p| *p /= &nphi);
        v.iter_mut().for_each(|p| *p /= &nv);
        rank_one(&g.domain, &g.codomain, phi, v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub rho: f64,
    pub tol: f64,
    /// Doubling checks start at this resolution.
    pub trend_from: usize,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            rho: 0.75,
            tol: 1e-12,
            trend_from: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    /// Least-squares slope of `log defect` against `log n` over nonzero defects.
    pub slope_estimate: Option<f64>,
    /// Largest `n · defect(n)` over all but the finest resolution.
    #[serde(rename = "C_estimate")]
    pub c_estimate: f64,
    pub pass: bool,
}

pub fn convergence_study(
    builder: &CenterSpec,
    t_spec: &StepRankOne,
    n_list: &[usize],
    opts: &StudyOptions,
) -> Result<(Vec<DefectReport>, StudySummary)> {
    for &n in n_list {
        if n == 0 || n % t_spec.m != 0 {
            return Err(contract(format!("resolution {n} is not a multiple of {}", t_spec.m)));
        }
    }
    let reports: Vec<DefectReport> = n_list
        .par_iter()
        .map(|&n| {
            let g = builder.build(n)?;
            let t = t_spec.build(&g)?;
            let mut r = daugavet_defect(&g, &t)?;
            r.n = n;
            r.label = builder.label();
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((reports.clone(), summarize(&reports, opts)))
}

pub fn summarize(reports: &[DefectReport], opts: &StudyOptions) -> StudySummary {
    let d: Vec<(usize, f64)> = reports.iter().map(|r| (r.n, r.defect_f64())).collect();
    let nonneg = reports.iter().all(|r| !r.defect.is_negative());
    let mut trend = true;
    for w in d.windows(2) {
        let ((n0, d0), (n1, d1)) = (w[0], w[1]);
        if n1 == 2 * n0 && n0 >= opts.trend_from && d1 > opts.rho * d0 + opts.tol {
            trend = false;
        }
    }
    let c_estimate = d[..d.len().saturating_sub(1)]
        .iter()
        .map(|(n, x)| *n as f64 * x)
        .fold(0.0, f64::max);
    let bound_ok = match d.last() {
        Some(&(n, x)) if d.len() > 1 => x <= c_estimate / n as f64 * (1.0 + 1e-9) + opts.tol,
        _ => true,
    };
    let pts: Vec<(f64, f64)> = d
        .iter()
        .filter(|(_, x)| *x > 0.0)
        .map(|(n, x)| ((*n as f64).ln(), x.ln()))
        .collect();
    let slope_estimate = (pts.len() >= 2).then(|| {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    StudySummary {
        slope_estimate,
        c_estimate,
        pass: nonneg && trend && bound_ok,
    }
}

pub fn defect_csv(reports: &[DefectReport]) -> String {
    let mut s = String::from("n,normG,normT,normSum,defect\n");
    for r in reports {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            rational::to_f64(&r.norm_g),
            rational::to_f64(&r.norm_t),
            rational::to_f64(&r.norm_sum),
            r.defect_f64()
        ));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceWitness {
    pub found: bool,
    /// Best candidate, or `None` when no candidate reached the slice.
    #[serde(skip)]
    pub x: Option<Vec<Rat>>,
    pub xstar_value: f64,
    pub value: f64,
}

/// Candidate atoms: those where `|x*|` is within `1e-12` of its maximum,
/// thinned to at most `k` evenly spread ones.
fn peak_atoms(xs: &[f64], k: usize) -> Vec<usize> {
    let top = xs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let peaks: Vec<usize> = (0..xs.len()).filter(|&i| xs[i].abs() >= top - 1e-12).collect();
    if peaks.len() <= k {
        return peaks;
    }
    (0..k).map(|t| peaks[t * (peaks.len() - 1) / (k - 1)]).collect()
}

/// Spike witnesses for the slice criterion: `x` is a sign-aligned spike on
/// a peak atom of `x*` (on an L1 domain), or `(a1 u, a2 v)` with `u`, `v`
/// such spikes and `(a1, a2)` a positive corner of `B_F` (on a sum domain).
/// Succeeds when `x*(x) > 1 - ε` and `‖Gx + y0‖ > 2 - ε`.
pub fn slice_criterion_witness(g: &LinearMap, y0: &[Rat], xstar: &[Rat], eps: f64) -> Result<SliceWitness> {
    const K: usize = 4;
    if y0.len() != g.codomain.dim() || xstar.len() != g.domain.dim() {
        return Err(contract("witness data does not match the spaces"));
    }
    let fterms = g.float_terms();
    let xs: Vec<f64> = xstar.iter().map(rational::to_f64).collect();
    let yf: Vec<f64> = y0.iter().map(rational::to_f64).collect();
    let comps = g.domain.components();
    let spikes: Vec<Vec<(usize, f64)>> = comps
        .iter()
        .map(|(r, x)| {
            peak_atoms(&xs[r.clone()], K)
                .into_iter()
                .map(|i| {
                    let j = r.start + i;
                    let sign = if xs[j] < 0.0 { -1.0 } else { 1.0 };
                    (j, sign * x.n as f64)
                })
                .collect()
        })
        .collect();
    let mut cands: Vec<Vec<(usize, f64)>> = Vec::new();
    match &g.domain {
        Space::L1(_) => cands.extend(spikes[0].iter().map(|s| vec![*s])),
        Space::Sum { f, .. } => {
            for v in f.vertices() {
                let (a1, a2) = (rational::to_f64(&v.a1), rational::to_f64(&v.a2));
                for &(i, si) in &spikes[0] {
                    for &(j, sj) in &spikes[1] {
                        let mut c = Vec::new();
                        if a1 > 0.0 {
                            c.push((i, a1 * si));
                        }
                        if a2 > 0.0 {
                            c.push((j, a2 * sj));
                        }
                        cands.push(c);
                    }
                }
            }
        }
    }
    let w: Vec<f64> = g.domain.weights().iter().map(rational::to_f64).collect();
    let dim = g.domain.dim();
    let mut best: Option<(f64, f64, Vec<(usize, f64)>)> = None;
    for c in cands {
        let xv: f64 = c.iter().map(|(j, a)| w[*j] * xs[*j] * a).sum();
        let mut x = vec![0.0; dim];
        for (j, a) in &c {
            x[*j] += a;
        }
        let mut y = g.apply_f64(&x, &fterms);
        y.iter_mut().zip(&yf).for_each(|(a, b)| *a += b);
        let val = g.codomain.norm_f64(&y);
        let better = match &best {
            None => true,
            Some((bx, bv, _)) => {
                let ok_new = xv > 1.0 - eps;
                let ok_old = *bx > 1.0 - eps;
                (ok_new && !ok_old) || (ok_new == ok_old && val > *bv)
            }
        };
        if better {
            best = Some((xv, val, c));
        }
    }
    let Some((xv, val, c)) = best else {
        return Ok(SliceWitness {
            found: false,
            x: None,
            xstar_value: 0.0,
            value: 0.0,
        });
    };
    let mut x = vec![rational::zero(); dim];
    for (j, a) in &c {
        x[*j] = rational::from_f64(*a).map_err(|e| Error::Contract(e.to_string()))?;
    }
    Ok(SliceWitness {
        found: xv > 1.0 - eps && val > 2.0 - eps,
        x: Some(x),
        xstar_value: xv,
        value: val,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fnl, v};
    use crate::rational::{int, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(vs: Vec<Vec2>) -> PolygonNorm {
        PolygonNorm::new(vs).unwrap()
    }
    fn f22() -> PolygonNorm {
        poly(vec![Vec2::e1(), v(1, 1, 1, 2), Vec2::e2()])
    }
    fn f32() -> PolygonNorm {
        poly(vec![Vec2::e1(), v(9, 10, 9, 10), Vec2::e2()])
    }
    fn f23() -> PolygonNorm {
        poly(vec![Vec2::e1(), v(1, 1, 3, 10), v(3, 10, 1, 1), Vec2::e2()])
    }
    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|x| int(*x)).collect()
    }

    /// Brute force over a dense grid of the sum ball: `x = (a1 u, a2 v)`
    /// with `(a1, a2)` on a fine sphere grid and `u`, `v` signed spikes.
    fn op_norm_oracle(a: &LinearMap) -> f64 {
        let dim = a.domain.dim();
        let m = a.matrix();
        let mf: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(rational::to_f64).collect()).collect();
        let w: Vec<f64> = a.domain.weights().iter().map(rational::to_f64).collect();
        let apply = |x: &[f64]| -> Vec<f64> { mf.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect() };
        let mut best: f64 = 0.0;
        match &a.domain {
            Space::L1(_) => {
                for j in 0..dim {
                    let mut x = vec![0.0; dim];
                    x[j] = 1.0 / w[j];
                    best = best.max(a.codomain.norm_f64(&apply(&x)));
                }
            }
            Space::Sum { f, x1, .. } => {
                let fp = crate::fpoly::FloatPolygon::new(f);
                for k in 0..=400 {
                    let th = std::f64::consts::FRAC_PI_2 * k as f64 / 400.0;
                    let (s, c) = th.sin_cos();
                    let r = fp.norm([c, s]);
                    let (a1, a2) = (c / r, s / r);
                    for i in 0..x1.n {
                        for j in x1.n..dim {
                            for sg in [1.0, -1.0] {
                                let mut x = vec![0.0; dim];
                                x[i] = a1 / w[i];
                                x[j] = sg * a2 / w[j];
                                best = best.max(a.codomain.norm_f64(&apply(&x)));
                            }
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn model_space_examples() {
        let x = make_discrete_l1(1).unwrap();
        assert_eq!(x.norm(&[int(-3)]), int(3));
        let x = make_discrete_l1(4).unwrap();
        assert_eq!(x.norm(&ints(&[1, -1, 2, 0])), int(1));
        let x = make_discrete_l1(8).unwrap();
        let step = embed_steps(&ints(&[1, -1]), 8).unwrap();
        assert_eq!(step, ints(&[1, 1, 1, 1, -1, -1, -1, -1]));
        assert_eq!(x.norm(&step), int(1));
        assert!(make_discrete_l1(0).is_err());
        assert!(embed_steps(&ints(&[1, 2, 3]), 8).is_err());
    }

    #[test]
    fn op_norm_examples() {
        let x4 = make_discrete_l1(4).unwrap();
        assert_eq!(op_norm(&identity(&x4)), int(1));
        let x8 = make_discrete_l1(8).unwrap();
        let g = center_from_sum(&f22(), &x8).unwrap();
        assert_eq!(op_norm(&g), int(1));
        let s = Space::L1(x8.clone());
        let mut vec = vec![ratio(1, 2); 8];
        vec[0] = ratio(1, 2);
        let t = rank_one(&s, &s, vec![int(1); 8], vec).unwrap();
        assert_eq!(op_norm(&t.map), ratio(1, 2));
    }

    #[test]
    fn center_coefficients() {
        assert_eq!(face_functional(&f22()), fnl(1, 2, 1, 1));
        assert_eq!(face_functional(&f23()), fnl(10, 13, 10, 13));
        let p = poly(vec![Vec2::e1(), v(1, 1, 1, 4), v(1, 2, 1, 1), Vec2::e2()]);
        assert_eq!(face_functional(&p), fnl(6, 7, 4, 7));
        let x = make_discrete_l1(2).unwrap();
        let g = center_into_sum(&f32(), &x).unwrap();
        assert_eq!(g.terms[0], diag(0..2, 0..2, ratio(9, 10)));
        assert_eq!(g.terms[1], diag(2..4, 0..2, ratio(9, 10)));
        let g = center_into_sum(&f22(), &x).unwrap();
        assert_eq!(g.terms[0], diag(0..2, 0..2, int(1)));
        assert_eq!(g.terms[1], diag(2..4, 0..2, ratio(1, 2)));
    }

    #[test]
    fn centers_reject_wrong_classes() {
        let x = make_discrete_l1(4).unwrap();
        assert!(center_from_sum(&f32(), &x).is_err());
        assert!(center_from_sum(&PolygonNorm::l1(), &x).is_err());
        assert!(center_into_sum(&f23(), &x).is_err());
        assert!(center_into_sum(&PolygonNorm::linf(), &x).is_err());
    }

    #[test]
    fn center_norms_are_one() {
        for n in [4, 16] {
            let x = make_discrete_l1(n).unwrap();
            for f in [f22(), f23()] {
                assert_eq!(op_norm(&center_from_sum(&f, &x).unwrap()), int(1));
            }
            for f in [f22(), f32()] {
                assert_eq!(op_norm(&center_into_sum(&f, &x).unwrap()), int(1));
            }
        }
    }

    #[test]
    fn classical_centers() {
        let x = make_discrete_l1(8).unwrap();
        let one = int(1);
        let g = center_from_sum_classical(ClassicalSum::L1Sum, &one, &one, &x).unwrap();
        assert_eq!(op_norm(&g), int(1));
        let g = center_from_sum_classical(ClassicalSum::LinfSum, &one, &one, &x).unwrap();
        assert_eq!(op_norm(&g), int(2));
        let g = center_from_sum_classical(ClassicalSum::LinfSum, &ratio(1, 3), &ratio(2, 3), &x).unwrap();
        assert_eq!(op_norm(&g), int(1));
        assert!(center_from_sum_classical(ClassicalSum::LinfSum, &int(0), &one, &x).is_err());
        assert!(center_from_sum_classical(ClassicalSum::L1Sum, &int(2), &one, &x).is_err());
        let g = center_into_sum_classical(ClassicalSum::LinfSum, &one, &one, &x).unwrap();
        assert_eq!(op_norm(&g), int(1));
        let g = center_into_sum_classical(ClassicalSum::L1Sum, &ratio(1, 2), &ratio(1, 2), &x).unwrap();
        assert_eq!(op_norm(&g), int(1));
        let g = center_into_sum_classical(ClassicalSum::L1Sum, &int(2), &int(3), &x).unwrap();
        assert_eq!(op_norm(&g), int(5));
    }

    #[test]
    fn rank_one_examples() {
        let x = make_discrete_l1(8).unwrap();
        let s = Space::L1(x);
        let t = rank_one(&s, &s, vec![int(1); 8], vec![int(1); 8]).unwrap();
        assert_eq!(op_norm(&t.map), int(1));
        let mut e = vec![int(0); 8];
        e[0] = int(1);
        let t = rank_one(&s, &s, e, ints(&[1, -1, 1, -1, 0, 0, 2, 0])).unwrap();
        assert_eq!(op_norm(&t.map), ratio(3, 4));
        let t = rank_one(&s, &s, vec![int(1); 8], vec![int(0); 8]).unwrap();
        assert_eq!(op_norm(&t.map), int(0));
        assert!(rank_one(&s, &s, vec![int(1); 4], vec![int(0); 8]).is_err());
    }

    #[test]
    fn defect_examples() {
        let x = make_discrete_l1(8).unwrap();
        let s = Space::L1(x.clone());
        let mut spike = vec![int(0); 8];
        spike[0] = int(8);
        let t = rank_one(&s, &s, vec![int(1); 8], spike.clone()).unwrap();
        let d = daugavet_defect(&identity(&x), &t).unwrap();
        assert_eq!(d.norm_sum, int(2));
        assert!(d.defect.is_zero());
        // evaluation at atom 0 against the negative spike there
        let mut ev = vec![int(0); 8];
        ev[0] = int(1);
        let neg: Vec<Rat> = spike.iter().map(|v| -v.clone()).collect();
        let t = rank_one(&s, &s, ev, neg).unwrap();
        let d = daugavet_defect(&identity(&x), &t).unwrap();
        assert_eq!(d.defect, int(1));
    }

    #[test]
    fn sum_domain_norm_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [f22(), f23()] {
            let x = make_discrete_l1(3).unwrap();
            let g = center_from_sum(&f, &x).unwrap();
            for _ in 0..5 {
                let phi: Vec<Rat> = (0..6).map(|_| int(rng.gen_range(-3..=3))).collect();
                let vv: Vec<Rat> = (0..3).map(|_| int(rng.gen_range(-3..=3))).collect();
                let t = rank_one(&g.domain, &g.codomain, phi, vv).unwrap();
                let sum = g.plus(&t.map).unwrap();
                let exact = rational::to_f64(&op_norm(&sum));
                let oracle = op_norm_oracle(&sum);
                assert!(exact >= oracle - 1e-9, "{exact} < {oracle}");
                assert!(exact <= oracle + 1e-2, "{exact} > {oracle}");
            }
        }
    }

    /// `‖A*‖` from the sup-type ball of the dual codomain, by brute force over its sign vertices.
    fn adjoint_norm_oracle(a: &LinearMap) -> Rat {
        let adj = a.adjoint_matrix();
        let dim = a.codomain.dim();
        let corners: Vec<Vec<Rat>> = match &a.codomain {
            Space::L1(_) => (0..1u32 << dim)
                .map(|mask| (0..dim).map(|i| if mask >> i & 1 == 1 { int(1) } else { int(-1) }).collect())
                .collect(),
            Space::Sum { f, x1, .. } => {
                let mut out = Vec::new();
                for b in f.dual().vertices() {
                    for mask in 0..1u32 << dim {
                        out.push(
                            (0..dim)
                                .map(|i| {
                                    let s = if mask >> i & 1 == 1 { int(1) } else { int(-1) };
                                    s * if i < x1.n { &b.a1 } else { &b.a2 }
                                })
                                .collect(),
                        );
                    }
                }
                out
            }
        };
        corners
            .iter()
            .map(|y| {
                let x: Vec<Rat> = adj.iter().map(|row| row.iter().zip(y).map(|(p, q)| p * q).sum()).collect();
                a.domain.dual_norm(&x)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn adjoint_norms_agree() {
        let x = make_discrete_l1(3).unwrap();
        let ops = vec![
            center_from_sum(&f22(), &x).unwrap(),
            center_from_sum(&f23(), &x).unwrap(),
            center_into_sum(&f32(), &x).unwrap(),
            identity(&x),
        ];
        for g in ops {
            let t = rank_one(
                &g.domain,
                &g.codomain,
                (0..g.domain.dim()).map(|i| int(i as i64 % 3 - 1)).collect(),
                (0..g.codomain.dim()).map(|i| int(2 - i as i64 % 4)).collect(),
            )
            .unwrap();
            let sum = g.plus(&t.map).unwrap();
            assert_eq!(op_norm(&sum), adjoint_norm_oracle(&sum));
            assert_eq!(op_norm(&g), adjoint_norm_oracle(&g));
        }
    }

    #[test]
    fn adjoint_center_identity() {
        let x = make_discrete_l1(4).unwrap();
        for f in [f22(), f32()] {
            let g = center_into_sum(&f, &x).unwrap();
            let d = center_from_sum(&f.dual(), &x).unwrap();
            assert_eq!(g.adjoint_matrix(), d.matrix());
        }
    }

    #[test]
    fn identity_study_decays() {
        let t = StepRankOne {
            m: 4,
            functional: vec![vec![1, -2, 2, 1]],
            vector: vec![vec![-1, 1, 2, 1]],
        };
        let (reports, summary) =
            convergence_study(&CenterSpec::Identity, &t, &[8, 16, 32, 64], &StudyOptions::default()).unwrap();
        assert!(summary.pass, "{reports:?}");
        for r in &reports {
            assert!(!r.defect.is_negative());
        }
        let csv = defect_csv(&reports);
        assert!(csv.starts_with("n,normG,normT,normSum,defect\n8,"));
        assert!(convergence_study(&CenterSpec::Identity, &t, &[6], &StudyOptions::default()).is_err());
    }

    #[test]
    fn identity_defect_formula() {
        // x* = -1 on the first half, v > 0: every peak atom has opposite signs,
        // the defect is 2 |v_j| / n at the best such atom
        let t = StepRankOne {
            m: 2,
            functional: vec![vec![-1, -1]],
            vector: vec![vec![1, 3]],
        };
        let g = CenterSpec::Identity.build(16).unwrap();
        let r = daugavet_defect(&g, &t.build(&g).unwrap()).unwrap();
        // v normalized: (1/2, 3/2); smallest |v_j| on the peak atoms is 1/2
        assert_eq!(r.defect, ratio(2, 1) * ratio(1, 2) / int(16));
    }

    #[test]
    fn slice_witness_examples() {
        let f = f22();
        let x = make_discrete_l1(256).unwrap();
        let g = center_from_sum(&f, &x).unwrap();
        let y0 = vec![int(1); 256];
        let xstar = vec![int(1); 512];
        let w = slice_criterion_witness(&g, &y0, &xstar, 0.1).unwrap();
        assert!(w.found && w.value > 1.9);
        let w = slice_criterion_witness(&g, &y0, &xstar, 0.01).unwrap();
        assert!(w.found && w.value > 1.99, "{w:?}");
        let x = make_discrete_l1(64).unwrap();
        let mut spike = vec![int(0); 64];
        spike[5] = int(64);
        let w = slice_criterion_witness(&identity(&x), &spike, &vec![int(1); 64], 0.1).unwrap();
        assert!(w.found);
        assert_eq!(w.value, 2.0);
    }
}
