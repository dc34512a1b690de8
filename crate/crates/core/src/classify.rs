//! Classes of absolute normalized norms by the shape of the positive sphere.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::approx::{edge_lower_bound, EdgeBound};
use crate::error::{contract, Result};
use crate::norm::{AbsNorm2, BlackBoxNorm, PolygonNorm};
use crate::rational::{self, Rat};

/// Probe count used for the edge lower bound of black-box norms.
pub const EDGE_PROBES: usize = 64;
const EDGE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    L1,
    LInf,
    /// `F_{m,n}`: `n` edges, `m` in `{n-1, n, n+1}` from the hat values.
    F { m: usize, n: usize },
    NonPolygonalOrLarge,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::L1 => write!(f, "L1"),
            ClassKind::LInf => write!(f, "LInf"),
            ClassKind::F { m, n } => write!(f, "F_{{{m},{n}}}"),
            ClassKind::NonPolygonalOrLarge => write!(f, "NonPolygonalOrLarge"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassTag {
    pub kind: ClassKind,
    /// Exact edge count for polygons, certified lower bound for black boxes.
    pub edges: usize,
    pub hat1: Option<Rat>,
    pub hat2: Option<Rat>,
    /// False when `edges` is only a lower bound.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub in_n2: bool,
    pub in_n3: bool,
    pub in_m2: bool,
    /// False when a flag rests on an approximation rather than a certificate.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub domain_possible: bool,
    pub range_possible: bool,
    pub reason: String,
}

/// Tops of the vertical edge at `a1 = 1` and the horizontal edge at `a2 = 1`.
pub fn hat_values(norm: &PolygonNorm) -> (Rat, Rat) {
    let vs = norm.vertices();
    let one = rational::one();
    let v1 = &vs[1];
    let w = &vs[vs.len() - 2];
    let hat1 = if v1.a1 == one { v1.a2.clone() } else { rational::zero() };
    let hat2 = if w.a2 == one { w.a1.clone() } else { rational::zero() };
    (hat1, hat2)
}

pub fn hat_values_of(norm: &AbsNorm2) -> Result<(Rat, Rat)> {
    Ok(hat_values(norm.require_polygon("hat_values")?))
}

/// Number of maximal segments of the positive sphere.
pub fn edge_count(norm: &PolygonNorm) -> usize {
    norm.edge_count()
}

pub fn classify_polygon(norm: &PolygonNorm) -> ClassTag {
    let (hat1, hat2) = hat_values(norm);
    let n = norm.edge_count();
    let kind = if norm.is_l1() {
        ClassKind::L1
    } else if norm.is_linf() {
        ClassKind::LInf
    } else {
        let zeros = [&hat1, &hat2].iter().filter(|h| num_traits::Zero::is_zero(**h)).count();
        ClassKind::F { m: n - 1 + zeros, n }
    };
    ClassTag {
        kind,
        edges: n,
        hat1: Some(hat1),
        hat2: Some(hat2),
        exact: true,
    }
}

pub fn black_box_edges(bb: &BlackBoxNorm) -> Result<EdgeBound> {
    edge_lower_bound(bb, EDGE_PROBES, EDGE_TOL)
}

pub fn classify_norm(norm: &AbsNorm2) -> Result<ClassTag> {
    match norm {
        AbsNorm2::Polygonal(p) => Ok(classify_polygon(p)),
        AbsNorm2::BlackBox(bb) => {
            let bound = black_box_edges(bb)?;
            Ok(ClassTag {
                kind: ClassKind::NonPolygonalOrLarge,
                edges: bound.lower_bound,
                hat1: None,
                hat2: None,
                exact: false,
            })
        }
    }
}

pub fn membership_of_tag(tag: &ClassTag) -> Membership {
    match tag.kind {
        ClassKind::NonPolygonalOrLarge => {
            // only "more than three edges" is ever certified from samples
            let large = tag.edges > 3;
            Membership {
                in_n2: false,
                in_n3: false,
                in_m2: false,
                certified: large,
            }
        }
        kind => Membership {
            in_n2: tag.edges <= 2,
            in_n3: tag.edges <= 3,
            in_m2: matches!(
                kind,
                ClassKind::L1 | ClassKind::LInf | ClassKind::F { m: 2, n: 2 } | ClassKind::F { m: 2, n: 3 }
            ),
            certified: tag.exact,
        },
    }
}

pub fn membership(norm: &AbsNorm2) -> Result<Membership> {
    Ok(membership_of_tag(&classify_norm(norm)?))
}

pub fn admissibility_of_tag(tag: &ClassTag) -> Admissibility {
    let m = membership_of_tag(tag);
    let class = tag.kind.to_string();
    let reason = match tag.kind {
        ClassKind::L1 | ClassKind::LInf => format!(
            "{class} is a classical sum; explicit centers exist in both directions"
        ),
        ClassKind::F { m: 2, n: 2 } => format!(
            "{class} has two edges and exactly one vanishing hat value; it lies in both M2 and N2"
        ),
        ClassKind::F { m: 2, n: 3 } => format!(
            "{class} has three edges with both hat values positive; in M2 so a center from the sum exists, but not in N2 so no center into the sum exists"
        ),
        ClassKind::F { m: 3, n: 2 } => format!(
            "{class} has two edges and both hat values vanish; in N2 so a center into the sum exists, but not in M2 so no center from the sum exists"
        ),
        ClassKind::F { m, n } => format!(
            "{class} has {n} edges (m = {m}); outside M2 and N2, the sum is neither a domain nor a range"
        ),
        ClassKind::NonPolygonalOrLarge if m.certified => format!(
            "{class}: at least {} edges certified from boundary probes; more than three edges puts the norm outside N3, hence outside M2 and N2",
            tag.edges
        ),
        ClassKind::NonPolygonalOrLarge => format!(
            "{class}: only {} edges certified from boundary probes; verdict is not certified",
            tag.edges
        ),
    };
    Admissibility {
        domain_possible: m.in_m2,
        range_possible: m.in_n2,
        reason,
    }
}

pub fn admissibility(norm: &AbsNorm2) -> Result<Admissibility> {
    Ok(admissibility_of_tag(&classify_norm(norm)?))
}

/// The class of the dual swaps the indices: `F_{m,n}` goes to `F_{n,m}`,
/// and the named classes swap with each other.
pub fn duality_swap_check(norm: &PolygonNorm) -> bool {
    let tag = classify_polygon(norm);
    let dual = classify_polygon(&norm.dual());
    match (tag.kind, dual.kind) {
        (ClassKind::L1, ClassKind::LInf) | (ClassKind::LInf, ClassKind::L1) => true,
        (ClassKind::F { m, n }, ClassKind::F { m: dm, n: dn }) => dm == n && dn == m,
        _ => false,
    }
}

pub fn duality_swap_check_of(norm: &AbsNorm2) -> Result<bool> {
    let p = norm.require_polygon("duality_swap_check")?;
    if matches!(classify_polygon(p).kind, ClassKind::NonPolygonalOrLarge) {
        return Err(contract("duality_swap_check needs a classified polygon"));
    }
    Ok(duality_swap_check(p))
}

/// Report shape used by the `decide` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub class: String,
    pub edges: usize,
    pub hat1: Option<String>,
    pub hat2: Option<String>,
    #[serde(rename = "in_N2")]
    pub in_n2: bool,
    #[serde(rename = "in_N3")]
    pub in_n3: bool,
    #[serde(rename = "in_M2")]
    pub in_m2: bool,
    pub domain_possible: bool,
    pub range_possible: bool,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_edges: Option<String>,
}

pub fn verdict(norm: &AbsNorm2) -> Result<Verdict> {
    let tag = classify_norm(norm)?;
    let mem = membership_of_tag(&tag);
    let adm = admissibility_of_tag(&tag);
    let certified_edges = match tag.kind {
        ClassKind::NonPolygonalOrLarge if mem.certified => Some(">3".to_string()),
        ClassKind::NonPolygonalOrLarge => Some(format!(">={}", tag.edges)),
        _ => None,
    };
    Ok(Verdict {
        class: tag.kind.to_string(),
        edges: tag.edges,
        hat1: tag.hat1.as_ref().map(rational::format),
        hat2: tag.hat2.as_ref().map(rational::format),
        in_n2: mem.in_n2,
        in_n3: mem.in_n3,
        in_m2: mem.in_m2,
        domain_possible: adm.domain_possible,
        range_possible: adm.range_possible,
        reason: adm.reason,
        certified_edges,
    })
}
