//! Norm-spec files.
//!
//! ```json
//! {"type":"polygon","vertices":[["1","0"],["1","1/2"],["0","1"]]}
//! {"type":"lp","p":"2"}
//! {"type":"blackbox-samples","theta_values":[1.0, 0.93, ..., 1.0]}
//! ```
//!
//! `theta_values[k]` is the norm of the unit direction at angle
//! `θ_k = k·π/(2(N−1))`; between samples the boundary is the chord through
//! neighbouring sphere points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::norm::{validate_norm, AbsNorm2, BlackBoxNorm, NormCandidate, PolygonNorm};
use crate::rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NormSpec {
    Polygon { vertices: Vec<[String; 2]> },
    Lp { p: String },
    BlackboxSamples { theta_values: Vec<f64> },
}

fn malformed_json(e: serde_json::Error) -> Error {
    // tagged enums buffer their content, so field errors come without a position
    if e.line() == 0 {
        Error::Malformed(e.to_string())
    } else {
        Error::Malformed(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}

pub fn parse_spec(text: &str) -> Result<NormSpec> {
    serde_json::from_str(text).map_err(malformed_json)
}

/// Parses and validates a norm-spec document.
pub fn parse_norm(text: &str) -> Result<AbsNorm2> {
    build_norm(&parse_spec(text)?)
}

fn detail(e: Error) -> String {
    match e {
        Error::Malformed(m) => m,
        e => e.to_string(),
    }
}

/// Unvalidated norm described by a spec; only syntax is checked here.
pub fn candidate(spec: &NormSpec) -> Result<NormCandidate> {
    match spec {
        NormSpec::Polygon { vertices } => {
            let mut vs = Vec::with_capacity(vertices.len());
            for (i, [x, y]) in vertices.iter().enumerate() {
                let field = |j: usize, e: Error| Error::Malformed(format!("vertices[{i}][{j}]: {}", detail(e)));
                vs.push(Vec2::new(
                    rational::parse(x).map_err(|e| field(0, e))?,
                    rational::parse(y).map_err(|e| field(1, e))?,
                ));
            }
            Ok(NormCandidate::Polygon(vs))
        }
        NormSpec::Lp { p } => {
            let t = p.trim();
            match t {
                "1" => Ok(NormCandidate::Polygon(PolygonNorm::l1().vertices().to_vec())),
                "inf" | "infinity" | "∞" => Ok(NormCandidate::Polygon(PolygonNorm::linf().vertices().to_vec())),
                _ => {
                    let v = rational::to_f64(&rational::parse(t).map_err(|e| Error::Malformed(format!("p: {}", detail(e))))?);
                    if !(v >= 1.0) || !v.is_finite() {
                        return Err(Error::Malformed(format!("p: need 1 ≤ p ≤ ∞, got {t}")));
                    }
                    Ok(NormCandidate::BlackBox(BlackBoxNorm::lp(v)))
                }
            }
        }
        NormSpec::BlackboxSamples { theta_values } => {
            if theta_values.len() < 2 {
                return Err(Error::Malformed("theta_values: need at least two samples".into()));
            }
            if let Some(i) = theta_values.iter().position(|v| !v.is_finite() || *v <= 0.0) {
                return Err(Error::Malformed(format!("theta_values[{i}]: must be positive and finite")));
            }
            Ok(NormCandidate::BlackBox(sampled(theta_values.clone())))
        }
    }
}

pub fn build_norm(spec: &NormSpec) -> Result<AbsNorm2> {
    let cand = candidate(spec)?;
    let report = validate_norm(&cand)?;
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    match cand {
        NormCandidate::Polygon(vs) => AbsNorm2::polygon(vs),
        NormCandidate::BlackBox(bb) => Ok(AbsNorm2::BlackBox(bb)),
    }
}

fn sampled(values: Vec<f64>) -> BlackBoxNorm {
    let n = values.len() - 1;
    let step = std::f64::consts::FRAC_PI_2 / n as f64;
    let pts: Vec<[f64; 2]> = values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (s, c) = (k as f64 * step).sin_cos();
            [c / v, s / v]
        })
        .collect();
    BlackBoxNorm::from_fn(format!("samples:{}", values.len()), move |a, b| {
        let (a, b) = (a.abs(), b.abs());
        if a == 0.0 && b == 0.0 {
            return 0.0;
        }
        let k = ((b.atan2(a) / step).floor() as usize).min(n - 1);
        let (p, q) = (pts[k], pts[k + 1]);
        // the chord is {x : g·x = 1}
        let det = p[0] * q[1] - p[1] * q[0];
        let g = [(q[1] - p[1]) / det, (p[0] - q[0]) / det];
        g[0] * a + g[1] * b
    })
}

pub fn polygon_spec(norm: &PolygonNorm) -> NormSpec {
    NormSpec::Polygon {
        vertices: norm
            .vertices()
            .iter()
            .map(|v| [rational::format(&v.a1), rational::format(&v.a2)])
            .collect(),
    }
}

/// Canonical compact serialization with a trailing newline.
pub fn to_text(spec: &NormSpec) -> String {
    let mut s = serde_json::to_string(spec).expect("norm specs serialize");
    s.push('\n');
    s
}
