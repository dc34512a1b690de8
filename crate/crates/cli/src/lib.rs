//! Command pipelines behind the `absnorm` binary. Every verb reads its
//! inputs, runs one core operation and returns the report text; `main`
//! only writes it out and maps errors to exit codes.

pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use absnorm_core::approx::approximate_polygon;
use absnorm_core::centers::{convergence_study, defect_csv, CenterSpec, StepRankOne, StudyOptions};
use absnorm_core::classify::{classify_norm, membership_of_tag, verdict};
use absnorm_core::denial::{
    default_delta, deny_margin, set_denial_certificate, star_deny_margin, u_function, Mode, SphereRegion,
};
use absnorm_core::rational::{self, Rat};
use absnorm_core::spec_io::{self, NormSpec};
use absnorm_core::norm::validate_norm;
use absnorm_core::{AbsNorm2, Error, Functional2, NormCandidate, PolygonNorm, ValidationReport, Vec2};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "absnorm", version, about = "Absolute normalized norms on the plane: classes, duals, denial margins and centers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the invariants of a norm-spec file.
    Validate { input: PathBuf },
    /// Class, hat values and membership flags.
    Classify { input: PathBuf },
    /// Polar dual as a canonical norm-spec.
    Dual {
        input: PathBuf,
        /// Replace a numeric norm by an inscribed polygon with this many sectors.
        #[arg(long)]
        approx: Option<usize>,
    },
    /// Whether some F-sum can be the domain or the range of a center.
    Decide { input: PathBuf },
    /// Pointwise denial margin, or `u(f)` with `--u`.
    Margin {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::StarDeny)]
        mode: ModeArg,
        /// Sphere point `a` (deny) or unit functional `f` (star-deny), as `p,q`.
        #[arg(long, value_parser = parse_pair)]
        point: Pair,
        /// Compute `u(f)` for the functional `--point` instead.
        #[arg(long)]
        u: bool,
        #[arg(long, env = "ABSNORM_GRID", default_value_t = 256)]
        grid: usize,
        /// Replace a numeric norm by an inscribed polygon with this many sectors.
        #[arg(long)]
        approx: Option<usize>,
    },
    /// Certified uniform denial margin over a sphere region.
    Certify {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::StarDeny)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = RegionArg::Slice)]
        region: RegionArg,
        /// Slice direction, or arc start.
        #[arg(long, value_parser = parse_pair)]
        by: Option<Pair>,
        /// Arc end.
        #[arg(long, value_parser = parse_pair)]
        to: Option<Pair>,
        /// Slice width; defaults to (1 - w1)/4 for three-edge norms, else 1/4.
        #[arg(long, value_parser = parse_rat)]
        delta: Option<Rat>,
        #[arg(long, env = "ABSNORM_GRID", default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        approx: Option<usize>,
    },
    /// Daugavet defects of a center against a step rank-one operator.
    Defect {
        /// Operator spec (JSON).
        input: PathBuf,
        /// Also write the defect table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Static SVG of the positive sphere with overlays.
    Render {
        input: PathBuf,
        #[arg(long)]
        dual: bool,
        /// Highlight the face `[c1, c2]`.
        #[arg(long)]
        face: bool,
        #[arg(long)]
        hats: bool,
        /// Shade `S(B_F, f, eps)`, given as `f1,f2,eps`.
        #[arg(long, value_parser = parse_slice)]
        slice: Option<(Pair, Rat)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Deny,
    StarDeny,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Deny => Mode::Deny,
            ModeArg::StarDeny => Mode::StarDeny,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    Whole,
    Slice,
    Arc,
}

pub type Pair = (Rat, Rat);

fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<Pair, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected p,q but got {s:?}"))?;
    Ok((parse_rat(a)?, parse_rat(b)?))
}

fn parse_slice(s: &str) -> std::result::Result<(Pair, Rat), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected f1,f2,eps but got {s:?}"));
    }
    Ok(((parse_rat(parts[0])?, parse_rat(parts[1])?), parse_rat(parts[2])?))
}

/// Failure of a command, carrying its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Core { path: PathBuf, source: Error },
    #[error(transparent)]
    Bare(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Io { .. } => return 2,
            CliError::Core { source, .. } => source,
            CliError::Bare(e) => e,
        };
        match core {
            Error::Malformed(_) | Error::Validation(_) => 2,
            Error::Contract(_) | Error::Unsupported(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn at<T>(path: &Path, r: absnorm_core::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::Core {
        path: path.to_owned(),
        source,
    })
}

pub fn load_norm(path: &Path) -> Result<AbsNorm2> {
    let text = read(path)?;
    at(path, spec_io::parse_norm(&text))
}

fn polygon_of(norm: AbsNorm2, approx: Option<usize>, op: &str) -> Result<PolygonNorm> {
    match (norm, approx) {
        (AbsNorm2::Polygonal(p), _) => Ok(p),
        (AbsNorm2::BlackBox(bb), Some(n)) => Ok(approximate_polygon(&bb, n)?.polygon),
        (AbsNorm2::BlackBox(_), None) => Err(Error::Unsupported(format!(
            "{op} needs a polygonal norm; pass --approx N to inscribe one"
        ))
        .into()),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn vec2(p: &Pair) -> Vec2 {
    Vec2::new(p.0.clone(), p.1.clone())
}

#[derive(Serialize)]
struct ValidateReport {
    ok: bool,
    kind: &'static str,
    /// Violations with witness points; `merged` lists collinear or repeated
    /// vertices dropped by canonicalization.
    #[serde(flatten)]
    report: ValidationReport,
}

#[derive(Serialize)]
struct ClassifyReport {
    class: String,
    edges: usize,
    exact: bool,
    hat1: Option<String>,
    hat2: Option<String>,
    #[serde(rename = "in_N2")]
    in_n2: bool,
    #[serde(rename = "in_N3")]
    in_n3: bool,
    #[serde(rename = "in_M2")]
    in_m2: bool,
    certified: bool,
}

#[derive(Serialize)]
struct UReport {
    functional: Functional2,
    u: f64,
    grid: usize,
}

#[derive(Serialize)]
struct MarginReport<W: Serialize> {
    mode: Mode,
    point: Vec2,
    #[serde(flatten)]
    margin: absnorm_core::denial::PointMargin<W>,
}

/// Operator spec for `defect`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub center: CenterKind,
    /// Norm-spec of `F`; required for the sum centers.
    pub norm: Option<NormSpec>,
    pub t: StepRankOne,
    pub n_list: Vec<usize>,
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterKind {
    Identity,
    FromSum,
    IntoSum,
}

#[derive(Serialize)]
struct DefectOutput {
    center: String,
    reports: Vec<absnorm_core::centers::DefectReport>,
    summary: absnorm_core::centers::StudySummary,
}

/// Output of a command and the exit status to report with it.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub status: u8,
}

fn done(text: String) -> Result<Report> {
    Ok(Report { text, status: 0 })
}

/// Runs one command.
pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Validate { input } => {
            let text = read(input)?;
            let spec = at(input, spec_io::parse_spec(&text))?;
            let cand = at(input, spec_io::candidate(&spec))?;
            let report = at(input, validate_norm(&cand))?;
            let ok = report.is_ok();
            let out = ValidateReport {
                ok,
                kind: match cand {
                    NormCandidate::Polygon(_) => "polygon",
                    NormCandidate::BlackBox(_) => "numeric",
                },
                report,
            };
            Ok(Report {
                text: json(&out),
                status: if ok { 0 } else { 2 },
            })
        }
        Command::Classify { input } => {
            let norm = load_norm(input)?;
            let tag = classify_norm(&norm)?;
            let mem = membership_of_tag(&tag);
            done(json(&ClassifyReport {
                class: tag.kind.to_string(),
                edges: tag.edges,
                exact: tag.exact,
                hat1: tag.hat1.as_ref().map(rational::format),
                hat2: tag.hat2.as_ref().map(rational::format),
                in_n2: mem.in_n2,
                in_n3: mem.in_n3,
                in_m2: mem.in_m2,
                certified: mem.certified,
            }))
        }
        Command::Dual { input, approx } => {
            let norm = load_norm(input)?;
            let p = polygon_of(norm, *approx, "dual")?;
            done(spec_io::to_text(&spec_io::polygon_spec(&p.dual())))
        }
        Command::Decide { input } => {
            let norm = load_norm(input)?;
            done(json(&verdict(&norm)?))
        }
        Command::Margin {
            input,
            mode,
            point,
            u,
            grid,
            approx,
        } => {
            let p = polygon_of(load_norm(input)?, *approx, "margin")?;
            let q = vec2(point);
            if *u {
                let f = q.as_functional();
                let value = u_function(&p, &f, 1e-9, *grid)?;
                return done(json(&UReport {
                    functional: f,
                    u: value,
                    grid: *grid,
                }));
            }
            match mode {
                ModeArg::Deny => done(json(&MarginReport {
                    mode: Mode::Deny,
                    margin: deny_margin(&p, &q, *grid)?,
                    point: q,
                })),
                ModeArg::StarDeny => done(json(&MarginReport {
                    mode: Mode::StarDeny,
                    margin: star_deny_margin(&p, &q.as_functional(), *grid)?,
                    point: q,
                })),
            }
        }
        Command::Certify {
            input,
            mode,
            region,
            by,
            to,
            delta,
            grid,
            approx,
        } => {
            let p = polygon_of(load_norm(input)?, *approx, "certify")?;
            let region = match region {
                RegionArg::Whole => SphereRegion::Whole,
                RegionArg::Slice => SphereRegion::Slice {
                    by: by.as_ref().map(vec2).unwrap_or_else(Vec2::e1),
                    delta: delta.clone().unwrap_or_else(|| default_delta(&p)),
                },
                RegionArg::Arc => match (by, to) {
                    (Some(a), Some(b)) => SphereRegion::Arc {
                        from: vec2(a),
                        to: vec2(b),
                    },
                    _ => return Err(Error::Contract("an arc needs --by and --to".into()).into()),
                },
            };
            done(json(&set_denial_certificate(&p, (*mode).into(), &region, *grid)?))
        }
        Command::Defect { input, csv } => {
            let text = read(input)?;
            let spec: OperatorSpec = serde_json::from_str(&text).map_err(|e| CliError::Core {
                path: input.clone(),
                source: Error::Malformed(format!("line {} column {}: {e}", e.line(), e.column())),
            })?;
            let norm = || -> Result<PolygonNorm> {
                let s = spec
                    .norm
                    .as_ref()
                    .ok_or_else(|| Error::Malformed("norm: required for sum centers".into()))?;
                polygon_of(at(input, spec_io::build_norm(s))?, None, "defect")
            };
            let builder = match spec.center {
                CenterKind::Identity => CenterSpec::Identity,
                CenterKind::FromSum => CenterSpec::FromSum(norm()?),
                CenterKind::IntoSum => CenterSpec::IntoSum(norm()?),
            };
            let mut opts = StudyOptions::default();
            if let Some(rho) = spec.rho {
                opts.rho = rho;
            }
            let (reports, summary) = convergence_study(&builder, &spec.t, &spec.n_list, &opts)?;
            if let Some(path) = csv {
                fs::write(path, defect_csv(&reports)).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            done(json(&DefectOutput {
                center: builder.label(),
                reports,
                summary,
            }))
        }
        Command::Render {
            input,
            dual,
            face,
            hats,
            slice,
        } => {
            let norm = load_norm(input)?;
            let overlays = render::Overlays {
                dual: *dual,
                face: *face,
                hats: *hats,
                slice: slice.as_ref().map(|(f, eps)| (Functional2::new(f.0.clone(), f.1.clone()), eps.clone())),
            };
            done(render::render(&norm, &overlays))
        }
    }
}
