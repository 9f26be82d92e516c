//! Command-line interface: JSON job files in, JSON reports out.
//!
//! Every subcommand reads one job file, runs an exact computation, and
//! prints a deterministic JSON report to stdout. Exit codes: 0 on
//! success, 1 for I/O problems, 2 for domain errors (and failed
//! verification), 3 when more precision would be needed.

pub mod dot;
pub mod parser;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::berkline::PointP1L;
use crate::dynamics::{
    build_dynamics, find_rescalings, orbit_typeii, rescaling_at_basepoint, OrbitStatus,
    RescalingClass, RescalingCycle,
};
use crate::error::Error;
use crate::exact::rat_int;
use crate::puiseux::DEFAULT_PRECISION;
use crate::ratmap::RationalMapL;
use crate::trees::{limit_cover, verify_cover, MarkedFamily, Portrait, TreeCover, TreeOfSpheres};

/// Smallest accepted working precision.
const MIN_PRECISION: i64 = 4;

/// Default iteration cap for orbits and rescaling searches.
const DEFAULT_MAX_STEPS: usize = 32;

#[derive(Parser)]
#[command(
    name = "berktrees",
    version,
    about = "Exact arithmetic on trees of spheres over Puiseux series fields"
)]
struct Cli {
    /// Working precision in orders of t (defaults to BERKTREES_PRECISION
    /// or 24).
    #[arg(long, global = true)]
    precision: Option<i64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Limiting tree of spheres of a marked family.
    Tree {
        #[arg(long)]
        job: PathBuf,
        /// Also write a Graphviz rendering to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cover between limiting trees induced by a map and a portrait.
    Cover {
        #[arg(long)]
        job: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run the cover checklist; exit 2 when any condition is violated.
    Verify {
        #[arg(long)]
        job: PathBuf,
    },
    /// Rescaling cycles of a map, from explicit seeds or a marked family.
    Rescalings {
        #[arg(long)]
        job: PathBuf,
    },
    /// Orbit of a type-II point, optionally confined to a marked tree.
    Orbit {
        #[arg(long)]
        job: PathBuf,
    },
    /// Normalized form, reduction, and cancelled factors of a map.
    Reduce {
        #[arg(long)]
        job: PathBuf,
    },
    /// Evaluate a map at a point, exactly and optionally numerically.
    Eval {
        #[arg(long)]
        job: PathBuf,
    },
}

/// Job file contents; the subcommand decides which fields it needs.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JobSpec {
    #[serde(default)]
    map: Option<MapSpec>,
    #[serde(default)]
    family: Option<Vec<(String, String)>>,
    #[serde(default)]
    source: Option<Vec<(String, String)>>,
    #[serde(default)]
    target: Option<Vec<(String, String)>>,
    #[serde(default)]
    portrait: Option<PortraitSpec>,
    #[serde(default)]
    seeds: Option<Vec<String>>,
    #[serde(default)]
    x0: Option<String>,
    #[serde(default)]
    t0: Option<[f64; 2]>,
    #[serde(default)]
    branch: Option<u32>,
    #[serde(default)]
    budget: Option<i64>,
    #[serde(default)]
    max_steps: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    num: String,
    den: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PortraitSpec {
    degree: usize,
    /// Triples (source label, target label, local degree).
    map: Vec<(String, String, u32)>,
}

enum Failure {
    Io(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn report(self) -> i32 {
        match self {
            Failure::Io(msg) => {
                eprintln!("error: {msg}");
                1
            }
            Failure::Domain(e) => {
                eprintln!("error[{}]: {e}", e.code());
                e.exit_code()
            }
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parse the process arguments, run the requested job, and return the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(f) => f.report(),
    }
}

fn execute(cli: Cli) -> CliResult<i32> {
    let precision = resolve_precision(cli.precision)?;
    let (report, code) = match cli.command {
        Command::Tree { job, dot } => cmd_tree(&load_job(&job)?, dot.as_deref())?,
        Command::Cover { job, dot } => cmd_cover(&load_job(&job)?, dot.as_deref(), precision)?,
        Command::Verify { job } => cmd_verify(&load_job(&job)?, precision)?,
        Command::Rescalings { job } => cmd_rescalings(&load_job(&job)?, precision)?,
        Command::Orbit { job } => cmd_orbit(&load_job(&job)?, precision)?,
        Command::Reduce { job } => cmd_reduce(&load_job(&job)?)?,
        Command::Eval { job } => cmd_eval(&load_job(&job)?)?,
    };
    println!("{report}");
    Ok(code)
}

/// Run one job given directly as a JSON string, returning the JSON
/// report. `kind` names the subcommand; `precision` replaces the
/// `--precision` flag (the environment is not consulted). This is the
/// entry point used by the C bindings.
pub fn run_job(kind: &str, json: &str, precision: i64) -> crate::error::Result<String> {
    if precision < MIN_PRECISION {
        return Err(Error::Job(format!(
            "precision must be at least {MIN_PRECISION}, got {precision}"
        )));
    }
    let spec: JobSpec = serde_json::from_str(json).map_err(|e| Error::Job(e.to_string()))?;
    let out = match kind {
        "tree" => cmd_tree(&spec, None),
        "cover" => cmd_cover(&spec, None, precision),
        "verify" => cmd_verify(&spec, precision),
        "rescalings" => cmd_rescalings(&spec, precision),
        "orbit" => cmd_orbit(&spec, precision),
        "reduce" => cmd_reduce(&spec),
        "eval" => cmd_eval(&spec),
        other => return Err(Error::Job(format!("unknown job kind '{other}'"))),
    };
    match out {
        Ok((report, _)) => Ok(report),
        Err(Failure::Domain(e)) => Err(e),
        Err(Failure::Io(msg)) => Err(Error::Job(msg)),
    }
}

fn resolve_precision(flag: Option<i64>) -> CliResult<i64> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var("BERKTREES_PRECISION") {
            Ok(text) => text.trim().parse::<i64>().map_err(|_| {
                Failure::Domain(Error::Job(
                    "BERKTREES_PRECISION must be an integer".to_string(),
                ))
            })?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    if p < MIN_PRECISION {
        return Err(Failure::Domain(Error::Job(format!(
            "precision must be at least {MIN_PRECISION}, got {p}"
        ))));
    }
    Ok(p)
}

fn load_job(path: &std::path::Path) -> CliResult<JobSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Domain(Error::Job(format!("{}: {e}", path.display()))))
}

fn require<T>(field: Option<T>, name: &str) -> CliResult<T> {
    field.ok_or_else(|| Failure::Domain(Error::Job(format!("missing field '{name}'"))))
}

fn parse_family(pairs: &[(String, String)]) -> CliResult<MarkedFamily> {
    let labels: Vec<String> = pairs.iter().map(|(l, _)| l.clone()).collect();
    let mut points = Vec::with_capacity(pairs.len());
    for (_, text) in pairs {
        points.push(parser::parse_point(text)?);
    }
    Ok(MarkedFamily::new(labels, points)?)
}

fn parse_map(spec: &MapSpec) -> CliResult<RationalMapL> {
    Ok(RationalMapL::new(
        parser::parse_map_poly(&spec.num)?,
        parser::parse_map_poly(&spec.den)?,
    )?)
}

fn build_portrait(spec: &PortraitSpec) -> CliResult<Portrait> {
    let mut label_map = BTreeMap::new();
    let mut local_degrees = BTreeMap::new();
    for (y, x, d) in &spec.map {
        if label_map.insert(y.clone(), x.clone()).is_some() {
            return Err(Failure::Domain(Error::Job(format!(
                "portrait lists '{y}' twice"
            ))));
        }
        local_degrees.insert(y.clone(), *d);
    }
    Ok(Portrait {
        degree: spec.degree,
        label_map,
        local_degrees,
    })
}

fn write_output(path: &std::path::Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn report_string<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

#[derive(Serialize)]
struct VertexReport {
    point: String,
    marking: Vec<String>,
}

#[derive(Serialize)]
struct TreeReport {
    labels: Vec<String>,
    points: Vec<String>,
    vertices: Vec<VertexReport>,
    edges: Vec<[usize; 2]>,
}

fn tree_report(tree: &TreeOfSpheres) -> TreeReport {
    TreeReport {
        labels: tree.labels.clone(),
        points: tree.points.iter().map(|p| p.to_string()).collect(),
        vertices: tree
            .vertices
            .iter()
            .map(|v| VertexReport {
                point: v.point.to_string(),
                marking: v.marking.iter().map(|d| d.to_string()).collect(),
            })
            .collect(),
        edges: tree.edges.iter().map(|&(a, b)| [a, b]).collect(),
    }
}

fn cmd_tree(spec: &JobSpec, dot_path: Option<&std::path::Path>) -> CliResult<(String, i32)> {
    let family = parse_family(require(spec.family.as_deref(), "family")?)?;
    let tree = TreeOfSpheres::limit_tree(&family)?;
    if let Some(path) = dot_path {
        write_output(path, &dot::tree_dot(&tree))?;
    }
    Ok((report_string(&tree_report(&tree)), 0))
}

#[derive(Serialize)]
struct CoverReport {
    map: String,
    degree: usize,
    source: TreeReport,
    target: TreeReport,
    vertex_map: Vec<usize>,
    sphere_maps: Vec<String>,
    valid: bool,
    violations: Vec<String>,
}

fn build_cover(spec: &JobSpec, precision: i64) -> CliResult<(RationalMapL, TreeCover)> {
    let map = parse_map(require(spec.map.as_ref(), "map")?)?;
    let source = parse_family(require(spec.source.as_deref(), "source")?)?;
    let target = parse_family(require(spec.target.as_deref(), "target")?)?;
    let portrait = build_portrait(require(spec.portrait.as_ref(), "portrait")?)?;
    let budget = rat_int(spec.budget.unwrap_or(precision));
    let cover = limit_cover(&map, &portrait, &source, &target, &budget)?;
    Ok((map, cover))
}

fn cover_report(map: &RationalMapL, cover: &TreeCover) -> CliResult<CoverReport> {
    let checks = verify_cover(cover)?;
    Ok(CoverReport {
        map: map.display_with_var("z"),
        degree: cover.portrait.degree,
        source: tree_report(&cover.source),
        target: tree_report(&cover.target),
        vertex_map: cover.vertex_map.clone(),
        sphere_maps: cover.sphere_maps.iter().map(|f| f.to_string()).collect(),
        valid: checks.is_valid(),
        violations: checks.violations,
    })
}

fn cmd_cover(
    spec: &JobSpec,
    dot_path: Option<&std::path::Path>,
    precision: i64,
) -> CliResult<(String, i32)> {
    let (map, cover) = build_cover(spec, precision)?;
    if let Some(path) = dot_path {
        write_output(path, &dot::cover_dot(&cover))?;
    }
    Ok((report_string(&cover_report(&map, &cover)?), 0))
}

#[derive(Serialize)]
struct VerifyReport {
    map: String,
    degree: usize,
    valid: bool,
    violations: Vec<String>,
}

fn cmd_verify(spec: &JobSpec, precision: i64) -> CliResult<(String, i32)> {
    let (map, cover) = build_cover(spec, precision)?;
    let checks = verify_cover(&cover)?;
    let valid = checks.is_valid();
    let report = report_string(&VerifyReport {
        map: map.display_with_var("z"),
        degree: cover.portrait.degree,
        valid,
        violations: checks.violations,
    });
    Ok((report, if valid { 0 } else { 2 }))
}

#[derive(Serialize)]
struct CycleReport {
    points: Vec<String>,
    tangent_maps: Vec<String>,
    limit: String,
    degree: usize,
    classification: String,
}

#[derive(Serialize)]
struct RescalingsReport {
    map: String,
    cycles: Vec<CycleReport>,
}

fn class_name(class: RescalingClass) -> &'static str {
    match class {
        RescalingClass::Monomial => "monomial",
        RescalingClass::DegreeOne => "degree-one",
        RescalingClass::Interesting => "interesting",
    }
}

fn cycle_report(cycle: &RescalingCycle) -> CycleReport {
    CycleReport {
        points: cycle.cycle.iter().map(|p| p.to_string()).collect(),
        tangent_maps: cycle.tangent_maps.iter().map(|f| f.to_string()).collect(),
        limit: cycle.limit.to_string(),
        degree: cycle.limit.map_degree(),
        classification: class_name(cycle.classification).to_string(),
    }
}

fn cmd_rescalings(spec: &JobSpec, precision: i64) -> CliResult<(String, i32)> {
    let map = parse_map(require(spec.map.as_ref(), "map")?)?;
    let budget = rat_int(spec.budget.unwrap_or(precision));
    let max_steps = spec.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    let cycles = if let Some(base) = &spec.x0 {
        vec![rescaling_at_basepoint(
            &map,
            &parser::parse_typeii(base)?,
            max_steps,
            &budget,
        )?]
    } else if let Some(seed_texts) = &spec.seeds {
        let mut seeds = Vec::with_capacity(seed_texts.len());
        for text in seed_texts {
            seeds.push(parser::parse_typeii(text)?);
        }
        find_rescalings(&map, &seeds, max_steps, &budget)?
    } else if let Some(pairs) = &spec.family {
        let tree = TreeOfSpheres::limit_tree(&parse_family(pairs)?)?;
        let seeds: Vec<_> = tree.vertices.iter().map(|v| v.point.clone()).collect();
        find_rescalings(&map, &seeds, max_steps, &budget)?
    } else {
        return Err(Failure::Domain(Error::Job(
            "rescaling jobs need 'x0', 'seeds', or 'family'".to_string(),
        )));
    };
    let report = report_string(&RescalingsReport {
        map: map.display_with_var("z"),
        cycles: cycles.iter().map(cycle_report).collect(),
    });
    Ok((report, 0))
}

#[derive(Serialize)]
struct OrbitReport {
    map: String,
    start: String,
    points: Vec<String>,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    entry: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exit: Option<usize>,
}

fn cmd_orbit(spec: &JobSpec, precision: i64) -> CliResult<(String, i32)> {
    let map = parse_map(require(spec.map.as_ref(), "map")?)?;
    let start = parser::parse_typeii(require(spec.x0.as_ref(), "x0")?)?;
    let budget = rat_int(spec.budget.unwrap_or(precision));
    let max_steps = spec.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    // With both families present the downstairs tree must embed upstairs;
    // with only one family the orbit is confined to its tree.
    let tree = match (&spec.source, &spec.target) {
        (Some(src), Some(tgt)) => {
            let dynamics =
                build_dynamics(map.clone(), &parse_family(src)?, &parse_family(tgt)?)?;
            Some(dynamics.target)
        }
        _ => match &spec.family {
            Some(pairs) => Some(TreeOfSpheres::limit_tree(&parse_family(pairs)?)?),
            None => None,
        },
    };
    let orbit = orbit_typeii(&map, &start, tree.as_ref(), max_steps, &budget)?;
    let (status, entry, period, exit) = match orbit.status {
        OrbitStatus::Periodic { entry, period } => {
            ("periodic", Some(entry), Some(period), None)
        }
        OrbitStatus::StoppedAtBudget => ("stopped-at-budget", None, None, None),
        OrbitStatus::LeftTree { exit } => ("left-tree", None, None, Some(exit)),
    };
    let report = report_string(&OrbitReport {
        map: map.display_with_var("z"),
        start: start.to_string(),
        points: orbit.points.iter().map(|p| p.to_string()).collect(),
        status: status.to_string(),
        entry,
        period,
        exit,
    });
    Ok((report, 0))
}

#[derive(Serialize)]
struct CancelledFactor {
    factor: String,
    multiplicity: u32,
}

#[derive(Serialize)]
struct ReduceReport {
    map: String,
    normalized: String,
    reduction: String,
    degree: usize,
    cancelled: Vec<CancelledFactor>,
}

fn cmd_reduce(spec: &JobSpec) -> CliResult<(String, i32)> {
    let map = parse_map(require(spec.map.as_ref(), "map")?)?;
    let normalized = map.normalize();
    let reduced = normalized.reduce_map()?;
    let report = report_string(&ReduceReport {
        map: map.display_with_var("z"),
        normalized: normalized.display_with_var("z"),
        reduction: reduced.map.to_string(),
        degree: reduced.map.map_degree(),
        cancelled: reduced
            .cancelled
            .iter()
            .map(|(factor, multiplicity)| CancelledFactor {
                factor: factor.display_with_var("u"),
                multiplicity: *multiplicity,
            })
            .collect(),
    });
    Ok((report, 0))
}

#[derive(Serialize)]
struct EvalReport {
    map: String,
    point: String,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<[f64; 2]>,
}

fn cmd_eval(spec: &JobSpec) -> CliResult<(String, i32)> {
    let map = parse_map(require(spec.map.as_ref(), "map")?)?;
    let point = parser::parse_point(require(spec.x0.as_ref(), "x0")?)?;
    let value = map.apply_typei(&point)?;
    let numeric = match (&spec.t0, &value) {
        (Some([re, im]), PointP1L::Finite(series)) => {
            let branch = spec.branch.unwrap_or(0);
            let z = series.evaluate_at(Complex64::new(*re, *im), branch);
            Some([z.re, z.im])
        }
        _ => None,
    };
    let report = report_string(&EvalReport {
        map: map.display_with_var("z"),
        point: point.to_string(),
        value: value.to_string(),
        numeric,
    });
    Ok((report, 0))
}
