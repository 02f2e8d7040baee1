//! The `gw` command line: generate polygons, compute and verify cooperative
//! guards, run the agent simulations and draw the results.

pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use guardwalk::geometry::{Point, PolygonWithHoles};
use guardwalk::guards::cooperative_guards;
use guardwalk::io::{guard_points, guards_to_string, parse_guards, parse_polygon, polygon_hash, polygon_to_string};
use guardwalk::proximity::proximity_explore;
use guardwalk::sim::{model_check, simulate_small_memory, simulate_warmup, SimConfig};
use guardwalk::triangulation::triangulate;
use guardwalk::verify::verify_guards;
use guardwalk::Error;

use render::{render_svg, Overlays};

pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_MODEL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gw", version, about = "Cooperative guards for polygons with holes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated polygon.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Compute a cooperative guard set with the centralized algorithm.
    Guards {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also draw the triangulation and the guards.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run one of the agent algorithms and print its metrics.
    Simulate(SimulateArgs),
    /// Check coverage, connectivity and the size bound of a guard file.
    Verify {
        input: PathBuf,
        guards: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "GW_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Draw a polygon with optional overlays as SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        triangulation: bool,
        /// Draw the dual graph; implies the triangulation.
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        guards: Option<PathBuf>,
        /// Agent paths from a simulation trace.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Narrow staircase corridor with `teeth` turns.
    Comb {
        #[arg(long)]
        teeth: usize,
    },
    /// Square room with pillars on a circle.
    RingOfHoles {
        #[arg(long)]
        holes: usize,
    },
    /// Star-shaped room with triangular holes.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        holes: usize,
        #[arg(long, env = "GW_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Depth,
    Proximity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Warmup,
    SmallMemory,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Model::Depth)]
    pub model: Model,
    #[arg(long, value_enum, default_value_t = Mode::Warmup)]
    pub mode: Mode,
    /// Defaults to the guard bound for warmup and half the triangle count,
    /// rounded up, for small-memory.
    #[arg(long)]
    pub agents: Option<usize>,
    #[arg(long, env = "GW_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Deployment point; defaults to the first vertex of the outer ring.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    pub start: Option<Vec<i64>>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long = "guards-out")]
    pub guards_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ModelViolation { .. } | Error::MemoryBudgetExceeded { .. } => EXIT_MODEL,
            Error::Internal(_) => 1,
            _ => EXIT_INVALID,
        };
        CliError { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError { code: 1, message: format!("{}: {e}", path.display()) })
}

fn load_polygon(path: &Path) -> Result<PolygonWithHoles, CliError> {
    parse_polygon(&read(path)?).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn load_guards(poly: &PolygonWithHoles, path: &Path) -> Result<Vec<Point>, CliError> {
    let entries = parse_guards(&read(path)?).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    Ok(guard_points(poly, &entries)?)
}

/// Agent paths recorded in a simulation trace; the trace must belong to
/// `poly`.
pub fn trace_paths(poly: &PolygonWithHoles, text: &str) -> Result<Vec<Vec<Point>>, CliError> {
    let hash = polygon_hash(poly);
    let mut lines = text.lines();
    let kind = lines.next().unwrap_or("");
    if kind != "TRACE 1" && kind != "PROX 1" {
        return Err(CliError::invalid(format!("not a trace file (header '{kind}')")));
    }
    let mut paths: Vec<(u64, Vec<Point>)> = Vec::new();
    let mut matched = false;
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        match f.as_slice() {
            ["polygon", h] => {
                if *h != hash {
                    return Err(CliError::invalid(format!("trace is for polygon {h}, input is {hash}")));
                }
                matched = true;
            }
            ["R", _, "MOVE", id, x0, y0, x1, y1] => {
                let num = |s: &str| s.parse::<i64>().map_err(|_| CliError::invalid(format!("bad trace line '{line}'")));
                let id: u64 = id.parse().map_err(|_| CliError::invalid(format!("bad trace line '{line}'")))?;
                let (from, to) = (Point::new(num(x0)?, num(y0)?), Point::new(num(x1)?, num(y1)?));
                match paths.iter_mut().find(|p| p.0 == id) {
                    Some(p) => p.1.push(to),
                    None => paths.push((id, vec![from, to])),
                }
            }
            _ => {}
        }
    }
    if !matched {
        return Err(CliError::invalid("trace has no polygon line"));
    }
    paths.sort_by_key(|p| p.0);
    Ok(paths.into_iter().map(|p| p.1).collect())
}

/// Runs one command and returns what it prints on success.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Gen { kind, output } => {
            let poly = match kind {
                GenKind::Comb { teeth } => guardwalk::gen::comb(teeth)?,
                GenKind::RingOfHoles { holes } => guardwalk::gen::ring_of_holes(holes)?,
                GenKind::Random { n, holes, seed } => guardwalk::gen::random_polygon(n, holes, seed)?,
            };
            let text = polygon_to_string(&poly);
            match output {
                Some(p) => {
                    write(&p, &text)?;
                    Ok(format!("n {} h {}\n", poly.n(), poly.h()))
                }
                None => Ok(text),
            }
        }
        Command::Guards { input, output, svg } => {
            let poly = load_polygon(&input)?;
            let guards = cooperative_guards(&poly)?;
            let text = guards_to_string(&poly, &guards);
            if let Some(path) = svg {
                let t = triangulate(&poly)?;
                let pts = guards.points(&poly);
                write(&path, &render_svg(&poly, &Overlays { triangulation: Some(&t), guards: &pts, ..Overlays::default() }))?;
            }
            match output {
                Some(p) => {
                    write(&p, &text)?;
                    Ok(format!("guards {} bound {}\n", guards.len(), poly.guard_bound()))
                }
                None => Ok(text),
            }
        }
        Command::Simulate(args) => simulate(args),
        Command::Verify { input, guards, samples, seed } => {
            let poly = load_polygon(&input)?;
            let pts = load_guards(&poly, &guards)?;
            let r = verify_guards(&poly, &pts, samples, seed)?;
            let cov = if r.coverage.is_complete() { "1.0".to_string() } else { format!("{:.6}", r.coverage.fraction()) };
            let mut out = format!(
                "coverage {cov} connected {} bound {}\n",
                if r.connectivity.connected { "yes" } else { "no" },
                if r.bound_ok { "ok" } else { "exceeded" }
            );
            if r.passed() {
                return Ok(out);
            }
            if let Some(w) = r.coverage.witnesses.first() {
                out.push_str(&format!("uncovered point {w}\n"));
            }
            if !r.connectivity.connected {
                for (i, c) in r.connectivity.components.iter().enumerate() {
                    let members: Vec<String> = c.iter().map(|&g| pts[g].to_string()).collect();
                    out.push_str(&format!("component {i}: {}\n", members.join(" ")));
                }
            }
            if !r.bound_ok {
                out.push_str(&format!("{} guards exceed the bound {}\n", pts.len(), r.bound));
            }
            Err(CliError { code: EXIT_VERIFY, message: out })
        }
        Command::Render { input, triangulation, dual, guards, trace, output } => {
            let poly = load_polygon(&input)?;
            let t = if triangulation || dual { Some(triangulate(&poly)?) } else { None };
            let pts = match guards {
                Some(g) => load_guards(&poly, &g)?,
                None => Vec::new(),
            };
            let paths = match trace {
                Some(p) => trace_paths(&poly, &read(&p)?)?,
                None => Vec::new(),
            };
            let svg = render_svg(&poly, &Overlays { triangulation: t.as_ref(), dual, guards: &pts, paths: &paths });
            match output {
                Some(p) => {
                    write(&p, &svg)?;
                    Ok(String::new())
                }
                None => Ok(svg),
            }
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<String, CliError> {
    let poly = load_polygon(&args.input)?;
    if args.model == Model::Proximity {
        let r = proximity_explore(&poly)?;
        if let Some(p) = &args.trace {
            write(p, &r.to_text(&poly))?;
        }
        if let Some(p) = &args.guards_out {
            write(p, &guards_to_string(&poly, &r.guards))?;
        }
        let c = r.cost;
        return Ok(format!(
            "rounds {} validations {} steps {} waits {} guards {}\n",
            c.total_estimated_rounds,
            c.validations,
            c.validation_steps,
            c.wait_rounds,
            r.guards.len()
        ));
    }
    let start = match args.start.as_deref() {
        Some([x, y]) => Point::new(*x, *y),
        Some(_) => return Err(CliError::invalid("--start takes two coordinates")),
        None => poly.vertex(0),
    };
    let agents = args.agents.unwrap_or(match args.mode {
        Mode::Warmup => poly.guard_bound().max(1),
        Mode::SmallMemory => poly.triangle_count().div_ceil(2),
    });
    let cfg = SimConfig { agents, start, seed: args.seed };
    let out = match args.mode {
        Mode::Warmup => simulate_warmup(&poly, &cfg)?,
        Mode::SmallMemory => simulate_small_memory(&poly, &cfg)?,
    };
    if let Some(p) = &args.trace {
        write(p, &out.trace.to_text())?;
    }
    if let Some(p) = &args.guards_out {
        write(p, &guards_to_string(&poly, &out.guards))?;
    }
    model_check(&out.trace, &poly)?;
    Ok(format!(
        "rounds {} broadcasts {} peak_mem {} guards {}\n",
        out.trace.total_rounds,
        out.trace.total_broadcasts,
        out.trace.max_follower_peak(),
        out.guards.len()
    ))
}
