//! Command definitions and dispatch.

use std::fmt;
use std::path::PathBuf;

use berk_core::bline::span_tree;
use berk_core::bradial::{normalize, pairwise_disjoint};
use berk_core::curveradial::{delta, delta_inverse, equal_curve};
use berk_core::facade::{build_facade, compile, map_transport, refine_facade, transport_rules, Facade};
use berk_core::maps::{fiber_count, multiplicity_locus};
use berk_core::{Brick, Field, Radius, Q};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance::{self, Config};
use crate::export;
use crate::schema::{self, Parsed, SchemaError};

#[derive(Parser, Debug)]
#[command(name = "berk", version, about = "Exact computations on the Berkovich line over Q with a p-adic absolute value")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampling; BERK_SEED overrides it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sampled points where a command samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Dot,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rewrite a set expression as disjoint basic pieces.
    Normalize {
        #[arg(long)]
        expr: String,
    },
    /// Membership of a point in a set expression.
    Member {
        #[arg(long)]
        set: String,
        #[arg(long)]
        point: String,
    },
    /// Image of a point under a rational map.
    Image {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
    },
    /// Local degree of a rational map at a point.
    Degree {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
    },
    /// Points of local degree d inside a brick.
    Locus {
        #[arg(long)]
        map: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        region: Option<String>,
    },
    /// The fiber over a point with local degrees.
    Fiber {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        /// Rational solutions of h(T) = center, as a JSON array.
        #[arg(long)]
        roots: Option<String>,
    },
    /// Skeleton graph of a triangulation.
    Skeleton {
        #[arg(long)]
        tri: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build and serialize a facade.
    Facade {
        #[arg(long)]
        tri: String,
    },
    Encode {
        #[arg(long)]
        tri: String,
        #[arg(long)]
        point: String,
    },
    Decode {
        #[arg(long)]
        tri: String,
        #[arg(long)]
        code: String,
    },
    /// Move an encoded point to a refinement or through a map.
    Transport {
        #[arg(long)]
        tri: String,
        #[arg(long)]
        code: String,
        /// Extra points of the refinement, as a JSON array.
        #[arg(long, conflicts_with = "map")]
        refine: Option<String>,
        #[arg(long)]
        map: Option<String>,
        /// Target triangulation for --map; defaults to --tri.
        #[arg(long)]
        target: Option<String>,
    },
    /// Edge monomials and tube reductions of a compatible map.
    CompileMap {
        #[arg(long)]
        map: String,
        #[arg(long)]
        tri: String,
        #[arg(long)]
        target: Option<String>,
    },
    /// The δ image of a radial set on a triangulation, and its inverse.
    Delta {
        #[arg(long)]
        tri: String,
        #[arg(long)]
        set: String,
    },
    /// Membership CSV on the 32×32 lattice of centers and radii.
    Sample {
        #[arg(long)]
        set: String,
    },
    /// Run the acceptance suite.
    Verify {
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Schema(SchemaError),
    Kernel(berk_core::Error),
    Io(String),
    Failed(usize),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(e) => write!(f, "schema error at {e}"),
            CliError::Kernel(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Failed(n) => write!(f, "{n} acceptance criteria failed"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Kernel(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> CliError {
        CliError::Schema(e)
    }
}

impl From<berk_core::Error> for CliError {
    fn from(e: berk_core::Error) -> CliError {
        CliError::Kernel(e)
    }
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
pub fn load(arg: &str, name: &str) -> Result<Value, CliError> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("--{name}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Schema(SchemaError { path: name.into(), msg: e.to_string() }))
}

fn parse<T>(arg: &str, name: &str, f: impl Fn(&Value, &str) -> Parsed<T>) -> Result<T, CliError> {
    Ok(f(&load(arg, name)?, name)?)
}

fn facade_of(arg: &str, name: &str, field: Field) -> Result<Facade, CliError> {
    let t = parse(arg, name, schema::triangulation)?;
    Ok(build_facade(&t.domain, &t.points, field)?)
}

pub struct Output {
    pub text: String,
}

fn json_out(v: Value) -> Output {
    Output { text: schema::render(&v) }
}

fn line(s: impl fmt::Display) -> Output {
    Output { text: format!("{s}\n") }
}

pub fn seed(global: &Global) -> u64 {
    std::env::var("BERK_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(global.seed)
}

fn check_format(c: &Command, fmt: Option<Format>) -> Result<(), CliError> {
    let Some(f) = fmt else { return Ok(()) };
    let ok = match f {
        Format::Json => !matches!(c, Command::Sample { .. } | Command::Verify { .. }),
        Format::Text => matches!(c, Command::Normalize { .. } | Command::Verify { .. }),
        Format::Dot => matches!(c, Command::Skeleton { .. } | Command::Facade { .. }),
        Format::Csv => matches!(c, Command::Sample { .. }),
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Schema(SchemaError { path: "--format".into(), msg: format!("{f:?} output is not available for this command") }))
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let field = Field::new(g.p).map_err(|e| SchemaError { path: "--p".into(), msg: e.to_string() })?;
    let fmt = g.format;
    check_format(&cli.command, fmt)?;
    Ok(match &cli.command {
        Command::Normalize { expr } => {
            let e = parse(expr, "expr", schema::expr)?;
            let out = normalize(&e, field);
            if fmt == Some(Format::Text) {
                let mut s = String::new();
                for (i, p) in out.pieces.iter().enumerate() {
                    s.push_str(&format!("{i}: {p:?}\n"));
                }
                s.push_str(&format!("pieces: {}\n", out.pieces.len()));
                Output { text: s }
            } else {
                let disjoint = pairwise_disjoint(&out.pieces, field);
                json_out(json!({"set": schema::radial_set_out(&out), "count": out.pieces.len(), "disjoint": disjoint}))
            }
        }
        Command::Member { set, point } => {
            let e = parse(set, "set", schema::expr)?;
            let x = parse(point, "point", schema::point)?;
            line(e.member(&x, field))
        }
        Command::Image { map, point } => {
            let h = parse(map, "map", schema::map)?;
            let x = parse(point, "point", schema::ppoint)?;
            json_out(schema::ppoint_out(&h.pushforward(&x, field)?))
        }
        Command::Degree { map, point } => {
            let h = parse(map, "map", schema::map)?;
            let x = parse(point, "point", schema::ppoint)?;
            line(h.local_degree(&x, field)?)
        }
        Command::Locus { map, d, region } => {
            let h = parse(map, "map", schema::map)?;
            let region = match region {
                Some(r) => parse(r, "region", schema::brick)?,
                None => Brick::B1 { a: Q::from_integer(0.into()), s: Radius::Infinity },
            };
            json_out(schema::locus_out(&multiplicity_locus(&h, *d, &region, field)?))
        }
        Command::Fiber { map, point, roots } => {
            let h = parse(map, "map", schema::map)?;
            let y = parse(point, "point", schema::point)?;
            let roots = match roots {
                Some(r) => {
                    let v = load(r, "roots")?;
                    let list = v.as_array().ok_or_else(|| SchemaError { path: "roots".into(), msg: "expected an array".into() })?;
                    list.iter().enumerate().map(|(i, x)| schema::rational(x, &format!("roots[{i}]"))).collect::<Parsed<Vec<Q>>>()?
                }
                None => Vec::new(),
            };
            json_out(schema::fiber_out(&fiber_count(&h, &y, &roots, field)?))
        }
        Command::Skeleton { tri, dot } => {
            let fa = facade_of(tri, "tri", field)?;
            let text = export::skeleton_dot(&fa.graph());
            match dot.as_ref().filter(|_| fmt != Some(Format::Dot)) {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let g = fa.graph();
                    json_out(json!({"vertices": g.vertices.len(), "edges": g.edges.len()}))
                }
                None => Output { text },
            }
        }
        Command::Facade { tri } => {
            let t = parse(tri, "tri", schema::triangulation)?;
            if fmt == Some(Format::Dot) {
                Output { text: export::tree_dot(&span_tree(&t.points, field)?) }
            } else {
                json_out(schema::facade_out(&build_facade(&t.domain, &t.points, field)?))
            }
        }
        Command::Encode { tri, point } => {
            let fa = facade_of(tri, "tri", field)?;
            let y = parse(point, "point", schema::ppoint)?;
            json_out(schema::encoded_out(&fa.encode(&y)?))
        }
        Command::Decode { tri, code } => {
            let fa = facade_of(tri, "tri", field)?;
            let e = parse(code, "code", schema::encoded)?;
            json_out(schema::ppoint_out(&fa.decode(&e)?))
        }
        Command::Transport { tri, code, refine, map, target } => {
            let fa = facade_of(tri, "tri", field)?;
            let e = parse(code, "code", schema::encoded)?;
            fa.check_encoded(&e)?;
            if let Some(m) = map {
                let h = parse(m, "map", schema::map)?;
                let fb = match target {
                    Some(t) => facade_of(t, "target", field)?,
                    None => fa.clone(),
                };
                json_out(json!({"code": schema::encoded_out(&map_transport(&h, &fa, &fb, &e)?)}))
            } else {
                let extra = match refine {
                    Some(r) => parse(r, "refine", |v, p| {
                        let a = v.as_array().ok_or_else(|| SchemaError { path: p.into(), msg: "expected an array".into() })?;
                        a.iter().enumerate().map(|(i, x)| schema::point(x, &format!("{p}[{i}]"))).collect()
                    })?,
                    None => Vec::new(),
                };
                let fine = refine_facade(&fa, &extra)?;
                let (out, case) = transport_rules(&fa, &fine)?.apply(&fa, &fine, &e)?;
                json_out(json!({
                    "code": schema::encoded_out(&out),
                    "case": format!("{case:?}").to_lowercase(),
                    "refined": schema::triangulation_out(&fine.domain, &fine.points()),
                }))
            }
        }
        Command::CompileMap { map, tri, target } => {
            let h = parse(map, "map", schema::map)?;
            let fa = facade_of(tri, "tri", field)?;
            let fb = match target {
                Some(t) => facade_of(t, "target", field)?,
                None => fa.clone(),
            };
            let c = compile(&h, &fa, &fb)?;
            let edges: Vec<Value> = c
                .edges
                .iter()
                .map(|e| {
                    let pieces: Vec<Value> = e
                        .pieces
                        .iter()
                        .map(|(lo, hi, m)| json!({"lo": schema::radius_out(lo), "hi": schema::radius_out(hi), "m": schema::monomial_out(m)}))
                        .collect();
                    json!({"edge": e.edge, "target": e.target, "degree": e.degree, "pieces": pieces})
                })
                .collect();
            let tubes: Vec<Value> =
                c.tubes.iter().map(|t| json!({"vertex": t.vertex, "target": t.target, "num": t.num, "den": t.den})).collect();
            json_out(json!({"edges": edges, "tubes": tubes}))
        }
        Command::Delta { tri, set } => {
            let fa = facade_of(tri, "tri", field)?;
            let a = parse(set, "set", schema::curve_set)?;
            let d = delta(&fa, &a)?;
            let back = delta_inverse(&fa, &d)?;
            let equal = equal_curve(&fa, &a, &back)?;
            let tubes: Vec<Value> = d
                .tubes
                .iter()
                .map(|c| {
                    json!({"x": c.x, "lo": schema::radius_out(&c.band.lo), "lo_incl": c.band.lo_incl,
                           "hi": schema::radius_out(&c.band.hi), "hi_incl": c.band.hi_incl, "exceptions": c.exceptions})
                })
                .collect();
            let discs: Vec<Value> =
                d.discs.iter().map(|(x, i, s)| json!({"x": x, "i": i, "set": schema::radial_set_out(s)})).collect();
            let edges: Vec<Value> = d.edges.iter().map(|(e, s)| json!({"edge": e, "set": schema::radial_set_out(s)})).collect();
            json_out(json!({
                "definable": {"vtx1": d.vtx1, "vtx2": d.vtx2, "tubes": tubes, "discs": discs, "edges": edges},
                "back": schema::curve_set_out(&back),
                "equal": equal,
            }))
        }
        Command::Sample { set } => {
            let e = parse(set, "set", schema::expr)?;
            let pts = match g.samples {
                Some(n) => export::random_points(n, seed(g)),
                None => export::lattice(),
            };
            Output { text: export::membership_csv(&pts, &|x| e.member(x, field)) }
        }
        Command::Verify { criterion } => {
            let cfg = Config { seed: seed(g) };
            let outcomes = match criterion {
                Some(id) => vec![acceptance::run_one(*id, &cfg)
                    .ok_or_else(|| SchemaError { path: "--criterion".into(), msg: format!("no criterion {id}") })?],
                None => acceptance::run_all(&cfg),
            };
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{o}\n"));
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            print!("{text}");
            if failed > 0 {
                return Err(CliError::Failed(failed));
            }
            Output { text: String::new() }
        }
    })
}

/// Runs the command and writes its output; returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(out) => {
            if out.text.is_empty() {
                return 0;
            }
            match &cli.global.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.text) {
                        eprintln!("error: {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{}", out.text),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

