use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use forkcalc::elementary::{self, EndSide};
use forkcalc::farey::{self, Slope};
use forkcalc::forking::{self, ForkingError, IndependenceVerdict, Verdict};
use forkcalc::freewords::{parse_tuple, Word};
use forkcalc::graphofgroups::MarkedGraphOfGroups;
use forkcalc::io;
use forkcalc::stallings::CoreGraph;
use forkcalc::whitehead;

const DEFAULT_DEPTH: u32 = 6;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "forkcalc", version, about = "Forking independence in free groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether b and c are independent over A.
    Independent(IndependentArgs),
    /// Minimize a tuple under Whitehead automorphisms and test whether it is part of a basis.
    Whitehead(WhiteheadArgs),
    /// Fold a subgroup into its core graph.
    Stallings(StallingsArgs),
    /// Graph-of-groups operations on a decomposition file.
    Gog(GogArgs),
    /// Farey graph of the once-punctured torus.
    Farey {
        #[command(subcommand)]
        command: FareyCommand,
    },
}

#[derive(Args)]
struct IndependentArgs {
    #[arg(long)]
    rank: u32,
    /// Parameter tuple, comma separated; may be empty.
    #[arg(long = "A", default_value = "")]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
    /// Pointed JSJ decomposition; selects the JSJ route.
    #[arg(long)]
    jsj: Option<PathBuf>,
    /// Search depth for the free-factor route (flag > FORKCALC_DEPTH > 6).
    #[arg(long, env = "FORKCALC_DEPTH")]
    depth: Option<u32>,
}

#[derive(Args)]
struct WhiteheadArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    tuple: String,
    /// Print the Whitehead graph of the minimized tuple in DOT format.
    #[arg(long)]
    emit_dot: bool,
}

#[derive(Args)]
struct StallingsArgs {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    tuple: String,
    /// Words to test for membership.
    #[arg(long)]
    contains: Option<String>,
    /// Print the core graph in DOT format.
    #[arg(long)]
    emit_dot: bool,
}

#[derive(Args)]
struct GogArgs {
    #[command(subcommand)]
    command: GogCommand,
}

#[derive(Args)]
struct GraphInput {
    /// Decomposition file.
    file: Option<PathBuf>,
    /// Decomposition file (alternative to the positional argument).
    #[arg(long)]
    jsj: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GogCommand {
    /// Run the validation checks.
    Validate {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Normal form of a word.
    Express {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        word: String,
    },
    /// Minimal subgraph carrying a subgroup.
    MinimalSubgraph {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        tuple: String,
    },
    /// Tree of cylinders.
    Cylinders {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Pointed decomposition relative to A.
    Pointed {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long = "A")]
        a: String,
    },
    /// Collapse a set of edges.
    Collapse {
        #[command(flatten)]
        input: GraphInput,
        /// Edge ids, comma separated.
        #[arg(long, value_delimiter = ',')]
        edges: Vec<u32>,
    },
    /// Dehn twist about an edge.
    Twist {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        edge: u32,
        #[arg(long)]
        z: String,
        /// Side left fixed.
        #[arg(long, value_enum, default_value_t = Fixed::From)]
        fixed: Fixed,
    },
    /// Normal form of a product of elementary automorphisms.
    NormalForm {
        #[command(flatten)]
        input: GraphInput,
        /// JSON list of elementary automorphisms, composed left to right.
        #[arg(long)]
        aut: PathBuf,
    },
    /// Check the cylinder relation at a Z-type vertex.
    CylinderRelation {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        vertex: u32,
        #[arg(long)]
        z: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fixed {
    From,
    To,
}

#[derive(Subcommand)]
enum FareyCommand {
    /// Distance between two slopes.
    Distance { s: String, t: String },
    /// Mapping classes whose translates of x have pairwise disjoint R-balls.
    Witnesses {
        #[arg(long)]
        slope: String,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        count: u32,
    },
    /// Word of a slope.
    Word { s: String },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn tuple(rank: u32, text: &str) -> Result<Vec<Word>, Failure> {
    parse_tuple(rank, text).map_err(|e| Failure(format!("malformed tuple {text:?}: {e}")))
}

fn load_graph(input: &GraphInput) -> Result<MarkedGraphOfGroups, Failure> {
    let path = input
        .file
        .as_ref()
        .or(input.jsj.as_ref())
        .ok_or_else(|| Failure("no decomposition file given".into()))?;
    read_graph(path)
}

fn read_graph(path: &Path) -> Result<MarkedGraphOfGroups, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    io::graph_from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    io::parse_json(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn verdict_code(v: &IndependenceVerdict) -> u8 {
    match v.verdict {
        Verdict::Independent => 0,
        Verdict::Forks => 1,
        Verdict::Unknown => 2,
    }
}

fn independent(args: &IndependentArgs) -> Outcome {
    if args.rank < 2 {
        return Err(Failure("rank must be at least 2".into()));
    }
    let depth = args.depth.unwrap_or(DEFAULT_DEPTH);
    if depth == 0 {
        return Err(Failure("depth must be at least 1".into()));
    }
    let (a, b, c) = (tuple(args.rank, &args.a)?, tuple(args.rank, &args.b)?, tuple(args.rank, &args.c)?);
    let verdict = match &args.jsj {
        Some(path) => {
            let g = read_graph(path)?;
            if g.rank != args.rank {
                return Err(Failure(format!("decomposition has rank {}, expected {}", g.rank, args.rank)));
            }
            forking::independent_over_jsj(&g, &a, &b, &c)?
        }
        None => match forking::independent_over_free_factor(args.rank, &a, &b, &c, depth) {
            Err(ForkingError::NotFreeFactor) => {
                return Err(Failure("<A> is not a free factor; supply its pointed JSJ with --jsj".into()))
            }
            other => other?,
        },
    };
    Ok((io::verdict_to_json(&verdict), verdict_code(&verdict)))
}

fn whitehead_cmd(args: &WhiteheadArgs) -> Result<(Value, String, Option<String>), Failure> {
    let t = tuple(args.rank, &args.tuple)?;
    let (min, phi) = whitehead::minimize(args.rank, &t)?;
    let basis = whitehead::is_part_of_basis(args.rank, &t)?;
    let length: usize = min.iter().map(|w| w.len()).sum();
    let dot = if args.emit_dot {
        Some(whitehead::whitehead_graph(&min)?.to_dot())
    } else {
        None
    };
    let text = format!("min length {length}, basis: {}", basis.is_some());
    let v = json!({
        "minimized": io::tuple_to_json(&min),
        "min_length": length,
        "witness": io::automorphism_to_json(&phi),
        "part_of_basis": basis.is_some(),
        "basis_witness": basis.as_ref().map(io::automorphism_to_json),
    });
    Ok((v, text, dot))
}

fn stallings_cmd(args: &StallingsArgs) -> Result<(Value, Option<String>), Failure> {
    let t = tuple(args.rank, &args.tuple)?;
    let g = CoreGraph::from_generators(args.rank, &t);
    let mut v = json!({
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "rank": g.rank(),
        "free_basis": io::tuple_to_json(&g.free_basis()),
    });
    if let Some(ws) = &args.contains {
        let ws = tuple(args.rank, ws)?;
        v["contains"] = Value::Array(ws.iter().map(|w| json!(g.contains(w))).collect());
    }
    Ok((v, args.emit_dot.then(|| g.to_dot())))
}

fn gog(cmd: &GogCommand) -> Outcome {
    match cmd {
        GogCommand::Validate { input } => {
            let report = load_graph(input)?.validate();
            let code = if report.all_passed() { 0 } else { 1 };
            Ok((io::report_to_json(&report), code))
        }
        GogCommand::Express { input, word } => {
            let g = load_graph(input)?;
            let w = Word::parse(g.rank, word)?;
            Ok((io::syllables_to_json(&g.express(&w)?), 0))
        }
        GogCommand::MinimalSubgraph { input, tuple: t } => {
            let g = load_graph(input)?;
            let h = tuple(g.rank, t)?;
            Ok((io::minimal_subgraph_to_json(&g.minimal_subgraph(&h)?), 0))
        }
        GogCommand::Cylinders { input } => {
            let g = load_graph(input)?;
            Ok((io::graph_to_json(&g.tree_of_cylinders()?), 0))
        }
        GogCommand::Pointed { input, a } => {
            let g = load_graph(input)?;
            let a = tuple(g.rank, a)?;
            let (p, bp) = g.pointed_jsj(&a)?;
            Ok((json!({ "graph": io::graph_to_json(&p), "basepoint": bp }), 0))
        }
        GogCommand::Collapse { input, edges } => {
            let g = load_graph(input)?;
            let (c, map) = g.collapse(&edges.iter().copied().collect())?;
            Ok((
                json!({
                    "graph": io::graph_to_json(&c),
                    "vertex_map": map.vertices.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                    "edge_map": map.edges.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                }),
                0,
            ))
        }
        GogCommand::Twist { input, edge, z, fixed } => {
            let g = load_graph(input)?;
            let z = Word::parse(g.rank, z)?;
            let fixed = match fixed {
                Fixed::From => EndSide::From,
                Fixed::To => EndSide::To,
            };
            let t = elementary::dehn_twist_oriented(&g, *edge, &z, fixed, &Word::identity(g.rank))?;
            Ok((
                json!({
                    "aut": io::elementary_to_json(&t),
                    "realization": io::automorphism_to_json(t.realization()),
                }),
                0,
            ))
        }
        GogCommand::NormalForm { input, aut } => {
            let g = load_graph(input)?;
            let auts = io::elementary_list_from_json(&g, &read_json(aut)?)?;
            let (z, factors) = elementary::normal_form(&g, &auts)?;
            Ok((io::normal_form_to_json(&z, &factors), 0))
        }
        GogCommand::CylinderRelation { input, vertex, z } => {
            let g = load_graph(input)?;
            let z = Word::parse(g.rank, z)?;
            let holds = elementary::cylinder_relation_check(&g, *vertex, &z)?;
            Ok((json!({ "holds": holds }), if holds { 0 } else { 1 }))
        }
    }
}

fn slope(s: &str) -> Result<Slope, Failure> {
    s.parse::<Slope>().map_err(Failure::from)
}

fn farey_cmd(cmd: &FareyCommand) -> Outcome {
    match cmd {
        FareyCommand::Distance { s, t } => Ok((json!({ "distance": farey::distance(slope(s)?, slope(t)?) }), 0)),
        FareyCommand::Witnesses { slope: x, radius, count } => {
            let x = slope(x)?;
            let ws = farey::disjoint_ball_witnesses(x, *radius, *count);
            let items: Vec<Value> = ws
                .iter()
                .map(|m| json!({ "matrix": m.matrix(), "image": farey::act(m, x).to_string() }))
                .collect();
            Ok((json!({ "witnesses": items }), 0))
        }
        FareyCommand::Word { s } => Ok((json!({ "word": io::word_to_json(&farey::slope_to_word(slope(s)?)) }), 0)),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let (value, code) = match &cli.command {
        Command::Independent(args) => {
            let (v, code) = independent(args)?;
            if cli.format == Format::Text {
                emit(&format!("{}\n", v["verdict"].as_str().unwrap_or_default()));
                return Ok(code);
            }
            (v, code)
        }
        Command::Whitehead(args) => {
            let (v, text, dot) = whitehead_cmd(args)?;
            if let Some(dot) = dot {
                emit(&dot);
                return Ok(0);
            }
            if cli.format == Format::Text {
                emit(&format!("{text}\n"));
                return Ok(0);
            }
            (v, 0)
        }
        Command::Stallings(args) => {
            let (v, dot) = stallings_cmd(args)?;
            if let Some(dot) = dot {
                emit(&dot);
                return Ok(0);
            }
            (v, 0)
        }
        Command::Gog(args) => gog(&args.command)?,
        Command::Farey { command } => farey_cmd(command)?,
    };
    emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("values serialize")));
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
