//! Command-line front door for the coconut library.
//!
//! Exit status: 0 on success, 1 on domain errors, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use coconut::chains::{chain, chain_length, LeafAssignment};
use coconut::counting::{ct_count, cycle_count, path_count, SmoothCountOracle};
use coconut::enumerate::{build_oracle, enumerate_all, enumerate_ct, enumerate_smooth_ct};
use coconut::graph::{build_coconut_tree, build_cycle, build_path, CoconutShape, Graph, GraphJson};
use coconut::structures::{int_vec, ArithStructure, Int, StructureJson};
use coconut::transforms::{
    apply_subdivision_sequence, expand_leaves, smooth_ancestor, smooth_at, subdivide,
    SubdivisionSequence, VertexRef,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "coconut",
    about = "Arithmetical structures on coconut tree graphs",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Euclidean chain seeded at (x, y) and its length F(x, y).
    Chain { x: u64, y: u64 },
    /// Construct the unique smooth structure from a center value and leaf labels.
    Construct {
        #[arg(long)]
        center: u64,
        /// Comma-separated leaf labels, e.g. 2,3,3,5.
        #[arg(long, value_delimiter = ',')]
        leaves: Vec<u64>,
    },
    /// Enumerate arithmetical structures on a graph up to a bound.
    Enumerate {
        /// Graph descriptor: ct:p,s | path:n | cycle:n | star:s | file:<path>.
        #[arg(long)]
        graph: String,
        /// Bound on r-entries (all-structure search).
        #[arg(long, default_value_t = 100)]
        max_r: u64,
        /// Bound on the center value (smooth search; requires ct with s >= 2).
        #[arg(long)]
        max_c: Option<u64>,
        /// Enumerate only smooth structures, via the leaf-assignment search.
        #[arg(long)]
        smooth_only: bool,
    },
    /// Apply a transform to a structure read from a JSON file.
    Transform {
        #[command(subcommand)]
        op: TransformOp,
    },
    /// Count arithmetical structures on a graph family.
    Count {
        /// Graph descriptor: ct:p,s | path:n | cycle:n | star:s.
        #[arg(long)]
        graph: String,
        /// JSON-lines oracle cache of smooth counts; freshly enumerated if absent.
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// Center bound for fresh smooth enumeration.
        #[arg(long, default_value_t = 200)]
        max_c: u64,
        /// Append the oracle used to this JSON-lines cache.
        #[arg(long)]
        write_oracle: Option<PathBuf>,
    },
    /// Cross-check the closed-form count against brute force over a range.
    Verify {
        #[arg(long)]
        p_max: usize,
        #[arg(long)]
        s_max: usize,
        #[arg(long, default_value_t = 200)]
        bound: u64,
        /// Append the freshly built oracle to this JSON-lines cache.
        #[arg(long)]
        write_oracle: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct SeedArg {
    /// Path to a JSON structure file ("-" for stdin).
    #[arg(long)]
    seed_structure: String,
}

#[derive(Subcommand)]
enum TransformOp {
    /// Smooth at a vertex with d = 1 (e.g. --vertex v2 or --vertex l1).
    SmoothAt {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        vertex: String,
    },
    /// Take the unique smooth ancestor (requires non-smoothable leaves).
    Ancestor {
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Subdivide at a path position.
    Subdivide {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        position: usize,
    },
    /// Apply a subdivision sequence, e.g. --sequence 3,4,4,7.
    Sequence {
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_delimiter = ',')]
        sequence: Vec<usize>,
    },
    /// Expand to s leaves, placing r_p on the chosen slots.
    ExpandLeaves {
        #[command(flatten)]
        seed: SeedArg,
        /// 1-based leaf slots that receive the label r_p.
        #[arg(long, value_delimiter = ',')]
        slots: Vec<usize>,
        #[arg(long)]
        target_s: usize,
    },
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

enum GraphTarget {
    Coconut(usize, usize),
    Path(usize),
    Cycle(usize),
    File(PathBuf),
}

fn parse_graph_descriptor(desc: &str) -> Result<GraphTarget, CliError> {
    let (kind, rest) = desc
        .split_once(':')
        .ok_or_else(|| CliError(format!("bad graph descriptor {desc:?}")))?;
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError(format!("bad number in graph descriptor {desc:?}")))
    };
    match kind {
        "ct" => {
            let (p, s) = rest
                .split_once(',')
                .ok_or_else(|| CliError(format!("ct descriptor needs p,s: {desc:?}")))?;
            Ok(GraphTarget::Coconut(parse(p)?, parse(s)?))
        }
        "path" => Ok(GraphTarget::Path(parse(rest)?)),
        "cycle" => Ok(GraphTarget::Cycle(parse(rest)?)),
        "star" => Ok(GraphTarget::Coconut(1, parse(rest)?)),
        "file" => Ok(GraphTarget::File(PathBuf::from(rest))),
        _ => Err(CliError(format!("unknown graph family {kind:?}"))),
    }
}

fn build_target(target: &GraphTarget) -> Result<(Graph, Option<CoconutShape>), CliError> {
    match target {
        GraphTarget::Coconut(p, s) => {
            let (g, shape) = build_coconut_tree(*p, *s)?;
            Ok((g, Some(shape)))
        }
        GraphTarget::Path(n) => Ok((build_path(*n)?, None)),
        GraphTarget::Cycle(n) => Ok((build_cycle(*n)?, None)),
        GraphTarget::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let json: GraphJson = serde_json::from_str(&text)?;
            Ok(json.to_graph()?)
        }
    }
}

fn read_seed(seed: &SeedArg) -> Result<ArithStructure, CliError> {
    let text = if seed.seed_structure == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(&seed.seed_structure)?
    };
    let json: StructureJson = serde_json::from_str(&text)?;
    Ok(json.to_structure()?)
}

fn parse_vertex(text: &str) -> Result<VertexRef, CliError> {
    let err = || CliError(format!("bad vertex {text:?}; expected vN or lN"));
    let (kind, num) = text.split_at(1);
    let idx: usize = num.parse().map_err(|_| err())?;
    match kind {
        "v" => Ok(VertexRef::Path(idx)),
        "l" => Ok(VertexRef::Leaf(idx)),
        _ => Err(err()),
    }
}

fn big_to_value(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

fn structure_value(structure: &ArithStructure) -> Result<Value, CliError> {
    Ok(serde_json::to_value(StructureJson::from_structure(
        structure,
    )?)?)
}

fn emit_structure(structure: &ArithStructure, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => println!("{}", serde_json::to_string(&structure_value(structure)?)?),
        Format::Csv => {
            println!("r,d");
            let join = |v: &[Int]| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("{},{}", join(structure.r()), join(structure.d()));
        }
    }
    Ok(())
}

fn load_or_build_oracle(
    oracle_path: Option<&PathBuf>,
    p_max: usize,
    s_max: usize,
    max_c: u64,
) -> Result<SmoothCountOracle, CliError> {
    match oracle_path {
        Some(path) if path.exists() => Ok(SmoothCountOracle::load_jsonl(path)?),
        _ => Ok(build_oracle(p_max, s_max, max_c)),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Chain { x, y } => {
            let c = chain(&Int::from(x), &Int::from(y))?;
            let f = chain_length(&Int::from(x), &Int::from(y))?;
            match format {
                Format::Json => {
                    let terms: Vec<Value> = c.terms.iter().map(big_to_value).collect();
                    println!("{}", json!({"x": x, "y": y, "terms": terms, "F": f}));
                }
                Format::Csv => {
                    println!("x,y,terms,F");
                    let terms = c
                        .terms
                        .iter()
                        .map(|t| t.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    println!("{x},{y},{terms},{f}");
                }
            }
        }
        Command::Construct { center, leaves } => {
            let assignment = LeafAssignment::new(Int::from(center), int_vec(&leaves))?;
            let structure = coconut::chains::construct_smooth(&assignment)?;
            emit_structure(&structure, format)?;
        }
        Command::Enumerate {
            graph,
            max_r,
            max_c,
            smooth_only,
        } => {
            let target = parse_graph_descriptor(&graph)?;
            let result = if smooth_only {
                match target {
                    GraphTarget::Coconut(p, s) if s >= 2 => {
                        enumerate_smooth_ct(p, s, max_c.unwrap_or(max_r))
                    }
                    _ => {
                        return Err(CliError(
                            "--smooth-only requires a ct:p,s graph with s >= 2".into(),
                        ))
                    }
                }
            } else {
                let (g, shape) = build_target(&target)?;
                enumerate_all(&g, shape, max_r, graph.clone())
            };
            match format {
                Format::Json => {
                    let structures: Vec<Value> = result
                        .structures
                        .iter()
                        .map(structure_value)
                        .collect::<Result<_, _>>()?;
                    println!(
                        "{}",
                        json!({
                            "descriptor": result.descriptor,
                            "bound": result.bound,
                            "stable": result.stable,
                            "count": result.count(),
                            "structures": structures,
                        })
                    );
                }
                Format::Csv => {
                    println!("r,d");
                    for x in &result.structures {
                        let join = |v: &[Int]| {
                            v.iter()
                                .map(|e| e.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        };
                        println!("{},{}", join(x.r()), join(x.d()));
                    }
                }
            }
        }
        Command::Transform { op } => {
            let structure = match &op {
                TransformOp::SmoothAt { seed, vertex } => {
                    smooth_at(&read_seed(seed)?, parse_vertex(vertex)?)?
                }
                TransformOp::Ancestor { seed } => smooth_ancestor(&read_seed(seed)?)?,
                TransformOp::Subdivide { seed, position } => {
                    subdivide(&read_seed(seed)?, *position)?
                }
                TransformOp::Sequence { seed, sequence } => {
                    let seed = read_seed(seed)?;
                    let base_p = seed.shape().map(|s| s.p).unwrap_or(0);
                    apply_subdivision_sequence(
                        &seed,
                        &SubdivisionSequence::new(sequence.clone(), base_p),
                    )?
                }
                TransformOp::ExpandLeaves {
                    seed,
                    slots,
                    target_s,
                } => expand_leaves(&read_seed(seed)?, slots, *target_s)?,
            };
            emit_structure(&structure, format)?;
        }
        Command::Count {
            graph,
            oracle,
            max_c,
            write_oracle,
        } => {
            let target = parse_graph_descriptor(&graph)?;
            let (count, oracle_bound, stable) = match target {
                GraphTarget::Path(n) => (path_count(n as u64)?, None, None),
                GraphTarget::Cycle(n) => (cycle_count(n as u64)?, None, None),
                GraphTarget::Coconut(p, 1) => (path_count(p as u64 + 1)?, None, None),
                GraphTarget::Coconut(p, s) => {
                    let oracle = load_or_build_oracle(oracle.as_ref(), p, s, max_c)?;
                    let count = ct_count(p as u64, s as u64, &oracle)?;
                    if let Some(path) = &write_oracle {
                        oracle.append_jsonl(path)?;
                    }
                    (count, oracle.min_bound(), Some(oracle.all_stable()))
                }
                GraphTarget::File(_) => {
                    return Err(CliError(
                        "count supports only the ct/path/cycle/star families".into(),
                    ))
                }
            };
            match format {
                Format::Json => {
                    let mut obj = json!({"graph": graph, "count": big_to_value(&count)});
                    if let Some(bound) = oracle_bound {
                        obj["oracle_bound"] = json!(bound);
                    }
                    if let Some(stable) = stable {
                        obj["oracle_stable"] = json!(stable);
                    }
                    println!("{obj}");
                }
                Format::Csv => {
                    println!("graph,count,oracle_bound,oracle_stable");
                    println!(
                        "{graph},{count},{},{}",
                        oracle_bound.map(|b| b.to_string()).unwrap_or_default(),
                        stable.map(|s| s.to_string()).unwrap_or_default()
                    );
                }
            }
        }
        Command::Verify {
            p_max,
            s_max,
            bound,
            write_oracle,
        } => {
            let oracle = build_oracle(p_max, s_max, bound);
            if let Some(path) = &write_oracle {
                oracle.append_jsonl(path)?;
            }
            let mut cells = Vec::new();
            let mut all_stable_match = true;
            for p in 1..=p_max {
                for s in 2..=s_max {
                    let brute = enumerate_ct(p, s, bound);
                    let theorem = ct_count(p as u64, s as u64, &oracle)?;
                    let oracle_stable = (1..=p)
                        .flat_map(|q| (2..=s).map(move |y| (q, y)))
                        .all(|(q, y)| oracle.get(q, y).map(|e| e.stable).unwrap_or(false));
                    let cell_stable = brute.stable && oracle_stable;
                    let matches = BigUint::from(brute.count()) == theorem;
                    if cell_stable && !matches {
                        all_stable_match = false;
                    }
                    cells.push(json!({
                        "p": p,
                        "s": s,
                        "brute_force": brute.count(),
                        "theorem": big_to_value(&theorem),
                        "stable": cell_stable,
                        "match": matches,
                    }));
                }
            }
            match format {
                Format::Json => println!(
                    "{}",
                    json!({"bound": bound, "all_stable_match": all_stable_match, "cells": cells})
                ),
                Format::Csv => {
                    println!("p,s,brute_force,theorem,stable,match");
                    for cell in &cells {
                        println!(
                            "{},{},{},{},{},{}",
                            cell["p"], cell["s"], cell["brute_force"], cell["theorem"],
                            cell["stable"], cell["match"]
                        );
                    }
                }
            }
            return Ok(all_stable_match);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
