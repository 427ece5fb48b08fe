//! `tomoghost`: command-line front end for the switching-component toolkit.
//!
//! Every command emits a JSON envelope `{"status", "payload", "diagnostics"}`
//! with recursively sorted object keys, so identical inputs produce
//! byte-identical output. Exit codes: 0 ok, 2 invalid input, 3 inconclusive
//! (budget or representation limits), 4 internal error.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use tomoghost::bounds::{
    guaranteed_threshold_scan, pigeonhole_certificate, Verdict, DEFAULT_BIT_CAP,
};
use tomoghost::constructions::{
    coprime_census, hypercube_ghost, paper_example_m5, polygon_ghost, select_directions, GhostPair,
};
use tomoghost::lattice::{Direction, DirectionSet, Grid, PointConfiguration};
use tomoghost::pte::{ghost_to_pte2, reduce_to_pte1, verify_pte, PteSolution};
use tomoghost::search::{min_ghost, ugon_check, uniqueness_check, DEFAULT_NODE_BUDGET};
use tomoghost::xray::{count_lines_bound, count_lines_exact, tomographically_equivalent, xray};

/// Version of the JSON payload layout, reported by `--version`.
const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "tomoghost", version = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)"))]
struct Cli {
    /// Write the JSON result to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,

    /// Seed recorded in the diagnostics (reserved for randomized helpers;
    /// all commands here are deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker count hint. The engines are sequential and deterministic, so
    /// this does not change any output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the discrete X-ray of a configuration in one direction.
    Xray {
        /// JSON file with {"d": .., "points": [[..], ..]}.
        #[arg(long)]
        points: String,
        /// Direction as comma-separated integers, e.g. 1,1 or 1,-2,0.
        #[arg(long)]
        direction: String,
    },
    /// Re-verify a ghost pair (from a file or stdin).
    VerifyGhost {
        /// JSON file with the pair; reads stdin when omitted or "-".
        #[arg(long)]
        pair: Option<String>,
    },
    /// Build switching components.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Select m pairwise independent spanning directions from a small cube.
    SelectDirections {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// Count relatively prime d-tuples in [1..p]^d.
    CoprimeCensus {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
    },
    /// Exact and bounded counts of lines meeting the cube grid [1..n]^d.
    CountLines {
        #[arg(long)]
        direction: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
    },
    /// Pigeonhole counting certificates.
    Bounds {
        #[command(subcommand)]
        what: BoundsCommand,
    },
    /// Exhaustive search oracles.
    Search {
        #[command(subcommand)]
        what: SearchCommand,
    },
    /// Prouhet-Tarry-Escott conversion and verification.
    Pte {
        #[command(subcommand)]
        what: PteCommand,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Project the parity two-coloring of the unit m-cube along a
    /// direction set.
    Hypercube {
        /// JSON file with {"d": .., "directions": [[..], ..]}.
        #[arg(long)]
        directions: String,
    },
    /// Chord-pairing certificate for the alternate vertices of a regular
    /// 2m-gon.
    Polygon {
        #[arg(long)]
        m: u32,
    },
    /// The tight 6-point, 5-direction switching component in Z^2.
    PaperExample,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Full counting certificate for (m, d, epsilon).
    Certificate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        /// Positive rational, e.g. 1/1 or 1/2.
        #[arg(long)]
        epsilon: String,
        /// Optional direction-set JSON file (defaults to the lexicographic
        /// selection for m, d).
        #[arg(long)]
        directions: Option<String>,
        /// Optional even grid side (defaults to the derived theorem value).
        #[arg(long)]
        n: Option<u64>,
        /// Bit cap for exact big-integer evaluation.
        #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
        bit_cap: u64,
    },
    /// Certificate verdicts over a range of m.
    Scan {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        m_from: usize,
        #[arg(long)]
        m_to: usize,
        #[arg(long, default_value_t = DEFAULT_BIT_CAP)]
        bit_cap: u64,
    },
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Smallest ghost per-side size on a grid, exhaustively.
    MinGhost {
        #[arg(long)]
        directions: String,
        /// Grid extents like 6x5.
        #[arg(long)]
        grid: String,
        /// Grid anchor like 0,0 (default all-ones).
        #[arg(long)]
        offset: Option<String>,
        #[arg(long)]
        kmax: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Is the configuration the only one in the grid with its X-rays?
    Unique {
        #[arg(long)]
        points: String,
        #[arg(long)]
        directions: String,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        offset: Option<String>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Lattice U-gon check.
    Ugon {
        #[arg(long)]
        points: String,
        #[arg(long)]
        directions: String,
    },
}

#[derive(Subcommand)]
enum PteCommand {
    /// Convert a planar ghost pair into a PTE_2 solution.
    FromGhost {
        #[arg(long)]
        pair: String,
    },
    /// Check all power-sum identities of a solution exactly.
    Verify {
        #[arg(long)]
        solution: String,
    },
    /// Collapse a PTE_2 solution through a linear functional.
    Reduce {
        #[arg(long)]
        solution: String,
        /// Functional coefficients, e.g. 1,6.
        #[arg(long)]
        alpha: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    InvalidInput,
    Inconclusive,
    InternalError,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::InvalidInput => "invalid-input",
            Status::Inconclusive => "inconclusive",
            Status::InternalError => "internal-error",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::InvalidInput => 2,
            Status::Inconclusive => 3,
            Status::InternalError => 4,
        }
    }
}

struct CommandResult {
    status: Status,
    payload: Value,
    diagnostics: Vec<String>,
}

impl CommandResult {
    fn ok(payload: Value) -> CommandResult {
        CommandResult {
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
        }
    }
}

fn classify(err: &tomoghost::Error) -> Status {
    use tomoghost::Error::*;
    match err {
        InternalError(_) => Status::InternalError,
        _ => Status::InvalidInput,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payloads serialize")
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|part| part.trim().parse::<i64>().map_err(|e| format!("bad integer {part:?}: {e}")))
        .collect()
}

fn parse_extents(s: &str) -> Result<Vec<u64>, String> {
    s.split(['x', 'X'])
        .map(|part| part.trim().parse::<u64>().map_err(|e| format!("bad extent {part:?}: {e}")))
        .collect()
}

fn parse_epsilon(s: &str) -> Result<Ratio<u64>, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num: u64 = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
    let den: u64 = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
    if num == 0 || den == 0 {
        return Err("epsilon must be a positive rational".into());
    }
    Ok(Ratio::new(num, den))
}

fn read_file(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn load_configuration(path: &str) -> Result<PointConfiguration, String> {
    serde_json::from_str(&read_file(path)?).map_err(|e| format!("bad configuration in {path}: {e}"))
}

fn load_direction_set(path: &str) -> Result<DirectionSet, String> {
    serde_json::from_str(&read_file(path)?).map_err(|e| format!("bad direction set in {path}: {e}"))
}

/// Accept a ghost pair either bare or wrapped in a result envelope (so
/// `tomoghost construct paper-example | tomoghost verify-ghost` works).
fn load_ghost_pair_lenient(text: &str) -> Result<GhostPair, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("bad JSON: {e}"))?;
    let inner = match value.get("payload") {
        Some(p) => p.get("pair").unwrap_or(p).clone(),
        None => value.get("pair").cloned().unwrap_or(value),
    };
    serde_json::from_value(inner).map_err(|e| format!("bad ghost pair: {e}"))
}

/// Same leniency for solutions, so `pte from-ghost` output pipes straight in.
fn load_solution_lenient(text: &str) -> Result<PteSolution, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("bad JSON: {e}"))?;
    let inner = value.get("payload").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| format!("bad solution: {e}"))
}

fn ghost_pair_payload(pair: &GhostPair) -> Value {
    json!({
        "f": to_value(&pair.f),
        "g": to_value(&pair.g),
        "directions": to_value(&pair.directions),
        "verified": pair.verify().is_ok(),
    })
}

fn make_grid(extents: &str, offset: Option<&str>) -> Result<Grid, String> {
    let extents = parse_extents(extents)?;
    let offset = match offset {
        Some(o) => parse_int_list(o)?,
        None => vec![1; extents.len()],
    };
    Grid::new(extents, offset).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> CommandResult {
    match run_inner(cli) {
        Ok(result) => result,
        Err(msg) => CommandResult {
            status: Status::InvalidInput,
            payload: Value::Null,
            diagnostics: vec![msg],
        },
    }
}

fn lib_result(err: tomoghost::Error) -> CommandResult {
    CommandResult {
        status: classify(&err),
        payload: Value::Null,
        diagnostics: vec![err.to_string()],
    }
}

fn run_inner(cli: &Cli) -> Result<CommandResult, String> {
    Ok(match &cli.command {
        Command::Xray { points, direction } => {
            let cfg = load_configuration(points)?;
            let dir = Direction::canonicalize(&parse_int_list(direction)?)
                .map_err(|e| e.to_string())?;
            match xray(&cfg, &dir) {
                Ok(profile) => {
                    let lines: Vec<Value> = profile
                        .counts
                        .iter()
                        .map(|(key, count)| json!({"key": key, "count": count}))
                        .collect();
                    CommandResult::ok(json!({
                        "direction": dir.coords(),
                        "lines": lines,
                    }))
                }
                Err(e) => lib_result(e),
            }
        }
        Command::VerifyGhost { pair } => {
            let text = match pair.as_deref() {
                None | Some("-") => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| format!("cannot read stdin: {e}"))?;
                    buf
                }
                Some(path) => read_file(path)?,
            };
            let pair = load_ghost_pair_lenient(&text)?;
            let equivalence = tomographically_equivalent(&pair.f, &pair.g, &pair.directions)
                .map_err(|e| e.to_string())?;
            let disjoint = pair.f.intersection(&pair.g).is_empty();
            let same_size = pair.f.cardinality() == pair.g.cardinality();
            CommandResult::ok(json!({
                "verified": equivalence.equivalent && disjoint && same_size,
                "equivalent": equivalence.equivalent,
                "disjoint": disjoint,
                "same_cardinality": same_size,
                "witness": to_value(&equivalence.witness),
                "size": pair.f.cardinality(),
            }))
        }
        Command::Construct { what } => match what {
            ConstructCommand::Hypercube { directions } => {
                let set = load_direction_set(directions)?;
                match hypercube_ghost(&set) {
                    Ok(h) => CommandResult::ok(json!({
                        "raw_even": to_value(&h.raw_even),
                        "raw_odd": to_value(&h.raw_odd),
                        "pair": ghost_pair_payload(&h.pair),
                        "verified": true,
                    })),
                    Err(e) => lib_result(e),
                }
            }
            ConstructCommand::Polygon { m } => match polygon_ghost(*m) {
                Ok(cert) => CommandResult::ok(to_value(&cert)),
                Err(e) => lib_result(e),
            },
            ConstructCommand::PaperExample => {
                let pair = paper_example_m5();
                CommandResult::ok(ghost_pair_payload(&pair))
            }
        },
        Command::SelectDirections { m, d } => match select_directions(*m, *d) {
            Ok(sel) => CommandResult::ok(to_value(&sel)),
            Err(e) => lib_result(e),
        },
        Command::CoprimeCensus { p, d } => match coprime_census(*p, *d) {
            Ok(census) => CommandResult::ok(to_value(&census)),
            Err(e) => lib_result(e),
        },
        Command::CountLines { direction, n, d } => {
            let dir = Direction::canonicalize(&parse_int_list(direction)?)
                .map_err(|e| e.to_string())?;
            match (count_lines_exact(&dir, *n, *d), count_lines_bound(&dir, *n, *d)) {
                (Ok(exact), Ok(bound)) => CommandResult::ok(json!({
                    "exact": exact,
                    "lemma1_bound": bound,
                })),
                (Err(e), _) | (_, Err(e)) => lib_result(e),
            }
        }
        Command::Bounds { what } => match what {
            BoundsCommand::Certificate {
                m,
                d,
                epsilon,
                directions,
                n,
                bit_cap,
            } => {
                let eps = parse_epsilon(epsilon)?;
                let dirs = match directions {
                    Some(path) => Some(load_direction_set(path)?),
                    None => None,
                };
                match pigeonhole_certificate(*m, *d, eps, dirs.as_ref(), *n, *bit_cap) {
                    Ok(report) => {
                        let status = if report.verdict == Verdict::Inconclusive {
                            Status::Inconclusive
                        } else {
                            Status::Ok
                        };
                        CommandResult {
                            status,
                            payload: to_value(&report),
                            diagnostics: Vec::new(),
                        }
                    }
                    Err(e) => lib_result(e),
                }
            }
            BoundsCommand::Scan {
                d,
                epsilon,
                m_from,
                m_to,
                bit_cap,
            } => {
                let eps = parse_epsilon(epsilon)?;
                match guaranteed_threshold_scan(*d, eps, *m_from, *m_to, *bit_cap) {
                    Ok(table) => CommandResult::ok(to_value(&table)),
                    Err(e) => lib_result(e),
                }
            }
        },
        Command::Search { what } => match what {
            SearchCommand::MinGhost {
                directions,
                grid,
                offset,
                kmax,
                budget,
            } => {
                let set = load_direction_set(directions)?;
                let grid = make_grid(grid, offset.as_deref())?;
                match min_ghost(&set, &grid, *kmax, *budget) {
                    Ok(outcome) => {
                        let status = if outcome.minimal_size.is_none() && !outcome.exhausted {
                            Status::Inconclusive
                        } else {
                            Status::Ok
                        };
                        let diagnostics = outcome.diagnostics.clone();
                        CommandResult {
                            status,
                            payload: to_value(&outcome),
                            diagnostics,
                        }
                    }
                    Err(e) => lib_result(e),
                }
            }
            SearchCommand::Unique {
                points,
                directions,
                grid,
                offset,
                budget,
            } => {
                let cfg = load_configuration(points)?;
                let set = load_direction_set(directions)?;
                let grid = make_grid(grid, offset.as_deref())?;
                match uniqueness_check(&cfg, &set, &grid, *budget) {
                    Ok(report) => CommandResult::ok(to_value(&report)),
                    Err(e) => lib_result(e),
                }
            }
            SearchCommand::Ugon { points, directions } => {
                let cfg = load_configuration(points)?;
                let set = load_direction_set(directions)?;
                match ugon_check(&cfg, &set) {
                    Ok(report) => CommandResult::ok(to_value(&report)),
                    Err(e) => lib_result(e),
                }
            }
        },
        Command::Pte { what } => match what {
            PteCommand::FromGhost { pair } => {
                let pair = load_ghost_pair_lenient(&read_file(pair)?)?;
                pair.verify().map_err(|e| e.to_string())?;
                match ghost_to_pte2(&pair) {
                    Ok(sol) => CommandResult::ok(to_value(&sol)),
                    Err(e) => lib_result(e),
                }
            }
            PteCommand::Verify { solution } => {
                let sol = load_solution_lenient(&read_file(solution)?)?;
                CommandResult::ok(to_value(&verify_pte(&sol)))
            }
            PteCommand::Reduce { solution, alpha } => {
                let sol = load_solution_lenient(&read_file(solution)?)?;
                let coeffs = parse_int_list(alpha)?;
                if coeffs.len() != 2 {
                    return Err("alpha needs exactly two coefficients".into());
                }
                match reduce_to_pte1(&sol, (coeffs[0], coeffs[1])) {
                    Ok(reduced) => CommandResult::ok(to_value(&reduced)),
                    Err(e) => lib_result(e),
                }
            }
        },
    })
}

/// serde_json::Value already stores objects in sorted key order (BTreeMap),
/// so serializing the envelope yields deterministic bytes.
fn envelope(result: &CommandResult, cli: &Cli) -> Value {
    let mut diagnostics = result.diagnostics.clone();
    if let Some(seed) = cli.seed {
        diagnostics.push(format!("seed recorded: {seed}"));
    }
    json!({
        "schema_version": SCHEMA_VERSION,
        "status": result.status.as_str(),
        "payload": result.payload,
        "diagnostics": diagnostics,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let out = envelope(&result, &cli);
    let text = serde_json::to_string_pretty(&out).expect("serializable") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {path}: {e}");
                return ExitCode::from(Status::InternalError.exit_code());
            }
        }
        None => print!("{text}"),
    }
    if result.status != Status::Ok {
        for d in &result.diagnostics {
            eprintln!("{d}");
        }
    }
    ExitCode::from(result.status.exit_code())
}
