//! `segal`: build, check and export finite 2-Segal data from the command line.
//!
//! Exit status: 0 when the checked property holds, 1 when it fails (or an
//! algebra fails verification), 2 on input errors.

mod inputs;
mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use segal_core::constructions::{
    building, nerve, oriented_graph, random_category, twisted_cyclic_nerve, Endofunctor, FiniteCategory,
};
use segal_core::group::FiniteGroup;
use segal_core::hall::{
    factorization_algebra, hall_category, hall_from_oracle, hecke_algebra, oracle_fq_vector_spaces, oracle_pointed_sets, verify_algebra,
    AlgebraReport, AlgebraTable, FinitaryHallOracle,
};
use segal_core::pentagon::{group_solution, nerve_of_solution};
use segal_core::segal_check::{is_1segal, is_2segal, is_unital, path_criterion_crosscheck, suspension_left, suspension_right, Strategy};
use segal_core::sset_core::{product, quotient_by_free_action, standard_simplex, DEFAULT_MAX_SIMPLICES, SIZE_CAP_ENV};
use segal_core::{Bounds, Error, TruncatedSimplicialSet};

#[derive(Parser, Debug)]
#[command(name = "segal", version, about = "Finite 2-Segal sets: construction, verification and algebras")]
pub(crate) struct Cli {
    /// Global cap on the number of simplices built (overrides the environment).
    #[arg(long, global = true)]
    max_simplices: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a simplicial set and write it as JSON.
    Build(BuildArgs),
    /// Check a property of a simplicial set read from JSON.
    Check(CheckArgs),
    /// Compute and verify a structure-constant table.
    Algebra(AlgebraArgs),
    /// Execute a JSON job manifest.
    Run { manifest: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildKind {
    Nerve,
    CyclicNerve,
    Building,
    Graph,
    Suspension,
    Product,
    Quotient,
    PentagonNerve,
    Simplex,
}

#[derive(Args, Debug)]
struct BuildArgs {
    kind: BuildKind,
    /// Top level of the truncation.
    #[arg(long, short = 'N', default_value_t = 4)]
    level: usize,
    /// Dimension for `simplex`.
    #[arg(long, short = 'n')]
    n: Option<usize>,
    /// Named group (Z4, S3, D4, Q8, Z2xZ2, ...).
    #[arg(long)]
    group: Option<String>,
    /// Category JSON file.
    #[arg(long)]
    category: Option<PathBuf>,
    /// Random category with at most this many objects (uses --seed).
    #[arg(long)]
    random_objects: Option<usize>,
    /// Z-poset JSON file (building, cyclic-nerve).
    #[arg(long)]
    poset: Option<PathBuf>,
    /// Capped chain 0 < ... < k with shift x -> min(x + step, k), as `k,step`.
    #[arg(long)]
    chain: Option<String>,
    /// Graph, solution or action JSON, or simplicial-set inputs.
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Action JSON for `quotient`.
    #[arg(long)]
    action: Option<PathBuf>,
    /// Side of the suspension.
    #[arg(long, value_enum, default_value_t = Side::Left)]
    side: Side,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    #[value(name = "1segal")]
    OneSegal,
    #[value(name = "2segal")]
    TwoSegal,
    Unital,
    Crosscheck,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    All,
    Boundary,
}

#[derive(Args, Debug)]
struct CheckArgs {
    file: PathBuf,
    property: Property,
    /// Highest level checked (default: the file's truncation, one less for crosscheck).
    #[arg(long)]
    up_to: Option<usize>,
    #[arg(long, value_enum, default_value_t = StrategyArg::All)]
    strategy: StrategyArg,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgebraKind {
    Hall,
    Factorization,
    Hecke,
    OracleHall,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleKind {
    Pointed,
    Fq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    kind: AlgebraKind,
    /// Group for `factorization` or `hecke`; oracle (pointed | fq) for `oracle-hall`.
    target: Option<String>,
    /// Subgroup for `hecke`: `S<m>` inside `S<n>`, or generator labels `a,b`.
    subgroup: Option<String>,
    /// Simplicial-set JSON for `hall`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Category JSON for `factorization` (instead of a group).
    #[arg(long)]
    category: Option<PathBuf>,
    /// Morphism label (or index) being factored, for `factorization`.
    #[arg(long, default_value = "0")]
    w: String,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 4)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Failure of the command itself, mapped to an exit status.
enum Failure {
    Input(String),
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_err(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn cap(cli: &Cli) -> usize {
    cli.max_simplices
        .or_else(|| std::env::var(SIZE_CAP_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_MAX_SIMPLICES)
}

fn named_group(name: Option<&str>) -> Result<FiniteGroup, Failure> {
    Ok(inputs::group(name.ok_or_else(|| input_err("a group is required"))?)?)
}

fn source_category(a: &BuildArgs, seed: u64) -> Result<FiniteCategory, Failure> {
    match (&a.group, &a.category, a.random_objects) {
        (Some(g), None, None) => Ok(FiniteCategory::from_group(&inputs::group(g)?)),
        (None, Some(p), None) => Ok(inputs::category(p)?),
        (None, None, Some(k)) if k >= 1 => Ok(random_category(&mut ChaCha8Rng::seed_from_u64(seed), k, 64)),
        _ => Err(input_err("give exactly one of --group, --category, --random-objects")),
    }
}

fn zposet(a: &BuildArgs) -> Result<segal_core::constructions::ZPlusPoset, Failure> {
    match (&a.poset, &a.chain) {
        (Some(p), None) => Ok(inputs::zposet(p)?),
        (None, Some(c)) => {
            let nums: Vec<usize> = c.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(|_| input_err("--chain expects k,step"))?;
            match nums[..] {
                [k, step] => Ok(segal_core::constructions::ZPlusPoset::capped_chain(k, step)),
                _ => Err(input_err("--chain expects k,step")),
            }
        }
        _ => Err(input_err("give exactly one of --poset, --chain")),
    }
}

fn one_input(a: &BuildArgs) -> Result<&Path, Failure> {
    match &a.input[..] {
        [p] => Ok(p),
        _ => Err(input_err("exactly one --input is required")),
    }
}

fn build(a: &BuildArgs, bounds: Bounds, seed: u64) -> Result<TruncatedSimplicialSet, Failure> {
    let x = match a.kind {
        BuildKind::Simplex => standard_simplex(a.n.ok_or_else(|| input_err("--n is required"))?, bounds)?,
        BuildKind::Nerve => nerve(&source_category(a, seed)?, bounds)?,
        BuildKind::CyclicNerve => {
            if a.poset.is_some() || a.chain.is_some() {
                let (c, f) = zposet(a)?.to_category();
                twisted_cyclic_nerve(&c, &f, bounds)?
            } else {
                let c = source_category(a, seed)?;
                twisted_cyclic_nerve(&c, &Endofunctor::identity(&c), bounds)?
            }
        }
        BuildKind::Building => building(&zposet(a)?, bounds)?,
        BuildKind::Graph => {
            let (v, e) = inputs::graph(one_input(a)?)?;
            oriented_graph(&v, &e, bounds)?
        }
        BuildKind::Suspension => {
            let x = inputs::simplicial_set(one_input(a)?)?;
            match a.side {
                Side::Left => suspension_left(&x)?,
                Side::Right => suspension_right(&x)?,
            }
        }
        BuildKind::Product => match &a.input[..] {
            [p, q] => product(&inputs::simplicial_set(p)?, &inputs::simplicial_set(q)?)?,
            _ => return Err(input_err("product needs two --input files")),
        },
        BuildKind::Quotient => {
            let x = inputs::simplicial_set(one_input(a)?)?;
            let act = inputs::action(a.action.as_deref().ok_or_else(|| input_err("--action is required"))?)?;
            quotient_by_free_action(&x, &act)?
        }
        BuildKind::PentagonNerve => {
            let sol = match (&a.group, &a.input[..]) {
                (Some(g), []) => group_solution(&inputs::group(g)?),
                (None, [p]) => inputs::pentagon_solution(p)?,
                _ => return Err(input_err("give --group or one --input solution file")),
            };
            nerve_of_solution(&sol, bounds)?
        }
    };
    Ok(x)
}

/// Serialize, parse back (which validates) and insist on a lossless roundtrip.
fn validated_json(x: &TruncatedSimplicialSet) -> Result<String, Failure> {
    let text = x.to_json();
    let back = TruncatedSimplicialSet::from_json(&text)?;
    if back != *x || back.to_json() != text {
        return Err(input_err("serialization roundtrip is not lossless"));
    }
    Ok(text)
}

fn cmd_build(cli: &Cli, a: &BuildArgs) -> Outcome {
    let x = build(a, Bounds::new(a.level).max_simplices(cap(cli)), cli.seed)?;
    emit(a.out.as_deref(), &validated_json(&x)?)
}

fn cmd_check(a: &CheckArgs) -> Outcome {
    let x = inputs::simplicial_set(&a.file)?;
    let strategy = match a.strategy {
        StrategyArg::All => Strategy::AllTriangulations,
        StrategyArg::Boundary => Strategy::BoundaryPairs,
    };
    let n = x.truncation();
    let (holds, text) = match a.property {
        Property::OneSegal => {
            let v = is_1segal(&x, a.up_to.unwrap_or(n))?;
            (v.holds, to_json(&v))
        }
        Property::TwoSegal => {
            let v = is_2segal(&x, a.up_to.unwrap_or(n), strategy)?;
            (v.holds, to_json(&v))
        }
        Property::Unital => {
            let v = is_unital(&x, a.up_to.unwrap_or(n))?;
            (v.holds, to_json(&v))
        }
        Property::Crosscheck => {
            let r = path_criterion_crosscheck(&x, a.up_to.unwrap_or(n.saturating_sub(1)))?;
            (r.agree, to_json(&r))
        }
    };
    emit(a.out.as_deref(), &text)?;
    if holds {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    oracle: &'a str,
    bound: usize,
    verified_triples: usize,
    skipped_triples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: &'a Option<String>,
    table: segal_core::hall::AlgebraJson,
}

fn cmd_algebra(a: &AlgebraArgs) -> Outcome {
    let mut oracle_meta: Option<(String, usize, usize, Option<String>)> = None;
    let table: AlgebraTable = match a.kind {
        AlgebraKind::Hall => {
            let p = a.input.as_deref().ok_or_else(|| input_err("--input is required"))?;
            hall_category(&inputs::simplicial_set(p)?)?.to_table()
        }
        AlgebraKind::Factorization => {
            let c = match (&a.category, &a.target) {
                (Some(p), None) => inputs::category(p)?,
                (None, Some(g)) => FiniteCategory::from_group(&inputs::group(g)?),
                _ => return Err(input_err("give a group or --category")),
            };
            let w = c
                .morphisms()
                .iter()
                .position(|m| m.label == a.w)
                .or_else(|| a.w.parse().ok().filter(|&i: &usize| i < c.morphisms().len()))
                .ok_or_else(|| input_err(format!("unknown morphism {}", a.w)))?;
            factorization_algebra(&c, w as u32)?
        }
        AlgebraKind::Hecke => {
            let g = named_group(a.target.as_deref())?;
            let k = inputs::subgroup(&g, a.subgroup.as_deref().ok_or_else(|| input_err("a subgroup is required"))?)?;
            hecke_algebra(&g, &k)?
        }
        AlgebraKind::OracleHall => {
            let kind = a.target.as_deref().ok_or_else(|| input_err("an oracle (pointed | fq) is required"))?;
            let kind = OracleKind::from_str(kind, true).map_err(|_| input_err(format!("unknown oracle {kind}")))?;
            let o: Box<dyn FinitaryHallOracle> = match kind {
                OracleKind::Pointed => Box::new(oracle_pointed_sets()),
                OracleKind::Fq => Box::new(oracle_fq_vector_spaces(a.q, a.bound)?),
            };
            let h = hall_from_oracle(o.as_ref(), a.bound)?;
            oracle_meta = Some((o.name(), h.verified_triples, h.skipped_triples, h.warning.clone()));
            if let Some(w) = &h.warning {
                eprintln!("warning: {w}");
            }
            h.table
        }
    };
    let report: AlgebraReport = verify_algebra(&table);
    if !report.holds() {
        eprintln!("verification failed: {}", to_json(&report));
        return Err(Failure::Property);
    }
    let text = match (a.format, oracle_meta) {
        (Format::Csv, _) => table.to_csv(),
        (Format::Json, None) => table.to_json(),
        (Format::Json, Some((name, verified, skipped, warning))) => to_json(&OracleOutput {
            oracle: &name,
            bound: a.bound,
            verified_triples: verified,
            skipped_triples: skipped,
            warning: &warning,
            table: table.to_json_value(),
        }),
    };
    emit(a.out.as_deref(), text.trim_end())
}

pub(crate) fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Build(a) => cmd_build(cli, a),
        Command::Check(a) => cmd_check(a),
        Command::Algebra(a) => cmd_algebra(a),
        Command::Run { manifest } => manifest::run(manifest),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
