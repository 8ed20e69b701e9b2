//! Command-line driver: simulate, verify, solve, reduce, bound, contagion,
//! bench. Exit codes: 0 success, 1 usage, 2 bad input, 3 precondition or
//! unsupported operation, 4 resource limit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dynmo::error::{Error, Result};
use dynmo::graph::{MultiInstance, WeightedInstance};
use dynmo::harness;
use dynmo::io as fmt_io;
use dynmo::reduction::{gadget, to_multigraph};
use dynmo::solvers::{
    self, brute_force_min_dynmo, expected_bound, half_monopoly, randomized_monopoly,
    solve_family_f, solve_tree, vertex_cover_monopoly, CoverMode, SolveReport,
    DEFAULT_BRUTE_LIMIT, DEFAULT_NEIGHBOR_LIMIT,
};
use dynmo::treedec;

#[derive(Parser)]
#[command(
    name = "dynmo",
    version,
    about = "Threshold-activation cascades and dynamic monopolies on weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Edgelist,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file
    #[arg(short, long)]
    input: PathBuf,
    /// Input format: JSON document or whitespace edge list
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    /// Brute-force minimum (certified, small instances only)
    Exact,
    /// Strict-majority half construction on the scaled multigraph
    Majority,
    /// Random-permutation construction
    Random,
    /// Vertex-cover seeding
    Vc,
    /// Certified minimum for 1-in-peelable digraphs
    FamilyF,
    /// Certified minimum for weighted forests
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceTarget {
    Multigraph,
    Gadget,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    /// Exact expected size of the random-permutation construction
    Expected,
    /// ceil(n/2), the strict-majority guarantee
    Majority,
    /// Minimum vertex cover of the positive-weight edges
    Vc,
}

#[derive(Subcommand)]
enum Command {
    /// Run the activation process from a seed set and print the trace
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated vertex labels (may be empty)
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        seed_set: Vec<String>,
    },
    /// Print true/false: does the seed set activate the whole graph?
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        seed_set: Vec<String>,
    },
    /// Construct a seed set and print the solve report as JSON
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        method: SolveMethod,
        /// Seed for randomized methods; recorded in every report
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Vertex cap for --method exact (env DYNMO_BRUTE_LIMIT overrides
        /// the default)
        #[arg(long)]
        brute_limit: Option<usize>,
        /// Use the maximal-matching cover instead of branch-and-bound
        #[arg(long)]
        greedy_cover: bool,
    },
    /// Rewrite the instance as an integer multigraph or unit-weight gadget
    Reduce {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        to: ReduceTarget,
        /// Write the reduced instance here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the correspondence map here instead of stdout
        #[arg(long)]
        map_out: Option<PathBuf>,
        /// Tree decomposition of the input (PACE-style); transformed to a
        /// decomposition of the gadget graph
        #[arg(long)]
        td: Option<PathBuf>,
        /// Where to write the transformed decomposition
        #[arg(long)]
        td_out: Option<PathBuf>,
    },
    /// Print a seed-size bound as an exact rational
    Bound {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        kind: BoundKind,
        /// Neighborhood cap for --kind expected
        #[arg(long, default_value_t = DEFAULT_NEIGHBOR_LIMIT)]
        neighbor_limit: usize,
        /// Print a float instead of an exact rational
        #[arg(long)]
        approx: bool,
    },
    /// Banking default contagion
    Contagion {
        #[command(subcommand)]
        action: ContagionAction,
    },
    /// Run the verification suite and emit its evidence table as CSV
    Bench {
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Corpus-size multiplier (1.0 = the full suite)
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Zero the runtime column so consecutive runs are byte-identical
        #[arg(long)]
        no_timings: bool,
        /// Write the CSV here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ContagionAction {
    /// Run the loss cascade and print the capital trajectories
    Run {
        /// Network file (JSON)
        #[arg(short, long)]
        network: PathBuf,
        #[arg(long)]
        approx: bool,
    },
    /// Print the equivalent directed activation instance and seed set
    Map {
        #[arg(short, long)]
        network: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(args: &InstanceArgs) -> Result<(WeightedInstance, Vec<String>)> {
    let text = read_file(&args.input)?;
    match args.format {
        Format::Json => fmt_io::parse_instance(&text),
        Format::Edgelist => fmt_io::parse_edge_list(&text),
    }
}

fn resolve_seed_set(labels: &[String], raw: &[String]) -> Result<Vec<usize>> {
    raw.iter()
        .filter(|s| !s.is_empty())
        .map(|s| fmt_io::resolve_label(labels, s))
        .collect()
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn brute_limit(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("DYNMO_BRUTE_LIMIT")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_BRUTE_LIMIT)
}

fn run_solve(
    instance: &InstanceArgs,
    method: SolveMethod,
    rng_seed: u64,
    brute_cap: Option<usize>,
    greedy_cover: bool,
) -> Result<()> {
    let (inst, labels) = load_instance(instance)?;
    let mut report: SolveReport = match method {
        SolveMethod::Exact => brute_force_min_dynmo(&inst, brute_limit(brute_cap))?,
        SolveMethod::Majority => {
            let (multi, _) = to_multigraph(&inst)?;
            let taus = solvers::strict_majority_thresholds(&multi);
            let pairs = multi.pairs().to_vec();
            let majority = MultiInstance::new(multi.n(), multi.directed(), pairs, taus)?;
            half_monopoly(&majority, None)?
        }
        SolveMethod::Random => randomized_monopoly(&inst, rng_seed)?,
        SolveMethod::Vc => {
            let mode = if greedy_cover { CoverMode::Greedy } else { CoverMode::Exact };
            vertex_cover_monopoly(&inst, mode)?
        }
        SolveMethod::FamilyF => solve_family_f(&inst)?,
        SolveMethod::Tree => solve_tree(&inst)?,
    };
    report.rng_seed = rng_seed;
    print_json(&fmt_io::report_json(&report, &labels));
    Ok(())
}

fn run_reduce(
    instance: &InstanceArgs,
    target: ReduceTarget,
    output: Option<&Path>,
    map_out: Option<&Path>,
    td: Option<&Path>,
    td_out: Option<&Path>,
) -> Result<()> {
    let (inst, labels) = load_instance(instance)?;
    let (doc, map_json, td_text) = match target {
        ReduceTarget::Multigraph => {
            if td.is_some() {
                return Err(Error::Unsupported(
                    "tree-decomposition transforms apply to the gadget reduction".into(),
                ));
            }
            let (multi, scale) = to_multigraph(&inst)?;
            (
                fmt_io::multigraph_to_document(&multi, &labels),
                fmt_io::multigraph_map_json(scale, &labels),
                None,
            )
        }
        ReduceTarget::Gadget => {
            let (h, gmap) = gadget(&inst)?;
            let glabels = fmt_io::gadget_labels(&gmap, &labels)?;
            let td_text = match td {
                Some(path) => {
                    let (decomposition, declared_n) = treedec::from_pace_str(&read_file(path)?)?;
                    if declared_n != inst.n() {
                        return Err(Error::Parse(format!(
                            "decomposition declares {declared_n} vertices, instance has {}",
                            inst.n()
                        )));
                    }
                    let transformed = decomposition.transform(&inst)?;
                    Some(treedec::to_pace_string(&transformed, h.n()))
                }
                None => None,
            };
            (
                fmt_io::instance_to_document(&h, &glabels),
                fmt_io::gadget_map_json(&gmap, &labels, &glabels),
                td_text,
            )
        }
    };

    if let (Some(text), Some(path)) = (&td_text, td_out) {
        write_output(path, text)?;
    }
    match (output, map_out) {
        (Some(out), map) => {
            let mut body = serde_json::to_string_pretty(&doc).expect("serializable");
            body.push('\n');
            write_output(out, &body)?;
            match map {
                Some(path) => {
                    let mut body = serde_json::to_string_pretty(&map_json).expect("serializable");
                    body.push('\n');
                    write_output(path, &body)?;
                }
                None => print_json(&map_json),
            }
        }
        (None, Some(path)) => {
            let mut body = serde_json::to_string_pretty(&map_json).expect("serializable");
            body.push('\n');
            write_output(path, &body)?;
            print_json(&json!({ "instance": doc }));
        }
        (None, None) => {
            let mut combined = json!({ "instance": doc, "map": map_json });
            if let (Some(text), None) = (&td_text, td_out) {
                combined["tree_decomposition"] = json!(text);
            }
            print_json(&combined);
        }
    }
    Ok(())
}

fn run_bound(
    instance: &InstanceArgs,
    kind: BoundKind,
    neighbor_limit: usize,
    approx: bool,
) -> Result<()> {
    let (inst, _) = load_instance(instance)?;
    match kind {
        BoundKind::Expected => {
            let bound = expected_bound(&inst, neighbor_limit)?;
            if approx {
                println!("{}", bound.to_f64());
            } else {
                println!("{bound}");
            }
        }
        BoundKind::Majority => println!("{}", inst.n().div_ceil(2)),
        BoundKind::Vc => {
            if inst.directed() {
                return Err(Error::Unsupported(
                    "vertex-cover bound requires an undirected instance".into(),
                ));
            }
            println!("{}", solvers::cover::vertex_cover_size(&inst));
        }
    }
    Ok(())
}

fn run_bench(rng_seed: u64, scale: f64, no_timings: bool, output: Option<&Path>) -> Result<()> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Parse(format!("bad scale {scale}")));
    }
    let outcomes = harness::run_all(rng_seed, scale);
    let mut rows = Vec::new();
    for outcome in &outcomes {
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        eprintln!("{}: {status} ({})", outcome.name, outcome.detail);
        rows.extend(outcome.rows.iter().cloned());
    }
    let csv = harness::to_csv(&rows, !no_timings);
    match output {
        Some(path) => write_output(path, &csv)?,
        None => {
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(|e| Error::Parse(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { instance, seed_set } => {
            let (inst, labels) = load_instance(&instance)?;
            let seeds = resolve_seed_set(&labels, &seed_set)?;
            let trace = inst.activate(&seeds)?;
            print_json(&fmt_io::trace_json(&trace, &labels));
            Ok(())
        }
        Command::Verify { instance, seed_set } => {
            let (inst, labels) = load_instance(&instance)?;
            let seeds = resolve_seed_set(&labels, &seed_set)?;
            println!("{}", inst.is_dynamic_monopoly(&seeds)?);
            Ok(())
        }
        Command::Solve {
            instance,
            method,
            rng_seed,
            brute_limit,
            greedy_cover,
        } => run_solve(&instance, method, rng_seed, brute_limit, greedy_cover),
        Command::Reduce {
            instance,
            to,
            output,
            map_out,
            td,
            td_out,
        } => run_reduce(
            &instance,
            to,
            output.as_deref(),
            map_out.as_deref(),
            td.as_deref(),
            td_out.as_deref(),
        ),
        Command::Bound {
            instance,
            kind,
            neighbor_limit,
            approx,
        } => run_bound(&instance, kind, neighbor_limit, approx),
        Command::Contagion { action } => match action {
            ContagionAction::Run { network, approx } => {
                let (net, labels) = fmt_io::parse_network(&read_file(&network)?)?;
                let result = dynmo::contagion::loss_cascade(&net);
                print_json(&fmt_io::cascade_result_json(&result, &labels, approx));
                Ok(())
            }
            ContagionAction::Map { network } => {
                let (net, labels) = fmt_io::parse_network(&read_file(&network)?)?;
                let (inst, seeds) = dynmo::contagion::to_activation_instance(&net);
                let doc = fmt_io::instance_to_document(&inst, &labels);
                let seed_labels: Vec<&str> = seeds.iter().map(|&v| labels[v].as_str()).collect();
                print_json(&json!({ "instance": doc, "seed": seed_labels }));
                Ok(())
            }
        },
        Command::Bench {
            rng_seed,
            scale,
            no_timings,
            output,
        } => run_bench(rng_seed, scale, no_timings, output.as_deref()),
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
