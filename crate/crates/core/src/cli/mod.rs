//! Command-line front end: generate instances, check allocations, solve
//! single instances, run the 3-SAT reduction, print type tables, and run
//! the frequency experiments.
//!
//! Agents and resources are 1-based in every file and every printed line;
//! the library stores them 0-based.

pub mod experiment;

use crate::exact::{find_allocation_exact, find_house_exact, SearchOptions};
use crate::gen::{
    gen_instance, parse_instance, serialize_instance, Culture, GenConfig, InstanceMeta,
};
use crate::hardness::{reduce_3sat, verify_reduction, CnfFormula, GadgetMap};
use crate::ilp::{compute_types, decode_allocation, encode_aef_ip, encode_saef_ip, solve_ip, write_lp};
use crate::model::{
    envy_report, is_complete, is_fair, is_house, Allocation, FairnessConcept, Instance,
};
use crate::specialized::{
    aef_identical01, classify_preferences, saef_house_01, saef_house_identical_dp,
    saef_identical01_dp,
};
use clap::{Args, Parser, Subcommand};
use experiment::{render_report, report_to_csv, run_experiment, ExperimentConfig, ProblemKind};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Message(String),
}

impl CliError {
    fn msg(text: impl Into<String>) -> Self {
        CliError::Message(text.into())
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
    #[error(transparent)]
    Specialized(#[from] crate::specialized::SpecializedError),
    #[error(transparent)]
    Ilp(#[from] crate::ilp::IlpError),
    #[error("internal error: {strategy} strategy produced an invalid witness")]
    InvalidWitness { strategy: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Strategy {
    /// Dispatch on the instance's preference class.
    Auto,
    /// Exhaustive enumeration oracle.
    Exact,
    /// Polynomial dynamic program / share construction (restricted classes).
    Dp,
    /// Integer-program encoding with the built-in feasibility solver.
    Ilp,
    /// Maximum-matching fixpoint for 0/1 house allocation.
    Matching,
}

#[derive(Parser)]
#[command(
    name = "envyfree",
    about = "Exact solvers and experiments for weighted envy-free allocation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON.
    Generate(GenerateArgs),
    /// Check an allocation file against an instance under a concept.
    Check(CheckArgs),
    /// Find a fair allocation (or report that none exists).
    Solve(SolveArgs),
    /// Reduce a 3-SAT formula to a house-allocation instance.
    Reduce(ReduceArgs),
    /// Run the existence-frequency experiments and write a CSV.
    Experiment(ExperimentArgs),
    /// Print the resource type table of an instance.
    Types(TypesArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    agents: usize,
    #[arg(long)]
    resources: usize,
    #[arg(long, default_value = "ic")]
    culture: Culture,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Inclusive utility range, e.g. 1-10000.
    #[arg(long, default_value = "1-10000", value_parser = parse_range)]
    utility_range: RangeArg,
    /// Inclusive weight range, e.g. 1-100.
    #[arg(long, default_value = "1-100", value_parser = parse_range)]
    weight_range: RangeArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    allocation: PathBuf,
    #[arg(long, default_value = "saef")]
    concept: FairnessConcept,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "saef")]
    concept: FairnessConcept,
    #[arg(long, default_value = "allocation")]
    kind: ProblemKind,
    #[arg(long, value_enum, default_value_t = Strategy::Auto)]
    strategy: Strategy,
    #[arg(long, default_value_t = crate::exact::DEFAULT_LEAF_BUDGET)]
    leaf_budget: u64,
    /// Print the integer program (ilp strategy) instead of solving.
    #[arg(long)]
    dump_model: bool,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF input with exactly three literals per clause.
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long, default_value = "reduced-instance.json")]
    out_instance: PathBuf,
    #[arg(long, default_value = "reduced-gadgets.json")]
    out_gadgets: PathBuf,
    /// Cross-check SAT against house-allocation existence (small formulas).
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Comma-separated agent counts.
    #[arg(long, value_delimiter = ',', default_values_t = vec![5, 6, 7, 8])]
    agents: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    resources: usize,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![Culture::Ic, Culture::Spup])]
    cultures: Vec<Culture>,
    /// Comma-separated inclusive weight ranges, e.g. 1-100,101-200.
    #[arg(long, value_delimiter = ',', value_parser = parse_range,
          default_values_t = [RangeArg(1, 100), RangeArg(101, 200)])]
    weight_ranges: Vec<RangeArg>,
    #[arg(long, default_value = "allocation")]
    kind: ProblemKind,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = crate::exact::DEFAULT_LEAF_BUDGET)]
    leaf_budget: u64,
    /// CSV output path; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TypesArgs {
    #[arg(long)]
    instance: PathBuf,
}

/// Inclusive integer range in `LO-HI` form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RangeArg(u64, u64);

impl std::fmt::Display for RangeArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

fn parse_range(text: &str) -> Result<RangeArg, String> {
    let (lo, hi) = text
        .split_once('-')
        .ok_or_else(|| format!("expected LO-HI, got '{text}'"))?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad bound '{lo}'"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad bound '{hi}'"))?;
    if lo < 1 || hi < lo {
        return Err(format!("range {lo}-{hi} must satisfy 1 <= lo <= hi"));
    }
    Ok(RangeArg(lo, hi))
}

impl From<RangeArg> for (u64, u64) {
    fn from(r: RangeArg) -> Self {
        (r.0, r.1)
    }
}

/// Allocation file: one bundle of 1-based resource ids per agent.
#[derive(Debug, Serialize, Deserialize)]
struct AllocationDoc {
    bundles: Vec<Vec<usize>>,
}

pub fn parse_allocation_file(text: &str, num_resources: usize) -> Result<Allocation, CliError> {
    let doc: AllocationDoc = serde_json::from_str(text)
        .map_err(|e| CliError::msg(format!("malformed allocation JSON: {e}")))?;
    let mut bundles = Vec::with_capacity(doc.bundles.len());
    for (agent, bundle) in doc.bundles.into_iter().enumerate() {
        let mut converted = Vec::with_capacity(bundle.len());
        for r in bundle {
            if r == 0 {
                return Err(CliError::msg(format!(
                    "agent {}: resource ids are 1-based, got 0",
                    agent + 1
                )));
            }
            converted.push(r - 1);
        }
        bundles.push(converted);
    }
    Allocation::new(bundles, num_resources).map_err(|e| CliError::msg(e.to_string()))
}

pub fn allocation_to_doc_json(allocation: &Allocation) -> String {
    let doc = AllocationDoc {
        bundles: allocation
            .bundles()
            .iter()
            .map(|b| b.iter().map(|&r| r + 1).collect())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("allocation serialization");
    text.push('\n');
    text
}

fn render_bundles(allocation: &Allocation) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for (agent, bundle) in allocation.bundles().iter().enumerate() {
        let items: Vec<String> = bundle.iter().map(|&r| format!("r{}", r + 1)).collect();
        writeln!(out, "agent {}: {{{}}}", agent + 1, items.join(", ")).unwrap();
    }
    out
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = read_file(path)?;
    let (instance, _) = parse_instance(&text).map_err(|e| CliError::msg(e.to_string()))?;
    Ok(instance)
}

/// Solves one instance with an explicit strategy; `auto` picks the
/// polynomial route for recognized preference classes, the integer program
/// for general complete-allocation problems, and the oracle otherwise.
pub fn solve_instance(
    instance: &Instance,
    concept: FairnessConcept,
    kind: ProblemKind,
    strategy: Strategy,
    opts: &SearchOptions,
) -> Result<(Option<Allocation>, &'static str), SolveError> {
    use FairnessConcept::{Aef, Saef, Sef};
    let class = classify_preferences(instance);
    let strategy = match strategy {
        Strategy::Auto => match kind {
            ProblemKind::Allocation => {
                if class.identical && class.zero_one && matches!(concept, Saef | Aef) {
                    Strategy::Dp
                } else if matches!(concept, Saef | Aef) {
                    Strategy::Ilp
                } else {
                    Strategy::Exact
                }
            }
            ProblemKind::House => {
                if class.zero_one && matches!(concept, Saef | Sef) {
                    Strategy::Matching
                } else if class.identical && concept == Saef {
                    Strategy::Dp
                } else {
                    Strategy::Exact
                }
            }
        },
        other => other,
    };
    let result = match (strategy, kind) {
        (Strategy::Exact, ProblemKind::Allocation) => {
            (find_allocation_exact(instance, concept, opts)?, "exact")
        }
        (Strategy::Exact, ProblemKind::House) => {
            (find_house_exact(instance, concept, opts)?, "exact")
        }
        (Strategy::Dp, ProblemKind::Allocation) => match concept {
            Saef => (saef_identical01_dp(instance)?, "dp"),
            Aef => (aef_identical01(instance)?, "dp"),
            Sef => {
                return Err(SolveError::Unsupported(
                    "dp strategy covers saef and aef complete allocations only".into(),
                ))
            }
        },
        (Strategy::Dp, ProblemKind::House) => match concept {
            Saef => (saef_house_identical_dp(instance)?, "dp"),
            _ => {
                return Err(SolveError::Unsupported(
                    "dp strategy covers saef house allocation under identical preferences only"
                        .into(),
                ))
            }
        },
        (Strategy::Ilp, ProblemKind::Allocation) => {
            let table = compute_types(instance);
            let model = match concept {
                Saef => encode_saef_ip(instance, &table),
                Aef => encode_aef_ip(instance, &table),
                Sef => {
                    return Err(SolveError::Unsupported(
                        "no integer-program encoding for sef; use exact".into(),
                    ))
                }
            };
            let witness = solve_ip(&model)?
                .map(|s| decode_allocation(instance, &table, &s))
                .transpose()?;
            (witness, "ilp")
        }
        (Strategy::Ilp, ProblemKind::House) => {
            return Err(SolveError::Unsupported(
                "ilp strategy encodes complete allocations, not house allocations".into(),
            ))
        }
        (Strategy::Matching, ProblemKind::House) => match concept {
            Saef | Sef => (saef_house_01(instance)?, "matching"),
            Aef => {
                return Err(SolveError::Unsupported(
                    "matching strategy solves saef/sef house allocation under 0/1 preferences"
                        .into(),
                ))
            }
        },
        (Strategy::Matching, ProblemKind::Allocation) => {
            return Err(SolveError::Unsupported(
                "matching strategy applies to house allocation only".into(),
            ))
        }
        (Strategy::Auto, _) => unreachable!("auto resolved above"),
    };
    // Never hand out an unverified witness.
    if let Some(witness) = &result.0 {
        let shape_ok = match kind {
            ProblemKind::Allocation => is_complete(instance, witness),
            ProblemKind::House => is_house(instance, witness),
        };
        if !shape_ok || !is_fair(instance, witness, concept) {
            return Err(SolveError::InvalidWitness { strategy: result.1 });
        }
    }
    Ok(result)
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode, CliError> {
    let mut config = GenConfig::new(args.agents, args.resources, args.culture, args.seed);
    config.utility_range = args.utility_range.into();
    config.weight_range = args.weight_range.into();
    let instance = gen_instance(&config).map_err(|e| CliError::msg(e.to_string()))?;
    let meta = InstanceMeta {
        culture: Some(args.culture),
        seed: Some(args.seed),
        utility_range: Some(args.utility_range.into()),
        weight_range: Some(args.weight_range.into()),
    };
    let text = serialize_instance(&instance, Some(&meta));
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode, CliError> {
    let instance = load_instance(&args.instance)?;
    let allocation_text = read_file(&args.allocation)?;
    let allocation = parse_allocation_file(&allocation_text, instance.num_resources())?;
    instance
        .check_allocation(&allocation)
        .map_err(|e| CliError::msg(e.to_string()))?;
    let report = envy_report(&instance, &allocation, args.concept);
    println!("concept: {}", args.concept);
    println!(
        "complete: {}",
        if is_complete(&instance, &allocation) { "yes" } else { "no" }
    );
    println!(
        "house: {}",
        if is_house(&instance, &allocation) { "yes" } else { "no" }
    );
    if report.is_fair() {
        println!("fair: yes");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("fair: no");
        for pair in &report.pairs {
            println!(
                "agent {} envies agent {} (sum condition {}, avg condition {})",
                pair.envious + 1,
                pair.envied + 1,
                if pair.sum_held { "held" } else { "failed" },
                if pair.avg_held { "held" } else { "failed" },
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode, CliError> {
    let instance = load_instance(&args.instance)?;
    if args.dump_model {
        let table = compute_types(&instance);
        let model = match args.concept {
            FairnessConcept::Saef => encode_saef_ip(&instance, &table),
            FairnessConcept::Aef => encode_aef_ip(&instance, &table),
            FairnessConcept::Sef => {
                return Err(CliError::msg("no integer-program encoding for sef"))
            }
        };
        print!("{}", write_lp(&model));
        return Ok(ExitCode::SUCCESS);
    }
    let opts = SearchOptions {
        leaf_budget: args.leaf_budget,
        pruning: true,
    };
    let (witness, used) =
        solve_instance(&instance, args.concept, args.kind, args.strategy, &opts)
            .map_err(|e| CliError::msg(e.to_string()))?;
    println!("strategy: {used}");
    match witness {
        Some(allocation) => {
            print!("{}", render_bundles(&allocation));
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("none");
            Ok(ExitCode::from(1))
        }
    }
}

/// Gadget ids rendered 1-based for the output file.
#[derive(Serialize)]
struct GadgetDoc {
    big_m: u64,
    variables: Vec<serde_json::Value>,
    clauses: Vec<serde_json::Value>,
}

fn gadget_doc(map: &GadgetMap) -> GadgetDoc {
    GadgetDoc {
        big_m: map.big_m,
        variables: map
            .variables
            .iter()
            .map(|v| {
                serde_json::json!({
                    "agent": v.agent + 1,
                    "guard_agent": v.guard_agent + 1,
                    "true_resource": v.true_resource + 1,
                    "false_resource": v.false_resource + 1,
                })
            })
            .collect(),
        clauses: map
            .clauses
            .iter()
            .map(|c| {
                serde_json::json!({
                    "literal_agents": c.literal_agents.map(|a| a + 1),
                    "collector_agent": c.collector_agent + 1,
                    "literal_resources": c.literal_resources.map(|r| r + 1),
                    "reward_resource": c.reward_resource + 1,
                })
            })
            .collect(),
    }
}

fn cmd_reduce(args: &ReduceArgs) -> Result<ExitCode, CliError> {
    let text = read_file(&args.cnf)?;
    let formula = CnfFormula::parse_dimacs(&text).map_err(|e| CliError::msg(e.to_string()))?;
    let (instance, map) = reduce_3sat(&formula);
    write_file(&args.out_instance, &serialize_instance(&instance, None))?;
    let mut gadget_json =
        serde_json::to_string_pretty(&gadget_doc(&map)).expect("gadget serialization");
    gadget_json.push('\n');
    write_file(&args.out_gadgets, &gadget_json)?;
    println!(
        "reduced {} variables, {} clauses -> {} agents, {} resources (M = {})",
        formula.num_vars,
        formula.clauses.len(),
        instance.num_agents(),
        instance.num_resources(),
        map.big_m
    );
    if args.verify {
        let equivalent = verify_reduction(&formula).map_err(|e| CliError::msg(e.to_string()))?;
        println!("equivalent: {}", if equivalent { "yes" } else { "no" });
        if !equivalent {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<ExitCode, CliError> {
    let config = ExperimentConfig {
        agent_counts: args.agents.clone(),
        resources: args.resources,
        trials: args.trials,
        cultures: args.cultures.clone(),
        weight_ranges: args.weight_ranges.iter().map(|&r| r.into()).collect(),
        concepts: FairnessConcept::ALL.to_vec(),
        kind: args.kind,
        base_seed: args.seed,
        jobs: args.jobs,
        leaf_budget: args.leaf_budget,
    };
    let report = run_experiment(&config).map_err(|e| CliError::msg(e.to_string()))?;
    print!("{}", render_report(&report));
    let csv = report_to_csv(&report);
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            println!("csv written to {}", path.display());
        }
        None => print!("\n{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_types(args: &TypesArgs) -> Result<ExitCode, CliError> {
    let instance = load_instance(&args.instance)?;
    let table = compute_types(&instance);
    println!("{} resource types", table.num_types());
    for t in 0..table.num_types() {
        let vector: Vec<String> = table.types[t].iter().map(u64::to_string).collect();
        let members: Vec<String> = table.members[t]
            .iter()
            .map(|&r| format!("r{}", r + 1))
            .collect();
        println!(
            "type {}: ({}) x{} = {{{}}}",
            t + 1,
            vector.join(", "),
            table.multiplicity[t],
            members.join(", ")
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Entry point for the binary; returns the process exit code. Exit 0 means
/// success (and "fair"/"witness found" for check/solve), 1 means a negative
/// verdict, 2 means an input or configuration error.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Check(args) => cmd_check(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Types(args) => cmd_types(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::SplitMix64;

    #[test]
    fn allocation_file_round_trip() {
        let text = r#"{"bundles": [[1, 3], [2]]}"#;
        let allocation = parse_allocation_file(text, 3).unwrap();
        assert_eq!(allocation.bundle(0), &[0, 2]);
        assert_eq!(allocation.bundle(1), &[1]);
        let json = allocation_to_doc_json(&allocation);
        let again = parse_allocation_file(&json, 3).unwrap();
        assert_eq!(again, allocation);
    }

    #[test]
    fn allocation_file_rejects_zero_and_duplicates() {
        assert!(parse_allocation_file(r#"{"bundles": [[0]]}"#, 2).is_err());
        assert!(parse_allocation_file(r#"{"bundles": [[1], [1]]}"#, 2).is_err());
        assert!(parse_allocation_file(r#"{"bundles": [[5]]}"#, 2).is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1-100").unwrap(), RangeArg(1, 100));
        assert!(parse_range("100-1").is_err());
        assert!(parse_range("0-5").is_err());
        assert!(parse_range("abc").is_err());
    }

    /// Auto dispatch must agree with the oracle on every instance it
    /// accepts, across kinds and concepts.
    #[test]
    fn auto_agrees_with_exact() {
        let opts = SearchOptions::default();
        let mut rng = SplitMix64::new(314);
        for case in 0..400 {
            let n = 1 + (rng.next_u64() % 3) as usize;
            let m = n + (rng.next_u64() % 3) as usize;
            let weights: Vec<u64> = (0..n).map(|_| 1 + rng.next_u64() % 4).collect();
            // Mix preference classes: general, 0/1, identical.
            let utilities: Vec<Vec<u64>> = match case % 3 {
                0 => (0..n)
                    .map(|_| (0..m).map(|_| rng.next_u64() % 5).collect())
                    .collect(),
                1 => (0..n)
                    .map(|_| (0..m).map(|_| rng.next_u64() % 2).collect())
                    .collect(),
                _ => {
                    let row: Vec<u64> = (0..m).map(|_| rng.next_u64() % 5).collect();
                    vec![row; n]
                }
            };
            let instance = Instance::new(weights, utilities).unwrap();
            for kind in [ProblemKind::Allocation, ProblemKind::House] {
                for concept in FairnessConcept::ALL {
                    let auto =
                        solve_instance(&instance, concept, kind, Strategy::Auto, &opts).unwrap();
                    let exact =
                        solve_instance(&instance, concept, kind, Strategy::Exact, &opts).unwrap();
                    assert_eq!(
                        auto.0.is_some(),
                        exact.0.is_some(),
                        "kind {kind} concept {concept} on {instance:?} (auto used {})",
                        auto.1
                    );
                }
            }
        }
    }

    #[test]
    fn inapplicable_strategies_name_the_violation() {
        let instance = Instance::new(vec![1, 2], vec![vec![1, 2], vec![2, 1]]).unwrap();
        let opts = SearchOptions::default();
        let err = solve_instance(
            &instance,
            FairnessConcept::Saef,
            ProblemKind::Allocation,
            Strategy::Dp,
            &opts,
        )
        .unwrap_err();
        assert!(err.to_string().contains("identical"));

        let err = solve_instance(
            &instance,
            FairnessConcept::Sef,
            ProblemKind::Allocation,
            Strategy::Ilp,
            &opts,
        )
        .unwrap_err();
        assert!(err.to_string().contains("sef"));

        let err = solve_instance(
            &instance,
            FairnessConcept::Aef,
            ProblemKind::House,
            Strategy::Matching,
            &opts,
        )
        .unwrap_err();
        assert!(err.to_string().contains("0/1"));
    }
}
