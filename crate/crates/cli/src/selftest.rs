use std::path::{Path, PathBuf};

use clap::Args;
use dominion_core::exact::{count_independent_sets, gamma_bruteforce, gamma_dp, gamma_rangetree};
use dominion_core::fbcsd::{lambda_star, lambda_star_bruteforce};
use dominion_core::generate::{generate, ColorMode, GeneratorSpec, ProbMode};
use dominion_core::rangetree::trace::{random_trace, replay as replay_trace, Trace};
use dominion_core::{build_dominance_graph, ColoredStochasticDataset, ExactNumber};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::common::{read_text, write_text, Failure};

#[derive(Args, Clone, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random datasets per dataset check.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    /// Largest dataset size for the enumeration oracles.
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    /// Total range-tree operations across all fuzz traces.
    #[arg(long, default_value_t = 20_000)]
    pub fuzz_ops: usize,
    /// Corrupt the first range-tree result, to exercise the failure path.
    #[arg(long)]
    pub inject_fault: bool,
    /// Where reproducer files are written; defaults to the system temp dir.
    #[arg(long)]
    pub reproducer_dir: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct ReplayArgs {
    /// Trace file.
    #[arg(long)]
    pub input: PathBuf,
}

const TRACE_OPS: usize = 1000;
const TRACE_POINTS: usize = 40;

enum Repro {
    Dataset(ColoredStochasticDataset),
    Trace(Trace),
}

struct Mismatch {
    case: usize,
    detail: String,
    repro: Repro,
}

type Check = dyn Fn(usize, u64) -> Option<Mismatch> + Sync;

fn case_seed(seed: u64, case: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(case as u64)
}

fn dataset_mismatch(case: usize, ds: &ColoredStochasticDataset, detail: String) -> Option<Mismatch> {
    Some(Mismatch {
        case,
        detail,
        repro: Repro::Dataset(ds.clone()),
    })
}

fn csd_check(max_n: usize, fault: bool) -> Box<Check> {
    Box::new(move |case, seed| {
        let n = 1 + case % max_n.max(1);
        let spec = GeneratorSpec::new(n, seed)
            .colors(ColorMode::Colors(1 + (case % 3) as u32))
            .probs(ProbMode::Mixed { max_den: 64 })
            .coord_range((n as i64).max(3));
        let ds = generate(&spec).expect("grid is large enough");
        let b: ExactNumber = gamma_bruteforce(&ds).expect("within cap");
        let d: ExactNumber = gamma_dp(&ds).expect("planar");
        let mut r: ExactNumber = gamma_rangetree(&ds).expect("planar");
        if fault && case == 0 {
            r += &ExactNumber::new(1, 1 << 20);
        }
        (b != d || b != r).then(|| format!("brute {b}, dp {d}, rangetree {r}")).and_then(|m| dataset_mismatch(case, &ds, m))
    })
}

fn half_check(max_n: usize) -> Box<Check> {
    Box::new(move |case, seed| {
        let n = 1 + case % max_n.max(1);
        let spec = GeneratorSpec::new(n, seed)
            .colors(ColorMode::Colors(1 + (case % 3) as u32))
            .probs(ProbMode::Half)
            .coord_range((n as i64).max(3));
        let ds = generate(&spec).expect("grid is large enough");
        let gamma: ExactNumber = gamma_rangetree(&ds).expect("planar");
        let count = count_independent_sets(&build_dominance_graph(&ds)).expect("within cap");
        let scaled = &gamma * &ExactNumber::from_integer(1i64 << n);
        (scaled != ExactNumber::from_integer(count as i64))
            .then(|| format!("2^n Γ = {scaled}, independent sets = {count}"))
            .and_then(|m| dataset_mismatch(case, &ds, m))
    })
}

fn fbcsd_check(max_n: usize) -> Box<Check> {
    Box::new(move |case, seed| {
        let n = 1 + case % max_n.clamp(1, 8);
        let spec = GeneratorSpec::new(n, seed)
            .colors(ColorMode::Colors(1 + (case % 3) as u32))
            .probs(ProbMode::Mixed { max_den: 64 })
            .general_position(true);
        let ds = generate(&spec).expect("general position is reachable");
        let fast: ExactNumber = lambda_star(&ds).expect("general position");
        let brute = lambda_star_bruteforce(&ds).expect("within cap");
        (fast != brute)
            .then(|| format!("witness {fast}, enumeration {brute}"))
            .and_then(|m| dataset_mismatch(case, &ds, m))
    })
}

fn fuzz_check() -> Box<Check> {
    Box::new(|case, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trace = random_trace(&mut rng, TRACE_POINTS, TRACE_OPS);
        let report = replay_trace(&trace).expect("generated traces are well formed");
        report.mismatch.map(|m| Mismatch {
            case,
            detail: format!("op {}: tree {}, naive {}", m.op_index, m.tree, m.naive),
            repro: Repro::Trace(trace),
        })
    })
}

fn write_repro(dir: &Path, name: &str, m: &Mismatch) -> Result<PathBuf, Failure> {
    let (ext, text) = match &m.repro {
        Repro::Dataset(ds) => ("json", format!("{}\n", ds.to_json())),
        Repro::Trace(t) => ("trace", format!("# {}\n{t}", m.detail)),
    };
    let path = dir.join(format!("dominion-selftest-{name}-case{}.{ext}", m.case));
    write_text(&path, &text)?;
    Ok(path)
}

pub fn run(args: &SelftestArgs) -> Result<(), Failure> {
    let dir = args.reproducer_dir.clone().unwrap_or_else(std::env::temp_dir);
    let fuzz_traces = args.fuzz_ops.div_ceil(TRACE_OPS);
    let checks: Vec<(&str, usize, Box<Check>)> = vec![
        ("csd-oracles", args.cases, csd_check(args.max_n, args.inject_fault)),
        ("half-identity", args.cases, half_check(args.max_n)),
        ("fbcsd-oracles", args.cases / 4, fbcsd_check(args.max_n)),
        ("rangetree-fuzz", fuzz_traces, fuzz_check()),
    ];
    let mut total = 0;
    for (tag, (name, cases, check)) in checks.iter().enumerate() {
        let base = case_seed(args.seed, tag << 32);
        let found: Vec<Mismatch> = (0..*cases)
            .into_par_iter()
            .filter_map(|case| check(case, case_seed(base, case)))
            .collect();
        println!("{name}: {cases} cases, {} mismatches", found.len());
        if let Some(first) = found.first() {
            let path = write_repro(&dir, name, first)?;
            println!("  case {}: {}", first.case, first.detail);
            if let Repro::Dataset(ds) = &first.repro {
                println!("{}", ds.to_json());
            }
            println!("  reproducer: {}", path.display());
        }
        total += found.len();
    }
    println!("{total} mismatches");
    if total == 0 {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

pub fn replay(args: &ReplayArgs) -> Result<(), Failure> {
    let trace: Trace = read_text(&args.input)?.parse()?;
    let report = replay_trace(&trace)?;
    let mismatch = report
        .mismatch
        .as_ref()
        .map(|m| json!({"op_index": m.op_index, "tree": m.tree, "naive": m.naive}));
    let out = json!({
        "operations": report.operations,
        "queries": report.queries,
        "mismatch": mismatch,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    if report.mismatch.is_some() {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}
