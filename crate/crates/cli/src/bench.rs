use std::time::Instant;

use clap::Args;
use dominion_core::generate::{generate, GeneratorSpec};
use dominion_core::ExactNumber;

use crate::common::{invalid, Backend, Failure};
use crate::generate::{Colors, Probs};
use crate::solve::{solve, Method, SolveArgs};

#[derive(Args, Clone, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// Comma-separated dataset sizes.
    #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, env = "DOMINION_BACKEND", default_value_t = Backend::Float)]
    pub backend: Backend,
    #[arg(long, default_value = "bichromatic")]
    pub colors: Colors,
    #[arg(long, default_value = "random:64")]
    pub probs: Probs,
    /// Runs per size; the fastest is reported.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Samples per level for `approx`.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    if args.sizes.is_empty() || args.repeats == 0 {
        return Err(invalid("bad_arguments", "need at least one size and one repeat"));
    }
    let dir = std::env::temp_dir();
    println!("n,method,backend,seconds");
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let spec = GeneratorSpec::new(n, args.seed)
            .colors(args.colors.0.clone())
            .probs(args.probs.0.clone())
            .general_position(matches!(args.method, Method::Fbcsd | Method::FbcsdBrute));
        let ds = generate(&spec)?;
        let solve_args = SolveArgs {
            input: dir.clone(),
            method: args.method,
            backend: args.backend,
            epsilon: ExactNumber::new(1, 4),
            seed: args.seed,
            samples: Some(args.samples),
            digits: 12,
            timing: false,
            f_table: false,
        };
        let mut best = f64::INFINITY;
        for _ in 0..args.repeats {
            let start = Instant::now();
            solve(&ds, &solve_args)?;
            best = best.min(start.elapsed().as_secs_f64());
        }
        println!("{n},{},{},{best:.6}", args.method.name(), args.backend.name());
        rows.push((n as f64, best.max(1e-9)));
    }
    if rows.len() >= 2 {
        let ln_n: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
        let ns: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let ln_t: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
        let slope = fit_slope(&ln_n, &ln_t);
        let base = fit_slope(&ns, &ln_t).exp();
        println!("# loglog_slope={slope:.3} growth_per_point={base:.3}");
    }
    Ok(())
}
