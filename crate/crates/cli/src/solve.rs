use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use dominion_core::exact::{gamma_bruteforce, gamma_dp_table, gamma_rangetree_table, FTable};
use dominion_core::fbcsd::{gamma_star, lambda_star_bruteforce};
use dominion_core::fpras::{estimate_lambda, FprasConfig};
use dominion_core::{ColoredStochasticDataset, ExactNumber, Scalar};
use serde::Serialize;

use crate::common::{parse_exact, read_dataset, Backend, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Range-tree evaluation of the signature recurrence (2D).
    Exact,
    /// Direct evaluation of the recurrence (2D).
    Dp,
    /// Enumeration of all realizations (any dimension, small n).
    Brute,
    /// Monte Carlo estimate of Λ (any dimension).
    Approx,
    /// Over all orthogonal bases, via witness pairs (2D).
    Fbcsd,
    /// Over all orthogonal bases, by enumeration (2D, small n).
    FbcsdBrute,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Dp => "dp",
            Method::Brute => "brute",
            Method::Approx => "approx",
            Method::Fbcsd => "fbcsd",
            Method::FbcsdBrute => "fbcsd-brute",
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct SolveArgs {
    /// Dataset JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[arg(long, value_enum, env = "DOMINION_BACKEND", default_value_t = Backend::Rational)]
    pub backend: Backend,
    /// Relative error target for `approx`, as a rational.
    #[arg(long, default_value = "1/4", value_parser = parse_exact)]
    pub epsilon: ExactNumber,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per level for `approx`; defaults to ⌈10 n^5 / ε^2⌉.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Fractional digits of the decimal renderings.
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
    /// Include wall-clock time in the output.
    #[arg(long)]
    pub timing: bool,
    /// Include the F table (`exact` and `dp` with the rational backend).
    #[arg(long)]
    pub f_table: bool,
}

#[derive(Args, Clone, Debug)]
pub struct ApproxArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "1/4", value_parser = parse_exact)]
    pub epsilon: ExactNumber,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
    #[arg(long)]
    pub timing: bool,
}

impl From<ApproxArgs> for SolveArgs {
    fn from(a: ApproxArgs) -> Self {
        SolveArgs {
            input: a.input,
            method: Method::Approx,
            backend: Backend::Rational,
            epsilon: a.epsilon,
            seed: a.seed,
            samples: a.samples,
            digits: a.digits,
            timing: a.timing,
            f_table: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FbcsdMethod {
    Exact,
    Brute,
}

#[derive(Args, Clone, Debug)]
pub struct FbcsdArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = FbcsdMethod::Exact)]
    pub method: FbcsdMethod,
    #[arg(long, value_enum, env = "DOMINION_BACKEND", default_value_t = Backend::Rational)]
    pub backend: Backend,
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
    #[arg(long)]
    pub timing: bool,
}

impl From<FbcsdArgs> for SolveArgs {
    fn from(a: FbcsdArgs) -> Self {
        SolveArgs {
            input: a.input,
            method: match a.method {
                FbcsdMethod::Exact => Method::Fbcsd,
                FbcsdMethod::Brute => Method::FbcsdBrute,
            },
            backend: a.backend,
            epsilon: ExactNumber::new(1, 4),
            seed: 0,
            samples: None,
            digits: a.digits,
            timing: a.timing,
            f_table: false,
        }
    }
}

/// A probability computed in one of the two backends.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(ExactNumber),
    Float(f64),
}

impl Value {
    fn complement(&self) -> Value {
        match self {
            Value::Exact(v) => Value::Exact(v.complement()),
            Value::Float(v) => Value::Float(1.0 - v),
        }
    }

    /// `(value, decimal)`: the exact fraction or the float's shortest form,
    /// and a fixed-digit decimal.
    fn render(&self, digits: usize) -> (String, String) {
        match self {
            Value::Exact(v) => (v.to_string(), v.to_decimal(digits)),
            Value::Float(v) => (
                v.to_string(),
                ExactNumber::from_f64(*v).map_or_else(|| v.to_string(), |e| e.to_decimal(digits)),
            ),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub backend: &'static str,
    pub seed: Option<u64>,
    pub epsilon: Option<String>,
    pub samples: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct RunResult {
    pub method: &'static str,
    pub n: usize,
    pub dimension: usize,
    pub digest: String,
    /// `null` for `approx`, which estimates only Λ.
    pub gamma: Option<String>,
    pub gamma_decimal: Option<String>,
    pub lambda: String,
    pub lambda_decimal: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_table: Option<serde_json::Value>,
}

struct Outcome {
    gamma: Option<Value>,
    lambda: Value,
    backend: Backend,
    samples: Option<u64>,
    f_table: Option<serde_json::Value>,
}

impl Outcome {
    fn from_gamma(gamma: Value, backend: Backend) -> Self {
        Outcome {
            lambda: gamma.complement(),
            gamma: Some(gamma),
            backend,
            samples: None,
            f_table: None,
        }
    }
}

fn generic<T: Scalar>(ds: &ColoredStochasticDataset, method: Method) -> dominion_core::Result<(T, Option<FTable<T>>)> {
    Ok(match method {
        Method::Exact => {
            let (g, t) = gamma_rangetree_table(ds)?;
            (g, Some(t))
        }
        Method::Dp => {
            let (g, t) = gamma_dp_table(ds)?;
            (g, Some(t))
        }
        Method::Brute => (gamma_bruteforce(ds)?, None),
        Method::Fbcsd => (gamma_star(ds)?, None),
        Method::Approx | Method::FbcsdBrute => unreachable!("rational-only methods"),
    })
}

fn compute(ds: &ColoredStochasticDataset, args: &SolveArgs) -> Result<Outcome, Failure> {
    match args.method {
        Method::Approx => {
            let mut cfg = FprasConfig::new(args.epsilon.clone(), args.seed);
            cfg.samples = args.samples;
            let est = estimate_lambda(ds, &cfg)?;
            Ok(Outcome {
                gamma: None,
                lambda: Value::Exact(est.lambda),
                backend: Backend::Rational,
                samples: Some(est.samples),
                f_table: None,
            })
        }
        Method::FbcsdBrute => {
            let lambda = lambda_star_bruteforce(ds)?;
            Ok(Outcome::from_gamma(Value::Exact(lambda.complement()), Backend::Rational))
        }
        _ => match args.backend {
            Backend::Rational => {
                let (g, table) = generic::<ExactNumber>(ds, args.method)?;
                let mut out = Outcome::from_gamma(Value::Exact(g), Backend::Rational);
                if args.f_table {
                    out.f_table = table.map(|t| t.to_json());
                }
                Ok(out)
            }
            Backend::Float => {
                let (g, _) = generic::<f64>(ds, args.method)?;
                Ok(Outcome::from_gamma(Value::Float(g), Backend::Float))
            }
        },
    }
}

pub fn solve(ds: &ColoredStochasticDataset, args: &SolveArgs) -> Result<RunResult, Failure> {
    let start = Instant::now();
    let out = compute(ds, args)?;
    let elapsed = start.elapsed();
    let approx = args.method == Method::Approx;
    let gamma = out.gamma.map(|g| g.render(args.digits));
    let (lambda, lambda_decimal) = out.lambda.render(args.digits);
    Ok(RunResult {
        method: args.method.name(),
        n: ds.len(),
        dimension: ds.dimension(),
        digest: ds.digest(),
        gamma_decimal: gamma.as_ref().map(|g| g.1.clone()),
        gamma: gamma.map(|g| g.0),
        lambda,
        lambda_decimal,
        config: RunConfig {
            backend: out.backend.name(),
            seed: approx.then_some(args.seed),
            epsilon: approx.then(|| args.epsilon.to_string()),
            samples: out.samples,
        },
        timing_ms: args.timing.then_some(elapsed.as_secs_f64() * 1e3),
        f_table: out.f_table,
    })
}

pub fn run(args: &SolveArgs) -> Result<(), Failure> {
    let ds = read_dataset(&args.input)?;
    let result = solve(&ds, args)?;
    println!("{}", serde_json::to_string_pretty(&result).expect("result serializes"));
    Ok(())
}
