use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use dominion_core::generate::{generate, ColorMode, GeneratorSpec, ProbMode};
use dominion_core::ExactNumber;

use crate::common::{write_text, Failure};

/// `distinct`, `bichromatic`, or a color count `k`.
#[derive(Clone, Debug)]
pub struct Colors(pub ColorMode);

impl FromStr for Colors {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "distinct" => Ok(Colors(ColorMode::Distinct)),
            "bichromatic" => Ok(Colors(ColorMode::Bichromatic)),
            k => k
                .parse::<u32>()
                .ok()
                .filter(|&k| k >= 1)
                .map(|k| Colors(ColorMode::Colors(k)))
                .ok_or_else(|| format!("expected distinct, bichromatic or a positive count, got {k:?}")),
        }
    }
}

/// `half`, `fixed:P`, `random[:D]` or `mixed[:D]`, where `D` bounds denominators.
#[derive(Clone, Debug)]
pub struct Probs(pub ProbMode);

impl FromStr for Probs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
        let den = |arg: Option<&str>| -> Result<u32, String> {
            arg.map_or(Ok(64), |a| {
                a.parse::<u32>()
                    .ok()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| format!("bad denominator bound {a:?}"))
            })
        };
        match (head, arg) {
            ("half", None) => Ok(Probs(ProbMode::Half)),
            ("fixed", Some(p)) => p
                .parse::<ExactNumber>()
                .map(|p| Probs(ProbMode::Fixed(p)))
                .map_err(|e| e.to_string()),
            ("random", a) => Ok(Probs(ProbMode::Random { max_den: den(a)? })),
            ("mixed", a) => Ok(Probs(ProbMode::Mixed { max_den: den(a)? })),
            _ => Err(format!("expected half, fixed:P, random[:D] or mixed[:D], got {s:?}")),
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dimension: usize,
    #[arg(long, default_value = "bichromatic")]
    pub colors: Colors,
    #[arg(long, default_value = "random:64")]
    pub probs: Probs,
    /// Coordinates are integers in `[0, range)`; defaults to `max(4n, 8)`.
    #[arg(long)]
    pub coord_range: Option<i64>,
    /// Reject collinear triples (2D only).
    #[arg(long)]
    pub general_position: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl GenerateArgs {
    pub fn spec(&self) -> GeneratorSpec {
        let mut spec = GeneratorSpec::new(self.n, self.seed)
            .dimension(self.dimension)
            .colors(self.colors.0.clone())
            .probs(self.probs.0.clone())
            .general_position(self.general_position);
        if let Some(r) = self.coord_range {
            spec = spec.coord_range(r);
        }
        spec
    }
}

pub fn run(args: &GenerateArgs) -> Result<(), Failure> {
    let ds = generate(&args.spec())?;
    let text = ds.to_json();
    match &args.output {
        Some(path) => write_text(path, &format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
