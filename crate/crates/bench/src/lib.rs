//! Workloads shared by the benchmarks.

use dominion_core::generate::{generate, ColorMode, GeneratorSpec, ProbMode};
use dominion_core::{ColoredStochasticDataset, ExactNumber};

/// Bichromatic planar points, each present with probability `2/n`.
pub fn sparse(n: usize, seed: u64) -> ColoredStochasticDataset {
    generate(&GeneratorSpec::new(n, seed).probs(ProbMode::Fixed(ExactNumber::new(2, n as i64)))).expect("valid spec")
}

/// Planar points with random probabilities of denominator at most 64.
pub fn random(n: usize, colors: u32, seed: u64) -> ColoredStochasticDataset {
    generate(&GeneratorSpec::new(n, seed).colors(ColorMode::Colors(colors))).expect("valid spec")
}

/// Points in general position, each present with probability `1/2`.
pub fn general_position(n: usize, seed: u64) -> ColoredStochasticDataset {
    generate(&GeneratorSpec::new(n, seed).probs(ProbMode::Half).general_position(true)).expect("valid spec")
}
