//! Seeded random instance generation.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{ColoredStochasticDataset, StochasticPoint};
use crate::error::{Error, Result};
use crate::number::ExactNumber;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorMode {
    /// Every point gets its own color.
    Distinct,
    Bichromatic,
    /// Colors drawn uniformly from `0..k`.
    Colors(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbMode {
    Fixed(ExactNumber),
    /// `p/q` with `q` uniform in `1..=max_den` and `p` uniform in `0..=q`.
    Random { max_den: u32 },
    Half,
    /// Uniform over `{0, 1/2, 1, random}`, the last as in `Random`.
    Mixed { max_den: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub dimension: usize,
    pub colors: ColorMode,
    pub probs: ProbMode,
    /// Integer coordinates are drawn from `0..coord_range`.
    pub coord_range: i64,
    pub seed: u64,
    /// Planar only: reject any point collinear with two earlier ones.
    pub general_position: bool,
}

impl GeneratorSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        GeneratorSpec {
            n,
            dimension: 2,
            colors: ColorMode::Bichromatic,
            probs: ProbMode::Random { max_den: 64 },
            coord_range: (4 * n as i64).max(8),
            seed,
            general_position: false,
        }
    }

    pub fn colors(mut self, colors: ColorMode) -> Self {
        self.colors = colors;
        self
    }

    pub fn probs(mut self, probs: ProbMode) -> Self {
        self.probs = probs;
        self
    }

    pub fn dimension(mut self, d: usize) -> Self {
        self.dimension = d;
        self
    }

    pub fn coord_range(mut self, range: i64) -> Self {
        self.coord_range = range;
        self
    }

    pub fn general_position(mut self, on: bool) -> Self {
        self.general_position = on;
        self
    }
}

fn random_prob<R: Rng>(rng: &mut R, max_den: u32) -> ExactNumber {
    let q = rng.gen_range(1..=max_den.max(1)) as i64;
    ExactNumber::new(rng.gen_range(0..=q), q)
}

fn collinear(a: &[i64], b: &[i64], c: &[i64]) -> bool {
    let cross = (b[0] - a[0]) as i128 * (c[1] - a[1]) as i128 - (b[1] - a[1]) as i128 * (c[0] - a[0]) as i128;
    cross == 0
}

/// Deterministic dataset for `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<ColoredStochasticDataset> {
    if spec.dimension == 0 {
        return Err(Error::ZeroDimension);
    }
    if spec.general_position && spec.dimension != 2 {
        return Err(Error::Unsatisfiable("general position is only defined in the plane".into()));
    }
    if spec.coord_range < 1 {
        return Err(Error::Unsatisfiable("coordinate range must be positive".into()));
    }
    let cells = (spec.coord_range as f64).powi(spec.dimension as i32);
    if cells < spec.n as f64 {
        return Err(Error::Unsatisfiable(format!(
            "{} distinct points do not fit in a grid of {cells} cells",
            spec.n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut coords: Vec<Vec<i64>> = Vec::with_capacity(spec.n);
    let mut seen = HashSet::new();
    let budget = 1000 * spec.n.max(1) + 10_000;
    let mut attempts = 0;
    while coords.len() < spec.n {
        attempts += 1;
        if attempts > budget {
            return Err(Error::Unsatisfiable(format!(
                "could not place {} points within the coordinate range {}",
                spec.n, spec.coord_range
            )));
        }
        let c: Vec<i64> = (0..spec.dimension).map(|_| rng.gen_range(0..spec.coord_range)).collect();
        if seen.contains(&c) {
            continue;
        }
        if spec.general_position
            && (0..coords.len()).any(|a| (a + 1..coords.len()).any(|b| collinear(&coords[a], &coords[b], &c)))
        {
            continue;
        }
        seen.insert(c.clone());
        coords.push(c);
    }
    let points = coords
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let color = match spec.colors {
                ColorMode::Distinct => k as u32,
                ColorMode::Bichromatic => rng.gen_range(0..2),
                ColorMode::Colors(m) => rng.gen_range(0..m.max(1)),
            };
            let prob = match &spec.probs {
                ProbMode::Fixed(p) => p.clone(),
                ProbMode::Half => ExactNumber::new(1, 2),
                ProbMode::Random { max_den } => random_prob(&mut rng, *max_den),
                ProbMode::Mixed { max_den } => match rng.gen_range(0..4) {
                    0 => ExactNumber::zero(),
                    1 => ExactNumber::new(1, 2),
                    2 => ExactNumber::one(),
                    _ => random_prob(&mut rng, *max_den),
                },
            };
            StochasticPoint::new(k as u64 + 1, c.into_iter().map(ExactNumber::from).collect(), color, prob)
        })
        .collect();
    ColoredStochasticDataset::new(spec.dimension, points)
}
