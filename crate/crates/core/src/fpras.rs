//! Randomized `(1 ± ε)` estimator for `Λ` in any dimension.
//!
//! Points are sorted by existence probability, largest first. For `i < j`,
//! `E_{i,j}` is the event that `a_i` and `a_j` are the two present points of
//! largest index; `Λ = Σ Pr[E_{i,j}] · Cond_{i,j}`, where `Cond_{i,j}` is the
//! probability that a realization `R` of `a_1..a_{i-1}` makes
//! `R ∪ {a_i, a_j}` contain an inter-color dominance. `Pr[E_{i,j}]` is exact;
//! `Cond_{i,j}` is estimated from `N` sampled realizations per level `i`,
//! shared by all `j > i`.

use std::cmp::Reverse;

use num_bigint::{BigUint, RandBigInt};
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{build_dominance_graph, BitSet, ColoredStochasticDataset};
use crate::error::{Error, Result};
use crate::exact::DEFAULT_BRUTE_CAP;
use crate::number::ExactNumber;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FprasConfig {
    pub epsilon: ExactNumber,
    pub seed: u64,
    /// Samples per level; `None` means `⌈10 n^5 / ε^2⌉`.
    pub samples: Option<u64>,
}

impl FprasConfig {
    pub fn new(epsilon: ExactNumber, seed: u64) -> Self {
        FprasConfig {
            epsilon,
            seed,
            samples: None,
        }
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = Some(samples);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= ExactNumber::zero() || self.epsilon >= ExactNumber::one() {
            return Err(Error::BadEpsilon(self.epsilon.to_string()));
        }
        if self.samples == Some(0) {
            return Err(Error::NoSamples);
        }
        Ok(())
    }

    /// Samples per level for an instance of `n` points.
    pub fn samples_for(&self, n: usize) -> Result<u64> {
        self.validate()?;
        if let Some(s) = self.samples {
            return Ok(s);
        }
        let n = ExactNumber::from_integer(n as i64);
        let bound = ExactNumber::from(10) * &n * &n * &n * &n * &n / (&self.epsilon * &self.epsilon);
        let ceil = bound.as_ratio().ceil().to_integer();
        let s = ceil.to_u64().ok_or(Error::CapExceeded {
            n: usize::MAX,
            cap: u64::MAX as usize,
        })?;
        Ok(s.max(1))
    }
}

/// One term of the decomposition; `i`, `j` are 1-based positions in the
/// probability order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventTerm {
    pub i: usize,
    pub j: usize,
    pub pr: ExactNumber,
    /// `Est_{i,j}` or the exact `Cond_{i,j}`, depending on the producer.
    pub cond: ExactNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FprasEstimate {
    pub lambda: ExactNumber,
    pub samples: u64,
    /// Input indices in probability order.
    pub order: Vec<usize>,
    pub terms: Vec<EventTerm>,
}

/// Input indices sorted by probability, largest first; ties keep input order.
pub fn probability_order(ds: &ColoredStochasticDataset) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ds.len()).collect();
    order.sort_by_key(|&k| (Reverse(&ds.points()[k].prob), k));
    order
}

pub fn sort_by_probability(ds: &ColoredStochasticDataset) -> ColoredStochasticDataset {
    ds.reordered(&probability_order(ds))
}

/// `Pr[E_{i,j}] = π_i π_j ∏_{t > i, t ≠ j} (1 − π_t)` for 1-based `i < j`.
pub fn pr_event(sorted: &ColoredStochasticDataset, i: usize, j: usize) -> Result<ExactNumber> {
    let n = sorted.len();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::IndexOrder { i, j, n });
    }
    let p = |t: usize| &sorted.points()[t - 1].prob;
    let mut pr = p(i) * p(j);
    for t in (i + 1..=n).filter(|&t| t != j) {
        if pr.is_zero() {
            break;
        }
        pr *= &p(t).complement();
    }
    Ok(pr)
}

/// All nonzero `Pr[E_{i,j}]`, by level.
fn event_probabilities(sorted: &ColoredStochasticDataset) -> Vec<Vec<(usize, ExactNumber)>> {
    let n = sorted.len();
    (1..=n)
        .map(|i| {
            (i + 1..=n)
                .filter_map(|j| {
                    let pr = pr_event(sorted, i, j).expect("indices in range");
                    (!pr.is_zero()).then_some((j, pr))
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
enum Coin {
    Never,
    Always,
    Small { p: u64, q: u64 },
    Big { p: BigUint, q: BigUint },
}

impl Coin {
    fn new(prob: &ExactNumber) -> Self {
        if prob.is_zero() {
            return Coin::Never;
        }
        if prob.is_one() {
            return Coin::Always;
        }
        let (p, q) = (prob.numer().to_biguint().unwrap(), prob.denom().to_biguint().unwrap());
        match (p.to_u64(), q.to_u64()) {
            (Some(p), Some(q)) => Coin::Small { p, q },
            _ => Coin::Big { p, q },
        }
    }

    fn is_fixed(&self) -> bool {
        matches!(self, Coin::Never | Coin::Always)
    }

    /// Exact Bernoulli draw: a uniform integer below `q` compared with `p`.
    fn flip(&self, rng: &mut ChaCha8Rng) -> bool {
        match self {
            Coin::Never => false,
            Coin::Always => true,
            Coin::Small { p, q } => rng.gen_range(0..*q) < *p,
            Coin::Big { p, q } => rng.gen_biguint_below(q) < *p,
        }
    }
}

/// Conflict structure over positions `0..n` (0-based) of the sorted dataset.
struct Conflicts {
    adj: Vec<BitSet>,
}

impl Conflicts {
    fn new(sorted: &ColoredStochasticDataset) -> Self {
        Conflicts {
            adj: build_dominance_graph(sorted).neighbor_sets(),
        }
    }

    /// Hits for each target `j` given a realization `r` (with members listed)
    /// of the prefix before `i`.
    fn sigma(&self, r: &BitSet, members: &[usize], i: usize, targets: &[usize], hits: &mut [u64], weight: u64) {
        if members.iter().any(|&t| self.adj[t].intersects(r)) {
            hits.iter_mut().for_each(|h| *h += weight);
            return;
        }
        let base = self.adj[i].intersects(r);
        for (h, &j) in hits.iter_mut().zip(targets) {
            if base || self.adj[i].contains(j) || self.adj[j].intersects(r) {
                *h += weight;
            }
        }
    }
}

/// Hit counts for one level: `targets` are 0-based `j` positions.
fn sample_level(conf: &Conflicts, coins: &[Coin], i: usize, targets: &[usize], samples: u64, seed: u64) -> Vec<u64> {
    let n = coins.len();
    let mut hits = vec![0u64; targets.len()];
    let mut r = BitSet::new(n);
    let mut members = Vec::with_capacity(i);
    if coins[..i].iter().all(Coin::is_fixed) {
        members.extend((0..i).filter(|&t| matches!(coins[t], Coin::Always)));
        members.iter().for_each(|&t| r.insert(t));
        conf.sigma(&r, &members, i, targets, &mut hits, samples);
        return hits;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64 + 1);
    for _ in 0..samples {
        r.clear();
        members.clear();
        for (t, coin) in coins[..i].iter().enumerate() {
            if coin.flip(&mut rng) {
                r.insert(t);
                members.push(t);
            }
        }
        conf.sigma(&r, &members, i, targets, &mut hits, 1);
    }
    hits
}

/// Estimate of `Λ`; deterministic in `(ds, cfg)`.
pub fn estimate_lambda(ds: &ColoredStochasticDataset, cfg: &FprasConfig) -> Result<FprasEstimate> {
    let samples = cfg.samples_for(ds.len())?;
    let order = probability_order(ds);
    let sorted = ds.reordered(&order);
    let conf = Conflicts::new(&sorted);
    let coins: Vec<Coin> = sorted.points().iter().map(|p| Coin::new(&p.prob)).collect();
    let events = event_probabilities(&sorted);

    let levels: Vec<Vec<u64>> = events
        .par_iter()
        .enumerate()
        .map(|(i0, row)| {
            if row.is_empty() {
                return Vec::new();
            }
            let targets: Vec<usize> = row.iter().map(|(j, _)| j - 1).collect();
            sample_level(&conf, &coins, i0, &targets, samples, cfg.seed)
        })
        .collect();

    let denom = ExactNumber::from_integer(samples as i64);
    let mut terms = Vec::new();
    let mut lambda = ExactNumber::zero();
    for (i0, (row, hits)) in events.into_iter().zip(levels).enumerate() {
        for ((j, pr), h) in row.into_iter().zip(hits) {
            let est = ExactNumber::from_integer(h as i64) / &denom;
            lambda += &(&pr * &est);
            terms.push(EventTerm { i: i0 + 1, j, pr, cond: est });
        }
    }
    Ok(FprasEstimate {
        lambda,
        samples,
        order,
        terms,
    })
}

/// Decomposition with every `Cond_{i,j}` computed exactly by enumerating the
/// prefix realizations. Exponential; capped at [`DEFAULT_BRUTE_CAP`] points.
pub fn exact_decomposition(ds: &ColoredStochasticDataset) -> Result<Vec<EventTerm>> {
    if ds.len() > DEFAULT_BRUTE_CAP {
        return Err(Error::CapExceeded {
            n: ds.len(),
            cap: DEFAULT_BRUTE_CAP,
        });
    }
    let sorted = sort_by_probability(ds);
    let conf = Conflicts::new(&sorted);
    let n = sorted.len();
    let probs: Vec<&ExactNumber> = sorted.points().iter().map(|p| &p.prob).collect();
    let mut terms = Vec::new();
    for (i0, row) in event_probabilities(&sorted).into_iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        let targets: Vec<usize> = row.iter().map(|(j, _)| j - 1).collect();
        let mut cond = vec![ExactNumber::zero(); targets.len()];
        let mut r = BitSet::new(n);
        let mut members = Vec::new();
        for mask in 0u64..(1 << i0) {
            let mut weight = ExactNumber::one();
            r.clear();
            members.clear();
            for (t, p) in probs[..i0].iter().enumerate() {
                if mask >> t & 1 == 1 {
                    weight *= *p;
                    r.insert(t);
                    members.push(t);
                } else {
                    weight *= &p.complement();
                }
            }
            if weight.is_zero() {
                continue;
            }
            let mut hits = vec![0u64; targets.len()];
            conf.sigma(&r, &members, i0, &targets, &mut hits, 1);
            for (c, h) in cond.iter_mut().zip(hits) {
                if h > 0 {
                    *c += &weight;
                }
            }
        }
        for ((j, pr), cond) in row.into_iter().zip(cond) {
            terms.push(EventTerm { i: i0 + 1, j, pr, cond });
        }
    }
    Ok(terms)
}

/// `Σ Pr[E_{i,j}] · Cond_{i,j}` with exact conditionals; equals `Λ`.
pub fn lambda_from_exact_decomposition(ds: &ColoredStochasticDataset) -> Result<ExactNumber> {
    Ok(exact_decomposition(ds)?.iter().map(|t| &t.pr * &t.cond).sum())
}
