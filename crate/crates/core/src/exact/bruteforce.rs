use crate::dataset::{build_dominance_graph, ColoredStochasticDataset};
use crate::error::{Error, Result};
use crate::number::Scalar;

pub const DEFAULT_BRUTE_CAP: usize = 20;

/// `Γ` by enumerating every realization, with the default cap of 20 points.
pub fn gamma_bruteforce<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<T> {
    gamma_bruteforce_capped(ds, DEFAULT_BRUTE_CAP)
}

/// `Γ` as the sum of realization probabilities over subsets free of
/// inter-color dominance. Works in any dimension; points with probability
/// zero are dropped before the cap is checked. Caps above 64 are clamped.
pub fn gamma_bruteforce_capped<T: Scalar>(ds: &ColoredStochasticDataset, cap: usize) -> Result<T> {
    let ds = ds.without_impossible();
    let n = ds.len();
    if n > cap.min(64) {
        return Err(Error::CapExceeded { n, cap: cap.min(64) });
    }
    let adj = conflict_masks(&ds);
    let prob: Vec<T> = ds.points().iter().map(|p| T::from_exact(&p.prob)).collect();
    let absent: Vec<T> = prob.iter().map(Scalar::complement).collect();
    let mut acc = T::zero();
    enumerate(0, 0, T::one(), &adj, &prob, &absent, &mut acc);
    Ok(acc)
}

pub(crate) fn conflict_masks(ds: &ColoredStochasticDataset) -> Vec<u64> {
    let mut adj = vec![0u64; ds.len()];
    for &(a, b) in build_dominance_graph(ds).edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

// `blocked` has a bit for every point adjacent to one already chosen.
fn enumerate<T: Scalar>(t: usize, blocked: u64, w: T, adj: &[u64], prob: &[T], absent: &[T], acc: &mut T) {
    if t == adj.len() {
        *acc += &w;
        return;
    }
    if blocked >> t & 1 == 0 {
        enumerate(t + 1, blocked | adj[t], w.times(&prob[t]), adj, prob, absent, acc);
    }
    if !absent[t].is_zero() {
        enumerate(t + 1, blocked, w.times(&absent[t]), adj, prob, absent, acc);
    }
}
