use crate::dataset::DominanceGraph;
use crate::error::{Error, Result};

/// Number of independent sets (the empty set included), cap 20 vertices.
pub fn count_independent_sets(g: &DominanceGraph) -> Result<u64> {
    count_independent_sets_capped(g, super::DEFAULT_BRUTE_CAP)
}

/// Caps above 63 are clamped so the count fits in a `u64`.
pub fn count_independent_sets_capped(g: &DominanceGraph, cap: usize) -> Result<u64> {
    let n = g.vertex_count();
    let cap = cap.min(63);
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut adj = vec![0u64; n];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    Ok(count(0, 0, &adj))
}

fn count(t: usize, blocked: u64, adj: &[u64]) -> u64 {
    if t == adj.len() {
        return 1;
    }
    let skip = count(t + 1, blocked, adj);
    if blocked >> t & 1 == 1 {
        skip
    } else {
        skip + count(t + 1, blocked | adj[t], adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(count_independent_sets(&DominanceGraph::from_edges(5, [])).unwrap(), 32);
        assert_eq!(count_independent_sets(&DominanceGraph::from_edges(2, [(0, 1)])).unwrap(), 3);
        let k3 = DominanceGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(count_independent_sets(&k3).unwrap(), 4);
        assert!(count_independent_sets(&DominanceGraph::from_edges(21, [])).is_err());
    }
}
