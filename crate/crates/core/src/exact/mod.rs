//! Exact solvers for the probability `Γ` that a realization has no
//! inter-color dominance (standard basis), and its complement `Λ = 1 − Γ`.
//!
//! * [`gamma_bruteforce`]: subset enumeration, any dimension, small `n`.
//! * [`gamma_dp`]: the signature recurrence evaluated directly, `O(n^4)`.
//! * [`gamma_rangetree`]: the same recurrence driven by weighted range trees.
//!
//! The planar solvers work on the regularized dataset with a dummy point
//! `a_0 = (0, n+1)` prepended; indices below are positions in x-order with
//! the dummy at 0.

mod bruteforce;
mod dp;
mod indep;
mod rangetree;

use serde_json::json;

pub use bruteforce::{gamma_bruteforce, gamma_bruteforce_capped, DEFAULT_BRUTE_CAP};
pub use dp::{gamma_dp, gamma_dp_table};
pub use indep::{count_independent_sets, count_independent_sets_capped};
pub use rangetree::{gamma_rangetree, gamma_rangetree_table};

use crate::dataset::{regularize, ColoredStochasticDataset};
use crate::error::Result;
use crate::number::{ExactNumber, Scalar, ZeroAwareProduct};

/// `(i, j)` with `i ≥ j`, `y_i ≥ y_j` and equal colors: the possible
/// (max-x, min-y) signatures of a dominance-free realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LegalPair {
    pub i: usize,
    pub j: usize,
}

/// `F(i, j)`: probability that the realization restricted to `a_0..=a_i` is
/// dominance-free with signature `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FTable<T> {
    entries: Vec<(LegalPair, T)>,
}

impl<T: Scalar> FTable<T> {
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        let key = LegalPair { i, j };
        self.entries
            .binary_search_by(|(p, _)| p.cmp(&key))
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (LegalPair, &T)> {
        self.entries.iter().map(|(p, v)| (*p, v))
    }

    fn from_unsorted(mut entries: Vec<(LegalPair, T)>) -> Self {
        entries.sort_by_key(|e| e.0);
        FTable { entries }
    }
}

impl FTable<ExactNumber> {
    /// Rows `{"i": .., "j": .., "F": "p/q"}` in pair order.
    pub fn to_json(&self) -> serde_json::Value {
        self.entries
            .iter()
            .map(|(p, v)| json!({"i": p.i, "j": p.j, "F": v.to_string()}))
            .collect()
    }
}

/// Regularized planar instance with the dummy point at index 0.
#[derive(Clone, Debug)]
pub(crate) struct Instance<T> {
    pub n: usize,
    /// y-rank per index; the dummy sits at `n + 1`.
    pub y: Vec<u32>,
    /// Dense color ids; the dummy gets the unused id `colors`.
    pub color: Vec<usize>,
    pub colors: usize,
    pub prob: Vec<T>,
    /// `1 − π` per index.
    pub absent: Vec<T>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(ds: &ColoredStochasticDataset) -> Result<Self> {
        ds.require_planar()?;
        let reg = regularize(&ds.without_impossible())?;
        let n = reg.len();
        let mut palette: Vec<u32> = reg.points().iter().map(|p| p.color).collect();
        palette.sort_unstable();
        palette.dedup();
        let mut inst = Instance {
            n,
            y: vec![n as u32 + 1],
            color: vec![palette.len()],
            colors: palette.len(),
            prob: vec![T::one()],
            absent: vec![T::zero()],
        };
        for (idx, p) in reg.points().iter().enumerate() {
            inst.y.push(reg.rank(idx, 1));
            inst.color.push(palette.binary_search(&p.color).unwrap());
            let pi = T::from_exact(&p.prob);
            inst.absent.push(pi.complement());
            inst.prob.push(pi);
        }
        Ok(inst)
    }

    /// Legal pairs sorted by `i`, then by increasing `y_j`.
    pub fn legal_pairs(&self) -> Vec<LegalPair> {
        let mut out = vec![LegalPair { i: 0, j: 0 }];
        for i in 1..=self.n {
            let start = out.len();
            for j in 1..=i {
                if self.color[j] == self.color[i] && self.y[j] <= self.y[i] {
                    out.push(LegalPair { i, j });
                }
            }
            out[start..].sort_by_key(|p| self.y[p.j]);
        }
        out
    }

    /// `π_i π_j`, or `π_i` when `i = j`.
    pub fn anchor(&self, p: LegalPair) -> T {
        if p.i == p.j {
            self.prob[p.i].clone()
        } else {
            self.prob[p.i].times(&self.prob[p.j])
        }
    }

    /// `∏_{t=1}^{n} (1 − π_t)`.
    pub fn all_absent(&self) -> ZeroAwareProduct<T> {
        let mut p = ZeroAwareProduct::one();
        for t in 1..=self.n {
            p.mul_factor(&self.absent[t]);
        }
        p
    }
}

/// `Λ = 1 − Γ`.
pub fn lambda_of<T: Scalar>(gamma: &T) -> T {
    gamma.complement()
}


#[cfg(test)]
mod tests {
    use super::test_support::{planar, q};
    use super::*;
    use crate::dataset::StochasticPoint;
    use proptest::prelude::*;

    fn all_three(ds: &ColoredStochasticDataset) -> [ExactNumber; 3] {
        [
            gamma_bruteforce(ds).unwrap(),
            gamma_dp(ds).unwrap(),
            gamma_rangetree(ds).unwrap(),
        ]
    }

    #[test]
    fn spec_examples() {
        let chain = |a, b| planar(&[(1, 1, 0, a), (2, 2, 1, b)]);
        assert_eq!(all_three(&chain("1/2", "1/2")), [q("3/4"), q("3/4"), q("3/4")]);
        assert_eq!(all_three(&chain("1", "1")), [q("0"), q("0"), q("0")]);
        assert_eq!(all_three(&chain("1/3", "1/4")), [q("11/12"), q("11/12"), q("11/12")]);
        let mono = planar(&[(1, 1, 4, "1/2"), (2, 2, 4, "1"), (3, 0, 4, "1/3")]);
        assert_eq!(all_three(&mono), [q("1"), q("1"), q("1")]);
        let anti = planar(&[(1, 3, 0, "1"), (2, 2, 1, "1/2"), (3, 1, 2, "2/3")]);
        assert_eq!(all_three(&anti), [q("1"), q("1"), q("1")]);
    }

    #[test]
    fn dummy_pair_is_one() {
        let ds = planar(&[(1, 1, 0, "1/2"), (2, 2, 1, "1/2")]);
        let (_, table) = gamma_rangetree_table::<ExactNumber>(&ds).unwrap();
        assert_eq!(table.get(0, 0), Some(&q("1")));
        assert_eq!(table.len(), 3);
        assert_eq!(table.to_json()[0], serde_json::json!({"i": 0, "j": 0, "F": "1"}));
    }

    #[test]
    fn requires_planar_input() {
        let p = StochasticPoint::new(1, vec![q("1")], 0, q("1/2"));
        let ds = ColoredStochasticDataset::new(1, vec![p]).unwrap();
        assert!(gamma_dp::<ExactNumber>(&ds).is_err());
        assert!(gamma_rangetree::<ExactNumber>(&ds).is_err());
    }

    fn small_instance() -> impl Strategy<Value = ColoredStochasticDataset> {
        let prob = prop_oneof![Just("0"), Just("1/2"), Just("1"), Just("1/3"), Just("3/7")];
        prop::collection::vec((0i64..8, 0i64..8, 0u32..3, prob), 1..9).prop_map(|rows| {
            let mut seen = std::collections::HashSet::new();
            let rows: Vec<_> = rows.into_iter().filter(|r| seen.insert((r.0, r.1))).collect();
            planar(&rows)
        })
    }

    proptest! {
        #[test]
        fn solvers_agree(ds in small_instance()) {
            let [b, d, r] = all_three(&ds);
            prop_assert_eq!(&b, &d);
            prop_assert_eq!(&b, &r);
        }

        #[test]
        fn f_tables_agree(ds in small_instance()) {
            let (_, a) = gamma_dp_table::<ExactNumber>(&ds).unwrap();
            let (_, b) = gamma_rangetree_table::<ExactNumber>(&ds).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
