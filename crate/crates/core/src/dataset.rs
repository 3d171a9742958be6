//! Colored stochastic datasets and the combinatorial helpers every solver
//! shares: dominance, regularization, the dominance graph and `Z(A)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::number::ExactNumber;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StochasticPoint {
    pub id: u64,
    pub coords: Vec<ExactNumber>,
    pub color: u32,
    pub prob: ExactNumber,
}

impl StochasticPoint {
    pub fn new(id: u64, coords: Vec<ExactNumber>, color: u32, prob: ExactNumber) -> Self {
        StochasticPoint {
            id,
            coords,
            color,
            prob,
        }
    }

    /// Convenience constructor for integer coordinates.
    pub fn planar(id: u64, x: i64, y: i64, color: u32, prob: ExactNumber) -> Self {
        Self::new(id, vec![x.into(), y.into()], color, prob)
    }

    pub fn x(&self) -> &ExactNumber {
        &self.coords[0]
    }

    pub fn y(&self) -> &ExactNumber {
        &self.coords[1]
    }
}

/// A validated colored stochastic dataset: distinct points, unique ids,
/// probabilities in `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoredStochasticDataset {
    dimension: usize,
    points: Vec<StochasticPoint>,
}

#[derive(Deserialize)]
struct RawDataset {
    dimension: usize,
    points: Vec<StochasticPoint>,
}

impl<'de> Deserialize<'de> for ColoredStochasticDataset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDataset::deserialize(d)?;
        ColoredStochasticDataset::new(raw.dimension, raw.points).map_err(serde::de::Error::custom)
    }
}

impl ColoredStochasticDataset {
    pub fn new(dimension: usize, points: Vec<StochasticPoint>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut ids = HashSet::with_capacity(points.len());
        let mut seen: HashMap<&[ExactNumber], u64> = HashMap::with_capacity(points.len());
        for p in &points {
            if p.coords.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.coords.len(),
                });
            }
            if p.id == 0 {
                return Err(Error::InvalidId);
            }
            if !ids.insert(p.id) {
                return Err(Error::DuplicateId(p.id));
            }
            if p.prob.signum().is_lt() || p.prob > ExactNumber::one() {
                return Err(Error::ProbabilityOutOfRange {
                    id: p.id,
                    prob: p.prob.to_string(),
                });
            }
            if let Some(other) = seen.insert(&p.coords, p.id) {
                return Err(Error::DuplicatePoint(other, p.id));
            }
        }
        Ok(ColoredStochasticDataset { dimension, points })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[StochasticPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parses and validates; validation failures keep their own error kind.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDataset = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.dimension, raw.points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    /// SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_string(self).expect("dataset serializes");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }

    pub fn require_planar(&self) -> Result<()> {
        if self.dimension != 2 {
            return Err(Error::NotPlanar(self.dimension));
        }
        Ok(())
    }

    /// Drops points that never appear in a realization.
    pub fn without_impossible(&self) -> Self {
        ColoredStochasticDataset {
            dimension: self.dimension,
            points: self
                .points
                .iter()
                .filter(|p| !p.prob.is_zero())
                .cloned()
                .collect(),
        }
    }

    pub fn num_colors(&self) -> usize {
        self.points.iter().map(|p| p.color).collect::<HashSet<_>>().len()
    }

    /// Same points in a different order; validation cannot fail.
    pub fn reordered(&self, order: &[usize]) -> Self {
        ColoredStochasticDataset {
            dimension: self.dimension,
            points: order.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// Rebuilds the dataset with every point passed through `f`.
    pub fn map_points(&self, f: impl FnMut(&StochasticPoint) -> StochasticPoint) -> Result<Self> {
        Self::new(self.dimension, self.points.iter().map(f).collect())
    }
}

/// `p ≻ q`: every coordinate of `p` is at least the matching coordinate of `q`.
pub fn dominates(p: &[ExactNumber], q: &[ExactNumber]) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(dominates_unchecked(p, q))
}

pub(crate) fn dominates_unchecked(p: &[ExactNumber], q: &[ExactNumber]) -> bool {
    p.iter().zip(q).all(|(a, b)| a >= b)
}

pub(crate) fn comparable(p: &[ExactNumber], q: &[ExactNumber]) -> bool {
    dominates_unchecked(p, q) || dominates_unchecked(q, p)
}

/// Whether some ordered pair `(a,b)` has different colors and `a ≻ b`.
pub fn has_intercolor_dominance(points: &[StochasticPoint]) -> bool {
    points.iter().enumerate().any(|(i, a)| {
        points[i + 1..]
            .iter()
            .any(|b| a.color != b.color && comparable(&a.coords, &b.coords))
    })
}

/// Length of the prefix kept by `Z(A)` for colors listed in x-order.
pub fn z_prefix_len(colors: &[u32]) -> usize {
    let Some(&last) = colors.last() else {
        return 0;
    };
    match colors.iter().rposition(|&c| c != last) {
        Some(pos) => pos + 1,
        None => 0,
    }
}

/// `Z(A)` for a point list sorted by strictly increasing x: drop the maximal
/// trailing run sharing the last point's color; empty when monochromatic.
pub fn z_of(points: &[StochasticPoint]) -> &[StochasticPoint] {
    let colors: Vec<u32> = points.iter().map(|p| p.color).collect();
    &points[..z_prefix_len(&colors)]
}

/// Probability that the realization is exactly `subset` (indices into `ds`).
pub fn realization_probability(
    ds: &ColoredStochasticDataset,
    subset: &[usize],
) -> Result<ExactNumber> {
    let mut member = vec![false; ds.len()];
    for &i in subset {
        *member.get_mut(i).ok_or(Error::UnknownPoint(i))? = true;
    }
    Ok(ds
        .points()
        .iter()
        .zip(&member)
        .map(|(p, &m)| if m { p.prob.clone() } else { p.prob.complement() })
        .product())
}

/// A dataset whose coordinates on every axis are exactly `1..=n`, stored in
/// increasing x order.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularizedDataset {
    base: ColoredStochasticDataset,
    ranks: Vec<Vec<u32>>,
    source_index: Vec<usize>,
}

impl Deref for RegularizedDataset {
    type Target = ColoredStochasticDataset;
    fn deref(&self) -> &ColoredStochasticDataset {
        &self.base
    }
}

impl RegularizedDataset {
    pub fn dataset(&self) -> &ColoredStochasticDataset {
        &self.base
    }

    pub fn into_dataset(self) -> ColoredStochasticDataset {
        self.base
    }

    /// 1-based rank of point `i` (in stored order) on `axis`.
    pub fn rank(&self, i: usize, axis: usize) -> u32 {
        self.ranks[i][axis]
    }

    /// Position in the input dataset of stored point `i`.
    pub fn source_index(&self, i: usize) -> usize {
        self.source_index[i]
    }
}

/// Replaces every coordinate by its rank under (coordinate, coordinate sum,
/// input index). Standard-basis dominance between points is unchanged.
pub fn regularize(ds: &ColoredStochasticDataset) -> Result<RegularizedDataset> {
    // Re-validate: callers may hand us a dataset assembled elsewhere.
    let ds = ColoredStochasticDataset::new(ds.dimension, ds.points.clone())?;
    let n = ds.len();
    let d = ds.dimension();
    let sums: Vec<ExactNumber> = ds
        .points()
        .iter()
        .map(|p| p.coords.iter().cloned().sum())
        .collect();
    let mut ranks = vec![vec![0u32; d]; n];
    let mut order: Vec<usize> = (0..n).collect();
    #[allow(clippy::needless_range_loop)]
    for axis in 0..d {
        order.sort_by(|&a, &b| {
            let pa = &ds.points[a];
            let pb = &ds.points[b];
            pa.coords[axis]
                .cmp(&pb.coords[axis])
                .then_with(|| sums[a].cmp(&sums[b]))
                .then_with(|| a.cmp(&b))
        });
        for (r, &i) in order.iter().enumerate() {
            ranks[i][axis] = r as u32 + 1;
        }
    }
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by_key(|&i| ranks[i][0]);
    let points = by_x
        .iter()
        .map(|&i| {
            let p = &ds.points[i];
            StochasticPoint {
                id: p.id,
                coords: ranks[i].iter().map(|&r| ExactNumber::from_integer(r as i64)).collect(),
                color: p.color,
                prob: p.prob.clone(),
            }
        })
        .collect();
    Ok(RegularizedDataset {
        base: ColoredStochasticDataset { dimension: d, points },
        ranks: by_x.iter().map(|&i| ranks[i].clone()).collect(),
        source_index: by_x,
    })
}

/// Undirected graph on the dataset's points with an edge for every
/// inter-color dominance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceGraph {
    ids: Vec<u64>,
    edges: BTreeSet<(usize, usize)>,
}

impl DominanceGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = edges
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        DominanceGraph {
            ids: (1..=n as u64).collect(),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    /// Edges as index pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Edges as sorted id pairs, for comparing graphs over the same ids.
    pub fn edge_ids(&self) -> BTreeSet<(u64, u64)> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (self.ids[a], self.ids[b]);
                (x.min(y), x.max(y))
            })
            .collect()
    }

    pub fn neighbor_sets(&self) -> Vec<BitSet> {
        let mut sets = vec![BitSet::new(self.ids.len()); self.ids.len()];
        for &(a, b) in &self.edges {
            sets[a].insert(b);
            sets[b].insert(a);
        }
        sets
    }
}

pub fn build_dominance_graph(ds: &ColoredStochasticDataset) -> DominanceGraph {
    let pts = ds.points();
    let mut edges = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].color != pts[j].color && comparable(&pts[i].coords, &pts[j].coords) {
                edges.insert((i, j));
            }
        }
    }
    DominanceGraph {
        ids: pts.iter().map(|p| p.id).collect(),
        edges,
    }
}

/// Fixed-capacity bit set over point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            words: vec![0; capacity.div_ceil(64).max(1)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> ExactNumber {
        s.parse().unwrap()
    }

    fn pt(id: u64, x: &str, y: &str, color: u32) -> StochasticPoint {
        StochasticPoint::new(id, vec![q(x), q(y)], color, q("1/2"))
    }

    fn coords(ds: &ColoredStochasticDataset) -> Vec<Vec<ExactNumber>> {
        ds.points().iter().map(|p| p.coords.clone()).collect()
    }

    fn ints(v: &[[i64; 2]]) -> Vec<Vec<ExactNumber>> {
        v.iter().map(|c| c.iter().map(|&x| x.into()).collect()).collect()
    }

    #[test]
    fn dominance_examples() {
        let c = |a: i64, b: i64| vec![ExactNumber::from(a), ExactNumber::from(b)];
        assert!(dominates(&c(2, 2), &c(1, 1)).unwrap());
        assert!(dominates(&c(1, 1), &c(1, 1)).unwrap());
        assert!(!dominates(&c(2, 0), &c(1, 1)).unwrap());
        assert!(dominates(&c(1, 1), &[ExactNumber::one()]).is_err());
    }

    #[test]
    fn regularize_examples() {
        let ds = ColoredStochasticDataset::new(2, vec![pt(1, "1/2", "3", 0), pt(2, "2", "1", 1)]).unwrap();
        assert_eq!(coords(&regularize(&ds).unwrap()), ints(&[[1, 2], [2, 1]]));

        let ds = ColoredStochasticDataset::new(2, vec![pt(1, "1", "1", 0), pt(2, "1", "2", 1)]).unwrap();
        let reg = regularize(&ds).unwrap();
        assert_eq!(coords(&reg), ints(&[[1, 1], [2, 2]]));
        assert_eq!(build_dominance_graph(&ds).edge_ids(), build_dominance_graph(&reg).edge_ids());

        let ds = ColoredStochasticDataset::new(2, vec![pt(1, "1", "1", 0), pt(2, "2", "2", 1)]).unwrap();
        assert_eq!(coords(&regularize(&ds).unwrap()), ints(&[[1, 1], [2, 2]]));
    }

    #[test]
    fn rejects_invalid_datasets() {
        assert_eq!(
            ColoredStochasticDataset::new(2, vec![pt(1, "1", "1", 0), pt(2, "1", "1", 1)]),
            Err(Error::DuplicatePoint(1, 2))
        );
        assert_eq!(
            ColoredStochasticDataset::new(2, vec![pt(1, "1", "1", 0), pt(1, "2", "1", 1)]),
            Err(Error::DuplicateId(1))
        );
        let mut p = pt(1, "1", "1", 0);
        p.prob = q("3/2");
        assert!(matches!(
            ColoredStochasticDataset::new(2, vec![p]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(ColoredStochasticDataset::new(3, vec![pt(1, "1", "1", 0)]).is_err());
    }

    #[test]
    fn graph_examples() {
        let chain = |c2| ColoredStochasticDataset::new(2, vec![pt(1, "1", "1", 1), pt(2, "2", "2", c2)]).unwrap();
        assert_eq!(build_dominance_graph(&chain(2)).edges().len(), 1);
        assert_eq!(build_dominance_graph(&chain(1)).edges().len(), 0);
        let anti = ColoredStochasticDataset::new(
            2,
            vec![pt(1, "1", "3", 0), pt(2, "2", "2", 1), pt(3, "3", "1", 2)],
        )
        .unwrap();
        assert!(build_dominance_graph(&anti).edges().is_empty());
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_prefix_len(&[0, 0, 1, 1]), 2);
        assert_eq!(z_prefix_len(&[0]), 0);
        assert_eq!(z_prefix_len(&[1, 0, 1]), 2);
        assert_eq!(z_prefix_len(&[]), 0);
    }

    #[test]
    fn intercolor_examples() {
        assert!(has_intercolor_dominance(&[pt(1, "1", "1", 0), pt(2, "2", "2", 1)]));
        assert!(!has_intercolor_dominance(&[pt(1, "1", "1", 0), pt(2, "2", "2", 0)]));
        assert!(!has_intercolor_dominance(&[pt(1, "1", "3", 0), pt(2, "3", "1", 1)]));
    }

    #[test]
    fn realization_examples() {
        let mk = |probs: &[&str]| {
            ColoredStochasticDataset::new(
                2,
                probs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| StochasticPoint::planar(i as u64 + 1, i as i64, 0, 0, q(p)))
                    .collect(),
            )
            .unwrap()
        };
        assert_eq!(realization_probability(&mk(&["1/2", "1/2"]), &[0, 1]).unwrap(), q("1/4"));
        assert!(realization_probability(&mk(&["0", "1/2"]), &[0]).unwrap().is_zero());
        assert_eq!(realization_probability(&mk(&["1/2", "1/3", "1"]), &[0, 2]).unwrap(), q("1/3"));
        assert!(realization_probability(&mk(&["1/2"]), &[3]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"dimension": 2, "points": [
            {"id": 1, "coords": ["1/2","3"], "color": 0, "prob": "1/2"},
            {"id": 2, "coords": ["2", 1], "color": 1, "prob": "0.25"}]}"#;
        let ds = ColoredStochasticDataset::from_json(text).unwrap();
        assert_eq!(ds.points()[1].prob, q("1/4"));
        assert_eq!(ColoredStochasticDataset::from_json(&ds.to_json()).unwrap(), ds);
        let dup = r#"{"dimension": 1, "points": [
            {"id": 1, "coords": ["1"], "color": 0, "prob": "1"},
            {"id": 2, "coords": ["1"], "color": 1, "prob": "1"}]}"#;
        assert!(ColoredStochasticDataset::from_json(dup).is_err());
    }

    fn tied_dataset() -> impl Strategy<Value = ColoredStochasticDataset> {
        (1usize..4, prop::collection::vec((prop::collection::vec(0i64..4, 3), 0u32..3), 1..10)).prop_map(
            |(d, raw)| {
                let mut seen = HashSet::new();
                let pts = raw
                    .into_iter()
                    .filter(|(c, _)| seen.insert(c[..d].to_vec()))
                    .enumerate()
                    .map(|(i, (c, col))| {
                        StochasticPoint::new(i as u64 + 1, c[..d].iter().map(|&v| v.into()).collect(), col, q("1/2"))
                    })
                    .collect();
                ColoredStochasticDataset::new(d, pts).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn regularize_preserves_graph_and_is_regular(ds in tied_dataset()) {
            let reg = regularize(&ds).unwrap();
            prop_assert_eq!(build_dominance_graph(&ds).edge_ids(), build_dominance_graph(&reg).edge_ids());
            let n = ds.len() as i64;
            for axis in 0..ds.dimension() {
                let mut vals: Vec<ExactNumber> = reg.points().iter().map(|p| p.coords[axis].clone()).collect();
                vals.sort();
                prop_assert_eq!(vals, (1..=n).map(ExactNumber::from).collect::<Vec<_>>());
            }
            prop_assert!(reg.points().windows(2).all(|w| w[0].coords[0] < w[1].coords[0]));
        }

        #[test]
        fn z_prefix_properties(colors in prop::collection::vec(0u32..3, 1..12)) {
            let k = z_prefix_len(&colors);
            prop_assert!(k < colors.len());
            let last = *colors.last().unwrap();
            prop_assert!(colors[k..].iter().all(|&c| c == last));
            if k > 0 {
                prop_assert_ne!(colors[k - 1], last);
            }
        }
    }
}
