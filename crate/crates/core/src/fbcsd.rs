//! Dominance with respect to every orthogonal basis of the plane.
//!
//! A realization is *good* when some orthogonal basis leaves it without
//! inter-color dominance; `Γ*` is the probability of a good realization and
//! `Λ* = 1 − Γ*`. Every good, non-monochromatic realization has a unique
//! witness pair, and the probability of each witness is the `Γ` of a planar
//! instance built from that pair, so `Γ*` reduces to `O(n²)` calls of the
//! standard-basis solver.
//!
//! Point indices in this module are positions in lexicographic `(x, y)`
//! order. Input must be in general position (no three points collinear).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dataset::{ColoredStochasticDataset, StochasticPoint};
use crate::error::{Error, Result};
use crate::exact::gamma_rangetree;
use crate::number::{ExactNumber, Scalar};

/// Default cap on the number of points for [`lambda_star_bruteforce`].
pub const DEFAULT_FBCSD_BRUTE_CAP: usize = 12;

/// A line through the origin, stored as its representative with angle in
/// `[0, π)`: `y > 0`, or `y = 0` and `x > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    x: ExactNumber,
    y: ExactNumber,
}

impl Direction {
    pub fn new(x: ExactNumber, y: ExactNumber) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::SameDirection);
        }
        if y.signum().is_lt() || (y.is_zero() && x.signum().is_lt()) {
            Ok(Direction { x: -x, y: -y })
        } else {
            Ok(Direction { x, y })
        }
    }

    /// Direction of `a − b`.
    pub fn between(a: &StochasticPoint, b: &StochasticPoint) -> Result<Self> {
        Direction::new(a.x() - b.x(), a.y() - b.y())
    }

    pub fn x(&self) -> &ExactNumber {
        &self.x
    }

    pub fn y(&self) -> &ExactNumber {
        &self.y
    }

    /// Hashable key equal for parallel directions.
    fn slope_key(&self) -> Option<ExactNumber> {
        (!self.y.is_zero()).then(|| &self.x / &self.y)
    }
}

/// Whether the angle swept clockwise from `l` to `l2` exceeds a right angle.
pub fn angle_gt_right(l: &Direction, l2: &Direction) -> Result<bool> {
    let cross = &l2.x * &l.y - &l2.y * &l.x;
    if cross.is_zero() {
        return Err(Error::SameDirection);
    }
    let dot = &l.x * &l2.x + &l.y * &l2.y;
    Ok((cross * dot).signum().is_lt())
}

fn orientation_zero(a: &StochasticPoint, b: &StochasticPoint, c: &StochasticPoint) -> bool {
    let lhs = (b.x() - a.x()) * (c.y() - a.y());
    let rhs = (b.y() - a.y()) * (c.x() - a.x());
    lhs == rhs
}

/// Ids of some collinear triple, if one exists.
pub fn find_collinear_triple(ds: &ColoredStochasticDataset) -> Option<(u64, u64, u64)> {
    find_collinear_in(ds.points())
}

fn find_collinear_in(pts: &[StochasticPoint]) -> Option<(u64, u64, u64)> {
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for c in b + 1..pts.len() {
                if orientation_zero(&pts[a], &pts[b], &pts[c]) {
                    return Some((pts[a].id, pts[b].id, pts[c].id));
                }
            }
        }
    }
    None
}

fn require_general_position(pts: &[StochasticPoint]) -> Result<()> {
    match find_collinear_in(pts) {
        Some((a, b, c)) => Err(Error::Collinear(a, b, c)),
        None => Ok(()),
    }
}

/// Points sorted by `(x, y)`, the index order used throughout this module.
pub fn lex_sorted(ds: &ColoredStochasticDataset) -> Result<ColoredStochasticDataset> {
    ds.require_planar()?;
    let mut order: Vec<usize> = (0..ds.len()).collect();
    let pts = ds.points();
    order.sort_by(|&a, &b| pts[a].x().cmp(pts[b].x()).then_with(|| pts[a].y().cmp(pts[b].y())));
    Ok(ds.reordered(&order))
}

/// Outcome of the goodness criterion. `witness` holds `(i*, j*)` as
/// positions in the input slice when the set is good and not monochromatic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goodness {
    pub good: bool,
    pub witness: Option<(usize, usize)>,
}

/// Goodness of `points`, which are indexed in slice order (callers use
/// lexicographic order). Fails on collinear input.
pub fn goodness_check(points: &[StochasticPoint]) -> Result<Goodness> {
    require_general_position(points)?;
    let idx: Vec<usize> = (0..points.len()).collect();
    goodness_unchecked(points, &idx)
}

/// Goodness of the subset `members` (increasing positions into `pts`).
fn goodness_unchecked(pts: &[StochasticPoint], members: &[usize]) -> Result<Goodness> {
    let mut dirs: Vec<Direction> = Vec::new();
    let mut generators: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut slot: HashMap<Option<ExactNumber>, usize> = HashMap::new();
    for (k, &p) in members.iter().enumerate() {
        for &q in &members[k + 1..] {
            if pts[p].color == pts[q].color {
                continue;
            }
            let d = Direction::between(&pts[p], &pts[q])?;
            let s = *slot.entry(d.slope_key()).or_insert_with(|| {
                dirs.push(d);
                generators.push(Vec::new());
                dirs.len() - 1
            });
            generators[s].push((p, q));
        }
    }
    if dirs.is_empty() {
        return Ok(Goodness { good: true, witness: None });
    }
    'candidates: for (c, l) in dirs.iter().enumerate() {
        for (o, other) in dirs.iter().enumerate() {
            if o != c && !angle_gt_right(l, other)? {
                continue 'candidates;
            }
        }
        // Largest index among the pairs generating `l`, with its partner.
        let &(p, q) = generators[c].iter().max_by_key(|(_, q)| *q).unwrap();
        return Ok(Goodness {
            good: true,
            witness: Some((p, q)),
        });
    }
    Ok(Goodness { good: false, witness: None })
}

/// Probability that the realization is monochromatic (the empty set
/// included).
pub fn pr_mono<T: Scalar>(ds: &ColoredStochasticDataset) -> T {
    let mut by_color: HashMap<u32, T> = HashMap::new();
    for p in ds.points() {
        *by_color.entry(p.color).or_insert_with(T::one) *= &T::from_exact(&p.prob).complement();
    }
    let mut keys: Vec<u32> = by_color.keys().copied().collect();
    keys.sort_unstable();
    let absent: Vec<T> = keys.iter().map(|k| by_color[k].clone()).collect();
    let mut total = T::one();
    for a in &absent {
        total *= a;
    }
    let mut sum = total;
    for c in 0..absent.len() {
        let mut others = T::one();
        for (o, a) in absent.iter().enumerate() {
            if o != c {
                others *= a;
            }
        }
        sum += &others.times(&absent[c].complement());
    }
    sum
}

/// The reduced planar instance for a candidate witness pair.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReduction {
    pub i_star: usize,
    pub j_star: usize,
    /// `a_{i*} − a_{j*}`.
    pub b1: (ExactNumber, ExactNumber),
    /// `b1` turned clockwise by a right angle.
    pub b2: (ExactNumber, ExactNumber),
    pub delta: ExactNumber,
    pub dataset: ColoredStochasticDataset,
}

fn dot(b: &(ExactNumber, ExactNumber), p: &StochasticPoint) -> ExactNumber {
    &b.0 * p.x() + &b.1 * p.y()
}

/// Builds the instance whose `Γ`, times `π_{i*} π_{j*}`, is the probability
/// that the realization is good with witness `(i*, j*)`.
///
/// `ds` must already be in lexicographic order; `i_star`, `j_star` are
/// positions in it. Point `p` maps to `(⟨b2,a_p⟩, ⟨b1,a_p⟩)`, with the first
/// coordinate lowered by `δ` when `p ≤ j*` and `a_p` dominates (in basis
/// `(b1, b2)`) some differently colored `a_q`, `q ≤ j*`, on the same `b2`
/// level. The two anchors get probability 1.
pub fn build_reduced_instance(
    ds: &ColoredStochasticDataset,
    i_star: usize,
    j_star: usize,
) -> Result<WitnessReduction> {
    ds.require_planar()?;
    require_general_position(ds.points())?;
    reduce_unchecked(ds, i_star, j_star)
}

fn reduce_unchecked(ds: &ColoredStochasticDataset, i_star: usize, j_star: usize) -> Result<WitnessReduction> {
    let pts = ds.points();
    let n = pts.len();
    if i_star >= n || j_star >= n {
        return Err(Error::UnknownPoint(i_star.max(j_star)));
    }
    if pts[i_star].color == pts[j_star].color {
        return Err(Error::SameColor(pts[i_star].id, pts[j_star].id));
    }
    let b1 = (pts[i_star].x() - pts[j_star].x(), pts[i_star].y() - pts[j_star].y());
    let b2 = (b1.1.clone(), -&b1.0);
    let s: Vec<ExactNumber> = pts.iter().map(|p| dot(&b2, p)).collect();
    let t: Vec<ExactNumber> = pts.iter().map(|p| dot(&b1, p)).collect();

    let mut sorted = s.clone();
    sorted.sort();
    let gap = sorted
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .filter(|g| !g.is_zero())
        .min()
        .unwrap_or_else(ExactNumber::one);
    let delta = gap / ExactNumber::from(2);

    let lowered = |p: usize| {
        p <= j_star
            && (0..=j_star).any(|q| pts[q].color != pts[p].color && s[q] == s[p] && t[p] >= t[q] && q != p)
    };
    let points = pts
        .iter()
        .enumerate()
        .map(|(p, a)| {
            let x = if lowered(p) { &s[p] - &delta } else { s[p].clone() };
            let prob = if p == i_star || p == j_star {
                ExactNumber::one()
            } else {
                a.prob.clone()
            };
            StochasticPoint::new(a.id, vec![x, t[p].clone()], a.color, prob)
        })
        .collect();
    Ok(WitnessReduction {
        i_star,
        j_star,
        b1,
        b2,
        delta,
        dataset: ColoredStochasticDataset::new(2, points)?,
    })
}

/// Validated, lexicographically sorted input with impossible points removed.
fn prepare(ds: &ColoredStochasticDataset) -> Result<ColoredStochasticDataset> {
    ds.require_planar()?;
    require_general_position(ds.points())?;
    lex_sorted(&ds.without_impossible())
}

/// `Γ*` as `Pr_mono` plus the witness-pair terms, each solved by the range
/// tree solver. Pairs are evaluated in parallel and summed in pair order.
pub fn gamma_star<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<T> {
    let ds = prepare(ds)?;
    let pts = ds.points();
    let n = pts.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| pts[i].color != pts[j].color)
        .collect();
    let terms: Vec<T> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let red = reduce_unchecked(&ds, i, j)?;
            let g: T = gamma_rangetree(&red.dataset)?;
            Ok(T::from_exact(&pts[i].prob).times(&T::from_exact(&pts[j].prob)).times(&g))
        })
        .collect::<Result<_>>()?;
    let mut total = pr_mono::<T>(&ds);
    for t in &terms {
        total += t;
    }
    Ok(total)
}

/// `Λ* = 1 − Γ*`.
pub fn lambda_star<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<T> {
    Ok(gamma_star::<T>(ds)?.complement())
}

/// `Λ*` by testing every subset against the goodness criterion (cap 12).
pub fn lambda_star_bruteforce(ds: &ColoredStochasticDataset) -> Result<ExactNumber> {
    lambda_star_bruteforce_capped(ds, DEFAULT_FBCSD_BRUTE_CAP)
}

pub fn lambda_star_bruteforce_capped(ds: &ColoredStochasticDataset, cap: usize) -> Result<ExactNumber> {
    let ds = prepare(ds)?;
    let n = ds.len();
    if n > cap.min(30) {
        return Err(Error::CapExceeded { n, cap: cap.min(30) });
    }
    let pts = ds.points();
    let mut good = ExactNumber::zero();
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&p| mask >> p & 1 == 1).collect();
        if goodness_unchecked(pts, &members)?.good {
            good += &subset_probability(pts, mask);
        }
    }
    Ok(good.complement())
}

fn subset_probability(pts: &[StochasticPoint], mask: u32) -> ExactNumber {
    pts.iter()
        .enumerate()
        .map(|(p, a)| if mask >> p & 1 == 1 { a.prob.clone() } else { a.prob.complement() })
        .product()
}

/// Probability of good, non-monochromatic realizations grouped by witness,
/// by enumeration. Keys are id pairs `(id(a_{i*}), id(a_{j*}))`.
pub fn witness_masses(ds: &ColoredStochasticDataset) -> Result<Vec<((u64, u64), ExactNumber)>> {
    let ds = prepare(ds)?;
    let n = ds.len();
    if n > DEFAULT_FBCSD_BRUTE_CAP {
        return Err(Error::CapExceeded { n, cap: DEFAULT_FBCSD_BRUTE_CAP });
    }
    let pts = ds.points();
    let mut mass: HashMap<(u64, u64), ExactNumber> = HashMap::new();
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&p| mask >> p & 1 == 1).collect();
        if let Some((i, j)) = goodness_unchecked(pts, &members)?.witness {
            *mass.entry((pts[i].id, pts[j].id)).or_default() += &subset_probability(pts, mask);
        }
    }
    let mut out: Vec<_> = mass.into_iter().collect();
    out.sort_by_key(|(k, _)| *k);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::test_support::{planar, q};

    fn dir(x: i64, y: i64) -> Direction {
        Direction::new(x.into(), y.into()).unwrap()
    }

    #[test]
    fn canonical_directions() {
        assert_eq!(dir(-1, -2), dir(1, 2));
        assert_eq!(dir(-3, 0), dir(3, 0));
        assert!(Direction::new(0.into(), 0.into()).is_err());
    }

    #[test]
    fn angle_examples() {
        assert!(!angle_gt_right(&dir(1, 0), &dir(0, 1)).unwrap());
        assert!(angle_gt_right(&dir(1, 0), &dir(1, 2)).unwrap());
        assert!(!angle_gt_right(&dir(1, 2), &dir(1, 0)).unwrap());
        assert!(!angle_gt_right(&dir(1, 1), &dir(-1, 1)).unwrap());
        assert!(!angle_gt_right(&dir(-1, 1), &dir(1, 1)).unwrap());
        assert_eq!(angle_gt_right(&dir(1, 1), &dir(2, 2)), Err(Error::SameDirection));
    }

    #[test]
    fn goodness_examples() {
        let mono = planar(&[(0, 0, 1, "1"), (1, 3, 1, "1"), (2, 1, 1, "1")]);
        assert_eq!(goodness_check(mono.points()).unwrap(), Goodness { good: true, witness: None });
        let two = planar(&[(0, 0, 1, "1"), (1, 3, 2, "1")]);
        assert_eq!(goodness_check(two.points()).unwrap().witness, Some((0, 1)));
        let star = lex_sorted(&planar(&[(0, 0, 0, "1"), (1, 0, 1, "1"), (1, 2, 1, "1"), (-1, 2, 1, "1")])).unwrap();
        assert!(!goodness_check(star.points()).unwrap().good);
        let line = planar(&[(0, 0, 0, "1"), (1, 1, 1, "1"), (2, 2, 1, "1")]);
        assert_eq!(goodness_check(line.points()), Err(Error::Collinear(1, 2, 3)));
    }

    #[test]
    fn right_angle_is_not_good() {
        // Directions (1,0) and (0,1) meet at exactly a right angle.
        let ds = lex_sorted(&planar(&[(0, 0, 0, "1"), (1, 0, 1, "1"), (0, 1, 1, "1")])).unwrap();
        let g = goodness_check(ds.points()).unwrap();
        assert!(!g.good);
    }

    #[test]
    fn pr_mono_examples() {
        assert_eq!(pr_mono::<ExactNumber>(&planar(&[(0, 0, 3, "1/2"), (1, 5, 3, "1/3")])), q("1"));
        assert_eq!(pr_mono::<ExactNumber>(&planar(&[(0, 0, 1, "1/2"), (1, 5, 2, "1/2")])), q("3/4"));
    }

    #[test]
    fn lambda_star_examples() {
        let two = planar(&[(0, 0, 1, "1/3"), (1, 3, 2, "1")]);
        assert_eq!(lambda_star::<ExactNumber>(&two).unwrap(), q("0"));
        let mono = planar(&[(0, 0, 1, "1/3"), (1, 3, 1, "1"), (2, 1, 1, "1/2")]);
        assert_eq!(lambda_star::<ExactNumber>(&mono).unwrap(), q("0"));
        let star = planar(&[(0, 0, 0, "1"), (1, 0, 1, "1"), (1, 2, 1, "1"), (-1, 2, 1, "1")]);
        assert_eq!(lambda_star::<ExactNumber>(&star).unwrap(), q("1"));
        assert_eq!(lambda_star_bruteforce(&star).unwrap(), q("1"));
    }

    #[test]
    fn anchors_are_certain() {
        let ds = lex_sorted(&planar(&[(0, 0, 0, "1/2"), (1, 3, 1, "1/3"), (3, 1, 0, "1/5")])).unwrap();
        let red = build_reduced_instance(&ds, 0, 1).unwrap();
        assert!(red.dataset.points()[0].prob.is_one());
        assert!(red.dataset.points()[1].prob.is_one());
        assert_eq!(red.dataset.points()[2].prob, q("1/5"));
        assert!(red.delta.signum().is_gt());
        assert!(build_reduced_instance(&ds, 0, 2).is_err());
    }
}
