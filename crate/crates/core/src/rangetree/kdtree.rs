//! k-d tree over rank space with lazy multiplicative tags.
//!
//! Each node aggregates the weights below it as a polynomial in a formal
//! zero `z`: a weight that has seen `e` more multiplies by zero than divides
//! contributes `c * z^e`. Multiplying by zero shifts exponents up, dividing
//! shifts them down, and a query reads the `z^0` coefficient, so zero factors
//! are revertible without ever dividing by zero.

use smallvec::SmallVec;

use super::{Range2D, WeightedStore};
use crate::error::{Error, Result};
use crate::number::Scalar;

/// `sum c * z^e`, terms sorted by exponent.
#[derive(Clone, Debug)]
struct Graded<T>(SmallVec<[(i32, T); 1]>);

impl<T: Scalar> Graded<T> {
    fn empty() -> Self {
        Graded(SmallVec::new())
    }

    fn single(w: T) -> Self {
        let mut v = SmallVec::new();
        v.push((0, w));
        Graded(v)
    }

    fn scale(&mut self, f: &T, dz: i32) {
        for (e, c) in self.0.iter_mut() {
            *e += dz;
            *c *= f;
        }
    }

    /// Overwrites `self` with `a + b`.
    fn set_sum(&mut self, a: &Self, b: &Self) {
        match (a.0.as_slice(), b.0.as_slice()) {
            ([], _) => self.0.clone_from(&b.0),
            (_, []) => self.0.clone_from(&a.0),
            ([(ea, ca)], [(eb, cb)]) if ea == eb => {
                self.0.truncate(1);
                match self.0.first_mut() {
                    Some(slot) => {
                        slot.0 = *ea;
                        slot.1.clone_from(ca);
                        slot.1 += cb;
                    }
                    None => self.0.push((*ea, ca.plus(cb))),
                }
            }
            (xs, ys) => {
                self.0.clear();
                let (mut i, mut j) = (0, 0);
                while i < xs.len() || j < ys.len() {
                    let ex = xs.get(i).map_or(i32::MAX, |t| t.0);
                    let ey = ys.get(j).map_or(i32::MAX, |t| t.0);
                    if ex < ey {
                        self.0.push(xs[i].clone());
                        i += 1;
                    } else if ey < ex {
                        self.0.push(ys[j].clone());
                        j += 1;
                    } else {
                        self.0.push((ex, xs[i].1.plus(&ys[j].1)));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }

    fn coeff_at(&self, e: i32) -> Option<&T> {
        self.0.iter().find(|t| t.0 == e).map(|t| &t.1)
    }
}

#[derive(Clone, Debug)]
struct Node<T> {
    agg: Graded<T>,
    tag: Option<(T, i32)>,
    live: u32,
    min_exp: i32,
    // Bounding box in rank space: x_min, x_max, y_min, y_max.
    bbox: [u32; 4],
}

/// Half-open rank rectangle.
#[derive(Clone, Copy, Debug)]
struct RankRect {
    x: (u32, u32),
    y: (u32, u32),
}

impl RankRect {
    fn is_empty(&self) -> bool {
        self.x.0 >= self.x.1 || self.y.0 >= self.y.1
    }

    fn covers(&self, b: &[u32; 4]) -> bool {
        self.x.0 <= b[0] && b[1] < self.x.1 && self.y.0 <= b[2] && b[3] < self.y.1
    }

    fn misses(&self, b: &[u32; 4]) -> bool {
        b[1] < self.x.0 || b[0] >= self.x.1 || b[3] < self.y.0 || b[2] >= self.y.1
    }
}

/// Weighted point set supporting range sum, absolute point update and range
/// multiply (zero included) in `O(sqrt m)` node visits per operation.
///
/// Coordinates only need a total order; they are mapped to ranks at build
/// time, so open and closed bounds are resolved exactly.
#[derive(Clone, Debug)]
pub struct RangeTree2D<C, T> {
    xs: Vec<C>,
    ys: Vec<C>,
    nodes: Vec<Node<T>>,
    // Tree position of each point id.
    position: Vec<u32>,
}

impl<C: Ord + Clone, T: Scalar> RangeTree2D<C, T> {
    pub fn new(points: Vec<(C, C)>) -> Self {
        let mut xs: Vec<C> = points.iter().map(|p| p.0.clone()).collect();
        let mut ys: Vec<C> = points.iter().map(|p| p.1.clone()).collect();
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let ranks: Vec<(u32, u32)> = points
            .iter()
            .map(|(x, y)| {
                (
                    xs.binary_search(x).unwrap() as u32,
                    ys.binary_search(y).unwrap() as u32,
                )
            })
            .collect();
        let m = points.len();
        let blank = Node {
            agg: Graded::empty(),
            tag: None,
            live: 0,
            min_exp: i32::MAX,
            bbox: [0; 4],
        };
        let mut tree = RangeTree2D {
            xs,
            ys,
            nodes: vec![blank; (2 * m).saturating_sub(1)],
            position: vec![0; m],
        };
        if m > 0 {
            let mut order: Vec<usize> = (0..m).collect();
            tree.build_node(0, 0, &mut order, &ranks);
        }
        tree
    }

    fn build_node(&mut self, idx: usize, lo: usize, order: &mut [usize], ranks: &[(u32, u32)]) {
        let mut b = [u32::MAX, 0, u32::MAX, 0];
        for &p in order.iter() {
            let (x, y) = ranks[p];
            b = [b[0].min(x), b[1].max(x), b[2].min(y), b[3].max(y)];
        }
        self.nodes[idx].bbox = b;
        if order.len() == 1 {
            self.position[order[0]] = lo as u32;
            return;
        }
        let mid = order.len() / 2;
        if b[1] - b[0] >= b[3] - b[2] {
            order.select_nth_unstable_by_key(mid, |&p| ranks[p]);
        } else {
            order.select_nth_unstable_by_key(mid, |&p| (ranks[p].1, ranks[p].0));
        }
        let (left, right) = order.split_at_mut(mid);
        self.build_node(idx + 1, lo, left, ranks);
        self.build_node(idx + 2 * mid, lo + mid, right, ranks);
    }

    fn rank_rect(&self, r: &Range2D<C>) -> RankRect {
        RankRect {
            x: (r.x_low.lower_rank(&self.xs) as u32, r.x_high.upper_rank(&self.xs) as u32),
            y: (r.y_low.lower_rank(&self.ys) as u32, r.y_high.upper_rank(&self.ys) as u32),
        }
    }

    fn apply(&mut self, idx: usize, f: &T, dz: i32) {
        let node = &mut self.nodes[idx];
        if node.live == 0 {
            return;
        }
        node.agg.scale(f, dz);
        node.min_exp += dz;
        match &mut node.tag {
            Some((tf, tz)) => {
                *tf *= f;
                *tz += dz;
            }
            None => node.tag = Some((f.clone(), dz)),
        }
    }

    fn push(&mut self, idx: usize, len: usize) {
        if let Some((f, dz)) = self.nodes[idx].tag.take() {
            let mid = len / 2;
            self.apply(idx + 1, &f, dz);
            self.apply(idx + 2 * mid, &f, dz);
        }
    }

    fn pull(&mut self, idx: usize, len: usize) {
        let r = idx + 2 * (len / 2);
        let (head, tail) = self.nodes.split_at_mut(idx + 1);
        let node = &mut head[idx];
        let (left, right) = (&tail[0], &tail[r - idx - 1]);
        node.agg.set_sum(&left.agg, &right.agg);
        node.live = left.live + right.live;
        node.min_exp = left.min_exp.min(right.min_exp);
    }

    // Read-only descent: pending tags above a node are carried in `carry`
    // instead of being pushed down.
    fn query_node(&self, idx: usize, len: usize, r: &RankRect, carry: Option<&(T, i32)>, acc: &mut T) {
        let node = &self.nodes[idx];
        if node.live == 0 || r.misses(&node.bbox) {
            return;
        }
        if r.covers(&node.bbox) {
            match carry {
                None => {
                    if let Some(c) = node.agg.coeff_at(0) {
                        *acc += c;
                    }
                }
                Some((f, dz)) => {
                    if let Some(c) = node.agg.coeff_at(-dz) {
                        *acc += &c.times(f);
                    }
                }
            }
            return;
        }
        let combined;
        let carry = match (&node.tag, carry) {
            (None, c) => c,
            (Some(t), None) => Some(t),
            (Some((tf, tz)), Some((cf, cz))) => {
                combined = (tf.times(cf), tz + cz);
                Some(&combined)
            }
        };
        let mid = len / 2;
        self.query_node(idx + 1, mid, r, carry, acc);
        self.query_node(idx + 2 * mid, len - mid, r, carry, acc);
    }

    fn min_exp_node(&mut self, idx: usize, len: usize, r: &RankRect) -> i32 {
        let node = &self.nodes[idx];
        if node.live == 0 || r.misses(&node.bbox) {
            return i32::MAX;
        }
        if r.covers(&node.bbox) {
            return node.min_exp;
        }
        self.push(idx, len);
        let mid = len / 2;
        self.min_exp_node(idx + 1, mid, r)
            .min(self.min_exp_node(idx + 2 * mid, len - mid, r))
    }

    fn multiply_node(&mut self, idx: usize, len: usize, r: &RankRect, f: &T, dz: i32) {
        let node = &self.nodes[idx];
        if node.live == 0 || r.misses(&node.bbox) {
            return;
        }
        if r.covers(&node.bbox) {
            self.apply(idx, f, dz);
            return;
        }
        self.push(idx, len);
        let mid = len / 2;
        self.multiply_node(idx + 1, mid, r, f, dz);
        self.multiply_node(idx + 2 * mid, len - mid, r, f, dz);
        self.pull(idx, len);
    }

    fn update_node(&mut self, idx: usize, len: usize, offset: usize, w: &T) {
        if len == 1 {
            let node = &mut self.nodes[idx];
            node.tag = None;
            if w.is_zero() {
                node.agg = Graded::empty();
                node.live = 0;
                node.min_exp = i32::MAX;
            } else {
                node.agg = Graded::single(w.clone());
                node.live = 1;
                node.min_exp = 0;
            }
            return;
        }
        self.push(idx, len);
        let mid = len / 2;
        if offset < mid {
            self.update_node(idx + 1, mid, offset, w);
        } else {
            self.update_node(idx + 2 * mid, len - mid, offset - mid, w);
        }
        self.pull(idx, len);
    }

    /// Sum of current weights in `r`.
    pub fn query(&self, r: &Range2D<C>) -> T {
        let mut acc = T::zero();
        let rr = self.rank_rect(r);
        if !self.position.is_empty() && !rr.is_empty() {
            self.query_node(0, self.position.len(), &rr, None, &mut acc);
        }
        acc
    }

    /// Sets the weight of point `id` (build order) to `w`, discarding any
    /// factors applied to it earlier.
    pub fn update(&mut self, id: usize, w: T) -> Result<()> {
        let pos = *self.position.get(id).ok_or(Error::UnknownPoint(id))? as usize;
        self.update_node(0, self.position.len(), pos, &w);
        Ok(())
    }

    pub fn multiply(&mut self, r: &Range2D<C>, delta: &T) {
        let rr = self.rank_rect(r);
        if self.position.is_empty() || rr.is_empty() || delta == &T::one() {
            return;
        }
        if delta.is_zero() {
            self.multiply_node(0, self.position.len(), &rr, &T::one(), 1);
        } else {
            self.multiply_node(0, self.position.len(), &rr, delta, 0);
        }
    }

    /// Cancels one pending multiply by zero on every nonzero point of `r`.
    pub fn divide_zero(&mut self, r: &Range2D<C>) -> Result<()> {
        let rr = self.rank_rect(r);
        if self.position.is_empty() || rr.is_empty() {
            return Ok(());
        }
        let m = self.position.len();
        if self.min_exp_node(0, m, &rr) < 1 {
            return Err(Error::ZeroUnderflow);
        }
        self.multiply_node(0, m, &rr, &T::one(), -1);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }
}

impl<C: Ord + Clone, T: Scalar> WeightedStore<C, T> for RangeTree2D<C, T> {
    fn build(points: Vec<(C, C)>) -> Self {
        Self::new(points)
    }
    fn len(&self) -> usize {
        RangeTree2D::len(self)
    }
    fn query(&mut self, r: &Range2D<C>) -> T {
        RangeTree2D::query(self, r)
    }
    fn update(&mut self, id: usize, w: T) -> Result<()> {
        RangeTree2D::update(self, id, w)
    }
    fn multiply(&mut self, r: &Range2D<C>, delta: &T) {
        RangeTree2D::multiply(self, r, delta)
    }
    fn divide_zero(&mut self, r: &Range2D<C>) -> Result<()> {
        RangeTree2D::divide_zero(self, r)
    }
}
