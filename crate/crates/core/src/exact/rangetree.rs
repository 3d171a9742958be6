use super::{FTable, Instance, LegalPair};
use crate::dataset::ColoredStochasticDataset;
use crate::error::Result;
use crate::number::Scalar;
use crate::rangetree::{Range2D, RangeTree2D};

/// `Γ` computed with weighted range trees.
pub fn gamma_rangetree<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<T> {
    Ok(gamma_rangetree_table(ds)?.0)
}

/// Trees holding one point `(i, y_j)` per legal pair, with the pair's weight.
struct Forest<T> {
    global: RangeTree2D<u32, T>,
    by_color: Vec<RangeTree2D<u32, T>>,
}

/// Trees touched by the quadrant updates of one iteration. Every quadrant
/// division is undone before the iteration ends, so either the global tree
/// plus the row's own color tree (query = global − own), or the trees of all
/// other colors (query = their sum), can carry them.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Global,
    Others,
}

impl<T: Scalar> Forest<T> {
    fn mode(&self, k: usize) -> Mode {
        let cost = |t: &RangeTree2D<u32, T>| (t.len() as f64).sqrt();
        let global = cost(&self.global) + cost(&self.by_color[k]);
        let others: f64 = (0..self.by_color.len()).filter(|&c| c != k).map(|c| cost(&self.by_color[c])).sum();
        if others < global {
            Mode::Others
        } else {
            Mode::Global
        }
    }

    fn trees(&mut self, mode: Mode, k: usize) -> Vec<&mut RangeTree2D<u32, T>> {
        match mode {
            Mode::Global => {
                let own = &mut self.by_color[k];
                vec![&mut self.global, own]
            }
            Mode::Others => self
                .by_color
                .iter_mut()
                .enumerate()
                .filter(|(c, _)| *c != k)
                .map(|(_, t)| t)
                .collect(),
        }
    }

    fn multiply(&mut self, mode: Mode, k: usize, r: &Range2D<u32>, f: &T) {
        for tree in self.trees(mode, k) {
            tree.multiply(r, f);
        }
    }

    fn divide(&mut self, mode: Mode, k: usize, r: &Range2D<u32>, f: &T) -> Result<()> {
        if f.is_zero() {
            for tree in self.trees(mode, k) {
                tree.divide_zero(r)?;
            }
            Ok(())
        } else {
            self.multiply(mode, k, r, &f.inverse());
            Ok(())
        }
    }

    /// Weight of pairs of a color other than `k` inside `r`.
    fn query(&self, mode: Mode, k: usize, r: &Range2D<u32>) -> T {
        match mode {
            Mode::Global => {
                let mut sum = self.global.query(r);
                sum -= &self.by_color[k].query(r);
                sum
            }
            Mode::Others => {
                let mut sum = T::zero();
                for (c, tree) in self.by_color.iter().enumerate() {
                    if c != k {
                        sum += &tree.query(r);
                    }
                }
                sum
            }
        }
    }
}

/// `Γ` and the `F` table, sweeping `i` left to right.
///
/// Before iteration `i` the weight of pair `(i', j')` in every tree is
/// `F(i',j') ∏_{i' < t < i} (1 − π_t)`. Inside the iteration, the northwest
/// quadrant of each earlier point of `a_i`'s color is divided by its
/// `(1 − π)`; candidates `j` are then visited by increasing `y_j`, and after
/// each one the division for `a_j` is undone. At the moment `j` is queried,
/// exactly the same-color points with `y ≥ y_j` are divided out, which is the
/// exclusion in the recurrence. `F(i,j)` is the quadrant weight of the other
/// colors times `π_i π_j`.
pub fn gamma_rangetree_table<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<(T, FTable<T>)> {
    let inst = Instance::<T>::new(ds)?;
    let n = inst.n;
    let pairs = inst.legal_pairs();

    let mut color_ids = vec![0usize; pairs.len()];
    let mut color_points: Vec<Vec<(u32, u32)>> = vec![Vec::new(); inst.colors + 1];
    for (g, p) in pairs.iter().enumerate() {
        let k = inst.color[p.i];
        color_ids[g] = color_points[k].len();
        color_points[k].push((p.i as u32, inst.y[p.j]));
    }
    let mut forest = Forest {
        global: RangeTree2D::new(pairs.iter().map(|p| (p.i as u32, inst.y[p.j])).collect()),
        by_color: color_points.into_iter().map(RangeTree2D::new).collect(),
    };
    forest.global.update(0, T::one())?;
    forest.by_color[inst.colors].update(0, T::one())?;

    let mut f = vec![T::zero(); pairs.len()];
    f[0] = T::one();
    let mut prod = inst.all_absent();
    let mut gamma = prod.value();
    let mut first = 1;
    let mut same_color: Vec<Vec<usize>> = vec![Vec::new(); inst.colors];

    for i in 1..=n {
        prod.div_factor(&inst.absent[i])?;
        let k = inst.color[i];
        let quad = |t: usize| Range2D::nw_quadrant(t as u32, inst.y[t]);

        let mode = forest.mode(k);
        for &t in &same_color[k] {
            forest.divide(mode, k, &quad(t), &inst.absent[t])?;
        }

        let end = first + pairs[first..].iter().take_while(|p| p.i == i).count();
        let scale = prod.value();
        for g in first..end {
            let j = pairs[g].j;
            let window = Range2D::nw_quadrant(j as u32, inst.y[i]);
            let sum = forest.query(mode, k, &window);
            f[g] = inst.anchor(pairs[g]).times(&sum);
            gamma += &f[g].times(&scale);
            if j < i {
                forest.multiply(mode, k, &quad(j), &inst.absent[j]);
            }
        }

        // Same-color points above a_i never became candidates; undo them.
        for &t in &same_color[k] {
            if inst.y[t] > inst.y[i] {
                forest.multiply(mode, k, &quad(t), &inst.absent[t]);
            }
        }

        for g in first..end {
            forest.global.update(g, f[g].clone())?;
            forest.by_color[k].update(color_ids[g], f[g].clone())?;
        }

        let strip = Range2D::left_strip(i as u32);
        forest.global.multiply(&strip, &inst.absent[i]);
        for tree in forest.by_color.iter_mut() {
            tree.multiply(&strip, &inst.absent[i]);
        }

        same_color[k].push(i);
        first = end;
    }

    let entries: Vec<(LegalPair, T)> = pairs.into_iter().zip(f).collect();
    Ok((gamma, FTable::from_unsorted(entries)))
}
