use super::{Range2D, WeightedStore};
use crate::error::{Error, Result};
use crate::number::Scalar;

/// Flat array of weights; every operation scans all points.
#[derive(Clone, Debug)]
pub struct NaiveStore<C, T> {
    points: Vec<(C, C)>,
    // `None` for weight zero; otherwise (nonzero part, pending zero factors).
    weights: Vec<Option<(T, u32)>>,
}

impl<C: Ord + Clone, T: Scalar> WeightedStore<C, T> for NaiveStore<C, T> {
    fn build(points: Vec<(C, C)>) -> Self {
        let weights = vec![None; points.len()];
        NaiveStore { points, weights }
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    fn query(&mut self, r: &Range2D<C>) -> T {
        let mut total = T::zero();
        for ((x, y), w) in self.points.iter().zip(&self.weights) {
            if let Some((v, 0)) = w {
                if r.contains(x, y) {
                    total += v;
                }
            }
        }
        total
    }

    fn update(&mut self, id: usize, w: T) -> Result<()> {
        let slot = self.weights.get_mut(id).ok_or(Error::UnknownPoint(id))?;
        *slot = if w.is_zero() { None } else { Some((w, 0)) };
        Ok(())
    }

    fn multiply(&mut self, r: &Range2D<C>, delta: &T) {
        for ((x, y), w) in self.points.iter().zip(self.weights.iter_mut()) {
            if let Some((v, z)) = w {
                if r.contains(x, y) {
                    if delta.is_zero() {
                        *z += 1;
                    } else {
                        *v *= delta;
                    }
                }
            }
        }
    }

    fn divide_zero(&mut self, r: &Range2D<C>) -> Result<()> {
        let inside = |i: usize| r.contains(&self.points[i].0, &self.points[i].1);
        if (0..self.points.len()).any(|i| matches!(self.weights[i], Some((_, 0))) && inside(i)) {
            return Err(Error::ZeroUnderflow);
        }
        for i in 0..self.points.len() {
            if inside(i) {
                if let Some((_, z)) = &mut self.weights[i] {
                    *z -= 1;
                }
            }
        }
        Ok(())
    }
}
