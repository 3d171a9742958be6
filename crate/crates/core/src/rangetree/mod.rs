//! Weighted 2D point stores with range sum, point update and revertible
//! range multiply.
//!
//! [`RangeTree2D`] is the fast structure; [`NaiveStore`] recomputes every
//! answer by scanning and serves as the differential oracle. Both implement
//! [`WeightedStore`], and [`trace`] replays recorded operation sequences
//! against the pair.

mod kdtree;
mod naive;
pub mod trace;

use std::fmt;

pub use kdtree::RangeTree2D;
pub use naive::NaiveStore;

use crate::error::{Error, Result};
use crate::number::Scalar;

/// One side of an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound<C> {
    Unbounded,
    Open(C),
    Closed(C),
}

impl<C: Ord> Bound<C> {
    fn admits_above(&self, v: &C) -> bool {
        match self {
            Bound::Unbounded => true,
            Bound::Open(b) => v > b,
            Bound::Closed(b) => v >= b,
        }
    }

    fn admits_below(&self, v: &C) -> bool {
        match self {
            Bound::Unbounded => true,
            Bound::Open(b) => v < b,
            Bound::Closed(b) => v <= b,
        }
    }

    fn value(&self) -> Option<&C> {
        match self {
            Bound::Unbounded => None,
            Bound::Open(c) | Bound::Closed(c) => Some(c),
        }
    }

    /// Index of the first element of sorted `vals` admitted as a lower bound.
    fn lower_rank(&self, vals: &[C]) -> usize {
        vals.partition_point(|v| !self.admits_above(v))
    }

    /// One past the last element of sorted `vals` admitted as an upper bound.
    fn upper_rank(&self, vals: &[C]) -> usize {
        vals.partition_point(|v| self.admits_below(v))
    }
}

/// Axis-aligned rectangle with independently open, closed or missing sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Range2D<C> {
    pub x_low: Bound<C>,
    pub x_high: Bound<C>,
    pub y_low: Bound<C>,
    pub y_high: Bound<C>,
}

impl<C: Ord + Clone> Range2D<C> {
    pub fn new(x_low: Bound<C>, x_high: Bound<C>, y_low: Bound<C>, y_high: Bound<C>) -> Result<Self>
    where
        C: fmt::Debug,
    {
        for (lo, hi) in [(&x_low, &x_high), (&y_low, &y_high)] {
            if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
                if a > b {
                    return Err(Error::InvalidRange(format!("low {a:?} exceeds high {b:?}")));
                }
            }
        }
        Ok(Range2D {
            x_low,
            x_high,
            y_low,
            y_high,
        })
    }

    pub fn full() -> Self {
        Range2D {
            x_low: Bound::Unbounded,
            x_high: Bound::Unbounded,
            y_low: Bound::Unbounded,
            y_high: Bound::Unbounded,
        }
    }

    /// Open northwest quadrant `(-inf, x) x (y, inf)`.
    pub fn nw_quadrant(x: C, y: C) -> Self {
        Range2D {
            x_low: Bound::Unbounded,
            x_high: Bound::Open(x),
            y_low: Bound::Open(y),
            y_high: Bound::Unbounded,
        }
    }

    /// Open vertical strip `(-inf, x) x R`.
    pub fn left_strip(x: C) -> Self {
        Range2D {
            x_low: Bound::Unbounded,
            x_high: Bound::Open(x),
            y_low: Bound::Unbounded,
            y_high: Bound::Unbounded,
        }
    }

    pub fn contains(&self, x: &C, y: &C) -> bool {
        self.x_low.admits_above(x)
            && self.x_high.admits_below(x)
            && self.y_low.admits_above(y)
            && self.y_high.admits_below(y)
    }

    pub fn map<D>(&self, f: impl Fn(&C) -> D) -> Range2D<D> {
        let m = |b: &Bound<C>| match b {
            Bound::Unbounded => Bound::Unbounded,
            Bound::Open(c) => Bound::Open(f(c)),
            Bound::Closed(c) => Bound::Closed(f(c)),
        };
        Range2D {
            x_low: m(&self.x_low),
            x_high: m(&self.x_high),
            y_low: m(&self.y_low),
            y_high: m(&self.y_high),
        }
    }
}

impl<C: fmt::Display> fmt::Display for Range2D<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, lo: &Bound<C>, hi: &Bound<C>| -> fmt::Result {
            match lo {
                Bound::Unbounded => write!(f, "(-inf,")?,
                Bound::Open(c) => write!(f, "({c},")?,
                Bound::Closed(c) => write!(f, "[{c},")?,
            }
            match hi {
                Bound::Unbounded => write!(f, "inf)"),
                Bound::Open(c) => write!(f, "{c})"),
                Bound::Closed(c) => write!(f, "{c}]"),
            }
        };
        side(f, &self.x_low, &self.x_high)?;
        write!(f, "x")?;
        side(f, &self.y_low, &self.y_high)
    }
}

/// Common interface of the fast tree and the naive oracle.
///
/// Points are addressed by their position in the build list. A point whose
/// weight is zero ignores multiplies until it is written again; `divide_zero`
/// undoes one earlier multiply by zero on every other point of the range and
/// fails without side effects if some such point has none pending.
pub trait WeightedStore<C, T> {
    fn build(points: Vec<(C, C)>) -> Self;
    fn len(&self) -> usize;
    fn query(&mut self, r: &Range2D<C>) -> T;
    fn update(&mut self, id: usize, w: T) -> Result<()>;
    fn multiply(&mut self, r: &Range2D<C>, delta: &T);
    fn divide_zero(&mut self, r: &Range2D<C>) -> Result<()>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multiply by `1/delta`, routing zero through `divide_zero`.
    fn divide(&mut self, r: &Range2D<C>, delta: &T) -> Result<()>
    where
        T: Scalar,
    {
        if delta.is_zero() {
            self.divide_zero(r)
        } else {
            self.multiply(r, &delta.inverse());
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_respect_strictness() {
        let q = Range2D::nw_quadrant(2, 1);
        assert!(q.contains(&1, &2));
        assert!(!q.contains(&2, &2));
        assert!(!q.contains(&1, &1));
        assert!(Range2D::left_strip(3).contains(&2, &-100));
        assert!(Range2D::<i32>::new(Bound::Closed(3), Bound::Closed(1), Bound::Unbounded, Bound::Unbounded).is_err());
    }

    #[test]
    fn rank_translation() {
        let vals = [1, 3, 3, 5];
        assert_eq!(Bound::Open(3).lower_rank(&vals), 3);
        assert_eq!(Bound::Closed(3).lower_rank(&vals), 1);
        assert_eq!(Bound::Open(3).upper_rank(&vals), 1);
        assert_eq!(Bound::Closed(3).upper_rank(&vals), 3);
        assert_eq!(Bound::<i32>::Unbounded.upper_rank(&vals), 4);
    }

    #[test]
    fn display_format() {
        let r = Range2D::new(Bound::Closed(1), Bound::Closed(3), Bound::Closed(0), Bound::Open(7)).unwrap();
        assert_eq!(r.to_string(), "[1,3]x[0,7)");
        assert_eq!(Range2D::nw_quadrant(5, 2).to_string(), "(-inf,5)x(2,inf)");
    }
}
