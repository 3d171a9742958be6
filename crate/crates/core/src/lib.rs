//! Probability that a random realization of a colored stochastic point set
//! contains a pair of differently colored points where one dominates the
//! other.
//!
//! Exact solvers cover the plane under the standard basis ([`exact`]) and
//! over every orthogonal basis ([`fbcsd`]); [`fpras`] estimates the standard
//! basis probability in any dimension.
//!
//! ```
//! use dominion_core::exact::gamma_rangetree;
//! use dominion_core::{ColoredStochasticDataset, ExactNumber, StochasticPoint};
//!
//! let half: ExactNumber = "1/2".parse().unwrap();
//! let ds = ColoredStochasticDataset::new(2, vec![
//!     StochasticPoint::planar(1, 1, 1, 0, half.clone()),
//!     StochasticPoint::planar(2, 2, 2, 1, half),
//! ]).unwrap();
//! let gamma: ExactNumber = gamma_rangetree(&ds).unwrap();
//! assert_eq!(gamma.to_string(), "3/4");
//! ```

pub mod dataset;
pub mod error;
pub mod exact;
pub mod fbcsd;
pub mod fpras;
pub mod generate;
pub mod number;
pub mod rangetree;

pub use dataset::{
    build_dominance_graph, dominates, has_intercolor_dominance, realization_probability, regularize, z_of,
    z_prefix_len, BitSet, ColoredStochasticDataset, DominanceGraph, RegularizedDataset, StochasticPoint,
};
pub use error::{Error, Result};
pub use number::{ExactNumber, Scalar, ZeroAwareProduct};
pub use rangetree::{Bound, NaiveStore, Range2D, RangeTree2D, WeightedStore};
