//! Clustering-based subset selection for multiobjective optimization.
//!
//! Given a set of nondominated objective vectors, the selectors in this
//! crate pick `k` representative members: K-means++ and hierarchical
//! clustering with a representative per cluster, alternating K-medoids,
//! greedy IGD inclusion (naive and lazy) and removal, and a knee-preferring
//! K-medoids that measures dissimilarity with the IGD+ distance. The
//! `fronts` module samples test Pareto fronts and `bench` runs, scores and
//! reports comparisons between the selectors.

pub mod bench;
pub mod clustering;
pub mod error;
pub mod fronts;
pub mod metrics;
pub mod points;
pub mod rng;
pub mod selection;

pub use error::{Error, Result};
pub use points::{dominates, nondominated_filter, nondominated_indices, ClusterAssignment, PointSet, Subset};
pub use rng::RngStream;
