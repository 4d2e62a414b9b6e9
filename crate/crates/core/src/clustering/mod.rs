//! The clustering families compared for subset selection: K-means++,
//! alternating K-medoids and agglomerative hierarchical clustering.

mod hierarchical;
mod kmeans;
mod kmedoids;

pub use hierarchical::{hierarchical, linkage, merge_distance, ClusterSummary, LinkageKind, Merge};
pub use kmeans::{kmeans, kmeanspp_init, CentroidState, KMeansOutcome};
pub use kmedoids::{kmedoids, MedoidsOutcome};

pub(crate) use kmeans::{check_k, kmeanspp_order};
pub(crate) use kmedoids::{alternate, medoid_of};

/// Iteration cap used for K-means++ and the K-medoids variants.
pub const DEFAULT_MAX_ITER: usize = 100;
