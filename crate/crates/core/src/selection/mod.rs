//! Turning clusterings into subsets, plus the selectors that pick subset
//! members directly.

mod greedy;
mod knee;

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::clustering::{hierarchical, kmeans, kmedoids, medoid_of, LinkageKind, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::metrics::{dist, sq_dist};
use crate::points::{ClusterAssignment, PointSet, Subset};
use crate::rng::RngStream;

pub use greedy::{
    greedy_igd_inclusion, greedy_igd_removal, greedy_inclusion_traced, greedy_removal_traced,
    lazy_greedy_igd_inclusion, GreedyTrace,
};
pub use knee::knee_kmedoids;

/// How a representative member is chosen from each cluster.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Strategy {
    /// The member closest to the cluster mean.
    NearestCentroid,
    /// The member with the smallest total distance to the other members.
    #[default]
    Medoid,
}

impl Strategy {
    pub fn number(self) -> u8 {
        match self {
            Strategy::NearestCentroid => 1,
            Strategy::Medoid => 2,
        }
    }
}

impl TryFrom<u8> for Strategy {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Strategy::NearestCentroid),
            2 => Ok(Strategy::Medoid),
            other => Err(Error::InvalidConfig(format!("strategy must be 1 or 2, got {other}"))),
        }
    }
}

impl From<Strategy> for u8 {
    fn from(s: Strategy) -> u8 {
        s.number()
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<u8>()
            .map_err(|_| Error::InvalidConfig(format!("strategy must be 1 or 2, got {s:?}")))?
            .try_into()
    }
}

/// Strategy 1: the member nearest to the members' mean; ties go to the
/// lowest index.
pub fn representative_strategy1(points: &PointSet, members: &[usize]) -> Result<usize> {
    if members.is_empty() {
        return Err(Error::Empty("cluster"));
    }
    let mut mean = vec![0.0; points.dim()];
    for &i in members {
        for (acc, v) in mean.iter_mut().zip(points.point(i)) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= members.len() as f64);
    let mut best = (usize::MAX, f64::INFINITY);
    for &i in members {
        let d = sq_dist(points.point(i), &mean);
        if d < best.1 || (d == best.1 && i < best.0) {
            best = (i, d);
        }
    }
    Ok(best.0)
}

/// Strategy 2: the member with the smallest summed distance to all
/// members; ties go to the lowest index.
pub fn representative_strategy2(points: &PointSet, members: &[usize]) -> Result<usize> {
    if members.is_empty() {
        return Err(Error::Empty("cluster"));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    Ok(medoid_of(points, &sorted, dist))
}

/// One representative per cluster.
pub fn subset_from_clusters(points: &PointSet, assignment: &ClusterAssignment, strategy: Strategy) -> Result<Subset> {
    if assignment.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: assignment.len(),
        });
    }
    let picks = assignment
        .members()
        .iter()
        .enumerate()
        .map(|(c, members)| {
            if members.is_empty() {
                return Err(Error::EmptyCluster(c));
            }
            match strategy {
                Strategy::NearestCentroid => representative_strategy1(points, members),
                Strategy::Medoid => representative_strategy2(points, members),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Subset::new(picks, points.len())
}

/// The selectors available through [`select`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AlgoKind {
    KMeansPP,
    KMedoids,
    GreedyIgd,
    Hierarchical(LinkageKind),
    KneeKMedoids,
}

impl AlgoKind {
    /// The six selectors of the standard comparison.
    pub const BENCHMARK: [AlgoKind; 6] = [
        AlgoKind::KMeansPP,
        AlgoKind::KMedoids,
        AlgoKind::GreedyIgd,
        AlgoKind::Hierarchical(LinkageKind::Ward),
        AlgoKind::Hierarchical(LinkageKind::WeightedAverage),
        AlgoKind::Hierarchical(LinkageKind::Single),
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgoKind::KMeansPP => "kmeans++",
            AlgoKind::KMedoids => "kmedoids",
            AlgoKind::GreedyIgd => "greedy-igd",
            AlgoKind::Hierarchical(LinkageKind::Ward) => "hc-ward",
            AlgoKind::Hierarchical(LinkageKind::WeightedAverage) => "hc-weighted",
            AlgoKind::Hierarchical(LinkageKind::Single) => "hc-single",
            AlgoKind::Hierarchical(LinkageKind::Complete) => "hc-complete",
            AlgoKind::KneeKMedoids => "knee-kmedoids",
        }
    }

    /// Whether the selector picks representatives from clusters, and so
    /// depends on the strategy.
    pub fn uses_strategy(self) -> bool {
        matches!(self, AlgoKind::KMeansPP | AlgoKind::Hierarchical(_))
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kmeans++" => AlgoKind::KMeansPP,
            "kmedoids" => AlgoKind::KMedoids,
            "greedy-igd" => AlgoKind::GreedyIgd,
            "hc-ward" => AlgoKind::Hierarchical(LinkageKind::Ward),
            "hc-weighted" => AlgoKind::Hierarchical(LinkageKind::WeightedAverage),
            "hc-single" => AlgoKind::Hierarchical(LinkageKind::Single),
            "hc-complete" => AlgoKind::Hierarchical(LinkageKind::Complete),
            "knee-kmedoids" => AlgoKind::KneeKMedoids,
            other => return Err(Error::UnknownAlgorithm(other.to_string())),
        })
    }
}

impl TryFrom<String> for AlgoKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlgoKind> for String {
    fn from(a: AlgoKind) -> String {
        a.name().to_string()
    }
}

/// A selected subset with the number of iterations the selector ran:
/// Lloyd or medoid-update steps for the iterative methods, additions for
/// greedy inclusion, merges for hierarchical clustering.
#[derive(Debug, Clone)]
pub struct Selection {
    pub subset: Subset,
    pub iterations: usize,
}

/// Selects `k` members of `points` with `algo`. `strategy` applies to
/// K-means++ and hierarchical clustering (default: Strategy 2); other
/// selectors return their own centers and ignore it.
pub fn select(
    points: &PointSet,
    algo: AlgoKind,
    k: usize,
    strategy: Option<Strategy>,
    rng: &mut RngStream,
) -> Result<Subset> {
    Ok(select_detailed(points, algo, k, strategy, rng)?.subset)
}

pub fn select_detailed(
    points: &PointSet,
    algo: AlgoKind,
    k: usize,
    strategy: Option<Strategy>,
    rng: &mut RngStream,
) -> Result<Selection> {
    if strategy.is_some() && !algo.uses_strategy() {
        warn!("{algo} returns its own centers; ignoring the representative strategy");
    }
    let strategy = strategy.unwrap_or_default();
    match algo {
        AlgoKind::KMeansPP => {
            let out = kmeans(points, k, DEFAULT_MAX_ITER, rng)?;
            Ok(Selection {
                subset: subset_from_clusters(points, &out.assignment, strategy)?,
                iterations: out.iterations,
            })
        }
        AlgoKind::Hierarchical(kind) => {
            let assignment = hierarchical(points, k, kind)?;
            Ok(Selection {
                subset: subset_from_clusters(points, &assignment, strategy)?,
                iterations: points.len() - k,
            })
        }
        AlgoKind::KMedoids => {
            let out = kmedoids(points, k, DEFAULT_MAX_ITER, rng)?;
            Ok(Selection {
                subset: out.medoids,
                iterations: out.iterations,
            })
        }
        AlgoKind::KneeKMedoids => {
            let out = knee_kmedoids(points, k, DEFAULT_MAX_ITER, rng)?;
            Ok(Selection {
                subset: out.medoids,
                iterations: out.iterations,
            })
        }
        AlgoKind::GreedyIgd => {
            let trace = greedy_inclusion_traced(points, k, true)?;
            Ok(Selection {
                iterations: trace.order.len(),
                subset: trace.subset,
            })
        }
    }
}
