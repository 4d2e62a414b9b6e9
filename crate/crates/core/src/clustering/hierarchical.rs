//! Agglomerative hierarchical clustering.
//!
//! Ward merges run a nearest-neighbor chain over centroids and sizes, with
//! distances recomputed on demand, so memory stays O(n·m). Weighted-average
//! and complete linkage keep a condensed distance matrix updated by the
//! Lance–Williams recurrence. Single linkage is read off a minimum spanning
//! tree built with Prim's algorithm, again without a stored matrix.
//!
//! All four linkages are reducible, so the chain yields the same dendrogram
//! as naive closest-pair merging; the partition at `k` clusters is obtained
//! by replaying the `n - k` lowest merges.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::kmeans::check_k;
use crate::error::{Error, Result};
use crate::metrics::{dist, sq_dist};
use crate::points::{ClusterAssignment, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkageKind {
    Single,
    Complete,
    WeightedAverage,
    Ward,
}

impl LinkageKind {
    pub const ALL: [LinkageKind; 4] = [
        LinkageKind::Single,
        LinkageKind::Complete,
        LinkageKind::WeightedAverage,
        LinkageKind::Ward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkageKind::Single => "single",
            LinkageKind::Complete => "complete",
            LinkageKind::WeightedAverage => "weighted",
            LinkageKind::Ward => "ward",
        }
    }
}

impl fmt::Display for LinkageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(LinkageKind::Single),
            "complete" => Ok(LinkageKind::Complete),
            "weighted" | "weighted_average" => Ok(LinkageKind::WeightedAverage),
            "ward" => Ok(LinkageKind::Ward),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// What is known about one cluster when computing a merge distance.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClusterSummary<'a> {
    pub members: Option<&'a [usize]>,
    pub centroid: Option<&'a [f64]>,
    pub size: usize,
}

impl<'a> ClusterSummary<'a> {
    pub fn from_members(members: &'a [usize]) -> Self {
        Self {
            members: Some(members),
            centroid: None,
            size: members.len(),
        }
    }

    pub fn from_centroid(centroid: &'a [f64], size: usize) -> Self {
        Self {
            members: None,
            centroid: Some(centroid),
            size,
        }
    }
}

/// Distance between two clusters under `kind`.
///
/// For the weighted average, when `left` was formed by merging `p` and `q`,
/// `cached` carries `(d(p, right), d(q, right))`; two singletons need no
/// cache. Ward uses centroids and sizes, falling back to member lists.
pub fn merge_distance(
    kind: LinkageKind,
    points: &PointSet,
    left: &ClusterSummary<'_>,
    right: &ClusterSummary<'_>,
    cached: Option<(f64, f64)>,
) -> Result<f64> {
    match kind {
        LinkageKind::Single | LinkageKind::Complete => {
            let (a, b) = match (left.members, right.members) {
                (Some(a), Some(b)) if !a.is_empty() && !b.is_empty() => (a, b),
                _ => return Err(Error::MissingSummary("member lists")),
            };
            let pairs = a
                .iter()
                .flat_map(|&i| b.iter().map(move |&j| dist(points.point(i), points.point(j))));
            Ok(if kind == LinkageKind::Single {
                pairs.fold(f64::INFINITY, f64::min)
            } else {
                pairs.fold(0.0, f64::max)
            })
        }
        LinkageKind::WeightedAverage => match (cached, left.members, right.members) {
            (Some((dp, dq)), _, _) => Ok((dp + dq) / 2.0),
            (None, Some([a]), Some([b])) => Ok(dist(points.point(*a), points.point(*b))),
            _ => Err(Error::MissingSummary("distances to the merged parts")),
        },
        LinkageKind::Ward => {
            let (ca, na) = centroid_and_size(points, left)?;
            let (cb, nb) = centroid_and_size(points, right)?;
            Ok(ward(&ca, na as f64, &cb, nb as f64))
        }
    }
}

fn centroid_and_size(points: &PointSet, c: &ClusterSummary<'_>) -> Result<(Vec<f64>, usize)> {
    if let (Some(centroid), size) = (c.centroid, c.size) {
        if size > 0 {
            return Ok((centroid.to_vec(), size));
        }
    }
    match c.members {
        Some(members) if !members.is_empty() => {
            let mut mean = vec![0.0; points.dim()];
            for &i in members {
                for (acc, v) in mean.iter_mut().zip(points.point(i)) {
                    *acc += v;
                }
            }
            mean.iter_mut().for_each(|v| *v /= members.len() as f64);
            Ok((mean, members.len()))
        }
        _ => Err(Error::MissingSummary("centroid and size")),
    }
}

#[inline]
fn ward(ca: &[f64], na: f64, cb: &[f64], nb: f64) -> f64 {
    (2.0 * na * nb / (na + nb)).sqrt() * dist(ca, cb)
}

/// One merge: clusters represented by points `a` and `b` joined at
/// `distance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

/// The full merge sequence, ascending by distance.
pub fn linkage(points: &PointSet, kind: LinkageKind) -> Vec<Merge> {
    let mut merges = match kind {
        LinkageKind::Single => prim_mst(points),
        LinkageKind::Ward => nn_chain(points.len(), &mut WardMetric::new(points)),
        LinkageKind::WeightedAverage | LinkageKind::Complete => {
            nn_chain(points.len(), &mut MatrixMetric::new(points, kind))
        }
    };
    // Stable: a merge never precedes the merges that formed its inputs.
    merges.sort_by(|x, y| x.distance.total_cmp(&y.distance));
    merges
}

/// Agglomerative clustering down to exactly `k` clusters. Labels follow the
/// order of each cluster's smallest member.
pub fn hierarchical(points: &PointSet, k: usize, kind: LinkageKind) -> Result<ClusterAssignment> {
    let n = points.len();
    check_k(k, n)?;
    let merges = linkage(points, kind);
    cut(n, &merges[..n - k], k)
}

fn cut(n: usize, merges: &[Merge], k: usize) -> Result<ClusterAssignment> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in merges {
        let (ra, rb) = (find(&mut parent, m.a), find(&mut parent, m.b));
        debug_assert_ne!(ra, rb);
        parent[ra.max(rb)] = ra.min(rb);
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut label_of_root = vec![usize::MAX; n];
    let mut next = 0;
    let labels = roots
        .iter()
        .map(|&r| {
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            label_of_root[r]
        })
        .collect();
    ClusterAssignment::complete(labels, k)
}

trait ChainMetric {
    fn distance(&self, a: usize, b: usize) -> f64;
    /// Merges `gone` into `keep`; `active` still lists both.
    fn merge(&mut self, keep: usize, gone: usize, active: &[usize]);
}

struct WardMetric {
    centroids: Vec<f64>,
    sizes: Vec<f64>,
    m: usize,
}

impl WardMetric {
    fn new(points: &PointSet) -> Self {
        Self {
            centroids: points.as_flat().to_vec(),
            sizes: vec![1.0; points.len()],
            m: points.dim(),
        }
    }

    fn centroid(&self, i: usize) -> &[f64] {
        &self.centroids[i * self.m..(i + 1) * self.m]
    }
}

impl ChainMetric for WardMetric {
    fn distance(&self, a: usize, b: usize) -> f64 {
        ward(self.centroid(a), self.sizes[a], self.centroid(b), self.sizes[b])
    }

    fn merge(&mut self, keep: usize, gone: usize, _active: &[usize]) {
        let (na, nb) = (self.sizes[keep], self.sizes[gone]);
        let m = self.m;
        for d in 0..m {
            let merged = (na * self.centroids[keep * m + d] + nb * self.centroids[gone * m + d]) / (na + nb);
            self.centroids[keep * m + d] = merged;
        }
        self.sizes[keep] = na + nb;
    }
}

/// Condensed upper-triangular distance matrix.
struct MatrixMetric {
    n: usize,
    data: Vec<f64>,
    kind: LinkageKind,
}

impl MatrixMetric {
    fn new(points: &PointSet, kind: LinkageKind) -> Self {
        let n = points.len();
        let mut data = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                data.push(dist(points.point(i), points.point(j)));
            }
        }
        Self { n, data, kind }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        self.n * i - i * (i + 1) / 2 + j - i - 1
    }
}

impl ChainMetric for MatrixMetric {
    fn distance(&self, a: usize, b: usize) -> f64 {
        self.data[self.idx(a, b)]
    }

    fn merge(&mut self, keep: usize, gone: usize, active: &[usize]) {
        for &s in active {
            if s == keep || s == gone {
                continue;
            }
            let (dp, dq) = (self.distance(keep, s), self.distance(gone, s));
            let merged = match self.kind {
                LinkageKind::WeightedAverage => (dp + dq) / 2.0,
                LinkageKind::Complete => dp.max(dq),
                LinkageKind::Single => dp.min(dq),
                LinkageKind::Ward => unreachable!("ward uses centroids"),
            };
            let at = self.idx(keep, s);
            self.data[at] = merged;
        }
    }
}

/// Nearest-neighbor chain. Ties prefer the chain predecessor, then the
/// lowest cluster id. Cluster ids are the smallest point index of the
/// cluster, so merges are reported by representative points.
fn nn_chain<M: ChainMetric>(n: usize, metric: &mut M) -> Vec<Merge> {
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    let mut chain: Vec<usize> = Vec::new();

    while active.len() > 1 {
        if chain.is_empty() {
            chain.push(*active.iter().min().expect("nonempty"));
        }
        let distance = loop {
            let a = chain[chain.len() - 1];
            let prev = (chain.len() >= 2).then(|| chain[chain.len() - 2]);
            let mut best: Option<(usize, f64)> = prev.map(|p| (p, metric.distance(a, p)));
            for &c in &active {
                if c == a || Some(c) == prev {
                    continue;
                }
                let d = metric.distance(a, c);
                let better = match best {
                    None => true,
                    Some((b, bd)) => d < bd || (d == bd && Some(b) != prev && c < b),
                };
                if better {
                    best = Some((c, d));
                }
            }
            let (c, d) = best.expect("at least two active clusters");
            if Some(c) == prev {
                break d;
            }
            chain.push(c);
        };
        let a = chain.pop().expect("chain top");
        let b = chain.pop().expect("chain pair");
        let (keep, gone) = (a.min(b), a.max(b));
        metric.merge(keep, gone, &active);
        let pos = active.iter().position(|&x| x == gone).expect("active");
        active.swap_remove(pos);
        merges.push(Merge {
            a: keep,
            b: gone,
            distance,
        });
    }
    merges
}

/// Minimum spanning tree edges by Prim's algorithm, O(n²) time, O(n) memory.
fn prim_mst(points: &PointSet) -> Vec<Merge> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let c = points.point(current);
        let mut next = usize::MAX;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            let d = sq_dist(c, points.point(j));
            if d < best[j] {
                best[j] = d;
                from[j] = current;
            }
            if next == usize::MAX || best[j] < best[next] {
                next = j;
            }
        }
        in_tree[next] = true;
        edges.push(Merge {
            a: from[next],
            b: next,
            distance: best[next].sqrt(),
        });
        current = next;
    }
    edges
}
