use crate::error::{Error, Result};
use crate::metrics::sq_dist;
use crate::points::{ClusterAssignment, PointSet, Subset};
use crate::rng::RngStream;

/// Cluster means and sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidState {
    centroids: Vec<f64>,
    sizes: Vec<usize>,
    m: usize,
}

impl CentroidState {
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn centroid(&self, i: usize) -> &[f64] {
        &self.centroids[i * self.m..(i + 1) * self.m]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Centroids as a point set (row `i` is cluster `i`).
    pub fn to_point_set(&self) -> PointSet {
        PointSet::from_flat(self.m, self.centroids.clone()).expect("centroids are finite")
    }

    fn from_labels(points: &PointSet, labels: &[usize], k: usize) -> Self {
        let m = points.dim();
        let mut centroids = vec![0.0; k * m];
        let mut sizes = vec![0usize; k];
        for (x, &l) in points.rows().zip(labels) {
            sizes[l] += 1;
            for (c, v) in centroids[l * m..(l + 1) * m].iter_mut().zip(x) {
                *c += v;
            }
        }
        for (l, &size) in sizes.iter().enumerate() {
            if size > 0 {
                for c in &mut centroids[l * m..(l + 1) * m] {
                    *c /= size as f64;
                }
            }
        }
        Self { centroids, sizes, m }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansOutcome {
    pub state: CentroidState,
    pub assignment: ClusterAssignment,
    /// Assignment steps performed.
    pub iterations: usize,
    /// Sum of squared distances to the assigned centroid after each
    /// assignment step.
    pub objective_trace: Vec<f64>,
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(())
}

/// D²-weighted seeding. Returns the seeds in draw order.
pub(crate) fn kmeanspp_order(points: &PointSet, k: usize, rng: &mut RngStream) -> Result<Vec<usize>> {
    let n = points.len();
    check_k(k, n)?;
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    let first = rng.index(n);
    chosen.push(first);
    taken[first] = true;
    let mut weight: Vec<f64> = points.rows().map(|x| sq_dist(x, points.point(first))).collect();
    weight[first] = 0.0;

    while chosen.len() < k {
        let total: f64 = weight.iter().sum();
        let next = if total > 0.0 {
            let target = rng.unit() * total;
            let mut acc = 0.0;
            let mut pick = None;
            let mut last_positive = 0;
            for (i, &w) in weight.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                last_positive = i;
                acc += w;
                if acc > target {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or(last_positive)
        } else {
            // Every remaining point coincides with a seed.
            let r = rng.index(n - chosen.len());
            (0..n).filter(|&i| !taken[i]).nth(r).expect("k <= n")
        };
        chosen.push(next);
        taken[next] = true;
        let c = points.point(next);
        for (i, w) in weight.iter_mut().enumerate() {
            if taken[i] {
                *w = 0.0;
            } else {
                *w = w.min(sq_dist(points.point(i), c));
            }
        }
    }
    Ok(chosen)
}

/// K-means++ seeding: `k` distinct indices, the first uniform, each next one
/// drawn with probability proportional to its squared distance to the
/// nearest seed so far.
pub fn kmeanspp_init(points: &PointSet, k: usize, rng: &mut RngStream) -> Result<Subset> {
    Subset::new(kmeanspp_order(points, k, rng)?, points.len())
}

/// Moves points into empty clusters. Each empty cluster takes the point
/// with the largest current assignment distance among clusters that can
/// spare one. `pinned(point, cluster)` marks points that should not be moved
/// into `cluster`; they are used only if nothing else is available.
/// Returns `(cluster, point)` pairs for the moves made.
pub(crate) fn repair_empty_clusters(
    labels: &mut [usize],
    dists: &mut [f64],
    k: usize,
    pinned: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let mut sizes = vec![0usize; k];
    for &l in labels.iter() {
        sizes[l] += 1;
    }
    let mut moves = Vec::new();
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let pick = |allow_pinned: bool| {
            let mut best: Option<usize> = None;
            for i in 0..labels.len() {
                if sizes[labels[i]] > 1 && (allow_pinned || !pinned(i, c)) && best.is_none_or(|b| dists[i] > dists[b]) {
                    best = Some(i);
                }
            }
            best
        };
        let i = pick(false)
            .or_else(|| pick(true))
            .expect("k <= n leaves a cluster with a spare point");
        sizes[labels[i]] -= 1;
        labels[i] = c;
        sizes[c] = 1;
        dists[i] = 0.0;
        moves.push((c, i));
    }
    moves
}

/// Lloyd iterations from K-means++ seeds, stopping when the labels repeat
/// or after `max_iter` assignment steps.
pub fn kmeans(points: &PointSet, k: usize, max_iter: usize, rng: &mut RngStream) -> Result<KMeansOutcome> {
    if max_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    let seeds = kmeanspp_order(points, k, rng)?;
    let m = points.dim();
    let n = points.len();
    let mut state = CentroidState {
        centroids: seeds.iter().flat_map(|&s| points.point(s).iter().copied()).collect(),
        sizes: vec![0; k],
        m,
    };
    let mut labels = vec![0usize; n];
    let mut dists = vec![0.0f64; n];
    let mut prev: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        for (i, x) in points.rows().enumerate() {
            let mut best = (0, f64::INFINITY);
            for c in 0..k {
                let d = sq_dist(x, state.centroid(c));
                if d < best.1 {
                    best = (c, d);
                }
            }
            labels[i] = best.0;
            dists[i] = best.1;
        }
        for (c, i) in repair_empty_clusters(&mut labels, &mut dists, k, |_, _| false) {
            state.centroids[c * m..(c + 1) * m].copy_from_slice(points.point(i));
        }
        trace.push(dists.iter().sum());
        if prev.as_deref() == Some(&labels[..]) {
            break;
        }
        state = CentroidState::from_labels(points, &labels, k);
        prev = Some(labels.clone());
    }
    state.sizes = ClusterAssignment::new(labels.clone(), k)?.sizes();
    Ok(KMeansOutcome {
        state,
        assignment: ClusterAssignment::complete(labels, k)?,
        iterations,
        objective_trace: trace,
    })
}
