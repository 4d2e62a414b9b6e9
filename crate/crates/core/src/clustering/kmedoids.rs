use crate::clustering::kmeans::{check_k, kmeanspp_order, repair_empty_clusters};
use crate::error::{Error, Result};
use crate::metrics::dist;
use crate::points::{ClusterAssignment, PointSet, Subset};
use crate::rng::RngStream;

#[derive(Debug, Clone)]
pub struct MedoidsOutcome {
    /// Medoids, ascending. Label `i` of `assignment` refers to
    /// `medoids.indices()[i]`.
    pub medoids: Subset,
    pub assignment: ClusterAssignment,
    /// Medoid update steps performed.
    pub iterations: usize,
    /// Total dissimilarity to the assigned medoid after each assignment step.
    pub objective_trace: Vec<f64>,
}

/// Dissimilarity of a data point (first argument) to a medoid (second).
pub(crate) type Dissimilarity = fn(&[f64], &[f64]) -> f64;

/// Alternating (Voronoi-iteration) K-medoids with K-means++ seeding and
/// Euclidean distance.
pub fn kmedoids(points: &PointSet, k: usize, max_iter: usize, rng: &mut RngStream) -> Result<MedoidsOutcome> {
    if max_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    let seeds = kmeanspp_order(points, k, rng)?;
    alternate(points, seeds, max_iter, dist)
}

/// The assignment / medoid-update alternation shared by the plain and the
/// preference-aware variants. Stops when an update leaves every medoid in
/// place or after `max_iter` updates.
pub(crate) fn alternate(
    points: &PointSet,
    mut medoids: Vec<usize>,
    max_iter: usize,
    dissim: Dissimilarity,
) -> Result<MedoidsOutcome> {
    let n = points.len();
    let k = medoids.len();
    check_k(k, n)?;
    let mut labels = vec![0usize; n];
    let mut dists = vec![0.0f64; n];
    let mut trace = Vec::new();

    assign(points, &mut medoids, &mut labels, &mut dists, dissim);
    trace.push(dists.iter().sum());
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let updated = update(points, &labels, k, dissim);
        if updated == medoids {
            break;
        }
        medoids = updated;
        assign(points, &mut medoids, &mut labels, &mut dists, dissim);
        trace.push(dists.iter().sum());
    }
    finish(points, medoids, labels, iterations, trace)
}

fn assign(points: &PointSet, medoids: &mut [usize], labels: &mut [usize], dists: &mut [f64], dissim: Dissimilarity) {
    for (i, x) in points.rows().enumerate() {
        let mut best = (0, f64::INFINITY);
        for (c, &mu) in medoids.iter().enumerate() {
            let d = dissim(x, points.point(mu));
            if d < best.1 {
                best = (c, d);
            }
        }
        labels[i] = best.0;
        dists[i] = best.1;
    }
    // Medoids of other clusters stay where they are.
    let current = medoids.to_vec();
    let pinned = |i: usize, c: usize| current.iter().enumerate().any(|(o, &mu)| o != c && mu == i);
    for (c, i) in repair_empty_clusters(labels, dists, medoids.len(), pinned) {
        medoids[c] = i;
    }
}

/// Per cluster, the member minimizing the summed dissimilarity of all
/// members to it (lowest index on ties).
fn update(points: &PointSet, labels: &[usize], k: usize, dissim: Dissimilarity) -> Vec<usize> {
    let mut members = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    members
        .iter()
        .map(|cluster| medoid_of(points, cluster, dissim))
        .collect()
}

pub(crate) fn medoid_of(points: &PointSet, members: &[usize], dissim: Dissimilarity) -> usize {
    let mut best = (members[0], f64::INFINITY);
    for &cand in members {
        let mu = points.point(cand);
        let mut total = 0.0;
        for &x in members {
            total += dissim(points.point(x), mu);
            if total >= best.1 {
                break;
            }
        }
        if total < best.1 {
            best = (cand, total);
        }
    }
    best.0
}

fn finish(
    points: &PointSet,
    medoids: Vec<usize>,
    labels: Vec<usize>,
    iterations: usize,
    objective_trace: Vec<f64>,
) -> Result<MedoidsOutcome> {
    let k = medoids.len();
    let subset = Subset::new(medoids.clone(), points.len())?;
    let relabel: Vec<usize> = medoids
        .iter()
        .map(|&mu| subset.position(mu).expect("medoid is in subset"))
        .collect();
    let labels = labels.into_iter().map(|l| relabel[l]).collect();
    Ok(MedoidsOutcome {
        medoids: subset,
        assignment: ClusterAssignment::complete(labels, k)?,
        iterations,
        objective_trace,
    })
}
