//! Greedy IGD subset selection with the full point set as reference.
//!
//! Inclusion starts from the 1-medoid and repeatedly adds the point whose
//! addition lowers IGD the most. The gain of a candidate `c` is
//! `Σ_j max(0, cur_j − d(x_j, c))`, where `cur_j` is the distance from
//! reference `j` to the selected subset; it is `n` times the IGD drop.
//! Because `cur_j` only shrinks and the sum is always taken in the same
//! order, a candidate's gain never increases from one step to the next, even
//! in floating point. The lazy variant relies on that: a stale gain is a
//! valid upper bound, so only candidates whose bound reaches the top of the
//! queue are re-evaluated, and the result is identical to the naive scan.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::clustering::check_k;
use crate::error::Result;
use crate::metrics::dist;
use crate::points::{PointSet, Subset};

/// Output of a greedy run together with its instrumentation.
#[derive(Debug, Clone)]
pub struct GreedyTrace {
    pub subset: Subset,
    /// Points in the order they were added (inclusion) or removed (removal).
    pub order: Vec<usize>,
    /// Candidate evaluations, each costing one pass over the references.
    pub gain_evaluations: u64,
}

/// Greedy IGD inclusion by scanning every candidate at every step.
pub fn greedy_igd_inclusion(points: &PointSet, k: usize) -> Result<Subset> {
    Ok(greedy_inclusion_traced(points, k, false)?.subset)
}

/// Greedy IGD inclusion with lazily re-evaluated gains. Same output as
/// [`greedy_igd_inclusion`].
pub fn lazy_greedy_igd_inclusion(points: &PointSet, k: usize) -> Result<Subset> {
    Ok(greedy_inclusion_traced(points, k, true)?.subset)
}

/// Index of the point with the smallest total distance to all points.
fn one_medoid(points: &PointSet) -> usize {
    let mut best = (0, f64::INFINITY);
    for (c, y) in points.rows().enumerate() {
        let mut total = 0.0;
        for x in points.rows() {
            total += dist(x, y);
            if total >= best.1 {
                break;
            }
        }
        if total < best.1 {
            best = (c, total);
        }
    }
    best.0
}

fn gain(points: &PointSet, cur: &[f64], c: usize) -> f64 {
    let y = points.point(c);
    let mut total = 0.0;
    for (x, &d0) in points.rows().zip(cur) {
        let d = dist(x, y);
        if d < d0 {
            total += d0 - d;
        }
    }
    total
}

#[derive(Debug, PartialEq)]
struct Bound {
    gain: f64,
    index: usize,
    step: usize,
}

impl Eq for Bound {}

impl Ord for Bound {
    /// Larger gain first, then lower index.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn include(points: &PointSet, c: usize, cur: &mut [f64], order: &mut Vec<usize>, chosen: &mut [bool]) {
    let y = points.point(c);
    for (x, d0) in points.rows().zip(cur.iter_mut()) {
        let d = dist(x, y);
        if d < *d0 {
            *d0 = d;
        }
    }
    chosen[c] = true;
    order.push(c);
}

/// Greedy inclusion with its addition order and evaluation count.
pub fn greedy_inclusion_traced(points: &PointSet, k: usize, lazy: bool) -> Result<GreedyTrace> {
    let n = points.len();
    check_k(k, n)?;
    let first = one_medoid(points);
    let mut order = vec![first];
    let mut chosen = vec![false; n];
    chosen[first] = true;
    let mut evaluations = n as u64;
    let mut cur: Vec<f64> = points.rows().map(|x| dist(x, points.point(first))).collect();

    if lazy {
        let mut heap: BinaryHeap<Bound> = BinaryHeap::with_capacity(n);
        if k > 1 {
            for c in (0..n).filter(|&c| !chosen[c]) {
                heap.push(Bound {
                    gain: gain(points, &cur, c),
                    index: c,
                    step: 1,
                });
                evaluations += 1;
            }
        }
        let mut step = 1;
        while order.len() < k {
            let top = heap.pop().expect("k <= n leaves candidates");
            if top.step == step {
                include(points, top.index, &mut cur, &mut order, &mut chosen);
                step += 1;
            } else {
                evaluations += 1;
                heap.push(Bound {
                    gain: gain(points, &cur, top.index),
                    index: top.index,
                    step,
                });
            }
        }
    } else {
        while order.len() < k {
            let mut best = (usize::MAX, f64::NEG_INFINITY);
            for c in (0..n).filter(|&c| !chosen[c]) {
                let g = gain(points, &cur, c);
                evaluations += 1;
                if g > best.1 {
                    best = (c, g);
                }
            }
            include(points, best.0, &mut cur, &mut order, &mut chosen);
        }
    }

    Ok(GreedyTrace {
        subset: Subset::new(order.clone(), n)?,
        order,
        gain_evaluations: evaluations,
    })
}

/// Greedy IGD removal: starting from all points, repeatedly drop the member
/// with the smallest IGD contribution (lowest index on ties) until `k`
/// remain.
pub fn greedy_igd_removal(points: &PointSet, k: usize) -> Result<Subset> {
    Ok(greedy_removal_traced(points, k)?.subset)
}

/// Nearest and second-nearest member (lowest index on ties) of each
/// reference point.
struct Neighbors {
    first: Vec<(usize, f64)>,
    second: Vec<(usize, f64)>,
}

impl Neighbors {
    fn scan(x: &[f64], points: &PointSet, alive: &[bool]) -> ((usize, f64), (usize, f64)) {
        let mut a = (usize::MAX, f64::INFINITY);
        let mut b = (usize::MAX, f64::INFINITY);
        for (i, y) in points.rows().enumerate() {
            if !alive[i] {
                continue;
            }
            let d = dist(x, y);
            if d < a.1 {
                b = a;
                a = (i, d);
            } else if d < b.1 {
                b = (i, d);
            }
        }
        (a, b)
    }
}

pub fn greedy_removal_traced(points: &PointSet, k: usize) -> Result<GreedyTrace> {
    let n = points.len();
    check_k(k, n)?;
    let mut alive = vec![true; n];
    let mut removed = Vec::with_capacity(n - k);
    let mut evaluations = 0u64;
    if k < n {
        let mut nb = Neighbors {
            first: Vec::with_capacity(n),
            second: Vec::with_capacity(n),
        };
        for x in points.rows() {
            let (a, b) = Neighbors::scan(x, points, &alive);
            nb.first.push(a);
            nb.second.push(b);
        }
        let mut remaining = n;
        while remaining > k {
            // Removing p moves every reference whose nearest member is p to
            // its second-nearest member.
            let mut contribution = vec![0.0; n];
            for j in 0..n {
                contribution[nb.first[j].0] += nb.second[j].1 - nb.first[j].1;
            }
            evaluations += remaining as u64;
            let mut best = (usize::MAX, f64::INFINITY);
            for p in (0..n).filter(|&p| alive[p]) {
                if contribution[p] < best.1 {
                    best = (p, contribution[p]);
                }
            }
            let p = best.0;
            alive[p] = false;
            removed.push(p);
            remaining -= 1;
            if remaining > 1 {
                for j in 0..n {
                    if nb.first[j].0 == p || nb.second[j].0 == p {
                        let (a, b) = Neighbors::scan(points.point(j), points, &alive);
                        nb.first[j] = a;
                        nb.second[j] = b;
                    }
                }
            }
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    Ok(GreedyTrace {
        subset: Subset::new(kept, n)?,
        order: removed,
        gain_evaluations: evaluations,
    })
}
