//! Distances and quality indicators on raw (unnormalized) objective values.
//!
//! Nearest-member searches break ties toward the lowest index.

use crate::error::{Error, Result};
use crate::points::{ClusterAssignment, PointSet, Subset};

/// Euclidean distance without a dimension check.
#[inline]
pub(crate) fn dist(x: &[f64], y: &[f64]) -> f64 {
    sq_dist(x, y).sqrt()
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// IGD+ dissimilarity without a dimension check.
#[inline]
pub(crate) fn igd_plus(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = (b - a).max(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(())
}

pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    Ok(dist(x, y))
}

/// `sqrt(sum_i max(y_i - x_i, 0)^2)`: only the objectives in which `y` is
/// worse than `x` count. Not symmetric.
pub fn igd_plus_similarity(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    Ok(igd_plus(x, y))
}

/// Mean distance from each reference point to its nearest solution.
pub fn igd(solution: &PointSet, reference: &PointSet) -> Result<f64> {
    if solution.is_empty() {
        return Err(Error::Empty("solution set"));
    }
    if reference.is_empty() {
        return Err(Error::Empty("reference set"));
    }
    if solution.dim() != reference.dim() {
        return Err(Error::DimensionMismatch {
            expected: reference.dim(),
            found: solution.dim(),
        });
    }
    let total: f64 = reference
        .rows()
        .map(|r| solution.rows().map(|s| dist(r, s)).fold(f64::INFINITY, f64::min))
        .sum();
    Ok(total / reference.len() as f64)
}

/// IGD of a subset of `points` with the full set as reference.
pub fn subset_igd(points: &PointSet, subset: &Subset) -> Result<f64> {
    check_parent(points, subset)?;
    let total: f64 = points
        .rows()
        .map(|r| {
            subset
                .indices()
                .iter()
                .map(|&s| dist(r, points.point(s)))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / points.len() as f64)
}

/// Increase of IGD caused by removing solution `p` from `solution`. The
/// solution indexes into `reference`, which also serves as the IGD
/// reference set.
pub fn igd_contribution(reference: &PointSet, solution: &Subset, p: usize) -> Result<f64> {
    check_parent(reference, solution)?;
    if !solution.contains(p) {
        return Err(Error::NotInSubset(p));
    }
    if solution.len() < 2 {
        return Err(Error::SingletonSubset(solution.len()));
    }
    let mut increase = 0.0;
    for r in reference.rows() {
        let mut with_p = f64::INFINITY;
        let mut without_p = f64::INFINITY;
        for &s in solution.indices() {
            let d = dist(r, reference.point(s));
            if s != p {
                without_p = without_p.min(d);
            }
            with_p = with_p.min(d);
        }
        increase += without_p - with_p;
    }
    Ok(increase / reference.len() as f64)
}

/// Assigns every point to its nearest subset member. Label `i` refers to
/// `subset.indices()[i]`.
pub fn nearest_assignment(points: &PointSet, subset: &Subset) -> Result<ClusterAssignment> {
    check_parent(points, subset)?;
    let labels = points
        .rows()
        .map(|x| {
            let mut best = (0, f64::INFINITY);
            for (label, &s) in subset.indices().iter().enumerate() {
                let d = dist(x, points.point(s));
                if d < best.1 {
                    best = (label, d);
                }
            }
            best.0
        })
        .collect();
    ClusterAssignment::new(labels, subset.len())
}

/// Sum over clusters of member distances to the cluster's medoid, where
/// label `i` refers to `medoids.indices()[i]`.
pub fn clustering_objective(points: &PointSet, medoids: &Subset, assignment: &ClusterAssignment) -> Result<f64> {
    check_parent(points, medoids)?;
    if medoids.len() != assignment.k() {
        return Err(Error::ClusterCountMismatch {
            medoids: medoids.len(),
            clusters: assignment.k(),
        });
    }
    if assignment.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: assignment.len(),
        });
    }
    Ok(assignment
        .members()
        .iter()
        .zip(medoids.indices())
        .map(|(members, &mu)| {
            members
                .iter()
                .map(|&x| dist(points.point(x), points.point(mu)))
                .sum::<f64>()
        })
        .sum())
}

fn check_parent(points: &PointSet, subset: &Subset) -> Result<()> {
    if subset.parent_len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: subset.parent_len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn random_set(rng: &mut RngStream, n: usize, m: usize) -> PointSet {
        PointSet::from_flat(m, (0..n * m).map(|_| rng.unit()).collect()).unwrap()
    }

    fn naive_igd(sol: &PointSet, refs: &PointSet) -> f64 {
        let mut total = 0.0;
        for i in 0..refs.len() {
            let mut best = f64::MAX;
            for j in 0..sol.len() {
                let mut s = 0.0;
                for d in 0..refs.dim() {
                    s += (refs.point(i)[d] - sol.point(j)[d]).powi(2);
                }
                best = best.min(s.sqrt());
            }
            total += best;
        }
        total / refs.len() as f64
    }

    #[test]
    fn euclidean_basics() {
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(euclidean(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert!(matches!(
            euclidean(&[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut rng = RngStream::new(5);
        for _ in 0..100 {
            let x: Vec<f64> = (0..4).map(|_| rng.uniform(-5.0, 5.0).unwrap()).collect();
            let y: Vec<f64> = (0..4).map(|_| rng.uniform(-5.0, 5.0).unwrap()).collect();
            assert_eq!(euclidean(&x, &y).unwrap(), euclidean(&y, &x).unwrap());
        }
    }

    #[test]
    fn igd_examples() {
        let r = PointSet::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        assert_eq!(igd(&r, &r).unwrap(), 0.0);

        let reference = PointSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let solution = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!((igd(&solution, &reference).unwrap() - 2.0 / 3.0).abs() < 1e-15);

        let mut rng = RngStream::new(11);
        let refs = random_set(&mut rng, 30, 3);
        let sol = random_set(&mut rng, 5, 3);
        assert!((igd(&sol, &refs).unwrap() - naive_igd(&sol, &refs)).abs() < 1e-12);
    }

    #[test]
    fn igd_errors() {
        let r = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!(matches!(igd(&PointSet::empty(2), &r), Err(Error::Empty(_))));
        assert!(matches!(igd(&r, &PointSet::empty(2)), Err(Error::Empty(_))));
    }

    #[test]
    fn contribution_examples() {
        let r = PointSet::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let all = Subset::full(2).unwrap();
        let c = igd_contribution(&r, &all, 0).unwrap();
        assert!((c - 2f64.sqrt() / 2.0).abs() < 1e-15);

        let dup = PointSet::from_rows(&[[0.0, 0.0], [1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(igd_contribution(&dup, &Subset::full(3).unwrap(), 2).unwrap(), 0.0);

        assert!(matches!(
            igd_contribution(&r, &Subset::new(vec![0], 2).unwrap(), 0),
            Err(Error::SingletonSubset(1))
        ));
        assert!(matches!(
            igd_contribution(&dup, &Subset::new(vec![0, 1], 3).unwrap(), 2),
            Err(Error::NotInSubset(2))
        ));
    }

    #[test]
    fn contribution_matches_two_igd_evaluations() {
        let mut rng = RngStream::new(23);
        for _ in 0..10 {
            let ps = random_set(&mut rng, 20, 3);
            let sol = Subset::new(vec![1, 4, 7, 9, 15], 20).unwrap();
            for &p in sol.indices() {
                let rest: Vec<usize> = sol.indices().iter().copied().filter(|&i| i != p).collect();
                let direct = igd(&ps.select(&rest).unwrap(), &ps).unwrap()
                    - igd(&ps.select(sol.indices()).unwrap(), &ps).unwrap();
                let c = igd_contribution(&ps, &sol, p).unwrap();
                assert!((c - direct).abs() < 1e-12);
                assert!(c >= 0.0);
            }
        }
    }

    #[test]
    fn objective_examples() {
        let line = PointSet::from_rows(&[[0.0], [1.0], [3.0]]).unwrap();
        let medoid = Subset::new(vec![1], 3).unwrap();
        let one = ClusterAssignment::new(vec![0, 0, 0], 1).unwrap();
        assert_eq!(clustering_objective(&line, &medoid, &one).unwrap(), 3.0);

        let all = Subset::full(3).unwrap();
        let singletons = ClusterAssignment::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(clustering_objective(&line, &all, &singletons).unwrap(), 0.0);

        assert!(matches!(
            clustering_objective(&line, &all, &one),
            Err(Error::ClusterCountMismatch { .. })
        ));
    }

    #[test]
    fn objective_equals_scaled_igd() {
        let mut rng = RngStream::new(31);
        for _ in 0..20 {
            let ps = random_set(&mut rng, 40, 3);
            let sub = Subset::new(vec![0, 5, 6, 22, 39], 40).unwrap();
            let a = nearest_assignment(&ps, &sub).unwrap();
            let lhs = clustering_objective(&ps, &sub, &a).unwrap();
            let rhs = 40.0 * subset_igd(&ps, &sub).unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn igd_plus_examples() {
        assert_eq!(igd_plus_similarity(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(igd_plus_similarity(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(igd_plus_similarity(&[1.0, 0.0], &[0.0, 2.0]).unwrap(), 2.0);
        assert!(igd_plus_similarity(&[1.0], &[1.0, 2.0]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point(m: usize) -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec(-10.0f64..10.0, m)
        }

        proptest! {
            #[test]
            fn igd_plus_bounded_by_euclidean(x in point(4), y in point(4)) {
                prop_assert!(igd_plus_similarity(&x, &y).unwrap() <= euclidean(&x, &y).unwrap());
            }

            #[test]
            fn igd_zero_when_reference_is_contained(rows in prop::collection::vec(point(3), 1..15), extra in point(3)) {
                let refs = PointSet::from_rows(&rows).unwrap();
                let mut with_extra = rows.clone();
                with_extra.push(extra);
                let sol = PointSet::from_rows(&with_extra).unwrap();
                prop_assert_eq!(igd(&sol, &refs).unwrap(), 0.0);
            }

            #[test]
            fn adding_a_point_never_increases_igd(rows in prop::collection::vec(point(3), 2..20), extra in point(3)) {
                let refs = PointSet::from_rows(&rows).unwrap();
                let sol = PointSet::from_rows(&rows[..1]).unwrap();
                let bigger = PointSet::from_rows(&[rows[0].clone(), extra]).unwrap();
                prop_assert!(igd(&bigger, &refs).unwrap() <= igd(&sol, &refs).unwrap());
            }
        }
    }
}
