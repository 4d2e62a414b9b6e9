use crate::clustering::{alternate, kmeanspp_order, MedoidsOutcome};
use crate::error::{Error, Result};
use crate::metrics::igd_plus;
use crate::points::PointSet;
use crate::rng::RngStream;

/// K-medoids that measures how much worse a medoid is than each point with
/// the IGD+ distance, in both the assignment and the medoid update. Medoids
/// drift toward points that few others improve upon, which on fronts with
/// knees are the knee regions. Seeded like K-means++ with Euclidean
/// distance.
pub fn knee_kmedoids(points: &PointSet, k: usize, max_iter: usize, rng: &mut RngStream) -> Result<MedoidsOutcome> {
    if max_iter == 0 {
        return Err(Error::ZeroIterations);
    }
    let seeds = kmeanspp_order(points, k, rng)?;
    alternate(points, seeds, max_iter, igd_plus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_point_wins() {
        let ps = PointSet::from_rows(&[[0.0, 2.0], [2.0, 0.0], [1.0, 1.0]]).unwrap();
        let out = knee_kmedoids(&ps, 1, 100, &mut RngStream::new(0)).unwrap();
        assert_eq!(out.medoids.indices(), &[2]);
        assert_eq!(out.objective_trace.last().copied(), Some(2.0));
    }

    #[test]
    fn k_equals_n() {
        let ps = PointSet::from_rows(&[[0.0, 3.0], [1.0, 1.0], [3.0, 0.0]]).unwrap();
        let out = knee_kmedoids(&ps, 3, 100, &mut RngStream::new(1)).unwrap();
        assert_eq!(out.medoids.indices(), &[0, 1, 2]);
        assert_eq!(out.objective_trace.last().copied(), Some(0.0));
    }

    #[test]
    fn objective_non_increasing() {
        let mut rng = RngStream::new(15);
        for _ in 0..20 {
            let data: Vec<f64> = (0..200)
                .flat_map(|_| {
                    let t = rng.unit();
                    [t, 1.0 - t.sqrt()]
                })
                .collect();
            let ps = PointSet::from_flat(2, data).unwrap();
            let out = knee_kmedoids(&ps, 8, 100, &mut rng).unwrap();
            for w in out.objective_trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn invalid_arguments() {
        let ps = PointSet::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(knee_kmedoids(&ps, 2, 10, &mut RngStream::new(0)).is_err());
        assert!(knee_kmedoids(&ps, 1, 0, &mut RngStream::new(0)).is_err());
    }
}
