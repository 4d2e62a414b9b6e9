//! Samplers for test Pareto fronts in objective space.
//!
//! Regular fronts are sampled directly on their closed-form surface:
//! simplex points from normalized exponential draws, sphere-octant points
//! from normalized absolute Gaussian draws, and the convex and inverted
//! fronts as coordinatewise transforms of sphere points. Fronts with
//! dominated parts in their parameterization (WFG2 and the knee fronts) are
//! oversampled and filtered until enough nondominated points remain. The
//! DTLZ7 front separates per coordinate, so its nondominated region is
//! sampled exactly instead (see [`Dtlz7Segments`]).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{nondominated_filter, PointSet};
use crate::rng::RngStream;

/// Candidate pool size from which benchmark sets are subsampled.
pub const DEFAULT_POOL: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontKind {
    Linear,
    Concave,
    Convex,
    Inverted,
    Dtlz7,
    Wfg2,
    Deb2dk,
    Deb3dk,
    Wave,
}

impl FrontKind {
    pub const ALL: [FrontKind; 9] = [
        FrontKind::Linear,
        FrontKind::Concave,
        FrontKind::Convex,
        FrontKind::Inverted,
        FrontKind::Dtlz7,
        FrontKind::Wfg2,
        FrontKind::Deb2dk,
        FrontKind::Deb3dk,
        FrontKind::Wave,
    ];

    /// The six shapes of the standard comparison.
    pub const BENCHMARK: [FrontKind; 6] = [
        FrontKind::Linear,
        FrontKind::Concave,
        FrontKind::Convex,
        FrontKind::Inverted,
        FrontKind::Dtlz7,
        FrontKind::Wfg2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrontKind::Linear => "linear",
            FrontKind::Concave => "concave",
            FrontKind::Convex => "convex",
            FrontKind::Inverted => "inverted",
            FrontKind::Dtlz7 => "dtlz7",
            FrontKind::Wfg2 => "wfg2",
            FrontKind::Deb2dk => "deb2dk",
            FrontKind::Deb3dk => "deb3dk",
            FrontKind::Wave => "wave",
        }
    }

    pub fn has_knees(self) -> bool {
        matches!(self, FrontKind::Deb2dk | FrontKind::Deb3dk | FrontKind::Wave)
    }

    /// Knee count used when none is given.
    pub fn default_knees(self) -> Option<usize> {
        match self {
            FrontKind::Deb2dk | FrontKind::Wave => Some(3),
            FrontKind::Deb3dk => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for FrontKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FrontKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FrontKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownFront(s.to_string()))
    }
}

/// A front shape, its objective count and, for knee fronts, the number of
/// knees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrontSpec {
    pub kind: FrontKind,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knees: Option<usize>,
}

impl FrontSpec {
    pub fn new(kind: FrontKind, m: usize) -> Self {
        Self { kind, m, knees: None }
    }

    pub fn with_knees(kind: FrontKind, m: usize, knees: usize) -> Self {
        Self {
            kind,
            m,
            knees: Some(knees),
        }
    }

    /// The knee count in effect (explicit or default).
    pub fn knee_count(&self) -> Option<usize> {
        self.knees.or(self.kind.default_knees())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::UnsupportedFront(why));
        if self.m < 2 {
            return bad(format!("{} needs at least 2 objectives, got {}", self.kind, self.m));
        }
        match self.kind {
            FrontKind::Deb2dk | FrontKind::Wave if self.m != 2 => {
                return bad(format!("{} is a 2-objective front, got m = {}", self.kind, self.m))
            }
            FrontKind::Deb3dk if self.m != 3 => {
                return bad(format!("deb3dk is a 3-objective front, got m = {}", self.m))
            }
            _ => {}
        }
        match (self.kind.has_knees(), self.knees) {
            (false, Some(_)) => bad(format!("{} has no knee parameter", self.kind)),
            (true, Some(0)) => bad(format!("{} needs at least one knee", self.kind)),
            _ => Ok(()),
        }
    }

    /// Short identifier, e.g. `concave-m3` or `deb2dk-m2-k3`.
    pub fn label(&self) -> String {
        match self.knee_count() {
            Some(k) => format!("{}-m{}-k{}", self.kind, self.m, k),
            None => format!("{}-m{}", self.kind, self.m),
        }
    }
}

/// Samples `n` points on the front described by `spec`.
pub fn sample_front(spec: &FrontSpec, n: usize, rng: &mut RngStream) -> Result<PointSet> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Empty("requested front size"));
    }
    let m = spec.m;
    let knees = spec.knee_count().unwrap_or(0);
    let direct = |rng: &mut RngStream, f: &dyn Fn(&mut RngStream, &mut [f64])| {
        let mut data = vec![0.0; n * m];
        for row in data.chunks_exact_mut(m) {
            f(rng, row);
        }
        PointSet::from_flat(m, data)
    };
    match spec.kind {
        FrontKind::Linear => direct(rng, &simplex),
        FrontKind::Concave => direct(rng, &sphere),
        FrontKind::Convex => direct(rng, &|rng, row| {
            sphere(rng, row);
            let last = row.len() - 1;
            for v in &mut row[..last] {
                *v = v.powi(4);
            }
            row[last] = row[last].powi(2);
        }),
        FrontKind::Inverted => direct(rng, &|rng, row| {
            sphere(rng, row);
            row.iter_mut().for_each(|v| *v = 1.0 - *v);
        }),
        FrontKind::Dtlz7 => direct(rng, &|rng, row| {
            let segments = Dtlz7Segments::get();
            let last = row.len() - 1;
            for v in &mut row[..last] {
                *v = segments.sample(rng);
            }
            row[last] = dtlz7_last(&row[..last]);
        }),
        FrontKind::Wfg2 => filtered(n, m, rng, &|rng, row| {
            let x: Vec<f64> = (0..m - 1).map(|_| rng.unit()).collect();
            wfg2_point(&x, row);
        }),
        FrontKind::Deb2dk => filtered(n, m, rng, &|rng, row| {
            row.copy_from_slice(&deb2dk_point(rng.unit(), knees));
        }),
        FrontKind::Deb3dk => filtered(n, m, rng, &|rng, row| {
            let (a, b) = (rng.unit(), rng.unit());
            row.copy_from_slice(&deb3dk_point(a, b, knees));
        }),
        FrontKind::Wave => filtered(n, m, rng, &|rng, row| {
            row.copy_from_slice(&wave_point(rng.unit(), knees));
        }),
    }
}

/// Draws one pool of `pool` points and subsamples each requested size from
/// it uniformly without replacement (rows keep their pool order).
pub fn candidate_sets(spec: &FrontSpec, sizes: &[usize], pool: usize, rng: &mut RngStream) -> Result<Vec<PointSet>> {
    if let Some(&size) = sizes.iter().find(|&&s| s > pool) {
        return Err(Error::PoolTooSmall { size, pool });
    }
    let all = sample_front(spec, pool, rng)?;
    sizes
        .iter()
        .map(|&size| {
            let mut idx = sample(rng, pool, size).into_vec();
            idx.sort_unstable();
            all.select(&idx)
        })
        .collect()
}

/// Uniform point on the simplex Σ f_i = 0.5.
fn simplex(rng: &mut RngStream, row: &mut [f64]) {
    loop {
        row.iter_mut().for_each(|v| *v = rng.sample::<f64, _>(Exp1));
        let total: f64 = row.iter().sum();
        if total > 0.0 {
            row.iter_mut().for_each(|v| *v *= 0.5 / total);
            return;
        }
    }
}

/// Uniform point on the positive orthant of the unit sphere.
fn sphere(rng: &mut RngStream, row: &mut [f64]) {
    loop {
        row.iter_mut()
            .for_each(|v| *v = rng.sample::<f64, _>(StandardNormal).abs());
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-150 {
            row.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// Draws raw points until at least `n` survive nondominated filtering of
/// everything drawn so far, then keeps `n` of the survivors at random.
/// Later batches are sized from the survival rate observed so far.
fn filtered(n: usize, m: usize, rng: &mut RngStream, raw: &dyn Fn(&mut RngStream, &mut [f64])) -> Result<PointSet> {
    let mut batch = n.max(256);
    let mut drawn = 0usize;
    let mut kept: Vec<f64> = Vec::new();
    loop {
        let mut data = std::mem::take(&mut kept);
        let start = data.len();
        data.resize(start + batch * m, 0.0);
        for row in data[start..].chunks_exact_mut(m) {
            raw(rng, row);
        }
        drawn += batch;
        let front = nondominated_filter(&PointSet::from_flat(m, data)?)?;
        if front.len() >= n {
            let mut idx = sample(rng, front.len(), n).into_vec();
            idx.sort_unstable();
            return front.select(&idx);
        }
        let rate = (front.len().max(1) as f64 / drawn as f64).min(1.0);
        let missing = (n - front.len()) as f64;
        batch = ((1.2 * missing / rate).ceil() as usize).max(256);
        kept = front.as_flat().to_vec();
    }
}

/// The DTLZ7 position function `h(x) = x (1 + sin 3πx)`.
pub fn dtlz7_h(x: f64) -> f64 {
    x * (1.0 + (3.0 * PI * x).sin())
}

/// Last DTLZ7 objective on the optimal surface (g = 1).
pub fn dtlz7_last(head: &[f64]) -> f64 {
    2.0 * (head.len() + 1) as f64 - head.iter().map(|&x| dtlz7_h(x)).sum::<f64>()
}

/// The parts of [0, 1] where `h` exceeds its value everywhere to the left:
/// `[0, a1] ∪ (b1, a2]`. A DTLZ7 point is nondominated exactly when every
/// leading coordinate lies in this set, so sampling it uniformly gives the
/// same distribution as filtering uniform samples of the full surface.
#[derive(Debug, Clone, Copy)]
pub struct Dtlz7Segments {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
}

impl Dtlz7Segments {
    pub fn get() -> &'static Self {
        static SEGMENTS: OnceLock<Dtlz7Segments> = OnceLock::new();
        SEGMENTS.get_or_init(|| {
            let dh = |x: f64| 1.0 + (3.0 * PI * x).sin() + 3.0 * PI * x * (3.0 * PI * x).cos();
            // h rises to a local maximum a1, dips to a minimum, then rises
            // past h(a1) at b1 up to its global maximum a2.
            let a1 = bisect(dh, 0.1, 0.4);
            let trough = bisect(dh, 0.4, 0.7);
            let a2 = bisect(dh, 0.7, 0.95);
            let level = dtlz7_h(a1);
            let b1 = bisect(|x| dtlz7_h(x) - level, trough, a2);
            Dtlz7Segments { a1, b1, a2 }
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        (0.0..=self.a1).contains(&x) || (x > self.b1 && x <= self.a2)
    }

    fn sample(&self, rng: &mut RngStream) -> f64 {
        let len1 = self.a1;
        let total = len1 + (self.a2 - self.b1);
        let u = rng.unit() * total;
        if u < len1 {
            u
        } else {
            (self.b1 + (u - len1)).min(self.a2)
        }
    }
}

/// Root of `f` in `[lo, hi]`, assuming a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// WFG2 front point for position parameters `x` (length m − 1): convex
/// shapes for the leading objectives, the disconnected shape (A = 5,
/// α = β = 1) for the last, objective i scaled by 2i.
pub fn wfg2_point(x: &[f64], out: &mut [f64]) {
    let m = x.len() + 1;
    let c = |v: f64| 1.0 - (v * FRAC_PI_2).cos();
    for (j, o) in out.iter_mut().enumerate().take(m - 1) {
        // Objective j + 1 (1-based) uses x_1..x_{m-j-1} and, after the
        // first, one sine factor.
        let mut h: f64 = x[..m - 1 - j].iter().map(|&v| c(v)).product();
        if j > 0 {
            h *= 1.0 - (x[m - 1 - j] * FRAC_PI_2).sin();
        }
        *o = 2.0 * (j + 1) as f64 * h;
    }
    let disc = 1.0 - x[0] * (5.0 * PI * x[0]).cos().powi(2);
    out[m - 1] = 2.0 * m as f64 * disc;
}

/// The knee radius `r(t) = 5 + 10 (t − 0.5)² + cos(2Kπt) / K`.
pub fn knee_radius(t: f64, knees: usize) -> f64 {
    let k = knees as f64;
    5.0 + 10.0 * (t - 0.5).powi(2) + (2.0 * k * PI * t).cos() / k
}

/// DEB2DK point at parameter `t ∈ [0, 1]`.
pub fn deb2dk_point(t: f64, knees: usize) -> [f64; 2] {
    let r = knee_radius(t, knees);
    [r * (t * FRAC_PI_2).sin(), r * (t * FRAC_PI_2).cos()]
}

/// DEB3DK point at angles `(s, t) ∈ [0, 1]²`, radius averaged over both.
pub fn deb3dk_point(s: f64, t: f64, knees: usize) -> [f64; 3] {
    let r = 0.5 * (knee_radius(s, knees) + knee_radius(t, knees));
    let (ss, cs) = (s * FRAC_PI_2).sin_cos();
    let (st, ct) = (t * FRAC_PI_2).sin_cos();
    [r * ss * st, r * ss * ct, r * cs]
}

/// Bulge depth of the wave front.
pub const WAVE_AMPLITUDE: f64 = 0.05;

/// Wave front point at `t ∈ [0, 1]`: the line `f1 + f2 = 1` pushed toward
/// the origin by `A sin²(Kπt)` in both objectives, giving K knee bulges.
pub fn wave_point(t: f64, knees: usize) -> [f64; 2] {
    let delta = WAVE_AMPLITUDE * (knees as f64 * PI * t).sin().powi(2);
    [t - delta, 1.0 - t - delta]
}

/// Interior local minima of the knee radius, located on a grid of `grid`
/// cells and refined by golden-section search. These are the knee
/// parameters of the DEB2DK front.
pub fn knee_parameters(knees: usize, grid: usize) -> Vec<f64> {
    let r = |t: f64| knee_radius(t, knees);
    let h = 1.0 / grid as f64;
    (1..grid)
        .filter(|&i| {
            let t = i as f64 * h;
            r(t) < r(t - h) && r(t) <= r(t + h)
        })
        .map(|i| golden_min(r, (i - 1) as f64 * h, (i + 1) as f64 * h))
        .collect()
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}
