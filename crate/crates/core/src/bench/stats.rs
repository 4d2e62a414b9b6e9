//! Wilcoxon rank-sum test for comparing IGD samples.
//!
//! Ranks use midranks for ties. Doubling them keeps every rank an integer,
//! so the exact null distribution of the rank sum is a count over integer
//! sums, built by dynamic programming over the pooled observations. Large
//! samples fall back to the normal approximation with tie-corrected
//! variance and a continuity correction.

use std::fmt;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Exact p-values are used while the smaller sample has at most this many
/// observations.
pub const EXACT_LIMIT: usize = 12;

/// Outcome of comparing a baseline sample against a challenger sample of
/// IGD values (lower is better).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The challenger is significantly better.
    Better,
    /// No significant difference.
    Tie,
    /// The challenger is significantly worse.
    Worse,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Verdict::Better => '+',
            Verdict::Tie => '=',
            Verdict::Worse => '-',
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Rank sum of `xs` (midranks).
    pub statistic: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    pub exact: bool,
    pub verdict: Verdict,
}

/// Two-sided rank-sum test of `xs` (baseline) against `ys` (challenger).
/// The verdict is `+` when `ys` is significantly lower at level `alpha`.
pub fn wilcoxon_rank_sum(xs: &[f64], ys: &[f64], alpha: f64) -> Result<RankSumResult> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::Empty("rank-sum sample"));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("rank-sum samples must be finite".into()));
    }
    let (doubled, ties) = doubled_midranks(xs, ys);
    let (nx, ny) = (xs.len(), ys.len());
    let n = nx + ny;
    let w2: u64 = doubled[..nx].iter().sum();
    // Mean of the doubled rank sum: nx (n + 1).
    let mean2 = (nx * (n + 1)) as u64;
    let exact = nx.min(ny) <= EXACT_LIMIT;
    let p_value = if exact {
        exact_p(&doubled, nx.min(ny), w2.abs_diff(mean2), nx, ny)
    } else {
        normal_p(w2 as f64 / 2.0, nx, ny, &ties)
    };
    let significant = p_value < alpha;
    // ys ranks low exactly when xs ranks high.
    let verdict = match (significant, w2.cmp(&mean2)) {
        (true, std::cmp::Ordering::Greater) => Verdict::Better,
        (true, std::cmp::Ordering::Less) => Verdict::Worse,
        _ => Verdict::Tie,
    };
    Ok(RankSumResult {
        statistic: w2 as f64 / 2.0,
        p_value,
        exact,
        verdict,
    })
}

/// Doubled midranks of the pooled sample (xs first, then ys) and the sizes
/// of the tie groups.
fn doubled_midranks(xs: &[f64], ys: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0u64; pooled.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        // Ranks start..end (1-based start + 1 ..= end); doubled midrank is
        // their sum over the group size, times two.
        let doubled = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks[i] = doubled;
        }
        ties.push(end - start);
        start = end;
    }
    (ranks, ties)
}

/// Exact two-sided p-value: the share of all ways to pick `small` of the
/// pooled ranks whose sum deviates from its mean at least as much as the
/// observed one.
fn exact_p(doubled: &[u64], small: usize, observed_dev: u64, nx: usize, ny: usize) -> f64 {
    let n = nx + ny;
    let total: u64 = doubled.iter().sum();
    let max_sum = total as usize;
    // ways[j][s]: number of j-subsets of the ranks seen so far summing to s.
    let mut ways = vec![vec![0f64; max_sum + 1]; small + 1];
    ways[0][0] = 1.0;
    let mut reach = 0usize;
    for &r in doubled {
        let r = r as usize;
        reach += r;
        for j in (1..=small).rev() {
            let (lo, hi) = ways.split_at_mut(j);
            let (prev, cur) = (&lo[j - 1], &mut hi[0]);
            for s in (r..=reach.min(max_sum)).rev() {
                if prev[s - r] != 0.0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }
    let mean = (small * (n + 1)) as u64;
    let (mut hit, mut all) = (0.0, 0.0);
    for (s, &count) in ways[small].iter().enumerate() {
        if count == 0.0 {
            continue;
        }
        all += count;
        if (s as u64).abs_diff(mean) >= observed_dev {
            hit += count;
        }
    }
    (hit / all).min(1.0)
}

fn normal_p(w: f64, nx: usize, ny: usize, ties: &[usize]) -> f64 {
    let (nxf, nyf) = (nx as f64, ny as f64);
    let n = nxf + nyf;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1.0));
    let var = nxf * nyf / 12.0 * ((n + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let mean = nxf * (n + 1.0) / 2.0;
    let z = (((w - mean).abs() - 0.5).max(0.0)) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * (1.0 - normal.cdf(z))).clamp(0.0, 1.0)
}
