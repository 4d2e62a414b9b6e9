//! Experiment runner, statistics and reports for comparing selectors.

mod plot;
mod rank;
mod report;
mod stats;

use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fronts::{candidate_sets, FrontSpec, DEFAULT_POOL};
use crate::metrics::subset_igd;
use crate::points::PointSet;
use crate::rng::{label_salt, mix_seed, RngStream};
use crate::selection::{select, AlgoKind, Strategy};

pub use plot::{emit_scatter_plot, normalized_points, scatter_svg, PlotPoint};
pub use rank::{midranks, rank_table, FrontRanks, RankGroup, RankTable};
pub use report::{emit_results_csv, format_igd, load_results_csv, read_results, write_results, HEADER};
pub use stats::{wilcoxon_rank_sum, RankSumResult, Verdict, EXACT_LIMIT};

fn default_k() -> usize {
    100
}

fn default_runs() -> usize {
    11
}

fn default_strategies() -> Vec<Strategy> {
    vec![Strategy::Medoid]
}

fn default_pool() -> usize {
    DEFAULT_POOL
}

/// A benchmark grid. Read from JSON; omitted fields take the defaults
/// `k = 100`, `runs = 11`, `strategies = [2]`, `base_seed = 0`,
/// `pool = 200000` and no time limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub fronts: Vec<FrontSpec>,
    pub sizes: Vec<usize>,
    #[serde(default = "default_k")]
    pub k: usize,
    pub algorithms: Vec<AlgoKind>,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<Strategy>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Seconds; runs that take longer are flagged and logged.
    #[serde(default)]
    pub time_limit_per_run: Option<f64>,
    /// Size of the front sample each candidate set is drawn from.
    #[serde(default = "default_pool")]
    pub pool: usize,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidConfig(why.to_string()));
        if self.fronts.is_empty() {
            return bad("at least one front is required");
        }
        if self.sizes.is_empty() {
            return bad("at least one size is required");
        }
        if self.algorithms.is_empty() {
            return bad("at least one algorithm is required");
        }
        if self.strategies.is_empty() {
            return bad("at least one strategy is required");
        }
        if self.runs == 0 {
            return bad("runs must be at least 1");
        }
        if let Some(limit) = self.time_limit_per_run {
            if limit.is_nan() || limit <= 0.0 {
                return bad("time_limit_per_run must be positive");
            }
        }
        let min_size = *self.sizes.iter().min().expect("nonempty");
        if self.k == 0 || self.k > min_size {
            return Err(Error::InvalidK { k: self.k, n: min_size });
        }
        if let Some(&size) = self.sizes.iter().find(|&&s| s > self.pool) {
            return Err(Error::PoolTooSmall { size, pool: self.pool });
        }
        for front in &self.fronts {
            front.validate()?;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let config: BenchConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        config.validate()?;
        Ok(config)
    }

    /// Rows the grid produces.
    pub fn row_count(&self) -> usize {
        let per_run: usize = self
            .algorithms
            .iter()
            .map(|a| if a.uses_strategy() { self.strategies.len() } else { 1 })
            .sum();
        self.fronts.len() * self.sizes.len() * per_run * self.runs
    }

    /// Seed of the candidate sets for one front, derived from the base seed
    /// and the front's label.
    pub fn data_seed(&self, front: &FrontSpec) -> u64 {
        mix_seed(self.base_seed, label_salt(&front.label()))
    }
}

/// One measurement: a selector run on one candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub front: String,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub algo: AlgoKind,
    /// `None` for selectors that return their own centers.
    pub strategy: Option<Strategy>,
    pub run: usize,
    pub seed: u64,
    pub igd: f64,
    /// Wall time of the selector alone, in milliseconds.
    pub time_ms: f64,
    /// Set when the run exceeded the configured time limit. Not stored in
    /// the results CSV.
    pub over_time_limit: bool,
}

impl ResultRow {
    /// Selector identity used in tables: the algorithm name, with the
    /// strategy appended where it applies (`kmeans++/S2`).
    pub fn selector(&self) -> String {
        match self.strategy {
            Some(s) => format!("{}/S{}", self.algo, s),
            None => self.algo.to_string(),
        }
    }
}

/// Runs one selector on a candidate set and scores it against the set.
pub fn measure(
    points: &PointSet,
    algo: AlgoKind,
    k: usize,
    strategy: Option<Strategy>,
    seed: u64,
) -> Result<(f64, f64)> {
    let mut rng = RngStream::new(seed);
    let start = Instant::now();
    let subset = select(points, algo, k, strategy, &mut rng)?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((subset_igd(points, &subset)?, time_ms))
}

/// Runs the full grid in the order fronts, sizes, algorithms, strategies,
/// runs. Candidate sets are drawn once per front from a seed derived from
/// the base seed and the front label; run `r` seeds its selector with
/// `base_seed + r`, so both strategies of a run see the same clustering.
pub fn run_experiment(config: &BenchConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.row_count());
    for front in &config.fronts {
        let mut data_rng = RngStream::new(config.data_seed(front));
        let sets = candidate_sets(front, &config.sizes, config.pool, &mut data_rng)?;
        for points in &sets {
            for &algo in &config.algorithms {
                let strategies: Vec<Option<Strategy>> = if algo.uses_strategy() {
                    config.strategies.iter().copied().map(Some).collect()
                } else {
                    vec![None]
                };
                for strategy in strategies {
                    for run in 0..config.runs {
                        let seed = config.base_seed.wrapping_add(run as u64);
                        let (igd, time_ms) = measure(points, algo, config.k, strategy, seed)?;
                        let over = config.time_limit_per_run.is_some_and(|s| time_ms > s * 1e3);
                        if over {
                            warn!(
                                "{algo} on {} (n = {}) run {run} took {time_ms:.0} ms, over the limit",
                                front.label(),
                                points.len()
                            );
                        }
                        rows.push(ResultRow {
                            front: front.kind.to_string(),
                            m: front.m,
                            n: points.len(),
                            k: config.k,
                            algo,
                            strategy,
                            run,
                            seed,
                            igd,
                            time_ms,
                            over_time_limit: over,
                        });
                    }
                }
                info!("{} n = {}: {algo} done", front.label(), points.len());
            }
        }
    }
    Ok(rows)
}

/// Strategy 1 versus Strategy 2 on one (front, m, n, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyComparison {
    pub front: String,
    pub m: usize,
    pub n: usize,
    pub algo: AlgoKind,
    pub mean_s1: f64,
    pub mean_s2: f64,
    pub test: RankSumResult,
}

/// Rank-sum tests of Strategy 1 (baseline) against Strategy 2 for every
/// cell that has rows for both; `+` means Strategy 2 is significantly
/// better.
pub fn compare_strategies(rows: &[ResultRow], alpha: f64) -> Result<Vec<StrategyComparison>> {
    let mut cells: Vec<(String, usize, usize, AlgoKind)> = Vec::new();
    for r in rows.iter().filter(|r| r.strategy.is_some()) {
        let key = (r.front.clone(), r.m, r.n, r.algo);
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    let mut out = Vec::new();
    for (front, m, n, algo) in cells {
        let sample = |s: Strategy| -> Vec<f64> {
            rows.iter()
                .filter(|r| r.front == front && r.m == m && r.n == n && r.algo == algo && r.strategy == Some(s))
                .map(|r| r.igd)
                .collect()
        };
        let (s1, s2) = (sample(Strategy::NearestCentroid), sample(Strategy::Medoid));
        if s1.is_empty() || s2.is_empty() {
            continue;
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        out.push(StrategyComparison {
            mean_s1: mean(&s1),
            mean_s2: mean(&s2),
            test: wilcoxon_rank_sum(&s1, &s2, alpha)?,
            front,
            m,
            n,
            algo,
        });
    }
    if out.is_empty() {
        return Err(Error::MissingCell("no cell has rows for both strategies".into()));
    }
    Ok(out)
}
