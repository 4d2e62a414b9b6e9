//! `subsel`: generate test fronts, run selectors, and benchmark them.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for runtime or I/O
//! errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use subsel::bench::{
    compare_strategies, emit_results_csv, emit_scatter_plot, load_results_csv, rank_table, run_experiment, BenchConfig,
};
use subsel::fronts::{candidate_sets, sample_front, FrontKind, FrontSpec};
use subsel::metrics::subset_igd;
use subsel::selection::{select_detailed, AlgoKind, Strategy};
use subsel::{PointSet, RngStream};

#[derive(Parser)]
#[command(
    name = "subsel",
    version,
    about = "Clustering-based subset selection for multiobjective optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample points on a test Pareto front.
    Generate {
        #[arg(long, value_parser = parse_front)]
        front: FrontKind,
        #[arg(long)]
        objectives: usize,
        #[arg(long)]
        size: usize,
        /// Knee count (knee fronts only).
        #[arg(long)]
        knees: Option<usize>,
        /// Draw a pool of this many points and subsample `size` of them.
        #[arg(long)]
        pool: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a subset of a point set.
    Select {
        #[arg(long, value_parser = parse_algo)]
        algo: AlgoKind,
        #[arg(long)]
        k: usize,
        /// Representative strategy for K-means++ and hierarchical clustering.
        #[arg(long, value_parser = parse_strategy)]
        strategy: Option<Strategy>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        /// Selected points, in the input's CSV format.
        #[arg(long)]
        out: PathBuf,
        /// JSON report with igd, time_ms, iterations and the selected indices.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a benchmark grid described by a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Significance tests on a results CSV.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "wilcoxon")]
        test: TestKind,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "front")]
        group_by: GroupBy,
        #[arg(long, value_enum, default_value = "strategy")]
        compare: Compare,
    },
    /// Per-front and average ranks of the selectors in a results CSV.
    Rank {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Normalized IGD versus time scatter plot (SVG).
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log_time: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    Wilcoxon,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupBy {
    Front,
}

#[derive(Clone, Copy, ValueEnum)]
enum Compare {
    Strategy,
}

fn parse_front(s: &str) -> Result<FrontKind, String> {
    s.parse().map_err(|e: subsel::Error| e.to_string())
}

fn parse_algo(s: &str) -> Result<AlgoKind, String> {
    s.parse().map_err(|e: subsel::Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: subsel::Error| e.to_string())
}

#[derive(Serialize)]
struct SelectReport {
    algo: String,
    k: usize,
    strategy: Option<u8>,
    seed: u64,
    igd: f64,
    time_ms: f64,
    iterations: usize,
    indices: Vec<usize>,
}

fn run(command: Command) -> subsel::Result<()> {
    match command {
        Command::Generate {
            front,
            objectives,
            size,
            knees,
            pool,
            seed,
            out,
        } => {
            let spec = FrontSpec {
                kind: front,
                m: objectives,
                knees,
            };
            let mut rng = RngStream::new(seed);
            let points = match pool {
                Some(pool) => candidate_sets(&spec, &[size], pool, &mut rng)?.remove(0),
                None => sample_front(&spec, size, &mut rng)?,
            };
            points.save(&out)?;
            info!("wrote {} points to {}", points.len(), out.display());
        }
        Command::Select {
            algo,
            k,
            strategy,
            input,
            seed,
            out,
            report,
        } => {
            let points = PointSet::load(&input)?;
            let mut rng = RngStream::new(seed);
            let start = Instant::now();
            let selection = select_detailed(&points, algo, k, strategy, &mut rng)?;
            let time_ms = start.elapsed().as_secs_f64() * 1e3;
            points.select(selection.subset.indices())?.save(&out)?;
            if let Some(path) = report {
                let report = SelectReport {
                    algo: algo.to_string(),
                    k,
                    strategy: algo.uses_strategy().then(|| strategy.unwrap_or_default().number()),
                    seed,
                    igd: subset_igd(&points, &selection.subset)?,
                    time_ms,
                    iterations: selection.iterations,
                    indices: selection.subset.indices().to_vec(),
                };
                std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
            }
        }
        Command::Bench { config, out } => {
            let config = BenchConfig::load(&config)?;
            let rows = run_experiment(&config)?;
            emit_results_csv(&rows, &out)?;
            info!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Stats {
            input,
            test: TestKind::Wilcoxon,
            alpha,
            group_by: GroupBy::Front,
            compare: Compare::Strategy,
        } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(subsel::Error::InvalidConfig(format!(
                    "alpha must be in (0, 1), got {alpha}"
                )));
            }
            let rows = load_results_csv(&input)?;
            let comparisons = compare_strategies(&rows, alpha)?;
            let mut text = format!(
                "{:<10} {:>2} {:>6} {:<12} {:>12} {:>12} {:>10} {}\n",
                "front", "m", "n", "algo", "mean S1", "mean S2", "p", "S2 vs S1"
            );
            for c in &comparisons {
                let _ = writeln!(
                    text,
                    "{:<10} {:>2} {:>6} {:<12} {:>12} {:>12} {:>10.4} {}",
                    c.front,
                    c.m,
                    c.n,
                    c.algo.to_string(),
                    format!("{:.4e}", c.mean_s1),
                    format!("{:.4e}", c.mean_s2),
                    c.test.p_value,
                    c.test.verdict
                );
            }
            for algo in comparisons.iter().map(|c| c.algo).fold(Vec::new(), |mut v, a| {
                if !v.contains(&a) {
                    v.push(a);
                }
                v
            }) {
                let count = |sym: char| {
                    comparisons
                        .iter()
                        .filter(|c| c.algo == algo && c.test.verdict.symbol() == sym)
                        .count()
                };
                let _ = writeln!(text, "{algo}: +/=/- = {}/{}/{}", count('+'), count('='), count('-'));
            }
            print!("{text}");
        }
        Command::Rank { input } => {
            let table = rank_table(&load_results_csv(&input)?)?;
            let mut text = String::new();
            for g in &table.groups {
                let _ = writeln!(text, "m = {}, n = {}", g.m, g.n);
                let _ = write!(text, "{:<10}", "front");
                for s in &g.selectors {
                    let _ = write!(text, " {s:>18}");
                }
                text.push('\n');
                for f in &g.fronts {
                    let _ = write!(text, "{:<10}", f.front);
                    for (mean, rank) in f.means.iter().zip(&f.ranks) {
                        let _ = write!(text, " {:>12} ({rank:>3})", format!("{mean:.4e}"));
                    }
                    text.push('\n');
                }
                let _ = write!(text, "{:<10}", "avg rank");
                for r in &g.average_rank {
                    let _ = write!(text, " {r:>18.2}");
                }
                text.push_str("\n\n");
            }
            print!("{text}");
        }
        Command::Plot { input, out, log_time } => {
            emit_scatter_plot(&load_results_csv(&input)?, &out, log_time)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
