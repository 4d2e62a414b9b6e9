//! Per-front ranking of selectors by mean IGD.

use std::collections::BTreeMap;

use crate::bench::ResultRow;
use crate::error::{Error, Result};

/// Mean IGD and rank of every selector on one front.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRanks {
    pub front: String,
    /// Indexed like [`RankGroup::selectors`].
    pub means: Vec<f64>,
    /// 1 is best; tied means share the average of their ranks.
    pub ranks: Vec<f64>,
}

/// Rankings for one (objective count, set size) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct RankGroup {
    pub m: usize,
    pub n: usize,
    /// Selector names in order of first appearance in the rows.
    pub selectors: Vec<String>,
    pub fronts: Vec<FrontRanks>,
    pub average_rank: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub groups: Vec<RankGroup>,
}

/// Midranks of `values`, ascending (smallest value gets rank 1).
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Running sums for one (m, n) group, with fronts and selectors in
/// first-seen order.
struct GroupSums {
    key: (usize, usize),
    fronts: Vec<String>,
    selectors: Vec<String>,
    /// (front, selector) -> (IGD sum, count).
    cells: BTreeMap<(String, String), (f64, usize)>,
}

/// Ranks selectors by mean IGD on every front, separately for each
/// (m, n) combination, and averages the ranks over fronts. Every selector
/// in a group must have rows on every front of that group.
pub fn rank_table(rows: &[ResultRow]) -> Result<RankTable> {
    if rows.is_empty() {
        return Err(Error::Empty("result rows"));
    }
    let mut groups: Vec<GroupSums> = Vec::new();
    for row in rows {
        let key = (row.m, row.n);
        let pos = match groups.iter().position(|g| g.key == key) {
            Some(p) => p,
            None => {
                groups.push(GroupSums {
                    key,
                    fronts: Vec::new(),
                    selectors: Vec::new(),
                    cells: BTreeMap::new(),
                });
                groups.len() - 1
            }
        };
        let GroupSums {
            fronts,
            selectors,
            cells,
            ..
        } = &mut groups[pos];
        let selector = row.selector();
        if !fronts.contains(&row.front) {
            fronts.push(row.front.clone());
        }
        if !selectors.contains(&selector) {
            selectors.push(selector.clone());
        }
        let cell = cells.entry((row.front.clone(), selector)).or_insert((0.0, 0));
        cell.0 += row.igd;
        cell.1 += 1;
    }

    let mut out = Vec::with_capacity(groups.len());
    for GroupSums {
        key: (m, n),
        fronts,
        selectors,
        cells,
    } in groups
    {
        let mut front_ranks = Vec::with_capacity(fronts.len());
        let mut totals = vec![0.0; selectors.len()];
        for front in fronts {
            let means = selectors
                .iter()
                .map(|s| {
                    cells
                        .get(&(front.clone(), s.clone()))
                        .map(|&(sum, count)| sum / count as f64)
                        .ok_or_else(|| Error::MissingCell(format!("{s} on {front} (m = {m}, n = {n})")))
                })
                .collect::<Result<Vec<f64>>>()?;
            let ranks = midranks(&means);
            totals.iter_mut().zip(&ranks).for_each(|(t, r)| *t += r);
            front_ranks.push(FrontRanks { front, means, ranks });
        }
        let count = front_ranks.len() as f64;
        out.push(RankGroup {
            m,
            n,
            selectors,
            average_rank: totals.into_iter().map(|t| t / count).collect(),
            fronts: front_ranks,
        });
    }
    Ok(RankTable { groups: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::ResultRow;
    use crate::selection::AlgoKind;

    fn row(front: &str, algo: &str, igd: f64) -> ResultRow {
        ResultRow {
            front: front.into(),
            m: 3,
            n: 200,
            k: 10,
            algo: algo.parse().unwrap(),
            strategy: None,
            run: 0,
            seed: 0,
            igd,
            time_ms: 1.0,
            over_time_limit: false,
        }
    }

    #[test]
    fn midrank_examples() {
        assert_eq!(midranks(&[0.1, 0.2]), vec![1.0, 2.0]);
        assert_eq!(midranks(&[0.3, 0.3]), vec![1.5, 1.5]);
        assert_eq!(midranks(&[0.5, 0.1, 0.5, 0.2]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn two_selectors() {
        let rows = [row("linear", "kmedoids", 0.1), row("linear", "greedy-igd", 0.2)];
        let t = rank_table(&rows).unwrap();
        assert_eq!(t.groups[0].fronts[0].ranks, vec![1.0, 2.0]);
        assert_eq!(t.groups[0].average_rank, vec![1.0, 2.0]);
    }

    #[test]
    fn averages_over_runs_and_fronts() {
        // Hand-built 6 x 6 grid: on front f, selector a has mean igd
        // (a + f) mod 6, so each front is a rotation of ranks 1..6.
        let algos = AlgoKind::BENCHMARK.map(|a| a.name());
        let mut rows = Vec::new();
        for f in 0..6 {
            for (a, name) in algos.iter().enumerate() {
                let mean = ((a + f) % 6) as f64;
                rows.push(row(&format!("f{f}"), name, mean - 0.5));
                rows.push(row(&format!("f{f}"), name, mean + 0.5));
            }
        }
        let t = rank_table(&rows).unwrap();
        let g = &t.groups[0];
        assert_eq!(g.fronts.len(), 6);
        assert_eq!(g.fronts[0].ranks, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(g.fronts[1].ranks, vec![2.0, 3.0, 4.0, 5.0, 6.0, 1.0]);
        assert!(g.average_rank.iter().all(|&r| r == 3.5));
    }

    #[test]
    fn missing_cell_is_an_error() {
        let rows = [
            row("linear", "kmedoids", 0.1),
            row("linear", "greedy-igd", 0.2),
            row("concave", "kmedoids", 0.1),
        ];
        assert!(matches!(rank_table(&rows), Err(Error::MissingCell(_))));
    }

    #[test]
    fn groups_by_size() {
        let mut rows = vec![row("linear", "kmedoids", 0.1), row("linear", "greedy-igd", 0.2)];
        let mut big = row("linear", "kmedoids", 0.3);
        big.n = 4000;
        let mut big2 = row("linear", "greedy-igd", 0.05);
        big2.n = 4000;
        rows.extend([big, big2]);
        let t = rank_table(&rows).unwrap();
        assert_eq!(t.groups.len(), 2);
        assert_eq!(t.groups[1].average_rank, vec![2.0, 1.0]);
    }
}
