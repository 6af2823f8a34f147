use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{default_max_rounds, run, Coloring, ModelConfig};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinCriterion {
    /// More than half the nodes end black.
    Wins,
    /// Every node ends black.
    TakesOver,
}

impl WinCriterion {
    pub fn as_str(self) -> &'static str {
        match self {
            WinCriterion::Wins => "WINS",
            WinCriterion::TakesOver => "TAKES_OVER",
        }
    }

    fn holds(self, black: usize, n: usize) -> bool {
        match self {
            WinCriterion::Wins => 2 * black > n,
            WinCriterion::TakesOver => black == n,
        }
    }
}

impl fmt::Display for WinCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WinCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "WINS" => Ok(WinCriterion::Wins),
            "TAKES_OVER" | "TAKEOVER" => Ok(WinCriterion::TakesOver),
            _ => Err(invalid(format!("unknown win criterion {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanStrategy {
    /// Every grid point from the bottom up.
    #[default]
    Ascending,
    /// Doubling steps until a win, then a linear scan of the last gap.
    Galloping,
}

/// A coalition of the `k` highest-degree nodes, colored black with
/// influence `r`, against a uniform background.
#[derive(Debug, Clone)]
pub struct EliteQuery<'a> {
    pub graph: &'a Graph,
    pub r: u64,
    pub criterion: WinCriterion,
    pub background_black: bool,
    /// Rule without influence; stubbornness (e.g. from [`super::apply_cm2`])
    /// is kept.
    pub config: ModelConfig,
}

impl<'a> EliteQuery<'a> {
    pub fn new(graph: &'a Graph, r: u64, criterion: WinCriterion) -> EliteQuery<'a> {
        EliteQuery {
            graph,
            r,
            criterion,
            background_black: false,
            config: ModelConfig::majority(),
        }
    }

    pub fn with_config(mut self, config: ModelConfig) -> EliteQuery<'a> {
        self.config = config;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(invalid("influence factor r must be >= 1"));
        }
        if self.config.influence.is_some() {
            return Err(invalid("elite query sets influence itself"));
        }
        Ok(())
    }

    /// Simulates the top-`k` coalition and applies the criterion to the
    /// first coloring of the final cycle.
    pub fn elite_wins(&self, k: usize, ranking: &[u32]) -> Result<bool> {
        let g = self.graph;
        let n = g.n();
        let mut influence = vec![1u64; n];
        let mut initial = if self.background_black {
            Coloring::all_black(n)
        } else {
            Coloring::all_white(n)
        };
        for &v in &ranking[..k] {
            influence[v as usize] = self.r;
            initial.set(v as usize, true);
        }
        let config = self.config.clone().with_influence(influence)?;
        let result = run(g, &initial, &config, default_max_rounds(g))?;
        Ok(self.criterion.holds(result.final_coloring().count_black(), n))
    }
}

/// 0.001 of `n`, or a single node once `n ≤ 1000`.
pub fn default_resolution(n: usize) -> f64 {
    if n <= 1000 {
        1.0 / n.max(1) as f64
    } else {
        0.001
    }
}

/// Coalition-size increment for a fractional resolution.
pub fn grid_step(n: usize, resolution: f64) -> usize {
    ((resolution * n as f64).round() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EliteScan {
    pub step: usize,
    /// Smallest winning grid size found, if any.
    pub k: Option<usize>,
    /// `k / n`, or `1 + resolution` when nothing won.
    pub fraction: f64,
    /// Grid points simulated.
    pub evaluated: usize,
}

/// Grid sizes `0, step, 2·step, …`, ending with `n`.
fn grid(n: usize, step: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (0..=n / step).map(|i| i * step).collect();
    if *ks.last().unwrap() != n {
        ks.push(n);
    }
    ks
}

pub fn min_winning_elite_fraction(query: &EliteQuery, resolution: f64) -> Result<f64> {
    scan_elites(query, resolution, ScanStrategy::Ascending).map(|s| s.fraction)
}

pub fn scan_elites(query: &EliteQuery, resolution: f64, strategy: ScanStrategy) -> Result<EliteScan> {
    if resolution.is_nan() || resolution <= 0.0 {
        return Err(invalid(format!("resolution must be positive (got {resolution})")));
    }
    query.validate()?;
    let n = query.graph.n();
    let step = grid_step(n, resolution);
    let ks = grid(n, step);
    let ranking = query.graph.degree_ranking();
    let wins = |i: usize| query.elite_wins(ks[i], &ranking);

    let mut evaluated = 0;
    let found = match strategy {
        ScanStrategy::Ascending => {
            // batches run concurrently; the first win in grid order decides
            let batch = rayon::current_num_threads().max(1);
            let mut found = None;
            let mut start = 0;
            while start < ks.len() && found.is_none() {
                let end = (start + batch).min(ks.len());
                let results: Vec<bool> = (start..end).into_par_iter().map(wins).collect::<Result<_>>()?;
                evaluated += end - start;
                found = results.iter().position(|&w| w).map(|p| start + p);
                start = end;
            }
            found
        }
        ScanStrategy::Galloping => {
            let last = ks.len() - 1;
            let mut lo = None;
            let mut probe = 0;
            let hi = loop {
                let p = probe.min(last);
                evaluated += 1;
                if wins(p)? {
                    break Some(p);
                }
                lo = Some(p);
                if p == last {
                    break None;
                }
                probe = (2 * probe).max(1);
            };
            match (lo, hi) {
                (Some(lo), Some(hi)) => {
                    let mut found = hi;
                    for i in lo + 1..hi {
                        evaluated += 1;
                        if wins(i)? {
                            found = i;
                            break;
                        }
                    }
                    Some(found)
                }
                (None, hi) => hi,
                (_, None) => None,
            }
        }
    };
    Ok(EliteScan {
        step,
        k: found.map(|i| ks[i]),
        fraction: match found {
            Some(i) => ks[i] as f64 / n as f64,
            None => 1.0 + resolution,
        },
        evaluated,
    })
}
