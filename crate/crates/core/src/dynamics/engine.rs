use std::io::{self, Write};

use rayon::prelude::*;

use super::coloring::{count_bichromatic, Coloring};
use super::model::{CompiledRule, ModelConfig};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Below this many nodes a round runs on the calling thread.
const PARALLEL_MIN_NODES: usize = 1 << 14;

/// `(opposing weight, total weight)` in the neighborhood of `v`, each
/// neighbor `u` counting `r(u)` times.
pub fn weighted_tally(g: &Graph, coloring: &Coloring, config: &ModelConfig, v: usize) -> (u64, u64) {
    let own = coloring.is_black(v);
    g.neighbors(v).iter().fold((0, 0), |(opp, total), &u| {
        let r = config.influence_of(u as usize);
        let opp = if coloring.is_black(u as usize) != own { opp + r } else { opp };
        (opp, total + r)
    })
}

/// One synchronous round: every node reads only `coloring`.
pub fn step(g: &Graph, coloring: &Coloring, config: &ModelConfig) -> Result<Coloring> {
    if coloring.len() != g.n() {
        return Err(invalid(format!(
            "coloring has {} nodes, graph has {}",
            coloring.len(),
            g.n()
        )));
    }
    let rule = CompiledRule::new(g, config)?;
    Ok(step_compiled(g, coloring, &rule))
}

#[inline]
fn next_color(g: &Graph, prev: &Coloring, rule: &CompiledRule, v: usize) -> bool {
    let black_weight: u64 = match &rule.influence {
        None => g
            .neighbors(v)
            .iter()
            .filter(|&&u| prev.is_black(u as usize))
            .count() as u64,
        Some(r) => g
            .neighbors(v)
            .iter()
            .filter(|&&u| prev.is_black(u as usize))
            .map(|&u| r[u as usize])
            .sum(),
    };
    if prev.is_black(v) {
        let opp = rule.total[v] - black_weight;
        opp < rule.flip_black[v]
    } else {
        black_weight >= rule.flip_white[v]
    }
}

fn fill_word(g: &Graph, prev: &Coloring, rule: &CompiledRule, w: usize) -> u64 {
    let start = w * 64;
    let end = (start + 64).min(g.n());
    let mut word = 0u64;
    for v in start..end {
        if next_color(g, prev, rule, v) {
            word |= 1 << (v - start);
        }
    }
    word
}

pub(crate) fn step_compiled(g: &Graph, prev: &Coloring, rule: &CompiledRule) -> Coloring {
    let mut next = Coloring::all_white(g.n());
    let words = next.words_mut();
    if g.n() >= PARALLEL_MIN_NODES {
        words
            .par_iter_mut()
            .enumerate()
            .for_each(|(w, out)| *out = fill_word(g, prev, rule, w));
    } else {
        for (w, out) in words.iter_mut().enumerate() {
            *out = fill_word(g, prev, rule, w);
        }
    }
    next
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// First round of the final cycle.
    pub stabilization_time: usize,
    /// 1 (fixed point) or 2.
    pub period: usize,
    /// The colorings of the final cycle, starting at `stabilization_time`.
    pub final_colorings: Vec<Coloring>,
    /// Black node count for rounds `0..=` the round at which the cycle was detected.
    pub black_count_per_round: Vec<usize>,
    /// Bichromatic edges in the initial coloring.
    pub m_star: usize,
}

impl RunResult {
    pub fn final_coloring(&self) -> &Coloring {
        &self.final_colorings[0]
    }

    pub fn final_black_fraction(&self) -> f64 {
        let c = self.final_coloring();
        if c.is_empty() {
            0.0
        } else {
            c.count_black() as f64 / c.len() as f64
        }
    }
}

/// Round cap used when the caller has none: comfortably above the `4m*`
/// bound on the (ψ,ψ) model and the `O(m)` bound on the majority model.
pub fn default_max_rounds(g: &Graph) -> usize {
    4 * g.m() + 10
}

/// Iterates [`step`] until the trajectory enters a cycle of length 1 or 2.
pub fn run(g: &Graph, initial: &Coloring, config: &ModelConfig, max_rounds: usize) -> Result<RunResult> {
    let rule = CompiledRule::new(g, config)?;
    run_compiled(g, initial, &rule, max_rounds)
}

pub(crate) fn run_compiled(
    g: &Graph,
    initial: &Coloring,
    rule: &CompiledRule,
    max_rounds: usize,
) -> Result<RunResult> {
    if max_rounds == 0 {
        return Err(invalid("max_rounds must be at least 1"));
    }
    if initial.len() != g.n() {
        return Err(invalid("coloring length does not match graph"));
    }
    let m_star = count_bichromatic(g, initial);
    let mut black_counts = vec![initial.count_black()];
    let mut older: Option<Coloring> = None;
    let mut prev = initial.clone();
    // A cycle entered at round `max_rounds` is confirmed at most two rounds later.
    for t in 1..=max_rounds + 2 {
        let next = step_compiled(g, &prev, rule);
        black_counts.push(next.count_black());
        if next == prev {
            if t - 1 > max_rounds {
                break;
            }
            return Ok(RunResult {
                stabilization_time: t - 1,
                period: 1,
                final_colorings: vec![prev],
                black_count_per_round: black_counts,
                m_star,
            });
        }
        if older.as_ref() == Some(&next) {
            if t - 2 > max_rounds {
                break;
            }
            return Ok(RunResult {
                stabilization_time: t - 2,
                period: 2,
                final_colorings: vec![next, prev],
                black_count_per_round: black_counts,
                m_star,
            });
        }
        older = Some(std::mem::replace(&mut prev, next));
    }
    let tail = black_counts[black_counts.len().saturating_sub(8)..].to_vec();
    Err(Error::Timeout { max_rounds, tail })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryRow {
    pub round: usize,
    pub black_count: usize,
    pub bichromatic_count: usize,
}

/// Per-round black and bichromatic counts, from round 0 through the first
/// round that repeats an earlier coloring.
pub fn trajectory(
    g: &Graph,
    initial: &Coloring,
    config: &ModelConfig,
    max_rounds: usize,
) -> Result<Vec<TrajectoryRow>> {
    let result = run(g, initial, config, max_rounds)?;
    let rule = CompiledRule::new(g, config)?;
    let last = result.black_count_per_round.len();
    let mut rows = Vec::with_capacity(last);
    let mut c = initial.clone();
    for round in 0..last {
        if round > 0 {
            c = step_compiled(g, &c, &rule);
        }
        rows.push(TrajectoryRow {
            round,
            black_count: c.count_black(),
            bichromatic_count: count_bichromatic(g, &c),
        });
    }
    Ok(rows)
}

pub fn write_trajectory_csv<W: Write>(mut w: W, rows: &[TrajectoryRow]) -> io::Result<()> {
    writeln!(w, "round,black_count,bichromatic_count")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.round, r.black_count, r.bichromatic_count)?;
    }
    Ok(())
}
