use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::seed;

/// Erdős–Rényi `G(n, q)`. Sparse graphs are drawn by geometric skipping
/// over the pair sequence, so the cost is `O(n + m)`.
pub fn gen_er(n: usize, q: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(invalid(format!("q={q} outside [0,1]")));
    }
    if q == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if q == 1.0 {
        let pairs = (0..n as NodeId)
            .flat_map(|u| (u + 1..n as NodeId).map(move |v| (u, v)))
            .collect();
        return Ok(Graph::from_pairs(n, pairs));
    }

    let mut rng = seed::rng(seed);
    let log_miss = (1.0 - q).ln();
    let mut pairs = Vec::with_capacity((q * (n as f64) * (n as f64 - 1.0) / 2.0 * 1.05) as usize + 16);
    // Walk pairs (v, w) with w < v in row-major order.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_miss).floor();
        let skip = if skip.is_finite() && skip < (n as f64) * (n as f64) {
            skip as i64
        } else {
            i64::MAX / 4
        };
        w = w.saturating_add(1 + skip);
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            pairs.push((w as NodeId, v as NodeId));
        }
    }
    Ok(Graph::from_pairs(n, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn extremes() {
        assert_eq!(gen_er(50, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gen_er(50, 1.0, 1).unwrap().m(), 50 * 49 / 2);
        assert!(gen_er(5, 1.1, 1).is_err());
    }

    #[test]
    fn mean_edge_count_matches_binomial() {
        // m ~ Binomial(499500, 0.01): mean 4995, sd sqrt(4995 * 0.99).
        let seeds = 50;
        let mean = (0..seeds).map(|s| gen_er(1000, 0.01, s).unwrap().m() as f64).sum::<f64>() / seeds as f64;
        let sd_of_mean = (4995.0f64 * 0.99).sqrt() / (seeds as f64).sqrt();
        assert!((mean - 4995.0).abs() < 3.0 * sd_of_mean, "mean {mean}");
    }

    #[test]
    fn every_labeled_graph_on_four_nodes_equally_likely() {
        let trials = 20_000;
        let mut counts: HashMap<String, usize> = HashMap::new();
        for s in 0..trials {
            *counts.entry(gen_er(4, 0.5, s).unwrap().to_canonical_string()).or_default() += 1;
        }
        assert_eq!(counts.len(), 64);
        for (g, c) in counts {
            let f = c as f64 / trials as f64;
            assert!((f - 1.0 / 64.0).abs() <= 0.01, "{g:?}: {f}");
        }
    }

    #[test]
    fn same_seed_same_graph() {
        assert_eq!(gen_er(300, 0.05, 9).unwrap(), gen_er(300, 0.05, 9).unwrap());
    }
}
