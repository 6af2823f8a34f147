use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeSet, SpectralOptions};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct MixingViolation {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    /// `|e(S,S') - |S||S'|d/n|`.
    pub deviation: f64,
    /// `σ d √(|S||S'|)`.
    pub allowance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub d: usize,
    pub sigma: f64,
    pub samples: usize,
    /// Largest `deviation / allowance` seen.
    pub max_slack_ratio: f64,
    /// Whether σ had to be recomputed at a tighter tolerance.
    pub sigma_refined: bool,
    pub violations: Vec<MixingViolation>,
}

impl MixingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Both sides of the mixing inequality for one set pair:
/// `(|e(S,S') - |S||S'|d/n|, d √(|S||S'|))`; the second is scaled by σ
/// before comparing.
pub fn mixing_sides(g: &Graph, d: usize, s: &NodeSet, t: &NodeSet) -> (f64, f64) {
    let e = g.edges_between(s, t) as f64;
    let (a, b) = (s.len() as f64, t.len() as f64);
    let expected = a * b * d as f64 / g.n() as f64;
    ((e - expected).abs(), d as f64 * (a * b).sqrt())
}

fn holds(deviation: f64, allowance: f64) -> bool {
    // float noise only; the inequality itself is exact
    deviation <= allowance * (1.0 + 1e-12) + 1e-9
}

/// Checks the expander mixing lemma on `samples` random pairs of node sets
/// with uniformly random sizes.
pub fn verify_mixing(g: &Graph, samples: usize, seed: u64) -> Result<MixingReport> {
    let d = g.is_regular().ok_or_else(|| invalid("mixing check needs a regular graph"))?;
    let n = g.n();
    if n == 0 {
        return Err(invalid("mixing check needs a nonempty graph"));
    }
    let mut sigma = g.sigma_with(&SpectralOptions {
        seed,
        ..SpectralOptions::default()
    })?;
    let mut rng = seed::rng(seed::derive(seed, 0x004d_4958, 0));
    let mut pairs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        let s = NodeSet::new(index::sample(&mut rng, n, a), n)?;
        let t = NodeSet::new(index::sample(&mut rng, n, b), n)?;
        pairs.push((s, t));
    }
    let sides: Vec<(f64, f64)> = pairs.iter().map(|(s, t)| mixing_sides(g, d, s, t)).collect();

    let mut sigma_refined = false;
    if sides.iter().any(|&(dev, base)| !holds(dev, sigma * base)) {
        sigma = g.sigma_with(&SpectralOptions {
            tolerance: 1e-13,
            max_iterations: 1_000_000,
            seed: seed::derive(seed, 0x004d_4958, 1),
        })?;
        sigma_refined = true;
    }
    let mut report = MixingReport {
        d,
        sigma,
        samples,
        max_slack_ratio: 0.0,
        sigma_refined,
        violations: Vec::new(),
    };
    for ((s, t), &(dev, base)) in pairs.iter().zip(&sides) {
        let allowance = sigma * base;
        if allowance > 0.0 {
            report.max_slack_ratio = report.max_slack_ratio.max(dev / allowance);
        }
        if !holds(dev, allowance) {
            report.violations.push(MixingViolation {
                s: s.iter().collect(),
                t: t.iter().collect(),
                deviation: dev,
                allowance,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_rrg;

    #[test]
    fn k4_all_small_subset_pairs() {
        let g = Graph::from_edges(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v)))).unwrap();
        let sigma = g.sigma().unwrap();
        let subsets: Vec<NodeSet> = (1u32..16)
            .filter(|m| m.count_ones() <= 2)
            .map(|m| NodeSet::new((0..4).filter(|i| m >> i & 1 == 1), 4).unwrap())
            .collect();
        assert_eq!(subsets.len(), 10);
        for s in &subsets {
            for t in &subsets {
                let (dev, base) = mixing_sides(&g, 3, s, t);
                assert!(holds(dev, sigma * base), "{s:?} {t:?}: {dev} > {}", sigma * base);
            }
        }
    }

    #[test]
    fn whole_vertex_set_is_exact() {
        let g = gen_rrg(50, 4, 2).unwrap();
        let all = NodeSet::all(50);
        assert_eq!(mixing_sides(&g, 4, &all, &all).0, 0.0);
    }

    #[test]
    fn random_regular_samples_hold() {
        let g = gen_rrg(400, 6, 5).unwrap();
        let report = verify_mixing(&g, 50, 1).unwrap();
        assert!(report.passed(), "{:?}", report.violations.first());
        assert!(report.max_slack_ratio <= 1.0);
        assert_eq!(report.d, 6);
    }

    #[test]
    fn irregular_graph_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(verify_mixing(&g, 5, 0).is_err());
    }
}
