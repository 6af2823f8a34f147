use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::seed;

/// Preferential attachment: a clique on `m_out + 1` nodes, then each new
/// node links to `m_out` distinct existing nodes chosen with probability
/// proportional to their current degree.
pub fn gen_pa(n: usize, m_out: usize, seed: u64) -> Result<Graph> {
    if m_out == 0 {
        return Err(invalid("PA needs m_out >= 1"));
    }
    if n <= m_out {
        return Err(invalid(format!("PA needs n > m_out (n={n}, m_out={m_out})")));
    }
    let mut rng = seed::rng(seed);
    let core = m_out + 1;
    let expected_m = core * m_out / 2 + (n - core) * m_out;
    let mut pairs = Vec::with_capacity(expected_m);
    // Every edge endpoint once; a uniform pick is a degree-proportional pick.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * expected_m);
    for u in 0..core as NodeId {
        for v in u + 1..core as NodeId {
            pairs.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut chosen: Vec<NodeId> = Vec::with_capacity(m_out);
    for v in core as NodeId..n as NodeId {
        chosen.clear();
        while chosen.len() < m_out {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            pairs.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Ok(Graph::from_pairs(n, pairs))
}
