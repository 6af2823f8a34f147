use std::collections::{HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::seed;

/// How stubs are matched when drawing a random regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RrgStrategy {
    /// Repeatedly match the leftover stubs at random, keeping every pair that
    /// forms a new simple edge, until all stubs are used or no legal pair is
    /// left (then start over). Works for the dense overlays CM1 needs.
    #[default]
    StegerWormald,
    /// Plain configuration model: one random perfect matching of all stubs,
    /// discarded entirely on any loop or multi-edge. Success probability is
    /// about `exp(-(d^2-1)/4)`, so only usable for small `d`.
    Pairing,
}

const MAX_ATTEMPTS: usize = 1_000;

pub fn gen_rrg(n: usize, d: usize, seed: u64) -> Result<Graph> {
    gen_rrg_with(n, d, seed, RrgStrategy::default())
}

pub fn gen_rrg_with(n: usize, d: usize, seed: u64, strategy: RrgStrategy) -> Result<Graph> {
    if d >= n && !(d == 0 && n == 0) {
        return Err(invalid(format!("RRG degree d={d} must be below n={n}")));
    }
    if (n * d) % 2 == 1 {
        return Err(invalid(format!("RRG needs n*d even (n={n}, d={d})")));
    }
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    let mut rng = seed::rng(seed);
    let attempts = match strategy {
        RrgStrategy::StegerWormald => MAX_ATTEMPTS,
        RrgStrategy::Pairing => 100 * MAX_ATTEMPTS,
    };
    for _ in 0..attempts {
        let edges = match strategy {
            RrgStrategy::StegerWormald => try_incremental(n, d, &mut rng),
            RrgStrategy::Pairing => try_pairing(n, d, &mut rng),
        };
        if let Some(pairs) = edges {
            let g = Graph::from_pairs(n, pairs);
            debug_assert!((0..n).all(|v| g.degree(v) == d));
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no simple {d}-regular graph on {n} nodes after {attempts} attempts"
    )))
}

/// Multiplicative hasher for packed `u64` edge keys.
#[derive(Default)]
struct EdgeHasher(u64);

impl Hasher for EdgeHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = seed::mix(x);
    }
}

type EdgeSet = HashSet<u64, BuildHasherDefault<EdgeHasher>>;

fn key(u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (a as u64) << 32 | b as u64
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(NodeId, NodeId)>> {
    let mut stubs: Vec<NodeId> = (0..n as NodeId).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    stubs.shuffle(rng);
    let mut seen = EdgeSet::default();
    let mut pairs = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v || !seen.insert(key(u, v)) {
            return None;
        }
        pairs.push((u.min(v), u.max(v)));
    }
    Some(pairs)
}

fn try_incremental(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(NodeId, NodeId)>> {
    let mut edges = EdgeSet::default();
    edges.reserve(n * d / 2);
    let mut pairs = Vec::with_capacity(n * d / 2);
    let mut stubs: Vec<NodeId> = (0..n as NodeId).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover: HashMap<NodeId, usize> = HashMap::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && edges.insert(key(u, v)) {
                pairs.push((u, v));
            } else {
                *leftover.entry(u).or_default() += 1;
                *leftover.entry(v).or_default() += 1;
            }
        }
        if !any_legal_pair(&leftover, &edges) {
            return None;
        }
        let mut nodes: Vec<_> = leftover.into_iter().collect();
        nodes.sort_unstable();
        stubs = nodes
            .into_iter()
            .flat_map(|(v, k)| std::iter::repeat_n(v, k))
            .collect();
    }
    Some(pairs)
}

fn any_legal_pair(leftover: &HashMap<NodeId, usize>, edges: &EdgeSet) -> bool {
    if leftover.is_empty() {
        return true;
    }
    let nodes: Vec<NodeId> = leftover.keys().copied().collect();
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            if !edges.contains(&key(u, v)) {
                return true;
            }
        }
    }
    false
}
