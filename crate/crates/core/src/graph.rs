//! Immutable undirected simple graphs in compressed adjacency form.
//!
//! Every experiment runs on a [`Graph`]: node ids are dense `0..n`, each
//! neighbor list is sorted, and the edge set is symmetric with no loops or
//! parallel edges. Construction is the only place where edges are accepted,
//! so those invariants hold for every value of the type.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{self, Write};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

pub type NodeId = u32;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from unordered pairs. Self-loops and repeated pairs
    /// (in either orientation) are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > NodeId::MAX as usize {
            return Err(invalid(format!("node count {n} exceeds u32 range")));
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x as u64, n });
                }
            }
            if u != v {
                pairs.push((u.min(v) as NodeId, u.max(v) as NodeId));
            }
        }
        Ok(Self::from_pairs(n, pairs))
    }

    /// Same as [`Graph::from_edges`] for callers that already hold
    /// in-range `(min, max)` pairs. Loops and duplicates are still removed.
    pub(crate) fn from_pairs(n: usize, mut pairs: Vec<(NodeId, NodeId)>) -> Graph {
        pairs.retain(|&(u, v)| u != v);
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * pairs.len()];
        // Lexicographic pair order keeps every row ascending: a node first
        // receives its smaller neighbors (as the second coordinate), then its
        // larger ones (as the first coordinate).
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        Graph {
            offsets,
            targets,
            m: pairs.len(),
        }
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            m: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as NodeId)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Edge-set union of two graphs on the same node set.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let mut pairs = Vec::with_capacity(self.m + other.m);
        for g in [self, other] {
            pairs.extend(g.edges().map(|(u, v)| (u as NodeId, v as NodeId)));
        }
        Ok(Graph::from_pairs(self.n(), pairs))
    }

    pub fn degree_stats(&self) -> Result<DegreeStats> {
        if self.n() == 0 {
            return Err(invalid("degree statistics need at least one node"));
        }
        let degrees = (0..self.n()).map(|v| self.degree(v));
        let (min, max) = degrees.fold((usize::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
        Ok(DegreeStats {
            n: self.n(),
            m: self.m,
            avg_degree: Ratio::new(2 * self.m as u64, self.n() as u64),
            min_degree: min,
            max_degree: max,
        })
    }

    /// All nodes ordered by degree descending, ties by ascending id.
    pub fn degree_ranking(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.n() as NodeId).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v as usize)), v));
        order
    }

    pub fn top_degree_nodes(&self, k: usize) -> Result<NodeSet> {
        if k > self.n() {
            return Err(invalid(format!("k={k} exceeds n={}", self.n())));
        }
        let ranking = self.degree_ranking();
        NodeSet::new(ranking[..k].iter().map(|&v| v as usize), self.n())
    }

    /// Number of ordered pairs `(v, u)` in `s1 × s2` joined by an edge. An
    /// edge inside `s1 ∩ s2` is counted once per orientation.
    pub fn edges_between(&self, s1: &NodeSet, s2: &NodeSet) -> u64 {
        let mask = s2.mask(self.n());
        s1.iter()
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| mask[u as usize])
                    .count() as u64
            })
            .sum()
    }

    /// Number of neighbors of `v` inside the membership mask.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.neighbors(v).iter().filter(|&&u| mask[u as usize]).count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    reached += 1;
                    queue.push_back(u as usize);
                }
            }
        }
        reached == n
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Second-largest absolute eigenvalue of `D^{-1/2} A D^{-1/2}` with the
    /// default solver settings.
    pub fn sigma(&self) -> Result<f64> {
        self.sigma_with(&SpectralOptions::default())
    }

    /// Power iteration on the squared normalized adjacency with the top
    /// eigenvector (`∝ sqrt(d)`) projected out each step. Squaring folds the
    /// negative end of the spectrum onto the positive one, so the limit is
    /// the largest remaining `|λ|`.
    pub fn sigma_with(&self, opts: &SpectralOptions) -> Result<f64> {
        let n = self.n();
        if n == 0 {
            return Err(invalid("sigma of an empty graph"));
        }
        if (0..n).any(|v| self.degree(v) == 0) {
            return Err(invalid("sigma needs minimum degree >= 1"));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if n == 1 {
            return Ok(0.0);
        }

        let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (self.degree(v) as f64).sqrt()).collect();
        let mut top: Vec<f64> = (0..n).map(|v| (self.degree(v) as f64).sqrt()).collect();
        normalize(&mut top);

        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        deflate(&mut x, &top);
        if normalize(&mut x) == 0.0 {
            return Ok(0.0);
        }

        let mut mx = vec![0.0; n];
        let mut rho_prev = f64::NAN;
        for _ in 0..opts.max_iterations {
            self.normalized_mul(&x, &mut mx, &inv_sqrt);
            let rho: f64 = mx.iter().map(|a| a * a).sum();
            if (rho - rho_prev).abs() < opts.tolerance {
                return Ok(rho.sqrt().min(1.0));
            }
            rho_prev = rho;
            self.normalized_mul(&mx, &mut x, &inv_sqrt);
            deflate(&mut x, &top);
            if normalize(&mut x) == 0.0 {
                // x landed in the kernel of M^2: every remaining eigenvalue is 0.
                return Ok(0.0);
            }
        }
        Ok(rho_prev.sqrt().min(1.0))
    }

    fn normalized_mul(&self, x: &[f64], out: &mut [f64], inv_sqrt: &[f64]) {
        for (v, o) in out.iter_mut().enumerate() {
            let s: f64 = self
                .neighbors(v)
                .iter()
                .map(|&u| x[u as usize] * inv_sqrt[u as usize])
                .sum();
            *o = s * inv_sqrt[v];
        }
    }

    /// Canonical text form: one `u v` line per edge with `u < v`, ascending.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_canonical_string(&self) -> String {
        let mut s = String::with_capacity(self.m * 12);
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// The same graph with node `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: perm.len(),
            });
        }
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Copy with degree-0 nodes removed. Returns the graph and, for each
    /// kept node, its id in `self`.
    pub fn without_isolated(&self) -> (Graph, Vec<usize>) {
        let kept: Vec<usize> = (0..self.n()).filter(|&v| self.degree(v) > 0).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let pairs = self
            .edges()
            .map(|(u, v)| (new_id[u] as NodeId, new_id[v] as NodeId))
            .collect();
        (Graph::from_pairs(kept.len(), pairs), kept)
    }
}

fn deflate(x: &mut [f64], unit: &[f64]) {
    let dot: f64 = x.iter().zip(unit).map(|(a, b)| a * b).sum();
    for (a, b) in x.iter_mut().zip(unit) {
        *a -= dot * b;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in x.iter_mut() {
            *a /= norm;
        }
    }
    norm
}

#[derive(Debug, Clone)]
pub struct SpectralOptions {
    /// Stop when successive Rayleigh quotients differ by less than this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tolerance: 1e-9,
            max_iterations: 100_000,
            seed: 0x5157_4d41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub n: usize,
    pub m: usize,
    /// Exactly `2m / n`.
    pub avg_degree: Ratio<u64>,
    pub min_degree: usize,
    pub max_degree: usize,
}

impl DegreeStats {
    pub fn avg(&self) -> f64 {
        *self.avg_degree.numer() as f64 / *self.avg_degree.denom() as f64
    }
}

/// Sorted set of distinct node ids, all below the owning graph's `n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeSet(Vec<NodeId>);

impl NodeSet {
    pub fn new<I: IntoIterator<Item = usize>>(ids: I, n: usize) -> Result<NodeSet> {
        let mut v = Vec::new();
        for id in ids {
            if id >= n {
                return Err(Error::NodeOutOfRange { node: id as u64, n });
            }
            v.push(id as NodeId);
        }
        v.sort_unstable();
        v.dedup();
        Ok(NodeSet(v))
    }

    pub fn all(n: usize) -> NodeSet {
        NodeSet((0..n as NodeId).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&(v as NodeId)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&v| v as usize)
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::BTreeSet;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    fn check_invariants(g: &Graph) {
        let mut total = 0;
        for v in 0..g.n() {
            let nb = g.neighbors(v);
            assert!(nb.windows(2).all(|w| w[0] < w[1]), "row {v} not strictly sorted");
            for &u in nb {
                assert_ne!(u as usize, v);
                assert!(g.has_edge(u as usize, v));
            }
            total += nb.len();
        }
        assert_eq!(total, 2 * g.m());
    }

    #[test]
    fn triangle_degrees() {
        let g = triangle();
        check_invariants(&g);
        assert_eq!(g.m(), 3);
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn duplicates_and_loops_collapse() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.to_canonical_string(), "0 1\n");
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn out_of_range_endpoint() {
        let err = Graph::from_edges(3, [(0, 3)]).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange { node: 3, n: 3 }));
    }

    #[test]
    fn random_multiset_matches_set_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let edges: Vec<(usize, usize)> =
                (0..10).map(|_| (rng.gen_range(0..6), rng.gen_range(0..6))).collect();
            let oracle: BTreeSet<(usize, usize)> = edges
                .iter()
                .filter(|(u, v)| u != v)
                .map(|&(u, v)| (u.min(v), u.max(v)))
                .collect();
            let g = Graph::from_edges(6, edges).unwrap();
            check_invariants(&g);
            assert_eq!(g.m(), oracle.len());
            assert_eq!(g.edges().collect::<BTreeSet<_>>(), oracle);
        }
    }

    #[test]
    fn union_idempotent_and_disjoint() {
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.union(&c4).unwrap(), c4);
        let matching = Graph::from_edges(4, [(0, 2), (1, 3)]).unwrap();
        let u = c4.union(&matching).unwrap();
        assert!((0..4).all(|v| u.degree(v) == 3));
        assert!(matches!(c4.union(&Graph::empty(5)), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn degree_stats_examples() {
        let s = triangle().degree_stats().unwrap();
        assert_eq!(s.avg_degree, Ratio::from_integer(2));
        assert_eq!((s.min_degree, s.max_degree), (2, 2));
        let s = star(4).degree_stats().unwrap();
        assert_eq!(s.avg_degree, Ratio::new(8, 5));
        assert_eq!((s.min_degree, s.max_degree), (1, 4));
        assert!(Graph::empty(0).degree_stats().is_err());
    }

    #[test]
    fn top_degree_examples() {
        assert_eq!(star(4).top_degree_nodes(1).unwrap().iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(triangle().top_degree_nodes(2).unwrap().iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(triangle().top_degree_nodes(4).is_err());
    }

    #[test]
    fn top_degree_matches_full_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let edges: Vec<_> = (0..20).map(|_| (rng.gen_range(0..12), rng.gen_range(0..12))).collect();
            let g = Graph::from_edges(12, edges).unwrap();
            let mut all: Vec<(i64, usize)> = (0..12).map(|v| (-(g.degree(v) as i64), v)).collect();
            all.sort();
            let expected: BTreeSet<usize> = all[..3].iter().map(|&(_, v)| v).collect();
            let got: BTreeSet<usize> = g.top_degree_nodes(3).unwrap().iter().collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn edges_between_examples() {
        let g = triangle();
        let s0 = NodeSet::new([0], 3).unwrap();
        let s12 = NodeSet::new([1, 2], 3).unwrap();
        assert_eq!(g.edges_between(&s0, &s12), 2);
        let all = NodeSet::all(3);
        assert_eq!(g.edges_between(&all, &all), 6);
    }

    #[test]
    fn sigma_small_graphs_against_closed_form() {
        // K4: normalized adjacency (J - I)/3 has spectrum {1, -1/3, -1/3, -1/3}.
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!((k4.sigma().unwrap() - 1.0 / 3.0).abs() < 1e-6);
        // C4 is bipartite: spectrum {1, 0, 0, -1}.
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!((c4.sigma().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sigma_rejects_disconnected_and_isolated() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(g.sigma(), Err(Error::Disconnected)));
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(g.sigma().is_err());
    }

    #[test]
    fn without_isolated_keeps_edges() {
        let g = Graph::from_edges(5, [(0, 3), (3, 4)]).unwrap();
        let (h, kept) = g.without_isolated();
        assert_eq!(kept, vec![0, 3, 4]);
        assert_eq!(h.to_canonical_string(), "0 1\n1 2\n");
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (1usize..10).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..30)
                .prop_map(move |e| Graph::from_edges(n, e).unwrap())
        })
    }

    proptest! {
        #[test]
        fn built_graphs_are_simple_and_symmetric(g in small_graph()) {
            check_invariants(&g);
        }

        #[test]
        fn edges_between_is_symmetric(
            g in small_graph(),
            a in prop::collection::vec(any::<prop::sample::Index>(), 0..8),
            b in prop::collection::vec(any::<prop::sample::Index>(), 0..8),
        ) {
            let n = g.n();
            let s1 = NodeSet::new(a.iter().map(|i| i.index(n)), n).unwrap();
            let s2 = NodeSet::new(b.iter().map(|i| i.index(n)), n).unwrap();
            prop_assert_eq!(g.edges_between(&s1, &s2), g.edges_between(&s2, &s1));
            // exhaustive ordered-pair count
            let brute = s1.iter().flat_map(|v| s2.iter().map(move |u| (v, u)))
                .filter(|&(v, u)| g.has_edge(v, u)).count() as u64;
            prop_assert_eq!(g.edges_between(&s1, &s2), brute);
        }

        #[test]
        fn union_commutes_and_associates(
            e1 in prop::collection::vec((0usize..7, 0usize..7), 0..15),
            e2 in prop::collection::vec((0usize..7, 0usize..7), 0..15),
            e3 in prop::collection::vec((0usize..7, 0usize..7), 0..15),
        ) {
            let (a, b, c) = (
                Graph::from_edges(7, e1).unwrap(),
                Graph::from_edges(7, e2).unwrap(),
                Graph::from_edges(7, e3).unwrap(),
            );
            prop_assert_eq!(a.union(&b).unwrap().to_canonical_string(), b.union(&a).unwrap().to_canonical_string());
            prop_assert_eq!(
                a.union(&b).unwrap().union(&c).unwrap().to_canonical_string(),
                a.union(&b.union(&c).unwrap()).unwrap().to_canonical_string()
            );
        }
    }
}
