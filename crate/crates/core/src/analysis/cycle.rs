use crate::dynamics::Coloring;
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Nodes of a cycle graph in walking order starting at node 0.
pub fn cycle_order(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n();
    if n < 3 || g.is_regular() != Some(2) || !g.is_connected() {
        return Err(invalid("graph is not a cycle"));
    }
    let mut order = Vec::with_capacity(n);
    let (mut prev, mut cur) = (usize::MAX, 0usize);
    for _ in 0..n {
        order.push(cur);
        let nb = g.neighbors(cur);
        let next = if nb[0] as usize != prev { nb[0] } else { nb[1] } as usize;
        prev = cur;
        cur = next;
    }
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlternatingPath {
    /// Nodes on the longest path whose consecutive nodes differ in color.
    pub length: usize,
    /// Rounds the majority model can still take to stabilize.
    pub bound: usize,
    /// The whole (even) cycle alternates: a period-2 blinker from round 0.
    pub periodic: bool,
}

/// Longest alternating path `L` of a cycle coloring; every round strips the
/// two end nodes of each alternating path, so the majority model stabilizes
/// within `⌊L/2⌋` rounds.
pub fn alternating_path_bound(g: &Graph, coloring: &Coloring) -> Result<AlternatingPath> {
    let order = cycle_order(g)?;
    if coloring.len() != g.n() {
        return Err(invalid("coloring length does not match graph"));
    }
    let n = order.len();
    let bichromatic: Vec<bool> = (0..n)
        .map(|i| coloring.is_black(order[i]) != coloring.is_black(order[(i + 1) % n]))
        .collect();
    if bichromatic.iter().all(|&b| b) {
        return Ok(AlternatingPath {
            length: n,
            bound: 0,
            periodic: true,
        });
    }
    // rotate so the scan starts just after a monochromatic edge
    let start = bichromatic.iter().position(|&b| !b).unwrap() + 1;
    let (mut best, mut run) = (0, 0);
    for i in 0..n {
        if bichromatic[(start + i) % n] {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    let length = best + 1;
    Ok(AlternatingPath {
        length,
        bound: length / 2,
        periodic: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{random_coloring, run, ModelConfig};
    use crate::generators::gen_cycle;
    use proptest::prelude::*;

    /// Longest alternating path by trying every start and walking forward.
    fn scan_oracle(pattern: &[bool]) -> usize {
        let n = pattern.len();
        let mut best = 1;
        for s in 0..n {
            let mut len = 1;
            while len < n && pattern[(s + len) % n] != pattern[(s + len - 1) % n] {
                len += 1;
            }
            best = best.max(len);
        }
        best
    }

    #[test]
    fn monochromatic_has_no_path() {
        let g = gen_cycle(7).unwrap();
        let p = alternating_path_bound(&g, &Coloring::all_black(7)).unwrap();
        assert_eq!((p.length, p.bound, p.periodic), (1, 0, false));
    }

    #[test]
    fn six_cycle_example() {
        let g = gen_cycle(6).unwrap();
        let c = Coloring::from_pattern("bbwbww").unwrap();
        let p = alternating_path_bound(&g, &c).unwrap();
        assert_eq!(p.length, 4);
        assert_eq!(p.length, scan_oracle(&c.iter().collect::<Vec<_>>()));
    }

    #[test]
    fn alternating_even_cycle_blinks() {
        let g = gen_cycle(8).unwrap();
        let c = Coloring::from_pattern("bwbwbwbw").unwrap();
        let p = alternating_path_bound(&g, &c).unwrap();
        assert!(p.periodic);
        assert_eq!(p.length, 8);
        let res = run(&g, &c, &ModelConfig::majority(), 10).unwrap();
        assert_eq!((res.stabilization_time, res.period), (0, 2));
    }

    #[test]
    fn rejects_non_cycles() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(alternating_path_bound(&path, &Coloring::all_white(4)).is_err());
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(cycle_order(&two).is_err());
    }

    #[test]
    fn large_cycle_respects_bound() {
        let n = 20_000;
        let g = gen_cycle(n).unwrap();
        for s in 0..4 {
            let c = random_coloring(n, 0.5, s).unwrap();
            let p = alternating_path_bound(&g, &c).unwrap();
            let res = run(&g, &c, &ModelConfig::majority(), 1000).unwrap();
            assert!(res.stabilization_time <= p.bound, "{} > {}", res.stabilization_time, p.bound);
        }
    }

    proptest! {
        #[test]
        fn matches_scan_oracle_and_bounds_stabilization(bits in prop::collection::vec(any::<bool>(), 3..40)) {
            let n = bits.len();
            let g = gen_cycle(n).unwrap();
            let c = Coloring::from_bools(bits.iter().copied());
            let p = alternating_path_bound(&g, &c).unwrap();
            let oracle = scan_oracle(&bits);
            if p.periodic {
                prop_assert_eq!(oracle, n);
            } else {
                prop_assert_eq!(p.length, oracle);
                let res = run(&g, &c, &ModelConfig::majority(), 200).unwrap();
                prop_assert!(res.stabilization_time <= p.bound);
            }
        }
    }
}
