//! Exact verifier for the `4m*` stabilization bound of the (ψ,ψ)-majority
//! model.
//!
//! The graph `G` is lifted to a weighted bipartite graph `H` with sides
//! `X = {x_i}` and `Y = {y_i}`: `x_i ~ y_j` with weight 1 whenever
//! `v_i ~ v_j`, plus a "spine" edge `x_i ~ y_i` whose weight encodes the
//! ψ-threshold of `v_i`. Updating `X` on odd rounds and `Y` on even rounds
//! by weighted majority reproduces the (ψ,ψ) trajectory of `G`. The weight
//! `φ1` of bichromatic edges starts at `2m*`, cannot drop below `-1/4`, and
//! loses at least 1/2 in every round that changes a node, which bounds the
//! number of such rounds by `4m*`.
//!
//! `φ = φ1 + φ2/2` (with `φ2` the bichromatic spine count) never increases
//! either, but it can stay flat across two consecutive active rounds: a
//! flip against a monochromatic spine whose opposing count equals an
//! integral `ψd` lowers `φ1` by exactly 1/2 and raises `φ2/2` by 1/2.
//!
//! Weights are kept as integer numerators over the common denominator
//! `4n`, so every comparison is exact.

use std::io::{self, Write};

use num_rational::Ratio;

use crate::dynamics::{
    count_bichromatic, run_compiled, step_compiled, Coloring, CompiledRule, Fraction, ModelConfig,
};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

pub type Exact = Ratio<i128>;

#[derive(Debug, Clone)]
pub struct WeightedBipartiteGraph {
    base: Graph,
    psi: Fraction,
    /// Common denominator `4n` of every weight.
    denom: i128,
    /// Spine weight numerators over `denom`.
    spine: Vec<i128>,
}

impl WeightedBipartiteGraph {
    /// Nodes per side.
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn psi(&self) -> Fraction {
        self.psi
    }

    pub fn denominator(&self) -> i128 {
        self.denom
    }

    pub fn spine_weight(&self, i: usize) -> Exact {
        Ratio::new(self.spine[i], self.denom)
    }

    /// Weight of `{x_i, y_j}`, or `None` when the edge is absent.
    pub fn edge_weight(&self, i: usize, j: usize) -> Option<Exact> {
        if i == j {
            Some(self.spine_weight(i))
        } else if self.base.has_edge(i, j) {
            Some(Ratio::from_integer(1))
        } else {
            None
        }
    }

    /// Sum of weights incident to `x_i` (equivalently `y_i`).
    pub fn total_weight(&self, i: usize) -> Exact {
        Ratio::new(self.total_scaled(i), self.denom)
    }

    fn total_scaled(&self, i: usize) -> i128 {
        self.base.degree(i) as i128 * self.denom + self.spine[i]
    }
}

/// Lifts `g` for threshold `ψ ∈ (1/2, 1]`. Every node needs degree ≥ 1.
pub fn build_h(g: &Graph, psi: Fraction) -> Result<WeightedBipartiteGraph> {
    if !(psi > Ratio::new(1, 2) && psi <= Ratio::from_integer(1)) {
        return Err(invalid(format!("psi={psi} outside (1/2, 1]")));
    }
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(invalid(format!("node {v} has degree 0; strip isolated nodes first")));
    }
    let denom = 4 * n as i128;
    let (a, b) = (*psi.numer() as i128, *psi.denom() as i128);
    let spine = (0..n)
        .map(|v| {
            let d = g.degree(v) as i128;
            let psi_d_num = a * d;
            if psi_d_num % b == 0 {
                // 2ψd − d − 1/2
                (2 * (psi_d_num / b) - d) * denom - denom / 2
            } else {
                // 2⌊ψd⌋ − d + 1 − 1/(4n)
                (2 * (psi_d_num / b) - d + 1) * denom - 1
            }
        })
        .collect();
    Ok(WeightedBipartiteGraph {
        base: g.clone(),
        psi,
        denom,
        spine,
    })
}

/// Coloring of `X ∪ Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HColoring {
    pub x: Coloring,
    pub y: Coloring,
}

impl HColoring {
    /// Both copies of `v_i` take `v_i`'s color.
    pub fn lift(c: &Coloring) -> HColoring {
        HColoring {
            x: c.clone(),
            y: c.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `X` updates from `Y`.
    Odd,
    /// `Y` updates from `X`.
    Even,
}

impl Parity {
    pub fn of_round(t: usize) -> Parity {
        if t % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tie {
    node: usize,
    black_scaled: i128,
    total_scaled: i128,
}

fn periodic_update(
    h: &WeightedBipartiteGraph,
    c: &HColoring,
    parity: Parity,
) -> std::result::Result<(HColoring, usize), Tie> {
    let (source, target) = match parity {
        Parity::Odd => (&c.y, &c.x),
        Parity::Even => (&c.x, &c.y),
    };
    let n = h.n();
    let mut next = Coloring::all_white(n);
    let mut flips = 0;
    for i in 0..n {
        let mut black = h
            .base
            .neighbors(i)
            .iter()
            .filter(|&&j| source.is_black(j as usize))
            .count() as i128
            * h.denom;
        if source.is_black(i) {
            black += h.spine[i];
        }
        let total = h.total_scaled(i);
        if 2 * black == total {
            return Err(Tie {
                node: i,
                black_scaled: black,
                total_scaled: total,
            });
        }
        let is_black = 2 * black > total;
        next.set(i, is_black);
        if is_black != target.is_black(i) {
            flips += 1;
        }
    }
    let out = match parity {
        Parity::Odd => HColoring { x: next, y: c.y.clone() },
        Parity::Even => HColoring { x: c.x.clone(), y: next },
    };
    Ok((out, flips))
}

/// One round of the periodic majority model: the active side adopts the
/// strict weighted majority of its neighbors, spine neighbor included.
pub fn periodic_step(h: &WeightedBipartiteGraph, c: &HColoring, parity: Parity) -> Result<HColoring> {
    if c.x.len() != h.n() || c.y.len() != h.n() {
        return Err(invalid("coloring size does not match H"));
    }
    periodic_update(h, c, parity).map(|(next, _)| next).map_err(|tie| {
        Error::Invariant(format!(
            "tie at node {} ({} of {} over {})",
            tie.node, tie.black_scaled, tie.total_scaled, h.denom
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PotentialValue {
    /// Total weight of bichromatic edges.
    pub phi1: Exact,
    /// Number of bichromatic spine edges.
    pub phi2: u64,
    /// `phi1 + phi2 / 2`.
    pub phi: Exact,
}

fn potential_scaled(h: &WeightedBipartiteGraph, c: &HColoring) -> (i128, u64) {
    let mut phi1 = 0i128;
    let mut phi2 = 0u64;
    for i in 0..h.n() {
        let xi = c.x.is_black(i);
        let crossing = h
            .base
            .neighbors(i)
            .iter()
            .filter(|&&j| c.y.is_black(j as usize) != xi)
            .count() as i128;
        phi1 += crossing * h.denom;
        if xi != c.y.is_black(i) {
            phi1 += h.spine[i];
            phi2 += 1;
        }
    }
    (phi1, phi2)
}

pub fn potential(h: &WeightedBipartiteGraph, c: &HColoring) -> PotentialValue {
    let (phi1, phi2) = potential_scaled(h, c);
    PotentialValue {
        phi1: Ratio::new(phi1, h.denom),
        phi2,
        phi: Ratio::new(phi1 * 2 + phi2 as i128 * h.denom, 2 * h.denom),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateRow {
    pub t: usize,
    pub phi1: Exact,
    pub phi2: u64,
    pub phi: Exact,
    pub flips: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub round: usize,
    /// Node id in the original graph, when the failure is local.
    pub node: Option<usize>,
    pub detail: String,
}

/// Replayable record of one certification run.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub psi: Fraction,
    pub m_star: usize,
    /// Last round in which a node of `H` changed color (0 if none did).
    pub fixation_round: usize,
    pub rows: Vec<CertificateRow>,
    /// Stabilization time and period of the (ψ,ψ) run on `G` itself.
    pub g_stabilization: usize,
    pub g_period: usize,
    /// Pairs of consecutive active rounds over which `φ = φ1 + φ2/2` fell
    /// by less than 1/2. Not a violation: `φ1` carries the bound.
    pub phi_stalls: usize,
    pub violations: Vec<Violation>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `t,phi1_num,phi1_den,phi2,flips`, one row per round.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,phi1_num,phi1_den,phi2,flips")?;
        for r in &self.rows {
            writeln!(w, "{},{},{},{},{}", r.t, r.phi1.numer(), r.phi1.denom(), r.phi2, r.flips)?;
        }
        Ok(())
    }
}

/// Runs the periodic model on the lift of `(g, initial)` and checks, in
/// exact arithmetic:
///
/// * `φ1_0 = φ_0 = 2m*`, and `φ1, φ ≥ -1/4` throughout;
/// * no round ever meets a tie;
/// * `φ` never increases, and `φ1` drops by at least 1/2 in every round
///   that changes some node (so also over every pair of rounds containing
///   a change);
/// * the parity projection of `H` equals the (ψ,ψ) trajectory of `g`;
/// * `H` is fixed after at most `4m*` rounds, and `g` is then in a cycle of
///   length at most 2 that it entered no later.
///
/// Isolated nodes are removed before lifting; they never change in either
/// process.
pub fn certify_descent(g: &Graph, psi: Fraction, initial: &Coloring, max_rounds: usize) -> Result<Certificate> {
    if initial.len() != g.n() {
        return Err(invalid("coloring length does not match graph"));
    }
    let config = ModelConfig::psi(psi, psi)?;
    let rule = CompiledRule::new(g, &config)?;
    let m_star = count_bichromatic(g, initial);
    let g_run = run_compiled(g, initial, &rule, max_rounds.max(1))?;

    let (core, kept) = g.without_isolated();
    let project = |c: &Coloring| Coloring::from_bools(kept.iter().map(|&v| c.is_black(v)));
    let mut cert = Certificate {
        psi,
        m_star,
        fixation_round: 0,
        rows: Vec::new(),
        g_stabilization: g_run.stabilization_time,
        g_period: g_run.period,
        phi_stalls: 0,
        violations: Vec::new(),
    };
    if core.n() == 0 {
        cert.rows.push(CertificateRow {
            t: 0,
            phi1: Ratio::from_integer(0),
            phi2: 0,
            phi: Ratio::from_integer(0),
            flips: 0,
        });
        return Ok(cert);
    }

    let h = build_h(&core, psi)?;
    let mut hc = HColoring::lift(&project(initial));
    let mut g_color = initial.clone();
    let mut violate = |round: usize, node: Option<usize>, detail: String| {
        cert.violations.push(Violation { round, node, detail });
    };

    // phi1 as numerators over denom, phi over 2·denom
    let d = h.denom;
    let as_phi = |(p1, p2): (i128, u64)| 2 * p1 + p2 as i128 * d;
    let show1 = |x: i128| Ratio::new(x, d);
    let show = |x: i128| Ratio::new(x, 2 * d);
    let start = potential_scaled(&h, &hc);
    let mut phi1s = vec![start.0];
    let mut phis = vec![as_phi(start)];
    let mut flips = vec![0usize];
    if phi1s[0] != 2 * m_star as i128 * d || phis[0] != 4 * m_star as i128 * d {
        violate(0, None, format!("phi_0 = {} but 2m* = {}", show(phis[0]), 2 * m_star));
    }
    let mut rows = vec![row(0, &h, start, 0)];

    let mut t = 0;
    loop {
        if t >= 2 && flips[t] == 0 && flips[t - 1] == 0 {
            break;
        }
        t += 1;
        if t > max_rounds + 2 {
            violate(t, None, format!("H not fixed within {max_rounds} rounds"));
            break;
        }
        let parity = Parity::of_round(t);
        let (next, f) = match periodic_update(&h, &hc, parity) {
            Ok(v) => v,
            Err(tie) => {
                violate(
                    t,
                    Some(kept[tie.node]),
                    format!("tie: black weight {}/{d} of total {}/{d}", tie.black_scaled, tie.total_scaled),
                );
                break;
            }
        };
        hc = next;
        g_color = step_compiled(g, &g_color, &rule);
        let side = match parity {
            Parity::Odd => &hc.x,
            Parity::Even => &hc.y,
        };
        let projected = project(&g_color);
        if *side != projected {
            let node = (0..core.n()).find(|&i| side.is_black(i) != projected.is_black(i));
            violate(t, node.map(|i| kept[i]), "H side differs from the trajectory on G".into());
        }
        let scaled = potential_scaled(&h, &hc);
        let (phi1, phi) = (scaled.0, as_phi(scaled));
        if 4 * phi1 < -d || 2 * phi < -d {
            violate(t, None, format!("phi1 = {}, phi = {} below -1/4", show1(phi1), show(phi)));
        }
        if phi > phis[t - 1] {
            violate(t, None, format!("phi rose from {} to {}", show(phis[t - 1]), show(phi)));
        }
        if f > 0 && 2 * phi1 > 2 * phi1s[t - 1] - d {
            violate(
                t,
                None,
                format!("phi1 fell only from {} to {} in an active round", show1(phi1s[t - 1]), show1(phi1)),
            );
        }
        if t >= 2 && f > 0 && flips[t - 1] > 0 && phi > phis[t - 2] - d {
            cert.phi_stalls += 1;
        }
        phi1s.push(phi1);
        phis.push(phi);
        flips.push(f);
        rows.push(row(t, &h, scaled, f));
        if f > 0 {
            cert.fixation_round = t;
        }
    }

    if cert.fixation_round > 4 * m_star {
        violate(
            cert.fixation_round,
            None,
            format!("H fixed at round {} > 4m* = {}", cert.fixation_round, 4 * m_star),
        );
    }
    if cert.g_stabilization > 4 * m_star {
        violate(
            cert.g_stabilization,
            None,
            format!("G stabilized at round {} > 4m* = {}", cert.g_stabilization, 4 * m_star),
        );
    }
    if cert.g_stabilization > cert.fixation_round {
        violate(
            cert.g_stabilization,
            None,
            format!(
                "G entered its cycle at {} after H fixed at {}",
                cert.g_stabilization, cert.fixation_round
            ),
        );
    }
    cert.rows = rows;
    Ok(cert)
}

fn row(t: usize, h: &WeightedBipartiteGraph, (p1, p2): (i128, u64), flips: usize) -> CertificateRow {
    CertificateRow {
        t,
        phi1: Ratio::new(p1, h.denom),
        phi2: p2,
        phi: Ratio::new(2 * p1 + p2 as i128 * h.denom, 2 * h.denom),
        flips,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{random_coloring, step};
    use crate::generators::gen_er;

    fn frac(a: u64, b: u64) -> Fraction {
        Ratio::new(a, b)
    }

    #[test]
    fn spine_weight_integer_threshold() {
        // star with a degree-4 center: ψd = 3
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let h = build_h(&g, frac(3, 4)).unwrap();
        assert_eq!(h.spine_weight(0), Ratio::new(3, 2));
        assert_eq!(h.total_weight(0), Ratio::new(11, 2)); // 2ψd − 1/2
    }

    #[test]
    fn spine_weight_fractional_threshold() {
        // node 0 of degree 3 in a 10-node graph, ψ = 3/5 so ψd = 1.8
        let g = Graph::from_edges(10, [(0, 1), (0, 2), (0, 3), (4, 5), (6, 7), (8, 9), (1, 4)]).unwrap();
        let h = build_h(&g, frac(3, 5)).unwrap();
        assert_eq!(h.spine_weight(0), Ratio::new(-1, 40));
        for i in 0..10 {
            assert!(h.spine_weight(i) >= Ratio::new(-1, 40));
        }
    }

    #[test]
    fn isolated_nodes_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(build_h(&g, frac(3, 4)).is_err());
        assert!(build_h(&Graph::from_edges(2, [(0, 1)]).unwrap(), frac(1, 2)).is_err());
    }

    #[test]
    fn monochromatic_lift_is_fixed_with_zero_potential() {
        let g = gen_er(12, 0.4, 2).unwrap().without_isolated().0;
        let h = build_h(&g, frac(2, 3)).unwrap();
        let c = HColoring::lift(&Coloring::all_black(g.n()));
        assert_eq!(periodic_step(&h, &c, Parity::Odd).unwrap(), c);
        assert_eq!(periodic_step(&h, &c, Parity::Even).unwrap(), c);
        assert_eq!(potential(&h, &c).phi, Ratio::from_integer(0));
    }

    #[test]
    fn single_edge_all_colorings() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let psi = frac(1, 1);
        let h = build_h(&g, psi).unwrap();
        assert_eq!(h.spine_weight(0), Ratio::new(1, 2));
        let config = ModelConfig::psi(psi, psi).unwrap();
        for bits in 0..4u64 {
            let c0 = Coloring::from_bits(2, bits);
            let mut hc = HColoring::lift(&c0);
            let mut gc = c0.clone();
            for t in 1..=6 {
                hc = periodic_step(&h, &hc, Parity::of_round(t)).unwrap();
                gc = step(&g, &gc, &config).unwrap();
                let side = if t % 2 == 1 { &hc.x } else { &hc.y };
                assert_eq!(side, &gc, "bits={bits} t={t}");
            }
            assert!(certify_descent(&g, psi, &c0, 100).unwrap().passed());
        }
    }

    #[test]
    fn lifted_potential_is_twice_bichromatic_edges() {
        let g = gen_er(30, 0.2, 8).unwrap();
        let (core, _) = g.without_isolated();
        let c = random_coloring(core.n(), 0.5, 4).unwrap();
        let h = build_h(&core, frac(3, 5)).unwrap();
        let m_star = count_bichromatic(&core, &c) as i128;
        assert_eq!(potential(&h, &HColoring::lift(&c)).phi, Ratio::from_integer(2 * m_star));
    }

    #[test]
    fn monochromatic_certificate_is_trivial() {
        let g = gen_er(10, 0.5, 1).unwrap();
        let cert = certify_descent(&g, frac(3, 4), &Coloring::all_white(10), 10).unwrap();
        assert!(cert.passed());
        assert_eq!((cert.m_star, cert.fixation_round), (0, 0));
    }

    #[test]
    fn random_instances_track_g_for_twenty_rounds() {
        for s in 0..30 {
            let g = gen_er(8, 0.5, s).unwrap();
            let c0 = random_coloring(8, 0.5, 100 + s).unwrap();
            let cert = certify_descent(&g, frac(3, 5), &c0, 200).unwrap();
            assert!(cert.passed(), "seed {s}: {:?}", cert.violations);
        }
    }

    #[test]
    fn phi_can_stall_while_phi1_descends() {
        let edges = [
            (0, 1), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (1, 2), (1, 4), (1, 5), (1, 6),
            (2, 3), (2, 4), (2, 6), (2, 7), (3, 4), (3, 6), (4, 7), (5, 7), (6, 7),
        ];
        let g = Graph::from_edges(8, edges).unwrap();
        let c0 = Coloring::from_pattern("wbbbbwww").unwrap();
        let cert = certify_descent(&g, frac(3, 5), &c0, 100).unwrap();
        assert!(cert.passed(), "{:?}", cert.violations);
        assert!(cert.phi_stalls >= 1);
        // rounds 0..2: φ stays 18 while φ1 goes 18, 17, 16
        let phis: Vec<Exact> = cert.rows[..3].iter().map(|r| r.phi).collect();
        assert_eq!(phis, vec![Ratio::from_integer(18); 3]);
        let phi1s: Vec<Exact> = cert.rows[..3].iter().map(|r| r.phi1).collect();
        assert_eq!(phi1s, vec![Ratio::from_integer(18), Ratio::from_integer(17), Ratio::from_integer(16)]);
    }

    #[test]
    fn certificate_csv_columns() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let cert = certify_descent(&g, frac(1, 1), &Coloring::from_pattern("bw").unwrap(), 10).unwrap();
        let mut out = Vec::new();
        cert.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("t,phi1_num,phi1_den,phi2,flips\n0,2,1,0,0\n"), "{text}");
    }
}
