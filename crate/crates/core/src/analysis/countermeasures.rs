use num_rational::Ratio;

use crate::dynamics::{Fraction, ModelConfig, Stubbornness};
use crate::error::{invalid, Result};
use crate::generators::{even_degree_near, gen_rrg};
use crate::graph::{Graph, NodeSet};

/// Overlay degree `round(2·r·d̄)`, moved by one if `n·d` would be odd.
pub fn cm1_degree(g: &Graph, r: u64) -> Result<usize> {
    if r == 0 {
        return Err(invalid("influence factor r must be >= 1"));
    }
    let avg = g.degree_stats()?.avg();
    let d = even_degree_near(2.0 * r as f64 * avg, g.n());
    if d >= g.n() {
        return Err(invalid(format!("overlay degree {d} needs more than n={} nodes", g.n())));
    }
    Ok(d)
}

/// `g` united with a random `cm1_degree`-regular graph on the same nodes.
pub fn apply_cm1(g: &Graph, r: u64, seed: u64) -> Result<Graph> {
    let d = cm1_degree(g, r)?;
    g.union(&gen_rrg(g.n(), d, seed)?)
}

/// `1 - 1/(2r)`.
pub fn cm2_gamma(r: u64) -> Result<Fraction> {
    if r == 0 {
        return Err(invalid("influence factor r must be >= 1"));
    }
    Ok(Ratio::new(2 * r - 1, 2 * r))
}

/// Majority rule with uniform stubbornness `cm2_gamma(r)`.
pub fn apply_cm2(r: u64) -> Result<ModelConfig> {
    ModelConfig::majority().with_stubbornness(Stubbornness::Uniform(cm2_gamma(r)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StubbornBound {
    /// Largest share of a non-coalition node's neighbors inside the coalition.
    pub f: Fraction,
    /// Uniform stubbornness above this keeps the coalition from spreading.
    pub gamma_min: Fraction,
    /// False when some node has all its neighbors in the coalition.
    pub feasible: bool,
}

/// `f = max d_Z(v)/d(v)` over nodes outside `z` with at least one neighbor,
/// and `γ_min = r / (r + (1-f)/f)`.
pub fn stubbornness_bound(g: &Graph, z: &NodeSet, r: u64) -> Result<StubbornBound> {
    if r == 0 {
        return Err(invalid("influence factor r must be >= 1"));
    }
    if 2 * z.len() >= g.n() {
        return Err(invalid(format!("coalition of {} is not below n/2 = {}/2", z.len(), g.n())));
    }
    let mask = z.mask(g.n());
    let f = (0..g.n())
        .filter(|&v| !mask[v] && g.degree(v) > 0)
        .map(|v| Ratio::new(g.degree_into(v, &mask) as u64, g.degree(v) as u64))
        .max()
        .unwrap_or_else(|| Ratio::from_integer(0));
    let one = Ratio::from_integer(1);
    if f == one {
        return Ok(StubbornBound {
            f,
            gamma_min: one,
            feasible: false,
        });
    }
    // r/(r + (1-f)/f) = r·a / (r·a + b - a) for f = a/b
    let (a, b) = (*f.numer(), *f.denom());
    let gamma_min = if a == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(r * a, r * a + b - a)
    };
    Ok(StubbornBound {
        f,
        gamma_min,
        feasible: true,
    })
}
