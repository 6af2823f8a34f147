//! Seeded random graph families and the deterministic cycle.
//!
//! Identical parameters and seed always give the identical graph.

mod er;
mod hrg;
mod pa;
mod rrg;

use std::fmt;
use std::str::FromStr;

pub use er::gen_er;
pub use hrg::{connection_probability, gen_hrg, HrgOutput, HrgParams, HRG_DEGREE_TOLERANCE};
pub use pa::gen_pa;
pub use rrg::{gen_rrg, gen_rrg_with, RrgStrategy};

use crate::error::{invalid, Error, Result};
use crate::graph::{DegreeStats, Graph, NodeId};

/// Power-law exponent used for HRGs matched to a reference network.
pub const HRG_BETA: f64 = 2.5;
/// Temperature used for HRGs matched to a reference network.
pub const HRG_TEMPERATURE: f64 = 0.6;

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid(format!("cycle needs n >= 3 (got {n})")));
    }
    let pairs = (0..n as NodeId).map(|i| (i, ((i as usize + 1) % n) as NodeId)).collect();
    Ok(Graph::from_pairs(n, pairs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Er,
    Rrg,
    Pa,
    Hrg,
    Cycle,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(FamilyKind::Er),
            "rrg" => Ok(FamilyKind::Rrg),
            "pa" => Ok(FamilyKind::Pa),
            "hrg" => Ok(FamilyKind::Hrg),
            "cycle" => Ok(FamilyKind::Cycle),
            _ => Err(invalid(format!("unknown graph family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Er { q: f64 },
    Rrg { d: usize },
    Pa { m_out: usize },
    Hrg { avg_deg: f64, beta: f64, temperature: f64 },
    Cycle,
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Er { .. } => FamilyKind::Er,
            Family::Rrg { .. } => FamilyKind::Rrg,
            Family::Pa { .. } => FamilyKind::Pa,
            Family::Hrg { .. } => FamilyKind::Hrg,
            Family::Cycle => FamilyKind::Cycle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Er { q } => write!(f, "family=er n={} q={q}", self.n)?,
            Family::Rrg { d } => write!(f, "family=rrg n={} d={d}", self.n)?,
            Family::Pa { m_out } => write!(f, "family=pa n={} m_out={m_out}", self.n)?,
            Family::Hrg {
                avg_deg,
                beta,
                temperature,
            } => write!(
                f,
                "family=hrg n={} avg_deg={avg_deg} beta={beta} T={temperature}",
                self.n
            )?,
            Family::Cycle => write!(f, "family=cycle n={}", self.n)?,
        }
        write!(f, " seed={}", self.seed)
    }
}

/// A generated graph and, for HRGs, the disk it was drawn in.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub hrg: Option<(f64, f64)>,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Generated> {
        let graph = match self.family {
            Family::Er { q } => gen_er(self.n, q, self.seed)?,
            Family::Rrg { d } => gen_rrg(self.n, d, self.seed)?,
            Family::Pa { m_out } => gen_pa(self.n, m_out, self.seed)?,
            Family::Cycle => gen_cycle(self.n)?,
            Family::Hrg {
                avg_deg,
                beta,
                temperature,
            } => {
                let out = gen_hrg(
                    HrgParams {
                        n: self.n,
                        target_avg_deg: avg_deg,
                        beta,
                        temperature,
                    },
                    self.seed,
                )?;
                return Ok(Generated {
                    graph: out.graph,
                    hrg: Some((out.alpha, out.radius)),
                });
            }
        };
        Ok(Generated { graph, hrg: None })
    }
}

/// Integer degree nearest to `target` such that `n * d` is even.
pub fn even_degree_near(target: f64, n: usize) -> usize {
    let d = target.round().max(0.0) as usize;
    if n.is_multiple_of(2) || d.is_multiple_of(2) {
        return d;
    }
    let up = d + 1;
    match d.checked_sub(1) {
        Some(down) if (target - down as f64).abs() <= (up as f64 - target).abs() => down,
        _ => up,
    }
}

/// Parameters for a random graph with the reference's node count and, in
/// expectation, its edge count.
pub fn match_params(reference: &DegreeStats, family: FamilyKind, seed: u64) -> GenSpec {
    let n = reference.n;
    let avg = reference.avg();
    let family = match family {
        FamilyKind::Er => Family::Er {
            q: if n < 2 {
                0.0
            } else {
                2.0 * reference.m as f64 / (n as f64 * (n as f64 - 1.0))
            },
        },
        FamilyKind::Rrg => Family::Rrg {
            d: even_degree_near(avg, n),
        },
        FamilyKind::Pa => Family::Pa {
            m_out: ((avg / 2.0).round() as usize).max(1),
        },
        FamilyKind::Hrg => Family::Hrg {
            avg_deg: avg,
            beta: HRG_BETA,
            temperature: HRG_TEMPERATURE,
        },
        FamilyKind::Cycle => Family::Cycle,
    };
    GenSpec { family, n, seed }
}
