use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::seed;

const BISECTION_STEPS: usize = 40;
/// Pair sample used to estimate the expected average degree during calibration.
const CALIBRATION_PAIRS: usize = 2_000_000;
/// Allowed relative gap between realized and target average degree.
pub const HRG_DEGREE_TOLERANCE: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HrgParams {
    pub n: usize,
    pub target_avg_deg: f64,
    /// Power-law exponent of the degree distribution.
    pub beta: f64,
    pub temperature: f64,
}

/// Graph plus the disk parameters it was drawn with.
#[derive(Debug, Clone)]
pub struct HrgOutput {
    pub graph: Graph,
    pub alpha: f64,
    pub radius: f64,
    pub realized_avg_deg: f64,
}

/// Connection probability at hyperbolic distance `dist` in a disk of radius `radius`.
pub fn connection_probability(dist: f64, radius: f64, temperature: f64) -> f64 {
    1.0 / (1.0 + ((dist - radius) / (2.0 * temperature)).exp())
}

struct Layout {
    alpha: f64,
    /// Radial CDF quantile per node; the radius follows from the disk size.
    quantile: Vec<f64>,
    cos_t: Vec<f64>,
    sin_t: Vec<f64>,
}

#[derive(Clone)]
struct Placed {
    cosh_r: Vec<f64>,
    sinh_r: Vec<f64>,
}

impl Layout {
    fn place(&self, radius: f64) -> Placed {
        let c = (self.alpha * radius).cosh() - 1.0;
        let (cosh_r, sinh_r) = self
            .quantile
            .iter()
            .map(|&u| {
                // inverse CDF of density alpha*sinh(alpha r)/(cosh(alpha R)-1)
                let r = (1.0 + u * c).acosh() / self.alpha;
                (r.cosh(), r.sinh())
            })
            .unzip();
        Placed { cosh_r, sinh_r }
    }

    fn distance(&self, p: &Placed, i: usize, j: usize) -> f64 {
        let cos_dt = self.cos_t[i] * self.cos_t[j] + self.sin_t[i] * self.sin_t[j];
        let x = p.cosh_r[i] * p.cosh_r[j] - p.sinh_r[i] * p.sinh_r[j] * cos_dt;
        x.max(1.0).acosh()
    }

    fn expected_avg_degree(&self, radius: f64, temperature: f64, pairs: &[(u32, u32)]) -> f64 {
        let p = self.place(radius);
        let n = self.quantile.len() as f64;
        let mean: f64 = pairs
            .par_iter()
            .map(|&(i, j)| {
                connection_probability(self.distance(&p, i as usize, j as usize), radius, temperature)
            })
            .sum::<f64>()
            / pairs.len() as f64;
        mean * (n - 1.0)
    }
}

/// Hyperbolic random graph in the temperature model: angles uniform,
/// radii with density `α sinh(αr) / (cosh(αR) - 1)` where `α = (β-1)/2`,
/// and each pair joined with probability `1 / (1 + exp((dist - R) / 2T))`.
/// The disk radius `R` is found by bisection so the expected average degree
/// meets the target.
pub fn gen_hrg(params: HrgParams, seed: u64) -> Result<HrgOutput> {
    let HrgParams {
        n,
        target_avg_deg,
        beta,
        temperature,
    } = params;
    if beta <= 2.0 {
        return Err(invalid(format!("HRG needs beta > 2 (got {beta})")));
    }
    if !(temperature > 0.0 && temperature < 1.0) {
        return Err(invalid(format!("HRG needs T in (0,1) (got {temperature})")));
    }
    if n < 2 || target_avg_deg.is_nan() || target_avg_deg <= 0.0 || target_avg_deg >= (n - 1) as f64 {
        return Err(invalid(format!("HRG target degree {target_avg_deg} infeasible for n={n}")));
    }
    let alpha = (beta - 1.0) / 2.0;

    let mut rng = seed::rng(seed::derive(seed, 0x0048_5247, 0));
    let mut layout = Layout {
        alpha,
        quantile: Vec::with_capacity(n),
        cos_t: Vec::with_capacity(n),
        sin_t: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let theta = rng.gen::<f64>() * TAU;
        layout.quantile.push(rng.gen::<f64>());
        layout.cos_t.push(theta.cos());
        layout.sin_t.push(theta.sin());
    }

    let all_pairs = n * (n - 1) / 2;
    let sample: Vec<(u32, u32)> = if all_pairs <= CALIBRATION_PAIRS {
        (0..n as u32).flat_map(|i| (i + 1..n as u32).map(move |j| (i, j))).collect()
    } else {
        (0..CALIBRATION_PAIRS)
            .map(|_| loop {
                let i = rng.gen_range(0..n as u32);
                let j = rng.gen_range(0..n as u32);
                if i != j {
                    break (i, j);
                }
            })
            .collect()
    };

    // Expected degree falls as the disk grows; bracket the target first.
    let degree_at = |r: f64| layout.expected_avg_degree(r, temperature, &sample);
    let mut lo = 0.0f64;
    let mut hi = 2.0 * (n as f64).ln().max(1.0);
    let mut grow = 0;
    while degree_at(hi) > target_avg_deg {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 20 {
            return Err(Error::Calibration(format!(
                "no radius reaches average degree {target_avg_deg}"
            )));
        }
    }
    if degree_at(lo.max(1e-9)) < target_avg_deg {
        return Err(Error::Calibration(format!(
            "average degree {target_avg_deg} exceeds what radius {lo} gives"
        )));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if degree_at(mid) > target_avg_deg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    let placed = layout.place(radius);

    let rows: Vec<Vec<(NodeId, NodeId)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed::derive(seed, 0x0048_5247, 1 + i as u64));
            let mut row = Vec::new();
            for j in i + 1..n {
                let p = connection_probability(layout.distance(&placed, i, j), radius, temperature);
                if rng.gen::<f64>() < p {
                    row.push((i as NodeId, j as NodeId));
                }
            }
            row
        })
        .collect();
    let graph = Graph::from_pairs(n, rows.into_iter().flatten().collect());
    let realized = 2.0 * graph.m() as f64 / n as f64;
    if (realized - target_avg_deg).abs() > HRG_DEGREE_TOLERANCE * target_avg_deg {
        return Err(Error::Calibration(format!(
            "realized average degree {realized:.3} misses target {target_avg_deg} by more than 10% \
             after {BISECTION_STEPS} bisection steps (R={radius:.4})"
        )));
    }
    Ok(HrgOutput {
        graph,
        alpha,
        radius,
        realized_avg_deg: realized,
    })
}
