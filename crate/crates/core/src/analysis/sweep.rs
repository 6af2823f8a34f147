use rayon::prelude::*;

use crate::dynamics::{
    classify_outcome, default_max_rounds, random_coloring, run, ModelConfig, OutcomeLabel, Tolerances,
};
use crate::error::{invalid, Error, Result};
use crate::generators::gen_er;
use crate::graph::Graph;
use crate::seed;

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub config: ModelConfig,
    /// Initial black probabilities.
    pub grid: Vec<f64>,
    pub trials: usize,
    /// Trial `i` colors with seed `base_seed + i`.
    pub base_seed: u64,
    pub tolerances: Tolerances,
    /// `None` uses [`default_max_rounds`].
    pub max_rounds: Option<usize>,
}

impl SweepSpec {
    pub fn new(config: ModelConfig, grid: Vec<f64>, base_seed: u64) -> SweepSpec {
        SweepSpec {
            config,
            grid,
            trials: 8,
            base_seed,
            tolerances: Tolerances::default(),
            max_rounds: None,
        }
    }
}

/// `steps + 1` evenly spaced points from 0 to 1.
pub fn uniform_grid(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    /// `p_b` for density sweeps, `c` for the conjecture experiment.
    pub param: f64,
    /// Over completed trials.
    pub mean_black_fraction: f64,
    pub mean_stabilization: f64,
    pub trials: usize,
    /// Trials that hit the round cap.
    pub failed: usize,
    /// Counts aligned with [`OutcomeLabel::ALL`].
    pub labels: [usize; 7],
}

impl PhaseRow {
    pub fn count(&self, label: OutcomeLabel) -> usize {
        self.labels[label_index(label)]
    }

    /// Trials whose final coloring keeps both colors.
    pub fn both_survive(&self) -> usize {
        OutcomeLabel::ALL
            .iter()
            .zip(&self.labels)
            .filter(|(l, _)| l.both_survive())
            .map(|(_, c)| c)
            .sum()
    }
}

fn label_index(label: OutcomeLabel) -> usize {
    OutcomeLabel::ALL.iter().position(|&l| l == label).unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport {
    /// Column name of `PhaseRow::param`.
    pub param_name: String,
    pub rows: Vec<PhaseRow>,
}

struct Trial {
    black_fraction: f64,
    stabilization: usize,
    label: OutcomeLabel,
}

fn aggregate(param: f64, trials: Vec<Result<Trial>>) -> Result<PhaseRow> {
    let mut row = PhaseRow {
        param,
        mean_black_fraction: 0.0,
        mean_stabilization: 0.0,
        trials: trials.len(),
        failed: 0,
        labels: [0; 7],
    };
    let mut done = 0usize;
    for t in trials {
        match t {
            Ok(t) => {
                done += 1;
                row.mean_black_fraction += t.black_fraction;
                row.mean_stabilization += t.stabilization as f64;
                row.labels[label_index(t.label)] += 1;
            }
            Err(Error::Timeout { .. }) => row.failed += 1,
            Err(e) => return Err(e),
        }
    }
    if done > 0 {
        row.mean_black_fraction /= done as f64;
        row.mean_stabilization /= done as f64;
    } else {
        row.mean_black_fraction = f64::NAN;
        row.mean_stabilization = f64::NAN;
    }
    Ok(row)
}

fn one_trial(g: &Graph, config: &ModelConfig, p_b: f64, seed: u64, tol: Tolerances, cap: usize) -> Result<Trial> {
    let initial = random_coloring(g.n(), p_b, seed)?;
    let res = run(g, &initial, config, cap)?;
    Ok(Trial {
        black_fraction: res.final_black_fraction(),
        stabilization: res.stabilization_time,
        label: classify_outcome(&res, g.n(), tol),
    })
}

/// Runs `trials` random initial colorings per grid point on a fixed graph.
/// Trials run concurrently and are folded in index order.
pub fn density_sweep(g: &Graph, spec: &SweepSpec) -> Result<PhaseReport> {
    if spec.trials == 0 {
        return Err(invalid("sweep needs at least one trial"));
    }
    if let Some(p) = spec.grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(invalid(format!("grid point {p} outside [0, 1]")));
    }
    spec.config.validate_for(g.n())?;
    let cap = spec.max_rounds.unwrap_or_else(|| default_max_rounds(g));
    let rows = spec
        .grid
        .iter()
        .map(|&p_b| {
            let trials: Vec<Result<Trial>> = (0..spec.trials)
                .into_par_iter()
                .map(|i| one_trial(g, &spec.config, p_b, spec.base_seed.wrapping_add(i as u64), spec.tolerances, cap))
                .collect();
            aggregate(p_b, trials)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseReport {
        param_name: "p_b".into(),
        rows,
    })
}

/// Majority model from a fair coin coloring on a fresh `ER(n, c/n)` per
/// trial, for each `c`.
pub fn conjecture_experiment(
    n: usize,
    c_values: &[f64],
    trials: usize,
    seed: u64,
    tolerances: Tolerances,
) -> Result<PhaseReport> {
    if trials == 0 || n == 0 {
        return Err(invalid("conjecture experiment needs n >= 1 and trials >= 1"));
    }
    let config = ModelConfig::majority();
    let rows = c_values
        .iter()
        .enumerate()
        .map(|(ci, &c)| {
            let q = c / n as f64;
            if !(0.0..=1.0).contains(&q) {
                return Err(invalid(format!("c={c} gives edge probability outside [0, 1]")));
            }
            let results: Vec<Result<Trial>> = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let g = gen_er(n, q, seed::derive(seed, 2 * ci as u64, i as u64))?;
                    let color_seed = seed::derive(seed, 2 * ci as u64 + 1, i as u64);
                    one_trial(&g, &config, 0.5, color_seed, tolerances, default_max_rounds(&g))
                })
                .collect();
            aggregate(c, results)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseReport {
        param_name: "c".into(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_rrg;

    #[test]
    fn zero_density_stays_white() {
        let g = gen_rrg(200, 4, 1).unwrap();
        let spec = SweepSpec::new(ModelConfig::majority(), vec![0.0, 1.0], 3);
        let report = density_sweep(&g, &spec).unwrap();
        assert_eq!(report.rows[0].mean_black_fraction, 0.0);
        assert_eq!(report.rows[0].count(OutcomeLabel::WhiteTakesOver), 8);
        assert_eq!(report.rows[1].count(OutcomeLabel::BlackTakesOver), 8);
        assert_eq!(report.rows[1].mean_stabilization, 0.0);
    }

    #[test]
    fn reproducible_and_ordered() {
        let g = gen_rrg(300, 6, 2).unwrap();
        let spec = SweepSpec::new(ModelConfig::majority(), uniform_grid(4), 11);
        let a = density_sweep(&g, &spec).unwrap();
        let b = density_sweep(&g, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.iter().map(|r| r.param).collect::<Vec<_>>(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        for row in &a.rows {
            assert_eq!(row.labels.iter().sum::<usize>() + row.failed, row.trials);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let g = gen_rrg(20, 2, 0).unwrap();
        let mut spec = SweepSpec::new(ModelConfig::majority(), vec![1.5], 0);
        assert!(density_sweep(&g, &spec).is_err());
        spec.grid = vec![0.5];
        spec.trials = 0;
        assert!(density_sweep(&g, &spec).is_err());
    }

    #[test]
    fn round_cap_counts_as_failed_trial() {
        // alternating blocks on a cycle need several rounds to settle
        let g = crate::generators::gen_cycle(400).unwrap();
        let mut spec = SweepSpec::new(ModelConfig::majority(), vec![0.5], 5);
        spec.max_rounds = Some(1);
        let row = &density_sweep(&g, &spec).unwrap().rows[0];
        assert!(row.failed > 0);
    }

    #[test]
    fn empty_er_keeps_the_initial_balance() {
        let report = conjecture_experiment(2000, &[0.0], 4, 1, Tolerances::default()).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.count(OutcomeLabel::AlmostBalanced), 4);
        assert_eq!(row.mean_stabilization, 0.0);
        assert_eq!(report.param_name, "c");
    }
}
