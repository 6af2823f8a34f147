use std::io::Write;

use majority_core::analysis::{
    apply_cm1, apply_cm2, conjecture_experiment, density_sweep, scan_elites, uniform_grid, EliteQuery, ScanStrategy,
    SweepSpec, WinCriterion,
};
use majority_core::dynamics::{
    classify_outcome, default_max_rounds, parse_fraction, random_coloring, run, trajectory, write_trajectory_csv,
    Coloring, ModelConfig, Stubbornness, Tolerances,
};
use majority_core::generators::{gen_hrg, match_params, Family, FamilyKind, GenSpec, HrgParams};
use majority_core::ingest::{load_edge_list, DatasetManifest};
use majority_core::report::{fmt_float, write_elite_csv, write_phase_csv, EliteRow, Provenance};
use majority_core::{seed, Error, Graph, Result};

use crate::args::{
    ConjectureArgs, Criterion, ElitesArgs, GenerateArgs, GraphArgs, ModelArgs, ModelKind, SimulateArgs, Strategy,
    SweepArgs, Tolerance,
};

/// Seed tags, so each random ingredient of a command draws from its own stream.
pub const TAG_GRAPH: u64 = 0;
pub const TAG_COLORING: u64 = 1;
pub const TAG_TRIALS: u64 = 2;
pub const TAG_OVERLAY: u64 = 3;
pub const TAG_VERIFY: u64 = 4;

pub fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub struct BuiltGraph {
    pub graph: Graph,
    /// HRG disk `(alpha, radius)` when the graph is hyperbolic.
    pub hrg: Option<(f64, f64)>,
}

pub fn has_source(ga: &GraphArgs) -> bool {
    ga.dataset.is_some() || ga.family.is_some()
}

fn required<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| invalid(format!("--family {family} needs --{flag}")))
}

fn gen_spec(ga: &GraphArgs, family: &str, seed: u64) -> Result<GenSpec> {
    let kind: FamilyKind = family.parse()?;
    let n = required(ga.n, "n", family)?;
    let family = match kind {
        FamilyKind::Er => Family::Er {
            q: match (ga.q, ga.avg_deg) {
                (Some(q), _) => q,
                (None, Some(a)) if n > 1 => a / (n - 1) as f64,
                (None, Some(_)) => 0.0,
                (None, None) => return Err(invalid("--family er needs --q or --avg-deg")),
            },
        },
        FamilyKind::Rrg => Family::Rrg {
            d: required(ga.d, "d", family)?,
        },
        FamilyKind::Pa => Family::Pa {
            m_out: required(ga.m_out, "m-out", family)?,
        },
        FamilyKind::Hrg => Family::Hrg {
            avg_deg: required(ga.avg_deg, "avg-deg", family)?,
            beta: ga.beta,
            temperature: ga.temperature,
        },
        FamilyKind::Cycle => Family::Cycle,
    };
    Ok(GenSpec { family, n, seed })
}

fn record_spec(prov: &mut Provenance, spec: &GenSpec) {
    for part in spec.to_string().split(' ') {
        if let Some((k, v)) = part.split_once('=') {
            if k != "seed" {
                prov.push(k, v);
            }
        }
    }
}

/// Loads or generates the graph described by `ga` and records its source.
pub fn build_graph(ga: &GraphArgs, base_seed: u64, prov: &mut Provenance) -> Result<BuiltGraph> {
    let graph_seed = seed::derive(base_seed, TAG_GRAPH, 0);
    if let Some(path) = &ga.dataset {
        let manifest = match &ga.manifest {
            Some(name) => DatasetManifest::reference(name, path)
                .ok_or_else(|| invalid(format!("unknown manifest {name:?} (expected FB, YT, SD or TW)")))?,
            None => DatasetManifest::custom(path),
        };
        let loaded = load_edge_list(path, &manifest)?;
        eprintln!(
            "loaded {}: {} nodes, {} edges ({} duplicates merged, {} self-loops dropped)",
            path.display(),
            loaded.graph.n(),
            loaded.graph.m(),
            loaded.duplicates_merged,
            loaded.self_loops
        );
        prov.push("dataset", path.display());
        if let Some(name) = &ga.manifest {
            prov.push("manifest", name.to_ascii_uppercase());
        }
        let Some(family) = &ga.matched else {
            return Ok(BuiltGraph {
                graph: loaded.graph,
                hrg: None,
            });
        };
        let stats = loaded.graph.degree_stats()?;
        let mut spec = match_params(&stats, family.parse()?, graph_seed);
        if let Family::Hrg { beta, temperature, .. } = &mut spec.family {
            *beta = ga.beta;
            *temperature = ga.temperature;
        }
        prov.push("matched", family.to_ascii_lowercase());
        record_spec(prov, &spec);
        let out = spec.generate()?;
        return Ok(BuiltGraph {
            graph: out.graph,
            hrg: out.hrg,
        });
    }
    let Some(family) = &ga.family else {
        return Err(invalid("no graph given: use --dataset PATH or --family FAMILY"));
    };
    let spec = gen_spec(ga, family, graph_seed)?;
    record_spec(prov, &spec);
    if let Family::Hrg {
        avg_deg,
        beta,
        temperature,
    } = spec.family
    {
        let out = gen_hrg(
            HrgParams {
                n: spec.n,
                target_avg_deg: avg_deg,
                beta,
                temperature,
            },
            graph_seed,
        )?;
        return Ok(BuiltGraph {
            graph: out.graph,
            hrg: Some((out.alpha, out.radius)),
        });
    }
    Ok(BuiltGraph {
        graph: spec.generate()?.graph,
        hrg: None,
    })
}

pub fn model_config(ma: &ModelArgs, prov: &mut Provenance) -> Result<ModelConfig> {
    let config = match ma.model {
        ModelKind::Majority => {
            prov.push("model", "majority");
            ModelConfig::majority()
        }
        ModelKind::Psi => {
            prov.push("model", "psi");
            prov.push("psi1", &ma.psi1);
            prov.push("psi2", &ma.psi2);
            ModelConfig::psi(parse_fraction(&ma.psi1)?, parse_fraction(&ma.psi2)?)?
        }
    };
    match &ma.gamma {
        None => Ok(config),
        Some(g) => {
            prov.push("gamma", g);
            config.with_stubbornness(Stubbornness::Uniform(parse_fraction(g)?))
        }
    }
}

pub fn tolerances(t: &Tolerance, prov: &mut Provenance) -> Tolerances {
    prov.push("mono_tol", fmt_float(t.mono));
    prov.push("balance_tol", fmt_float(t.balance));
    let opt = |x: f64| (x >= 0.0).then_some(x);
    Tolerances {
        mono: opt(t.mono),
        balance: opt(t.balance),
    }
}

pub fn generate(a: &GenerateArgs, base_seed: u64, out: &mut dyn Write) -> Result<()> {
    let mut prov = Provenance::new("generate").with("seed", base_seed);
    let built = build_graph(&a.graph, base_seed, &mut prov)?;
    let g = &built.graph;
    if let Ok(stats) = g.degree_stats() {
        prov.push("nodes", stats.n);
        prov.push("edges", stats.m);
        prov.push("avg_degree", fmt_float(stats.avg()));
        prov.push("min_degree", stats.min_degree);
        prov.push("max_degree", stats.max_degree);
    }
    if let Some((alpha, radius)) = built.hrg {
        prov.push("alpha", fmt_float(alpha));
        prov.push("radius", fmt_float(radius));
    }
    prov.write(out)?;
    g.write_edge_list(out)?;
    Ok(())
}

pub fn simulate(a: &SimulateArgs, base_seed: u64, out: &mut dyn Write) -> Result<()> {
    let mut prov = Provenance::new("simulate").with("seed", base_seed);
    let g = build_graph(&a.graph, base_seed, &mut prov)?.graph;
    let config = model_config(&a.model, &mut prov)?;
    let tol = tolerances(&a.tol, &mut prov);
    let initial = match &a.coloring {
        Some(pattern) => {
            let c = Coloring::from_pattern(pattern)?;
            if c.len() != g.n() {
                return Err(invalid(format!("coloring has {} nodes, graph has {}", c.len(), g.n())));
            }
            prov.push("coloring", pattern);
            c
        }
        None => {
            prov.push("p_b", fmt_float(a.p_b));
            random_coloring(g.n(), a.p_b, seed::derive(base_seed, TAG_COLORING, 0))?
        }
    };
    let max_rounds = a.max_rounds.unwrap_or_else(|| default_max_rounds(&g));
    prov.push("max_rounds", max_rounds);
    prov.write(out)?;
    if a.trajectory {
        let rows = trajectory(&g, &initial, &config, max_rounds)?;
        write_trajectory_csv(out, &rows)?;
        return Ok(());
    }
    let result = run(&g, &initial, &config, max_rounds)?;
    writeln!(out, "n,initial_black,final_black_frac,stab_time,period,label")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        g.n(),
        initial.count_black(),
        fmt_float(result.final_black_fraction()),
        result.stabilization_time,
        result.period,
        classify_outcome(&result, g.n(), tol)
    )?;
    Ok(())
}

pub fn elites(a: &ElitesArgs, base_seed: u64, out: &mut dyn Write) -> Result<()> {
    let mut prov = Provenance::new("elites").with("seed", base_seed);
    let g = build_graph(&a.graph, base_seed, &mut prov)?.graph;
    let criterion = match a.criterion {
        Criterion::Wins => WinCriterion::Wins,
        Criterion::TakesOver => WinCriterion::TakesOver,
    };
    let strategy = match a.strategy {
        Strategy::Ascending => ScanStrategy::Ascending,
        Strategy::Galloping => ScanStrategy::Galloping,
    };
    let resolution = a
        .resolution
        .unwrap_or_else(|| majority_core::analysis::default_resolution(g.n()));
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(invalid(format!("resolution must be in (0, 1] (got {resolution})")));
    }
    prov.push("criterion", criterion);
    prov.push("resolution", fmt_float(resolution));
    prov.push("countermeasure", if a.cm1 { "cm1" } else if a.cm2 { "cm2" } else { "none" });
    let mut rows = Vec::with_capacity(a.r.len());
    for &r in &a.r {
        let overlay;
        let graph = if a.cm1 {
            overlay = apply_cm1(&g, r, seed::derive(base_seed, TAG_OVERLAY, r))?;
            &overlay
        } else {
            &g
        };
        let config = if a.cm2 { apply_cm2(r)? } else { ModelConfig::majority() };
        let query = EliteQuery::new(graph, r, criterion).with_config(config);
        let scan = scan_elites(&query, resolution, strategy)?;
        eprintln!("r={r}: fraction {} after {} simulations", fmt_float(scan.fraction), scan.evaluated);
        rows.push(EliteRow {
            r,
            min_fraction: scan.fraction,
            criterion,
        });
    }
    write_elite_csv(out, &prov, &rows)?;
    Ok(())
}

/// Returns false when every trial failed.
pub fn sweep(a: &SweepArgs, base_seed: u64, out: &mut dyn Write) -> Result<bool> {
    let mut prov = Provenance::new("sweep").with("seed", base_seed);
    let g = build_graph(&a.graph, base_seed, &mut prov)?.graph;
    let config = model_config(&a.model, &mut prov)?;
    let tol = tolerances(&a.tol, &mut prov);
    let grid = if a.grid.is_empty() {
        if !(a.step > 0.0 && a.step <= 1.0) {
            return Err(invalid(format!("step must be in (0, 1] (got {})", a.step)));
        }
        uniform_grid((1.0 / a.step).round() as usize)
    } else {
        a.grid.clone()
    };
    let mut spec = SweepSpec::new(config, grid, seed::derive(base_seed, TAG_TRIALS, 0));
    spec.trials = a.trials;
    spec.tolerances = tol;
    spec.max_rounds = a.max_rounds;
    prov.push("trials", a.trials);
    prov.push(
        "grid",
        spec.grid.iter().map(|&p| fmt_float(p)).collect::<Vec<_>>().join(" "),
    );
    if let Some(m) = a.max_rounds {
        prov.push("max_rounds", m);
    }
    let report = density_sweep(&g, &spec)?;
    write_phase_csv(out, &prov, &report)?;
    Ok(report.rows.iter().any(|r| r.failed < r.trials))
}

pub fn conjecture(a: &ConjectureArgs, base_seed: u64, out: &mut dyn Write) -> Result<bool> {
    let mut prov = Provenance::new("conjecture")
        .with("seed", base_seed)
        .with("n", a.n)
        .with("trials", a.trials)
        .with("c", a.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
    let tol = tolerances(&a.tol, &mut prov);
    let report = conjecture_experiment(a.n, &a.c, a.trials, base_seed, tol)?;
    write_phase_csv(out, &prov, &report)?;
    Ok(report.rows.iter().any(|r| r.failed < r.trials))
}
