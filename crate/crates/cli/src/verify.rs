use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use majority_core::analysis::{alternating_path_bound, stubbornness_bound, verify_mixing};
use majority_core::dynamics::{
    parse_fraction, random_coloring, run, step, Coloring, Fraction, ModelConfig, Stubbornness,
};
use majority_core::generators::{gen_cycle, gen_er, gen_rrg};
use majority_core::potential::certify_descent;
use majority_core::report::Provenance;
use majority_core::{seed, Graph, NodeSet, Result};

use crate::args::{Suite, VerifyArgs};
use crate::commands::{build_graph, has_source, invalid, TAG_COLORING, TAG_VERIFY};

pub struct SuiteResult {
    pub passed: bool,
    pub detail: String,
}

fn result(passed: bool, detail: String) -> SuiteResult {
    SuiteResult { passed, detail }
}

fn random_graph(rng: &mut impl Rng, n: usize) -> Result<Graph> {
    let q = rng.gen_range(0.02..0.6);
    gen_er(n, q, rng.gen())
}

fn random_psi(rng: &mut impl Rng) -> Fraction {
    Fraction::new(rng.gen_range(51..=100), 100)
}

fn random_config(rng: &mut impl Rng, n: usize) -> Result<ModelConfig> {
    match rng.gen_range(0..4) {
        0 => Ok(ModelConfig::majority()),
        1 => ModelConfig::psi(random_psi(rng), random_psi(rng)),
        2 => ModelConfig::majority().with_influence((0..n).map(|_| rng.gen_range(1..=16)).collect()),
        _ => {
            let gammas = (0..n).map(|_| Fraction::new(rng.gen_range(1..100), 100)).collect();
            ModelConfig::majority()
                .with_influence((0..n).map(|_| rng.gen_range(1..=4)).collect())?
                .with_stubbornness(Stubbornness::PerNode(gammas))
        }
    }
}

/// Runs `suite`. The potential suite on a single given graph writes its
/// certificate to `out`; every other suite writes nothing there.
pub fn verify(a: &VerifyArgs, base_seed: u64, out: &mut dyn Write) -> Result<SuiteResult> {
    let base = seed::derive(base_seed, TAG_VERIFY, 0);
    match a.suite {
        Suite::Period => period(a, base_seed),
        Suite::Potential if has_source(&a.graph) => single_certificate(a, base_seed, out),
        Suite::Potential => potential(a, base),
        Suite::Mixing => mixing(a, base_seed),
        Suite::Cycle => cycle(a, base),
        Suite::Stubbornness => stubbornness(a, base),
    }
}

fn period(a: &VerifyArgs, base_seed: u64) -> Result<SuiteResult> {
    let base = seed::derive(base_seed, TAG_VERIFY, 0);
    let instances = a.instances.unwrap_or(10_000);
    let max_n = a.max_n.unwrap_or(200).max(1);
    let fixed = if has_source(&a.graph) {
        Some(build_graph(&a.graph, base_seed, &mut Provenance::default())?.graph)
    } else {
        None
    };
    let bad: Vec<String> = (0..instances as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = seed::rng(seed::derive(base, 1, i));
            let outcome = (|| {
                let g = match &fixed {
                    Some(g) => g.clone(),
                    None => {
                        let n = rng.gen_range(1..=max_n);
                        random_graph(&mut rng, n)?
                    }
                };
                let config = random_config(&mut rng, g.n())?;
                let c = random_coloring(g.n(), rng.gen(), rng.gen())?;
                run(&g, &c, &config, 4 * g.m() + 10)
            })();
            match outcome {
                Ok(r) if r.period <= 2 => None,
                Ok(r) => Some(format!("instance {i}: period {}", r.period)),
                Err(e) => Some(format!("instance {i}: {e}")),
            }
        })
        .collect();
    Ok(result(
        bad.is_empty(),
        format!(
            "{instances} instances, {} not in a cycle of length 1 or 2 within 4m+10 rounds{}",
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    ))
}

fn psis(a: &VerifyArgs) -> Result<Vec<Fraction>> {
    a.psi.iter().map(|s| parse_fraction(s)).collect()
}

fn potential(a: &VerifyArgs, base: u64) -> Result<SuiteResult> {
    let n = a.graph.n.unwrap_or(8);
    if a.exhaustive && n > 20 {
        return Err(invalid(format!("--exhaustive enumerates 2^n colorings; n={n} is too large")));
    }
    let psis = psis(a)?;
    let graphs: Vec<Graph> = (0..a.graphs)
        .map(|i| gen_er(n, 0.25 + 0.5 * i as f64 / a.graphs.max(1) as f64, seed::derive(base, 2, i as u64)))
        .collect::<Result<_>>()?;
    let colorings: Vec<(usize, u64)> = if a.exhaustive {
        (0..graphs.len()).flat_map(|gi| (0..1u64 << n).map(move |b| (gi, b))).collect()
    } else {
        let per = a.instances.unwrap_or(64) as u64;
        (0..graphs.len()).flat_map(|gi| (0..per).map(move |j| (gi, j))).collect()
    };
    let jobs: Vec<(usize, usize, u64)> = colorings
        .iter()
        .flat_map(|&(gi, b)| (0..psis.len()).map(move |pi| (gi, pi, b)))
        .collect();
    let outcomes: Vec<Result<(Option<String>, usize)>> = jobs
        .par_iter()
        .map(|&(gi, pi, b)| {
            let c = if a.exhaustive {
                Coloring::from_bits(n, b)
            } else {
                random_coloring(n, 0.5, seed::derive(base, 3 + gi as u64, b))?
            };
            let cert = certify_descent(&graphs[gi], psis[pi], &c, 16 * n * n + 10)?;
            let fail = cert
                .violations
                .first()
                .map(|v| format!("graph {gi} psi {} coloring {}: {}", psis[pi], c.to_pattern(), v.detail));
            Ok((fail, cert.phi_stalls))
        })
        .collect();
    let mut failures = Vec::new();
    let mut stalls = 0;
    for o in outcomes {
        let (fail, s) = o?;
        stalls += s;
        failures.extend(fail);
    }
    Ok(result(
        failures.is_empty(),
        format!(
            "{} certificates on {} graphs with n={n}, {} failed, phi1+phi2/2 flat over {stalls} active round pairs{}",
            jobs.len(),
            graphs.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    ))
}

fn single_certificate(a: &VerifyArgs, base_seed: u64, out: &mut dyn Write) -> Result<SuiteResult> {
    let g = build_graph(&a.graph, base_seed, &mut Provenance::default())?.graph;
    let psi = *psis(a)?.first().ok_or_else(|| invalid("--psi needs a value"))?;
    let c = match &a.coloring {
        Some(p) => {
            let c = Coloring::from_pattern(p)?;
            if c.len() != g.n() {
                return Err(invalid(format!("coloring has {} nodes, graph has {}", c.len(), g.n())));
            }
            c
        }
        None => random_coloring(g.n(), 0.5, seed::derive(base_seed, TAG_COLORING, 0))?,
    };
    let cert = certify_descent(&g, psi, &c, 4 * g.m() + 10)?;
    cert.write_csv(&mut *out)?;
    Ok(result(
        cert.passed(),
        format!(
            "psi={psi} m*={} fixation round {} (bound {}), G stabilizes at {}, {} violations{}",
            cert.m_star,
            cert.fixation_round,
            4 * cert.m_star,
            cert.g_stabilization,
            cert.violations.len(),
            cert.violations.first().map(|v| format!(" (first: {})", v.detail)).unwrap_or_default()
        ),
    ))
}

fn mixing(a: &VerifyArgs, base_seed: u64) -> Result<SuiteResult> {
    let g = if has_source(&a.graph) {
        build_graph(&a.graph, base_seed, &mut Provenance::default())?.graph
    } else {
        gen_rrg(2000, 16, seed::derive(base_seed, 0, 0))?
    };
    let report = verify_mixing(&g, a.samples, seed::derive(base_seed, TAG_VERIFY, 1))?;
    Ok(result(
        report.passed(),
        format!(
            "d={} sigma={:.4}, {} set pairs, {} violations, max slack ratio {:.3}",
            report.d,
            report.sigma,
            report.samples,
            report.violations.len(),
            report.max_slack_ratio
        ),
    ))
}

fn cycle(a: &VerifyArgs, base: u64) -> Result<SuiteResult> {
    let n = a.graph.n.unwrap_or(100_000);
    let g = gen_cycle(n)?;
    let trials: Vec<(usize, usize)> = (0..a.trials as u64)
        .into_par_iter()
        .map(|s| {
            let c = random_coloring(n, 0.5, seed::derive(base, 4, s))?;
            let path = alternating_path_bound(&g, &c)?;
            let res = run(&g, &c, &ModelConfig::majority(), 10 * n)?;
            Ok((res.stabilization_time, path.length))
        })
        .collect::<Result<_>>()?;
    let log_n = (n as f64).log2();
    let within_log = trials.iter().filter(|(t, _)| *t as f64 <= log_n).count();
    let bad = trials.iter().filter(|&&(t, l)| t > l.div_ceil(2)).count();
    Ok(result(
        bad == 0,
        format!(
            "{} colorings of C_{n}, {bad} exceed half the longest alternating path, \
             {within_log} stabilize within log2 n = {log_n:.1}; (stabilization, path) {trials:?}",
            trials.len()
        ),
    ))
}

fn stubbornness(a: &VerifyArgs, base: u64) -> Result<SuiteResult> {
    let wanted = a.instances.unwrap_or(50);
    let max_n = a.max_n.unwrap_or(100).max(10);
    let mut instances = 0;
    let mut failures = Vec::new();
    let mut attempt = 0u64;
    while instances < wanted {
        attempt += 1;
        if attempt > 1000 * (wanted as u64 + 1) {
            return Err(invalid("too few feasible stubbornness instances; raise --max-n"));
        }
        let mut rng = seed::rng(seed::derive(base, 5, attempt));
        let n = rng.gen_range(10..=max_n);
        let g = random_graph(&mut rng, n)?;
        let zsize = rng.gen_range(1..n.div_ceil(2));
        let z = NodeSet::new(rand::seq::index::sample(&mut rng, n, zsize), n)?;
        let r = rng.gen_range(1..=10);
        let bound = stubbornness_bound(&g, &z, r)?;
        if !bound.feasible {
            continue;
        }
        instances += 1;
        let gamma = bound.gamma_min + Fraction::new(1, 1_000_000_000);
        let mut influence = vec![1; n];
        let mut c = Coloring::all_white(n);
        for v in z.iter() {
            influence[v] = r;
            c.set(v, true);
        }
        let config = ModelConfig::majority()
            .with_influence(influence)?
            .with_stubbornness(Stubbornness::Uniform(gamma))?;
        let horizon = run(&g, &c, &config, 4 * g.m() + 10)?.stabilization_time + 2;
        for t in 1..=horizon {
            c = step(&g, &c, &config)?;
            if let Some(v) = (0..n).find(|&v| !z.contains(v) && c.is_black(v)) {
                failures.push(format!("attempt {attempt}: node {v} black at round {t}"));
                break;
            }
        }
    }
    Ok(result(
        failures.is_empty(),
        format!(
            "{instances} feasible instances at gamma just above the bound, {} with a converted node{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    ))
}
