use num_rational::Ratio;

use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Exact non-negative fraction used for every threshold.
pub type Fraction = Ratio<u64>;

/// Parses `"0.7"`, `"7/10"` or `"1"` into an exact fraction.
pub fn parse_fraction(s: &str) -> Result<Fraction> {
    let s = s.trim();
    let bad = || invalid(format!("cannot parse {s:?} as a fraction"));
    if let Some((a, b)) = s.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let den = 10u64.pow(frac.len() as u32);
    let num = if frac.is_empty() { 0 } else { frac.parse::<u64>().map_err(|_| bad())? };
    int.checked_mul(den)
        .and_then(|x| x.checked_add(num))
        .map(|x| Ratio::new(x, den))
        .ok_or_else(bad)
}

pub fn fraction_to_f64(f: Fraction) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    /// Adopt the strict weighted majority of the neighborhood; ties keep.
    Majority,
    /// A black node turns white once at least `black` of its (weighted)
    /// neighborhood is white; a white node turns black once at least `white`
    /// of it is black.
    Psi { black: Fraction, white: Fraction },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stubbornness {
    Uniform(Fraction),
    PerNode(Vec<Fraction>),
}

impl Stubbornness {
    fn of(&self, v: usize) -> Fraction {
        match self {
            Stubbornness::Uniform(g) => *g,
            Stubbornness::PerNode(gs) => gs[v],
        }
    }
}

/// Update rule plus per-node influence (`r`, weight a node's color carries
/// in its neighbors' tallies) and optional stubbornness (`γ`, the opposing
/// share a node needs before it flips).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConfig {
    pub variant: Variant,
    pub influence: Option<Vec<u64>>,
    pub stubbornness: Option<Stubbornness>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig::majority()
    }
}

fn in_half_open_half_one(f: Fraction) -> bool {
    f > Ratio::new(1, 2) && f <= Ratio::from_integer(1)
}

fn in_open_unit(f: Fraction) -> bool {
    f > Ratio::from_integer(0) && f < Ratio::from_integer(1)
}

impl ModelConfig {
    pub fn majority() -> ModelConfig {
        ModelConfig {
            variant: Variant::Majority,
            influence: None,
            stubbornness: None,
        }
    }

    /// The (ψ₁,ψ₂)-majority model; both thresholds must lie in (1/2, 1].
    pub fn psi(black: Fraction, white: Fraction) -> Result<ModelConfig> {
        for (name, f) in [("psi1", black), ("psi2", white)] {
            if !in_half_open_half_one(f) {
                return Err(invalid(format!("{name}={f} outside (1/2, 1]")));
            }
        }
        Ok(ModelConfig {
            variant: Variant::Psi { black, white },
            influence: None,
            stubbornness: None,
        })
    }

    pub fn with_influence(mut self, influence: Vec<u64>) -> Result<ModelConfig> {
        if influence.contains(&0) {
            return Err(invalid("influence factors must be positive"));
        }
        self.influence = Some(influence);
        Ok(self)
    }

    pub fn with_stubbornness(mut self, s: Stubbornness) -> Result<ModelConfig> {
        if matches!(self.variant, Variant::Psi { .. }) {
            return Err(invalid("stubbornness cannot be combined with the psi variant"));
        }
        let ok = match &s {
            Stubbornness::Uniform(g) => in_open_unit(*g),
            Stubbornness::PerNode(gs) => gs.iter().all(|&g| in_open_unit(g)),
        };
        if !ok {
            return Err(invalid("stubbornness factors must lie in (0, 1)"));
        }
        self.stubbornness = Some(s);
        Ok(self)
    }

    pub fn influence_of(&self, v: usize) -> u64 {
        self.influence.as_ref().map_or(1, |r| r[v])
    }

    /// Checks per-node vectors against a graph size.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if let Some(r) = &self.influence {
            if r.len() != n {
                return Err(invalid(format!("influence has {} entries for {n} nodes", r.len())));
            }
        }
        if let Some(Stubbornness::PerNode(gs)) = &self.stubbornness {
            if gs.len() != n {
                return Err(invalid(format!("stubbornness has {} entries for {n} nodes", gs.len())));
            }
        }
        if self.stubbornness.is_some() && matches!(self.variant, Variant::Psi { .. }) {
            return Err(invalid("stubbornness cannot be combined with the psi variant"));
        }
        Ok(())
    }

    /// Does a node whose opposing weight is `opp` out of `total` change color?
    pub fn flips(&self, v: usize, is_black: bool, opp: u64, total: u64) -> bool {
        if total == 0 {
            return false;
        }
        let (opp, total) = (opp as u128, total as u128);
        let at_least = |f: Fraction| opp * *f.denom() as u128 >= *f.numer() as u128 * total;
        if let Some(s) = &self.stubbornness {
            return at_least(s.of(v));
        }
        match self.variant {
            Variant::Majority => 2 * opp > total,
            Variant::Psi { black, white } => at_least(if is_black { black } else { white }),
        }
    }
}

/// Per-node integer thresholds precomputed for one (graph, config) pair.
/// Total neighborhood weight is constant across rounds, so every rational
/// comparison reduces to `opposing weight >= threshold`.
#[derive(Debug, Clone)]
pub(crate) struct CompiledRule {
    pub total: Vec<u64>,
    pub flip_black: Vec<u64>,
    pub flip_white: Vec<u64>,
    pub influence: Option<Vec<u64>>,
}

fn ceil_mul(f: Fraction, total: u64) -> u64 {
    let num = *f.numer() as u128 * total as u128;
    let den = *f.denom() as u128;
    num.div_ceil(den) as u64
}

impl CompiledRule {
    pub fn new(g: &Graph, config: &ModelConfig) -> Result<CompiledRule> {
        config.validate_for(g.n())?;
        let n = g.n();
        let mut total = vec![0u64; n];
        let mut flip_black = vec![u64::MAX; n];
        let mut flip_white = vec![u64::MAX; n];
        for v in 0..n {
            let t: u64 = match &config.influence {
                None => g.degree(v) as u64,
                Some(r) => g.neighbors(v).iter().map(|&u| r[u as usize]).sum(),
            };
            total[v] = t;
            if t == 0 {
                continue;
            }
            let (b, w) = if let Some(s) = &config.stubbornness {
                let th = ceil_mul(s.of(v), t);
                (th, th)
            } else {
                match config.variant {
                    Variant::Majority => (t / 2 + 1, t / 2 + 1),
                    Variant::Psi { black, white } => (ceil_mul(black, t), ceil_mul(white, t)),
                }
            };
            flip_black[v] = b;
            flip_white[v] = w;
        }
        Ok(CompiledRule {
            total,
            flip_black,
            flip_white,
            influence: config.influence.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fraction_forms() {
        assert_eq!(parse_fraction("0.7").unwrap(), Ratio::new(7, 10));
        assert_eq!(parse_fraction("3/4").unwrap(), Ratio::new(3, 4));
        assert_eq!(parse_fraction("1").unwrap(), Ratio::from_integer(1));
        assert_eq!(parse_fraction(".51").unwrap(), Ratio::new(51, 100));
        assert!(parse_fraction("x").is_err());
        assert!(parse_fraction("1/0").is_err());
    }

    #[test]
    fn psi_range_enforced() {
        assert!(ModelConfig::psi(Ratio::new(1, 2), Ratio::new(3, 4)).is_err());
        assert!(ModelConfig::psi(Ratio::new(3, 4), Ratio::new(5, 4)).is_err());
        assert!(ModelConfig::psi(Ratio::new(51, 100), Ratio::from_integer(1)).is_ok());
    }

    #[test]
    fn stubbornness_excludes_psi() {
        let psi = ModelConfig::psi(Ratio::new(7, 10), Ratio::new(8, 10)).unwrap();
        assert!(psi.with_stubbornness(Stubbornness::Uniform(Ratio::new(3, 4))).is_err());
        assert!(ModelConfig::majority()
            .with_stubbornness(Stubbornness::Uniform(Ratio::from_integer(1)))
            .is_err());
    }

    #[test]
    fn compiled_thresholds_agree_with_rational_rule() {
        let configs = [
            ModelConfig::majority(),
            ModelConfig::psi(Ratio::new(7, 10), Ratio::new(4, 5)).unwrap(),
            ModelConfig::majority()
                .with_stubbornness(Stubbornness::Uniform(Ratio::new(2, 3)))
                .unwrap(),
        ];
        let g = Graph::from_edges(12, (1..12).map(|i| (0, i))).unwrap();
        for config in &configs {
            let rule = CompiledRule::new(&g, config).unwrap();
            let total = rule.total[0];
            for opp in 0..=total {
                assert_eq!(opp >= rule.flip_black[0], config.flips(0, true, opp, total));
                assert_eq!(opp >= rule.flip_white[0], config.flips(0, false, opp, total));
            }
        }
    }
}
