use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::seed;

/// Black/white assignment packed one bit per node (set bit = black).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for Coloring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.len <= 64 {
            let s: String = (0..self.len).map(|v| if self.is_black(v) { 'b' } else { 'w' }).collect();
            write!(f, "Coloring({s})")
        } else {
            write!(f, "Coloring(n={}, black={})", self.len, self.count_black())
        }
    }
}

impl Coloring {
    pub fn all_white(n: usize) -> Coloring {
        Coloring {
            len: n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn all_black(n: usize) -> Coloring {
        let mut c = Coloring {
            len: n,
            words: vec![u64::MAX; n.div_ceil(64)],
        };
        c.clear_tail();
        c
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Coloring {
        let mut c = Coloring::all_white(0);
        for (v, b) in bits.into_iter().enumerate() {
            if v % 64 == 0 {
                c.words.push(0);
            }
            c.len += 1;
            if b {
                c.words[v / 64] |= 1 << (v % 64);
            }
        }
        c
    }

    /// Parses `b`/`w` characters, e.g. `"bwbw"`.
    pub fn from_pattern(s: &str) -> Result<Coloring> {
        s.chars()
            .map(|ch| match ch {
                'b' | 'B' => Ok(true),
                'w' | 'W' => Ok(false),
                other => Err(invalid(format!("unknown color symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Coloring::from_bools)
    }

    /// The low `n` bits of `bits`, node `v` taking bit `v`.
    pub fn from_bits(n: usize, bits: u64) -> Coloring {
        assert!(n <= 64);
        Coloring::from_bools((0..n).map(|v| bits >> v & 1 == 1))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_black(&self, v: usize) -> bool {
        debug_assert!(v < self.len);
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, v: usize, black: bool) {
        let mask = 1u64 << (v % 64);
        if black {
            self.words[v / 64] |= mask;
        } else {
            self.words[v / 64] &= !mask;
        }
    }

    pub fn count_black(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_white(&self) -> usize {
        self.len - self.count_black()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|v| self.is_black(v))
    }

    /// Nodes whose color differs between `self` and `other`.
    pub fn hamming(&self, other: &Coloring) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn to_pattern(&self) -> String {
        self.iter().map(|b| if b { 'b' } else { 'w' }).collect()
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Same coloring under the node renaming `v -> perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Coloring {
        let mut out = Coloring::all_white(self.len);
        for v in 0..self.len {
            out.set(perm[v], self.is_black(v));
        }
        out
    }
}

/// Each node black independently with probability `p_black`.
pub fn random_coloring(n: usize, p_black: f64, seed: u64) -> Result<Coloring> {
    if !(0.0..=1.0).contains(&p_black) {
        return Err(invalid(format!("p_b={p_black} outside [0,1]")));
    }
    let mut rng = seed::rng(seed);
    Ok(Coloring::from_bools((0..n).map(|_| rng.gen_bool(p_black))))
}

/// Undirected edges whose endpoints disagree.
pub fn count_bichromatic(g: &Graph, coloring: &Coloring) -> usize {
    assert_eq!(g.n(), coloring.len());
    g.edges()
        .filter(|&(u, v)| coloring.is_black(u) != coloring.is_black(v))
        .count()
}
