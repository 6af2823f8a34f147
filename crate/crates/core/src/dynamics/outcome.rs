use std::fmt;
use std::str::FromStr;

use super::engine::RunResult;
use crate::error::{invalid, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeLabel {
    BlackTakesOver,
    WhiteTakesOver,
    AlmostMonochromatic,
    AlmostBalanced,
    BlackWins,
    WhiteWins,
    Mixed,
}

impl OutcomeLabel {
    pub const ALL: [OutcomeLabel; 7] = [
        OutcomeLabel::BlackTakesOver,
        OutcomeLabel::WhiteTakesOver,
        OutcomeLabel::AlmostMonochromatic,
        OutcomeLabel::AlmostBalanced,
        OutcomeLabel::BlackWins,
        OutcomeLabel::WhiteWins,
        OutcomeLabel::Mixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeLabel::BlackTakesOver => "BLACK_TAKES_OVER",
            OutcomeLabel::WhiteTakesOver => "WHITE_TAKES_OVER",
            OutcomeLabel::AlmostMonochromatic => "ALMOST_MONOCHROMATIC",
            OutcomeLabel::AlmostBalanced => "ALMOST_BALANCED",
            OutcomeLabel::BlackWins => "BLACK_WINS",
            OutcomeLabel::WhiteWins => "WHITE_WINS",
            OutcomeLabel::Mixed => "MIXED",
        }
    }

    pub fn is_takeover(self) -> bool {
        matches!(self, OutcomeLabel::BlackTakesOver | OutcomeLabel::WhiteTakesOver)
    }

    /// Both colors are still present in the final coloring.
    pub fn both_survive(self) -> bool {
        !self.is_takeover()
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OutcomeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OutcomeLabel::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid(format!("unknown outcome label {s:?}")))
    }
}

/// Finite-n stand-ins for "sub-linear". `None` disables the label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest minority fraction still called almost monochromatic.
    pub mono: Option<f64>,
    /// Largest `|black fraction - 1/2|` still called almost balanced.
    pub balance: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mono: Some(0.05),
            balance: Some(0.05),
        }
    }
}

/// Labels a coloring by its black count. Checked in order: unanimity,
/// almost monochromatic, almost balanced, strict majority, otherwise mixed.
pub fn classify_counts(black: usize, n: usize, tol: Tolerances) -> OutcomeLabel {
    let white = n - black;
    if white == 0 {
        return OutcomeLabel::BlackTakesOver;
    }
    if black == 0 {
        return OutcomeLabel::WhiteTakesOver;
    }
    let nf = n as f64;
    if let Some(t) = tol.mono {
        if black.min(white) as f64 <= t * nf {
            return OutcomeLabel::AlmostMonochromatic;
        }
    }
    if let Some(t) = tol.balance {
        if (black as f64 / nf - 0.5).abs() <= t {
            return OutcomeLabel::AlmostBalanced;
        }
    }
    if 2 * black > n {
        OutcomeLabel::BlackWins
    } else if 2 * white > n {
        OutcomeLabel::WhiteWins
    } else {
        OutcomeLabel::Mixed
    }
}

/// Classifies the first coloring of the final cycle.
pub fn classify_outcome(result: &RunResult, n: usize, tol: Tolerances) -> OutcomeLabel {
    classify_counts(result.final_coloring().count_black(), n, tol)
}
