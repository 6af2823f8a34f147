//! CSV output. Every file starts with `#` lines echoing the resolved
//! configuration, and floats are printed with a fixed number of decimals so
//! equal inputs give byte-identical files.

use std::io::{self, Write};

use crate::analysis::{PhaseReport, WinCriterion};
use crate::dynamics::OutcomeLabel;

/// Ordered `key=value` pairs written as the `#` header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance(Vec<(String, String)>);

impl Provenance {
    pub fn new(command: &str) -> Provenance {
        Provenance(vec![("command".into(), command.into())])
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Provenance {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn write<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        for (k, v) in &self.0 {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }
}

/// Six decimals; `nan` for undefined means.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        let s = format!("{x:.6}");
        if s == "-0.000000" {
            "0.000000".into()
        } else {
            s
        }
    }
}

/// `LABEL:count` pairs joined by `;`, nonzero counts only.
pub fn format_labels(labels: &[usize; 7]) -> String {
    OutcomeLabel::ALL
        .iter()
        .zip(labels)
        .filter(|(_, &c)| c > 0)
        .map(|(l, c)| format!("{l}:{c}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_phase_csv<W: Write>(mut w: W, prov: &Provenance, report: &PhaseReport) -> io::Result<()> {
    prov.write(&mut w)?;
    writeln!(w, "{},mean_black_frac,mean_stab_time,n_trials,labels", report.param_name)?;
    for row in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_float(row.param),
            fmt_float(row.mean_black_fraction),
            fmt_float(row.mean_stabilization),
            row.trials - row.failed,
            format_labels(&row.labels)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliteRow {
    pub r: u64,
    pub min_fraction: f64,
    pub criterion: WinCriterion,
}

pub fn write_elite_csv<W: Write>(mut w: W, prov: &Provenance, rows: &[EliteRow]) -> io::Result<()> {
    prov.write(&mut w)?;
    writeln!(w, "r,min_fraction,criterion")?;
    for row in rows {
        writeln!(w, "{},{},{}", row.r, fmt_float(row.min_fraction), row.criterion)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::PhaseRow;

    #[test]
    fn phase_csv_layout() {
        let mut labels = [0; 7];
        labels[1] = 7;
        labels[6] = 1;
        let report = PhaseReport {
            param_name: "p_b".into(),
            rows: vec![PhaseRow {
                param: 0.15,
                mean_black_fraction: 1.0 / 3.0,
                mean_stabilization: 4.5,
                trials: 8,
                failed: 0,
                labels,
            }],
        };
        let prov = Provenance::new("sweep").with("seed", 42);
        let mut out = Vec::new();
        write_phase_csv(&mut out, &prov, &report).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# command=sweep\n# seed=42\np_b,mean_black_frac,mean_stab_time,n_trials,labels\n\
             0.150000,0.333333,4.500000,8,WHITE_TAKES_OVER:7;MIXED:1\n"
        );
    }

    #[test]
    fn elite_csv_layout() {
        let rows = [EliteRow {
            r: 16,
            min_fraction: 0.004,
            criterion: WinCriterion::Wins,
        }];
        let mut out = Vec::new();
        write_elite_csv(&mut out, &Provenance::new("elites"), &rows).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# command=elites\nr,min_fraction,criterion\n16,0.004000,WINS\n"
        );
    }

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(-0.0), "0.000000");
        assert_eq!(fmt_float(1.0), "1.000000");
    }
}
