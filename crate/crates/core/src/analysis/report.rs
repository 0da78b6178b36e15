use std::io;

use serde::{Deserialize, Serialize};

use crate::enumeration::ComplexityTable;

use super::format_float;

/// Times `n >= 1` with `P_n < e^{n^μ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSequence {
    pub mu: f64,
    pub times: Vec<usize>,
    pub gaps: Vec<usize>,
}

impl GapSequence {
    /// Positions `i` with `n_{i+1} − n_i >= n_i^{1+ε}`. Informational only:
    /// the gap bound is asymptotic.
    pub fn long_gaps(&self, epsilon: f64) -> Vec<usize> {
        self.gaps
            .iter()
            .enumerate()
            .filter(|(i, &g)| g as f64 >= (self.times[*i] as f64).powf(1.0 + epsilon))
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn gap_sequence(table: &ComplexityTable, mu: f64) -> GapSequence {
    let times: Vec<usize> = table
        .counts()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(n, &p)| (p as f64).ln() < (n as f64).powf(mu))
        .map(|(n, _)| n)
        .collect();
    let gaps = times.windows(2).map(|w| w[1] - w[0]).collect();
    GapSequence { mu, times, gaps }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub p_n: u64,
    /// `n^{μ+ε}`, the log of the comparison function.
    pub log_bound: f64,
    /// `P_n / e^{n^{μ+ε}}`, computed in log space.
    pub ratio: f64,
    /// Periodic orbits of length at most `n` are bounded by `P_n`.
    pub periodic_upper: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub mu: f64,
    pub epsilon: f64,
    pub rows: Vec<BoundRow>,
    /// Smallest `C` with `P_n <= C e^{n^{μ+ε}}` on the table.
    pub implied_c: Option<f64>,
    pub implied_c_at: Option<usize>,
}

pub fn bound_report(table: &ComplexityTable, mu: f64, epsilon: f64) -> BoundReport {
    let rows: Vec<BoundRow> = table
        .counts()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &p)| {
            let log_bound = (n as f64).powf(mu + epsilon);
            let ratio = if p == 0 {
                0.0
            } else {
                ((p as f64).ln() - log_bound).exp()
            };
            BoundRow {
                n,
                p_n: p,
                log_bound,
                ratio,
                periodic_upper: p,
            }
        })
        .collect();
    let best = rows.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio));
    BoundReport {
        mu,
        epsilon,
        implied_c: best.map(|r| r.ratio),
        implied_c_at: best.map(|r| r.n),
        rows,
    }
}

impl BoundReport {
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "p_n", "log_bound", "ratio", "periodic_upper"])?;
        for r in &self.rows {
            out.write_record([
                r.n.to_string(),
                r.p_n.to_string(),
                format_float(r.log_bound),
                format_float(r.ratio),
                r.periodic_upper.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        match (self.implied_c, self.implied_c_at) {
            (Some(c), Some(n)) => format!(
                "mu = {}, epsilon = {}: implied C = {} (attained at n = {n}) over {} rows",
                format_float(self.mu),
                format_float(self.epsilon),
                format_float(c),
                self.rows.len()
            ),
            _ => "empty table: no rows".to_string(),
        }
    }
}
