//! Growth fits, the constants system behind the stretched-exponential bound,
//! gap sequences and bound-comparison reports over finite tables.

mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::ComplexityTable;

pub use report::{bound_report, gap_sequence, BoundReport, BoundRow, GapSequence};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("no feasible constants for mu = {mu}; need mu > sqrt(3) - 1")]
    Infeasible { mu: f64 },
    #[error("fit range has {points} usable points, need at least 3")]
    DegenerateRange { points: usize },
    #[error("P_{n} = 0; a log-log fit needs positive counts")]
    NonPositive { n: usize },
    #[error("table reaches n = {available}, range needs n = {needed}")]
    TableTooShort { needed: usize, available: usize },
}

/// Formats with 15 significant digits; fixed notation for moderate
/// magnitudes, scientific otherwise.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

/// `μ`, `ε`, `γ` of the schedules `φ(n) = n^μ`, `c(n) = n^ε`, `k(n) = n^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsConfig {
    pub mu: f64,
    pub epsilon: f64,
    pub gamma: f64,
}

/// Each inequality of the constants system, in order:
/// `γ ≤ 1`, `γ + ε > 1`, `(γ + ε)μ > 1`, `ε < μ`, `2ε < μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub gamma_at_most_one: bool,
    pub gamma_plus_epsilon_above_one: bool,
    pub product_above_one: bool,
    pub epsilon_below_mu: bool,
    pub twice_epsilon_below_mu: bool,
}

impl Feasibility {
    pub fn all(&self) -> bool {
        self.gamma_at_most_one
            && self.gamma_plus_epsilon_above_one
            && self.product_above_one
            && self.epsilon_below_mu
            && self.twice_epsilon_below_mu
    }
}

impl ConstantsConfig {
    pub fn feasibility(&self) -> Feasibility {
        let ConstantsConfig {
            mu,
            epsilon: e,
            gamma: g,
        } = *self;
        Feasibility {
            gamma_at_most_one: g <= 1.0,
            gamma_plus_epsilon_above_one: g + e > 1.0,
            product_above_one: (g + e) * mu > 1.0,
            epsilon_below_mu: e < mu,
            twice_epsilon_below_mu: 2.0 * e < mu,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.mu > 0.0 && self.epsilon > 0.0 && self.gamma > 0.0 && self.feasibility().all()
    }
}

/// The threshold exponent and how well it solves `(1 + μ/2)μ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsSolution {
    pub mu_star: f64,
    pub residual: f64,
}

/// Positive root of `μ²/2 + μ − 1 = 0`, that is `√3 − 1`.
pub fn solve_constants() -> ConstantsSolution {
    let mu = 3f64.sqrt() - 1.0;
    ConstantsSolution {
        mu_star: mu,
        residual: ((1.0 + mu / 2.0) * mu - 1.0).abs(),
    }
}

/// A feasible configuration with `γ = 1` for a given `μ`. `ε` is the midpoint
/// of the admissible window `(max(0, 1/μ − 1), μ/2)`.
pub fn witness_constants(mu: f64) -> Result<ConstantsConfig, AnalysisError> {
    let lo = (1.0 / mu - 1.0).max(0.0);
    let hi = mu / 2.0;
    let cfg = ConstantsConfig {
        mu,
        epsilon: 0.5 * (lo + hi),
        gamma: 1.0,
    };
    if mu.is_finite() && mu > solve_constants().mu_star && lo < hi && cfg.is_feasible() {
        Ok(cfg)
    } else {
        Err(AnalysisError::Infeasible { mu })
    }
}

/// Least-squares slope of `ln P_n` against `ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    pub n_lo: usize,
    pub n_hi: usize,
}

pub fn growth_exponent(
    table: &ComplexityTable,
    n_lo: usize,
    n_hi: usize,
) -> Result<GrowthFit, AnalysisError> {
    let available = table.n_max().unwrap_or(0);
    if n_hi > available {
        return Err(AnalysisError::TableTooShort {
            needed: n_hi,
            available,
        });
    }
    let lo = n_lo.max(1);
    let points = if n_hi >= lo { n_hi - lo + 1 } else { 0 };
    if points < 3 {
        return Err(AnalysisError::DegenerateRange { points });
    }
    let mut xy = Vec::with_capacity(points);
    for n in lo..=n_hi {
        let p = table.get(n).expect("range checked");
        if p == 0 {
            return Err(AnalysisError::NonPositive { n });
        }
        xy.push(((n as f64).ln(), (p as f64).ln()));
    }
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(GrowthFit {
        exponent: slope,
        intercept,
        residual: (rss / k).sqrt(),
        n_lo: lo,
        n_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_star_solves_quadratic() {
        let s = solve_constants();
        assert!((s.mu_star - 0.7320508075688772).abs() < 1e-15);
        assert!(s.residual < 1e-12);
    }

    #[test]
    fn hand_checked_feasibility() {
        let bad = ConstantsConfig {
            mu: 0.8,
            epsilon: 0.4,
            gamma: 1.0,
        };
        assert!(!bad.is_feasible());
        assert!(!bad.feasibility().twice_epsilon_below_mu);
        let good = ConstantsConfig {
            mu: 0.75,
            epsilon: 0.37,
            gamma: 1.0,
        };
        assert!(good.is_feasible());
    }

    #[test]
    fn witnesses_exist_exactly_above_threshold() {
        let mu_star = solve_constants().mu_star;
        for mu in [mu_star + 1e-6, 0.75, 0.8, 0.9, 1.0] {
            let w = witness_constants(mu).unwrap();
            assert!(w.is_feasible(), "{w:?}");
            assert_eq!(w.gamma, 1.0);
        }
        for mu in [mu_star, 0.7, 0.5] {
            assert_eq!(witness_constants(mu), Err(AnalysisError::Infeasible { mu }));
        }
    }

    #[test]
    fn power_law_fits() {
        let sq = ComplexityTable::synthetic((0..50u64).map(|n| n * n).collect());
        let f = growth_exponent(&sq, 5, 49).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-10);
        assert!(f.residual < 1e-10);
        let scaled = ComplexityTable::synthetic((0..50u64).map(|n| 7 * n * n).collect());
        assert!((growth_exponent(&scaled, 5, 49).unwrap().exponent - 2.0).abs() < 1e-10);
        let flat = ComplexityTable::synthetic(vec![7; 20]);
        assert!(growth_exponent(&flat, 1, 19).unwrap().exponent.abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        let t = ComplexityTable::synthetic(vec![0, 1, 2, 3, 4]);
        assert_eq!(
            growth_exponent(&t, 2, 3),
            Err(AnalysisError::DegenerateRange { points: 2 })
        );
        assert!(matches!(
            growth_exponent(&t, 1, 9),
            Err(AnalysisError::TableTooShort { .. })
        ));
        let z = ComplexityTable::synthetic(vec![0, 0, 2, 3, 4]);
        assert_eq!(
            growth_exponent(&z, 1, 4),
            Err(AnalysisError::NonPositive { n: 1 })
        );
    }

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(format_float(solve_constants().mu_star), "0.732050807568877");
        assert_eq!(format_float(1234.5), "1234.50000000000");
        assert_eq!(format_float(1e-9), "1.00000000000000e-9");
        assert_eq!(format_float(0.0), "0");
    }
}
