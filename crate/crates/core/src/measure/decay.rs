use std::io;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::trigpoly::{family_generate, FamilyConfig, VertexChoice};

use super::{count_hits, CompiledPoly, MeasureError, SamplerConfig};

/// Keeps `e^{-R m²}` above the smallest normal double for every `m <= 64`.
pub const DEFAULT_R: f64 = 0.1;

/// Family parameters shared by every degree of an experiment; the kite count
/// is derived from the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTemplate {
    pub count: usize,
    pub seed: u64,
    pub vertex_choice: VertexChoice,
}

impl FamilyTemplate {
    /// Area polynomials of `c` kites have degree at most `4c`, so degree `m`
    /// uses `⌊m/4⌋` kites (at least one).
    pub fn for_degree(&self, m: usize) -> FamilyConfig {
        FamilyConfig {
            kites: (m / 4).max(1),
            count: self.count,
            seed: self.seed ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            vertex_choice: self.vertex_choice,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub degree: usize,
    /// `-R m²`, the natural log of the threshold.
    pub log_eps: f64,
    pub eps: f64,
    pub worst_fraction: f64,
    pub standard_error: f64,
    /// Distinct nonzero polynomials measured.
    pub family_size: usize,
    pub zero_skipped: usize,
    /// `e^{-c m}` for the caller's reference constant.
    pub reference: f64,
    /// The threshold is below the smallest normal double; no sample can
    /// satisfy it and the fraction is reported as exactly 0.
    pub underflow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub r: f64,
    pub c_ref: f64,
    pub sample_count: usize,
    pub rows: Vec<DecayRow>,
}

impl DecayTable {
    pub fn is_nonincreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].worst_fraction <= w[0].worst_fraction)
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "m",
            "eps",
            "worst_fraction",
            "standard_error",
            "family_size",
            "reference",
        ])?;
        for r in &self.rows {
            out.write_record([
                r.degree.to_string(),
                crate::analysis::format_float(r.eps),
                crate::analysis::format_float(r.worst_fraction),
                crate::analysis::format_float(r.standard_error),
                r.family_size.to_string(),
                crate::analysis::format_float(r.reference),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// For each degree `m`, the largest sublevel fraction at `e^{-R m²}` over a
/// generated family of area polynomials. Zero polynomials are skipped.
pub fn decay_experiment(
    degrees: &[usize],
    r: f64,
    family: &FamilyTemplate,
    sampler: &SamplerConfig,
    c_ref: f64,
) -> Result<DecayTable, MeasureError> {
    if r.is_nan() || r <= 0.0 {
        return Err(MeasureError::Config(format!("R must be positive, got {r}")));
    }
    let mut rows = Vec::with_capacity(degrees.len());
    for &m in degrees {
        let polys = family_generate(&family.for_degree(m));
        let compiled: Vec<CompiledPoly> = polys
            .iter()
            .map(CompiledPoly::new)
            .filter(|p| !p.is_zero())
            .collect();
        let zero_skipped = polys.len() - compiled.len();
        if zero_skipped > 0 {
            warn!("degree {m}: skipped {zero_skipped} zero polynomial(s)");
        }
        if compiled.is_empty() {
            return Err(MeasureError::Config(format!(
                "degree {m}: family has no nonzero polynomial"
            )));
        }
        let log_eps = -r * (m * m) as f64;
        let eps = log_eps.exp();
        let underflow = eps < f64::MIN_POSITIVE;
        let (worst, n) = if underflow {
            (0, sampler.sample_count)
        } else {
            let (hits, n) = count_hits(&compiled, &vec![eps; compiled.len()], sampler)?;
            (hits.into_iter().max().unwrap_or(0), n)
        };
        let f = worst as f64 / n as f64;
        rows.push(DecayRow {
            degree: m,
            log_eps,
            eps: if underflow { 0.0 } else { eps },
            worst_fraction: f,
            standard_error: (f * (1.0 - f) / n as f64).sqrt(),
            family_size: compiled.len(),
            zero_skipped,
            reference: (-c_ref * m as f64).exp(),
            underflow,
        });
    }
    Ok(DecayTable {
        r,
        c_ref,
        sample_count: sampler.sample_count,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::sublevel_fraction;
    use crate::trigpoly::TrigPoly;

    fn template() -> FamilyTemplate {
        FamilyTemplate {
            count: 10,
            seed: 4,
            vertex_choice: VertexChoice::All,
        }
    }

    #[test]
    fn single_degree_matches_direct_fraction() {
        let sampler = SamplerConfig::random(3, 5_000);
        let t = decay_experiment(&[8], DEFAULT_R, &template(), &sampler, 0.1).unwrap();
        assert_eq!(t.rows.len(), 1);
        let polys: Vec<TrigPoly> = family_generate(&template().for_degree(8))
            .into_iter()
            .filter(|p| !p.is_zero())
            .collect();
        let direct = polys
            .iter()
            .map(|p| {
                sublevel_fraction(p, t.rows[0].eps, &sampler)
                    .unwrap()
                    .fraction
            })
            .fold(0.0, f64::max);
        assert_eq!(t.rows[0].worst_fraction, direct);
    }

    #[test]
    fn underflowing_threshold_is_flagged() {
        let t =
            decay_experiment(&[40], 1.0, &template(), &SamplerConfig::random(3, 100), 0.1).unwrap();
        assert!(t.rows[0].underflow);
        assert_eq!(t.rows[0].worst_fraction, 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let t = decay_experiment(
            &[4, 8],
            DEFAULT_R,
            &template(),
            &SamplerConfig::random(1, 1000),
            0.1,
        )
        .unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("m,eps,worst_fraction,standard_error,family_size,reference\n"));
        assert_eq!(s.lines().count(), 3);
    }
}
