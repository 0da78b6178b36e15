//! Monte Carlo estimates of the sublevel sets `{(α, β) : |p(α, β)| < ε}`.

mod decay;

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trigpoly::TrigPoly;

pub use decay::{decay_experiment, DecayRow, DecayTable, FamilyTemplate, DEFAULT_R};

/// Number of independent sample shards. Fixed so results do not depend on the
/// thread count.
pub const SHARDS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("invalid sampler configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Domain {
    /// `[0, 2π)²`
    FullTorus,
    /// Angle pairs of triangles with margin `delta`.
    Admissible { delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    Random,
    /// Cell centres of a `k × k` grid with `k = ⌊√sample_count⌋`, filtered
    /// to the domain.
    Stratified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub sample_count: usize,
    pub domain: Domain,
    pub mode: SamplingMode,
}

impl SamplerConfig {
    pub fn random(seed: u64, sample_count: usize) -> Self {
        SamplerConfig {
            seed,
            sample_count,
            domain: Domain::FullTorus,
            mode: SamplingMode::Random,
        }
    }

    fn validate(&self) -> Result<(), MeasureError> {
        if self.sample_count == 0 {
            return Err(MeasureError::Config("sample_count must be positive".into()));
        }
        if let Domain::Admissible { delta } = self.domain {
            if !(delta >= 0.0 && 3.0 * delta < PI) {
                return Err(MeasureError::Config(format!(
                    "admissible domain is empty for delta {delta}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub fraction: f64,
    pub standard_error: f64,
    pub sample_count: usize,
}

impl MeasureEstimate {
    fn from_counts(hits: u64, n: usize) -> Self {
        let f = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
        MeasureEstimate {
            fraction: f,
            standard_error: if n == 0 {
                0.0
            } else {
                (f * (1.0 - f) / n as f64).sqrt()
            },
            sample_count: n,
        }
    }
}

/// A polynomial flattened for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(i32, i32, f64, f64)>,
    max_freq: usize,
}

impl CompiledPoly {
    pub fn new(p: &TrigPoly) -> Self {
        let terms: Vec<_> = p
            .terms()
            .map(|((m, l), c, s)| {
                use num_traits::ToPrimitive;
                (
                    m,
                    l,
                    c.to_f64().unwrap_or(f64::NAN),
                    s.to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect();
        let max_freq = terms
            .iter()
            .map(|t| t.0.unsigned_abs().max(t.1.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0);
        CompiledPoly { terms, max_freq }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn eval(&self, t: &Harmonics) -> f64 {
        let mut acc = 0.0;
        for &(m, l, c, s) in &self.terms {
            let (cm, sm) = t.alpha(m);
            let (cl, sl) = t.beta(l);
            acc += c * (cm * cl - sm * sl) + s * (sm * cl + cm * sl);
        }
        acc
    }
}

/// `cos kα, sin kα, cos kβ, sin kβ` for `0 <= k <= K`.
struct Harmonics {
    a: Vec<(f64, f64)>,
    b: Vec<(f64, f64)>,
}

impl Harmonics {
    fn new(k: usize) -> Self {
        Harmonics {
            a: vec![(1.0, 0.0); k + 1],
            b: vec![(1.0, 0.0); k + 1],
        }
    }

    fn fill(&mut self, alpha: f64, beta: f64) {
        for k in 1..self.a.len() {
            let (s, c) = (k as f64 * alpha).sin_cos();
            self.a[k] = (c, s);
            let (s, c) = (k as f64 * beta).sin_cos();
            self.b[k] = (c, s);
        }
    }

    fn alpha(&self, m: i32) -> (f64, f64) {
        let (c, s) = self.a[m.unsigned_abs() as usize];
        if m < 0 {
            (c, -s)
        } else {
            (c, s)
        }
    }

    fn beta(&self, l: i32) -> (f64, f64) {
        let (c, s) = self.b[l.unsigned_abs() as usize];
        if l < 0 {
            (c, -s)
        } else {
            (c, s)
        }
    }
}

fn admissible(a: f64, b: f64, delta: f64) -> bool {
    a > delta && b > delta && a + b < PI - delta
}

/// Sample points of one shard.
fn shard_points(cfg: &SamplerConfig, shard: usize) -> Vec<(f64, f64)> {
    let share = |total: usize| {
        let base = total / SHARDS;
        let extra = total % SHARDS;
        let start = shard * base + shard.min(extra);
        (start, base + usize::from(shard < extra))
    };
    match cfg.mode {
        SamplingMode::Random => {
            let (_, count) = share(cfg.sample_count);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(shard as u64);
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                match cfg.domain {
                    Domain::FullTorus => {
                        out.push((rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)))
                    }
                    Domain::Admissible { delta } => {
                        let (a, b) = (rng.random_range(0.0..PI), rng.random_range(0.0..PI));
                        if admissible(a, b, delta) {
                            out.push((a, b));
                        }
                    }
                }
            }
            out
        }
        SamplingMode::Stratified => {
            let k = (cfg.sample_count as f64).sqrt().floor().max(1.0) as usize;
            let (lo, hi) = match cfg.domain {
                Domain::FullTorus => (0.0, TAU),
                Domain::Admissible { .. } => (0.0, PI),
            };
            let h = (hi - lo) / k as f64;
            let (start, rows) = share(k);
            let mut out = Vec::with_capacity(rows * k);
            for i in start..start + rows {
                for j in 0..k {
                    let p = (lo + (i as f64 + 0.5) * h, lo + (j as f64 + 0.5) * h);
                    match cfg.domain {
                        Domain::Admissible { delta } if !admissible(p.0, p.1, delta) => {}
                        _ => out.push(p),
                    }
                }
            }
            out
        }
    }
}

/// For each polynomial, the number of samples with `|p| < eps[i]`, and the
/// number of samples drawn. All polynomials see the same sample stream.
pub fn count_hits(
    polys: &[CompiledPoly],
    eps: &[f64],
    cfg: &SamplerConfig,
) -> Result<(Vec<u64>, usize), MeasureError> {
    cfg.validate()?;
    assert_eq!(polys.len(), eps.len());
    let k = polys.iter().map(|p| p.max_freq).max().unwrap_or(0);
    let per_shard: Vec<(Vec<u64>, usize)> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let pts = shard_points(cfg, shard);
            let mut h = Harmonics::new(k);
            let mut hits = vec![0u64; polys.len()];
            for &(a, b) in &pts {
                h.fill(a, b);
                for (i, p) in polys.iter().enumerate() {
                    if p.eval(&h).abs() < eps[i] {
                        hits[i] += 1;
                    }
                }
            }
            (hits, pts.len())
        })
        .collect();
    let mut total = vec![0u64; polys.len()];
    let mut n = 0;
    for (hits, count) in per_shard {
        for (t, h) in total.iter_mut().zip(hits) {
            *t += h;
        }
        n += count;
    }
    Ok((total, n))
}

/// Fraction of the domain where `|p| < eps`.
pub fn sublevel_fraction(
    p: &TrigPoly,
    eps: f64,
    cfg: &SamplerConfig,
) -> Result<MeasureEstimate, MeasureError> {
    if p.is_zero() {
        return Err(MeasureError::ZeroPolynomial);
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(MeasureError::Config(format!(
            "threshold must be positive, got {eps}"
        )));
    }
    let (hits, n) = count_hits(&[CompiledPoly::new(p)], &[eps], cfg)?;
    Ok(MeasureEstimate::from_counts(hits[0], n))
}
