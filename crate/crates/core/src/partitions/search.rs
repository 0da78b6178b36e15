use serde::{Deserialize, Serialize};

use crate::enumeration::ComplexityTable;

use super::{find_good_triples, GoodTriple, PartitionError, PartitionSequence};

fn value(table: &ComplexityTable, n: usize) -> Result<u64, PartitionError> {
    table.get(n).ok_or(PartitionError::TableTooShort {
        needed: n,
        available: table.n_max().unwrap_or(0),
    })
}

/// Smallest `N = n + l·c` with `1 <= l <= k - 1` and `P_{N+c} / P_N >= 4 + 2c`.
/// Blocks with `P_N = 0` never qualify.
pub fn find_ratio_jump(
    table: &ComplexityTable,
    n: usize,
    c: usize,
    k: usize,
) -> Result<Option<usize>, PartitionError> {
    Ok(block_ratios(table, n, c, k)?
        .into_iter()
        .find(|b| b.qualifies)
        .map(|b| b.start))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockRatio {
    pub start: usize,
    pub ratio: Option<f64>,
    pub qualifies: bool,
}

fn block_ratios(
    table: &ComplexityTable,
    n: usize,
    c: usize,
    k: usize,
) -> Result<Vec<BlockRatio>, PartitionError> {
    if c == 0 {
        return Err(PartitionError::HypothesisNotMet(
            "c must be positive".into(),
        ));
    }
    value(table, n + k * c)?;
    let target = 4.0 + 2.0 * c as f64;
    (1..k)
        .map(|l| {
            let start = n + l * c;
            let lo = value(table, start)?;
            let hi = value(table, start + c)?;
            let ratio = (lo > 0).then(|| hi as f64 / lo as f64);
            Ok(BlockRatio {
                start,
                ratio,
                qualifies: ratio.is_some_and(|r| r >= target),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioJumpReport {
    pub n: usize,
    pub c: usize,
    pub k: usize,
    pub jump: Option<usize>,
    pub blocks: Vec<BlockRatio>,
    pub mu: f64,
    /// `ln P_n > n^mu`, the lower bound assumed by the stretched-exponential
    /// variant.
    pub lower_bound_holds: bool,
}

pub fn ratio_jump_report(
    table: &ComplexityTable,
    n: usize,
    c: usize,
    k: usize,
    mu: f64,
) -> Result<RatioJumpReport, PartitionError> {
    let blocks = block_ratios(table, n, c, k)?;
    let p_n = value(table, n)?;
    Ok(RatioJumpReport {
        n,
        c,
        k,
        jump: blocks.iter().find(|b| b.qualifies).map(|b| b.start),
        blocks,
        mu,
        lower_bound_holds: p_n > 0 && (p_n as f64).ln() > (n as f64).powf(mu),
    })
}

/// A good triple with its closeness certificate. Distances are measured as
/// fractions of the sector length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloseTriple {
    pub triple: GoodTriple,
    pub pairwise: [f64; 3],
    pub bound: f64,
}

/// Searches levels `n + 1 ..= n + c` for the good triple of smallest span.
pub fn find_close_good_triple(
    seq: &PartitionSequence,
    table: &ComplexityTable,
    n: usize,
    c: usize,
) -> Result<CloseTriple, PartitionError> {
    let p_n = value(table, n)?;
    let p_nc = value(table, n + c)?;
    for m in [n, n + c] {
        let points = seq.count(m);
        if table.get(m) != Some(points) {
            return Err(PartitionError::TableMismatch {
                n: m,
                table: table.get(m).unwrap_or(0),
                points,
            });
        }
    }
    if c < 4 {
        return Err(PartitionError::HypothesisNotMet(format!("c = {c} < 4")));
    }
    if (p_nc as f64) < (4.0 + 2.0 * c as f64) * p_n as f64 {
        return Err(PartitionError::HypothesisNotMet(format!(
            "P_{} = {p_nc} < (4 + 2c) P_{n} = {}",
            n + c,
            (4 + 2 * c as u64) * p_n
        )));
    }
    if (c as f64).exp() >= p_n as f64 {
        return Err(PartitionError::HypothesisNotMet(format!(
            "e^{c} >= P_{n} = {p_n}"
        )));
    }
    let bound = (c as f64).exp() / p_n as f64;
    let scale = seq.sector_length();
    let best = find_good_triples(seq, n + 1..=n + c)
        .into_iter()
        .min_by(|a, b| a.span().total_cmp(&b.span()));
    match best {
        Some(t) if t.span() / scale <= bound => Ok(CloseTriple {
            triple: t,
            pairwise: [
                (t.x_p - t.x_q).abs() / scale,
                (t.x_p - t.x_r).abs() / scale,
                (t.x_q - t.x_r).abs() / scale,
            ],
            bound,
        }),
        best => Err(PartitionError::SearchFailed {
            n,
            c,
            bound,
            best: best.map(|t| t.span() / scale),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::random_process_sequence;

    #[test]
    fn constant_table_has_no_jump() {
        let t = ComplexityTable::synthetic(vec![5; 30]);
        assert_eq!(find_ratio_jump(&t, 2, 3, 5).unwrap(), None);
    }

    #[test]
    fn geometric_table_jumps_at_first_block() {
        let t = ComplexityTable::synthetic((0..12).map(|m| 6u64.pow(m)).collect());
        assert_eq!(find_ratio_jump(&t, 3, 1, 4).unwrap(), Some(4));
    }

    #[test]
    fn short_table_rejected() {
        let t = ComplexityTable::synthetic(vec![0, 1, 2]);
        assert!(matches!(
            find_ratio_jump(&t, 1, 1, 3),
            Err(PartitionError::TableTooShort { .. })
        ));
    }

    #[test]
    fn unmet_hypotheses_reported() {
        let (s, n) = random_process_sequence(3, 60, 0.6, 4, 0.3);
        let t = s.table();
        assert!(matches!(
            find_close_good_triple(&s, &t, n, 4),
            Err(PartitionError::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn dense_fixture_yields_certified_triple() {
        let (s, n) = random_process_sequence(11, 60, 0.6, 4, 1.0);
        let t = s.table();
        let found = find_close_good_triple(&s, &t, n, 4).unwrap();
        assert!(found.triple.verify(&s));
        assert!(found.pairwise.iter().all(|&d| d <= found.bound));
        assert!(found.triple.p > n && found.triple.r <= n + 4);
    }
}
