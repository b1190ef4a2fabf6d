//! Lattice-path tallies, the binomial identity for cumulative counts, and
//! the tropical Tevelev degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::construction::{enumerate_solutions_full, reference_point, SolutionIndex};
use crate::error::{Error, Result};
use crate::multiplicity::{local_degree, MultiplicityCertificate};
use crate::numeric::Rational;
use crate::par::{try_map, ExecMode};

/// Words of length `d - 2` from height 2 that never drop below 1, tallied by
/// final height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathTally {
    pub d: usize,
    pub by_height: BTreeMap<usize, u64>,
}

impl PathTally {
    /// `A_{d, ≥h}`
    pub fn at_least(&self, h: i64) -> u64 {
        self.by_height.iter().filter(|(&k, _)| k as i64 >= h).map(|(_, &v)| v).sum()
    }

    pub fn at(&self, h: usize) -> u64 {
        self.by_height.get(&h).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.by_height.values().sum()
    }
}

/// Brute force over all `2^{d-2}` words.
pub fn path_counts(d: usize) -> PathTally {
    assert!(d >= 2, "degree must be at least 2");
    let len = d - 2;
    let mut by_height = BTreeMap::new();
    for bits in 0u64..1 << len {
        let mut h: i64 = 2;
        let mut ok = true;
        for k in 0..len {
            h += if bits >> k & 1 == 0 { 1 } else { -1 };
            if h < 1 {
                ok = false;
                break;
            }
        }
        if ok {
            *by_height.entry(h as usize).or_insert(0) += 1;
        }
    }
    PathTally { d, by_height }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaRow {
    pub i: usize,
    pub cumulative: u64,
    pub binomial: u64,
    pub recurrence: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub d: usize,
    pub rows: Vec<LemmaRow>,
    pub table_total: u64,
}

/// Checks `A_{d,≥d-2i} = C(d-1, i)` for every admissible `i`, the
/// last-step recurrence when `d ≥ 3`, and the weighted table total
/// `Σ_i A_{d,=d-2i} (d - 2i) = 2^{d-1}`.
pub fn lemma_check(d: usize) -> Result<LemmaReport> {
    let tally = path_counts(d);
    let prev = (d >= 3).then(|| path_counts(d - 1));
    let mut rows = Vec::new();
    for i in 0..=(d - 1) / 2 {
        let h = d as i64 - 2 * i as i64;
        let cumulative = tally.at_least(h);
        let b = binomial(d as u64 - 1, i as u64);
        let recurrence = prev.as_ref().map(|p| (p.at_least(h - 1), p.at_least(h + 1)));
        if cumulative != b || recurrence.is_some_and(|(u, v)| u + v != cumulative) {
            return Err(Error::MismatchAt(i));
        }
        rows.push(LemmaRow { i, cumulative, binomial: b, recurrence });
    }
    let table_total: u64 = (0..=(d - 1) / 2).map(|i| tally.at(d - 2 * i) * (d - 2 * i) as u64).sum();
    if table_total != 1 << (d - 1) {
        return Err(Error::MismatchAt(usize::MAX));
    }
    Ok(LemmaReport { d, rows, table_total })
}

/// Sum of local degrees over all solutions for genus `g`, with every local
/// degree required to be 1.
pub fn tevelev_degree(g: usize) -> Result<(BigInt, Vec<(SolutionIndex, MultiplicityCertificate)>)> {
    tevelev_degree_with(g, ExecMode::default())
}

pub fn tevelev_degree_with(
    g: usize,
    mode: ExecMode,
) -> Result<(BigInt, Vec<(SolutionIndex, MultiplicityCertificate)>)> {
    let p = reference_point(g);
    let sols = enumerate_solutions_full(g, mode)?;
    let certs = try_map(mode, &sols, |s| Ok((s.index.clone(), local_degree(&s.cover, &p)?)))?;
    let mut sum = Rational::zero();
    for (idx, c) in &certs {
        if !c.is_unit() {
            return Err(Error::NonUnitMultiplicity(format!("{idx}: {}", c.local_degree)));
        }
        sum += &c.local_degree;
    }
    if !sum.is_integer() {
        return Err(Error::NonUnitMultiplicity(format!("total {sum}")));
    }
    Ok((sum.to_integer(), certs))
}

/// `2^g` as a convenience for comparisons.
pub fn expected_degree(g: usize) -> BigInt {
    BigInt::from(1u8) << g
}

pub fn as_u64(b: &BigInt) -> Option<u64> {
    b.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tallies() {
        assert_eq!(path_counts(2).by_height, BTreeMap::from([(2, 1)]));
        assert_eq!(path_counts(4).by_height, BTreeMap::from([(2, 2), (4, 1)]));
        assert_eq!(path_counts(5).by_height, BTreeMap::from([(1, 2), (3, 3), (5, 1)]));
    }

    #[test]
    fn lemma_small() {
        let r = lemma_check(5).unwrap();
        assert_eq!(r.rows[2].cumulative, 6);
        assert_eq!(r.table_total, 16);
        assert_eq!(lemma_check(2).unwrap().rows[0].binomial, 1);
    }
}
