//! Event probabilities through products of truncated coefficient rows.
//!
//! The probability that every category count of a multiple hypergeometric
//! vector lands in its interval admits a convolution form: keep the
//! binomial coefficients `C(s_j, k)` for `k` inside interval `j`, zero the
//! rest, convolve the rows over all categories, and divide coefficient `n`
//! of the product by `C(t, n)`. One product therefore prices the event at
//! every sample size at once, which is what makes the ordering sweeps in
//! this crate cheap. Agreement with direct summation is enforced by
//! `sweep_oracle_equivalence` over an exhaustive small-parameter grid.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::hypergeom::{event_prob_enumerate, ratio, ColumnSums, MhgSpec};
use crate::numeric::{binomial_row, Rational};
use crate::simplex::Rect;
use crate::sweep::{for_each_canonical, runs};

/// Coefficients `C(s, k)` for `k` in a sub-interval of `[0, s]`, zero
/// elsewhere; always of length `s + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBinomialRow {
    s: u64,
    coeffs: Vec<BigUint>,
}

impl TruncatedBinomialRow {
    /// Upper index of the row, i.e. the category size.
    pub fn size(&self) -> u64 {
        self.s
    }

    /// The coefficient at each `k` in `0..=s`.
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

/// Builds the row for category size `s` keeping `k` in `[lo, hi]`.
///
/// `hi` is clamped to `s`; an interval lying entirely above `s` produces
/// the all-zero row. Panics if `lo > hi`.
pub fn truncated_binomial_row(s: u64, lo: u64, hi: u64) -> TruncatedBinomialRow {
    assert!(lo <= hi, "empty interval: {lo} > {hi}");
    let full = binomial_row(s);
    let hi = hi.min(s);
    let coeffs = (0..=s)
        .map(|k| {
            if lo <= k && k <= hi {
                full[k as usize].clone()
            } else {
                BigUint::zero()
            }
        })
        .collect();
    TruncatedBinomialRow { s, coeffs }
}

/// The coefficient sequence of the product of truncated rows; entry `n`
/// counts the weighted ways to split `n` draws across categories while
/// respecting every interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionProfile {
    coeffs: Vec<BigUint>,
}

impl ConvolutionProfile {
    /// Degree of the profile, equal to the population size `t`.
    pub fn total(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    /// Coefficient at sample size `n`; panics beyond `total()`.
    pub fn coeff(&self, n: u64) -> &BigUint {
        &self.coeffs[n as usize]
    }

    /// All coefficients, index `n` in `0..=total()`.
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Coefficients rendered as decimal strings, for serialization of
    /// values that exceed fixed-width integers.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// Convolves the rows pairwise in a balanced tree. The result is
/// independent of row order.
pub fn convolve(rows: &[TruncatedBinomialRow]) -> ConvolutionProfile {
    assert!(!rows.is_empty(), "need at least one row");
    let mut layer: Vec<Vec<BigUint>> = rows.iter().map(|r| r.coeffs.clone()).collect();
    while layer.len() > 1 {
        layer = layer
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => poly_mul(a, b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    ConvolutionProfile {
        coeffs: layer.pop().expect("one row remains"),
    }
}

/// The profile of a rectangle under column sums `s`: one truncated row per
/// category, convolved.
///
/// Panics if the rectangle dimension differs from the number of columns.
pub fn profile_for(sums: &ColumnSums, rect: &Rect) -> ConvolutionProfile {
    assert_eq!(
        rect.dim(),
        sums.len(),
        "rect/column-sums dimension mismatch"
    );
    let rows: Vec<TruncatedBinomialRow> = sums
        .values()
        .iter()
        .zip(rect.lower().iter().zip(rect.upper()))
        .map(|(&s, (&l, &u))| truncated_binomial_row(s, l, u))
        .collect();
    convolve(&rows)
}

/// Event probability via the profile: coefficient `n` over `C(t, n)`.
///
/// Panics if the rectangle dimension differs from the category count.
pub fn event_prob_convolution(spec: &MhgSpec, rect: &Rect) -> Rational {
    let profile = profile_for(spec.column_sums(), rect);
    let num = profile.coeff(spec.sample_size()).clone();
    let den = binomial_row(spec.total())[spec.sample_size() as usize].clone();
    ratio(num, den)
}

pub(crate) fn poly_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn poly_mul_capped(a: &[BigUint], b: &[BigUint], cap: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); cap + 1];
    for (i, ai) in a.iter().enumerate().take(cap + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(cap + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn product_coeff_at(a: &[BigUint], b: &[BigUint], k: usize) -> BigUint {
    let mut acc = BigUint::zero();
    let lo = k.saturating_sub(b.len() - 1);
    for i in lo..a.len().min(k + 1) {
        if !a[i].is_zero() && !b[k - i].is_zero() {
            acc += &a[i] * &b[k - i];
        }
    }
    acc
}

/// Result of exhaustively comparing the convolution path against direct
/// summation.
#[derive(Debug, Clone)]
pub struct OracleSweepOutcome {
    /// Number of `(s, rect, n)` triples compared.
    pub comparisons: u64,
    /// Triples where the two paths disagreed.
    pub mismatches: u64,
    /// Human-readable details for the first few mismatches.
    pub first_findings: Vec<String>,
}

/// Compares `event_prob_convolution` against `event_prob_enumerate` for
/// every category count `2..=max_m`, all column sums `1..=max_s`, every
/// rectangle `0 <= l_j <= u_j <= s_j`, and every sample size `0..=t`,
/// up to relabeling of interchangeable categories.
pub fn sweep_oracle_equivalence(max_m: usize, max_s: u64) -> OracleSweepOutcome {
    let mut cells: Vec<(Vec<u64>, Vec<(u64, u64)>)> = Vec::new();
    for m in 2..=max_m {
        let sizes: Vec<u64> = (1..=max_s).collect();
        for_each_canonical(&[(m, sizes)], &mut |s: &[u64]| {
            let blocks: Vec<(usize, Vec<(u64, u64)>)> = runs(s)
                .into_iter()
                .map(|(count, sj)| {
                    let mut intervals = Vec::new();
                    for l in 0..=sj {
                        for u in l..=sj {
                            intervals.push((l, u));
                        }
                    }
                    (count, intervals)
                })
                .collect();
            for_each_canonical(&blocks, &mut |ivs: &[(u64, u64)]| {
                cells.push((s.to_vec(), ivs.to_vec()));
            });
        });
    }

    let per_cell: Vec<(u64, u64, Vec<String>)> = cells
        .par_iter()
        .map(|(s, ivs)| {
            let sums = ColumnSums::new(s.clone());
            let t = sums.total();
            let lo: Vec<u64> = ivs.iter().map(|&(l, _)| l).collect();
            let hi: Vec<u64> = ivs.iter().map(|&(_, u)| u).collect();
            let rect = Rect::new(lo, hi).expect("intervals are nonempty");
            let profile = profile_for(&sums, &rect);
            let t_row = binomial_row(t);
            let mut comparisons = 0u64;
            let mut mismatches = 0u64;
            let mut findings = Vec::new();
            for n in 0..=t {
                let spec = MhgSpec::new(n, sums.clone()).expect("n <= t");
                let by_conv = ratio(profile.coeff(n).clone(), t_row[n as usize].clone());
                let by_enum = event_prob_enumerate(&spec, &rect);
                comparisons += 1;
                if by_conv != by_enum {
                    mismatches += 1;
                    if findings.len() < 5 {
                        findings.push(format!(
                            "s={s:?} rect={rect} n={n}: convolution {by_conv} vs summation {by_enum}"
                        ));
                    }
                }
            }
            (comparisons, mismatches, findings)
        })
        .collect();

    let mut outcome = OracleSweepOutcome {
        comparisons: 0,
        mismatches: 0,
        first_findings: Vec::new(),
    };
    for (comparisons, mismatches, findings) in per_cell {
        outcome.comparisons += comparisons;
        outcome.mismatches += mismatches;
        for finding in findings {
            if outcome.first_findings.len() < 20 {
                outcome.first_findings.push(finding);
            }
        }
    }
    outcome
}
