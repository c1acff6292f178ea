//! Sample-size ordering of rectangular event probabilities.
//!
//! For a centrally symmetric rectangle the event probability, viewed as a
//! function of the sample size `n`, is non-decreasing up to `t/2`,
//! non-increasing from `t/2` on, and symmetric about `t/2`. The harness
//! here verifies those facts by exact comparison over exhaustive
//! small-parameter sweeps, together with an equivalent cross-multiplied
//! coefficient ratio test that avoids building any fractions. Asymmetric
//! rectangles can break the ordering, which `check_asymmetric_pair`
//! demonstrates.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::convolution::{profile_for, ConvolutionProfile};
use crate::error::{Error, Result};
use crate::hypergeom::{ratio, ColumnSums, MhgSpec};
use crate::numeric::{binomial_row, Rational};
use crate::simplex::{Rect, SymmetricCore};
use crate::sweep::{for_each_canonical, runs};

/// Event probabilities at every sample size `0..=t`, from one shared
/// profile.
///
/// Panics if the rectangle dimension differs from the number of columns.
pub fn scan_over_n(sums: &ColumnSums, rect: &Rect) -> Vec<Rational> {
    let profile = profile_for(sums, rect);
    let t = sums.total();
    let t_row = binomial_row(t);
    (0..=t)
        .map(|n| ratio(profile.coeff(n).clone(), t_row[n as usize].clone()))
        .collect()
}

/// A sample-size pair at which the expected ordering failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingViolation {
    pub n: u64,
    pub n_prime: u64,
    pub prob_n: Rational,
    pub prob_n_prime: Rational,
}

/// Ordering facts for one symmetric core across all sample sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingReport {
    core: SymmetricCore,
    probs: Vec<Rational>,
    upper_monotone: bool,
    lower_monotone: bool,
    symmetric: bool,
    first_violation: Option<OrderingViolation>,
}

impl OrderingReport {
    /// The core the report describes.
    pub fn core(&self) -> &SymmetricCore {
        &self.core
    }

    /// `P_n` for `n` in `0..=t`.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Whether `P_n >= P_{n+1}` for every `ceil(t/2) <= n < t`.
    pub fn upper_monotone(&self) -> bool {
        self.upper_monotone
    }

    /// Whether `P_n <= P_{n+1}` for every `0 <= n < floor(t/2)`.
    pub fn lower_monotone(&self) -> bool {
        self.lower_monotone
    }

    /// Whether `P_n == P_{t-n}` for every `n`.
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// The first adjacent pair violating monotonicity, if any.
    pub fn first_violation(&self) -> Option<&OrderingViolation> {
        self.first_violation.as_ref()
    }
}

/// Scans a symmetric core across all sample sizes and reports whether the
/// expected shape holds.
pub fn check_core_ordering(core: &SymmetricCore) -> OrderingReport {
    let sums = core.column_sums();
    let t = sums.total();
    let probs = scan_over_n(sums, core.rect());
    let upper_start = t.div_ceil(2);
    let lower_end = t / 2;

    let mut upper_monotone = true;
    let mut lower_monotone = true;
    let mut first_violation = None;
    for n in upper_start..t {
        let (a, b) = (&probs[n as usize], &probs[n as usize + 1]);
        if a < b {
            upper_monotone = false;
            if first_violation.is_none() {
                first_violation = Some(OrderingViolation {
                    n,
                    n_prime: n + 1,
                    prob_n: a.clone(),
                    prob_n_prime: b.clone(),
                });
            }
        }
    }
    for n in 0..lower_end {
        let (a, b) = (&probs[n as usize], &probs[n as usize + 1]);
        if a > b {
            lower_monotone = false;
            if first_violation.is_none() {
                first_violation = Some(OrderingViolation {
                    n,
                    n_prime: n + 1,
                    prob_n: a.clone(),
                    prob_n_prime: b.clone(),
                });
            }
        }
    }
    let symmetric = (0..=t).all(|n| probs[n as usize] == probs[(t - n) as usize]);

    OrderingReport {
        core: core.clone(),
        probs,
        upper_monotone,
        lower_monotone,
        symmetric,
        first_violation,
    }
}

/// Comparison of one rectangle's probability at two sample sizes in the
/// upper range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairComparison {
    pub n: u64,
    pub n_prime: u64,
    pub prob_n: Rational,
    pub prob_n_prime: Rational,
    /// True when `P_n < P_{n'}`, i.e. the symmetric-core ordering fails
    /// for this rectangle.
    pub violated: bool,
}

/// Compares `P_n` against `P_{n'}` for an arbitrary rectangle, with
/// `ceil(t/2) <= n <= n' <= t`. Symmetric cores always give
/// `P_n >= P_{n'}` here; asymmetric rectangles may not.
pub fn check_asymmetric_pair(
    sums: &ColumnSums,
    rect: &Rect,
    n: u64,
    n_prime: u64,
) -> Result<PairComparison> {
    let t = sums.total();
    if n < t.div_ceil(2) {
        return Err(Error::invalid(
            "n",
            format!("{n} is below the upper range start {}", t.div_ceil(2)),
        ));
    }
    if n_prime < n {
        return Err(Error::invalid(
            "n_prime",
            format!("{n_prime} is smaller than n = {n}"),
        ));
    }
    // Validates n' <= t and the category count.
    MhgSpec::new(n_prime, sums.clone())?;
    let probs = scan_over_n(sums, rect);
    let prob_n = probs[n as usize].clone();
    let prob_n_prime = probs[n_prime as usize].clone();
    let violated = prob_n < prob_n_prime;
    Ok(PairComparison {
        n,
        n_prime,
        prob_n,
        prob_n_prime,
        violated,
    })
}

/// One cross-multiplied ratio comparison: whether
/// `w_n * (t - n) >= w_{n+1} * (n + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioFlag {
    pub n: u64,
    pub holds: bool,
}

/// Evaluates the coefficient ratio inequality at every step of the upper
/// range. Each flag is equivalent to `P_n >= P_{n+1}` for the same
/// profile, but is computed purely in integers.
pub fn profile_ratio_flags(profile: &ConvolutionProfile) -> Vec<RatioFlag> {
    let t = profile.total();
    (t.div_ceil(2)..t)
        .map(|n| {
            let lhs = profile.coeff(n) * BigUint::from(t - n);
            let rhs = profile.coeff(n + 1) * BigUint::from(n + 1);
            RatioFlag { n, holds: lhs >= rhs }
        })
        .collect()
}

/// Bounds for `sweep_core_ordering`.
#[derive(Debug, Clone, Copy)]
pub struct OrderingSweepBounds {
    /// Largest category count, inclusive; sweeps `2..=max_m`.
    pub max_m: usize,
    /// Largest per-category size, inclusive; sweeps `1..=max_s`.
    pub max_s: u64,
}

impl Default for OrderingSweepBounds {
    fn default() -> Self {
        OrderingSweepBounds { max_m: 4, max_s: 5 }
    }
}

/// Tally of an exhaustive symmetric-core sweep.
#[derive(Debug, Clone)]
pub struct OrderingSweepOutcome {
    /// Number of `(s, l)` cores examined.
    pub cores: u64,
    /// Failures of `P_n >= P_{n'}` over all pairs in the upper range.
    pub upper_violations: u64,
    /// Failures of `P_{n'} <= P_n` over all pairs in the lower range.
    pub lower_violations: u64,
    /// Failures of `P_n == P_{t-n}`.
    pub symmetry_violations: u64,
    /// Failures of the cross-multiplied ratio inequality.
    pub ratio_violations: u64,
    /// Steps where the ratio flag disagreed with the direct comparison of
    /// adjacent probabilities.
    pub ratio_mismatches: u64,
    /// Human-readable details for the first few findings.
    pub first_findings: Vec<String>,
}

impl OrderingSweepOutcome {
    pub fn is_clean(&self) -> bool {
        self.upper_violations == 0
            && self.lower_violations == 0
            && self.symmetry_violations == 0
            && self.ratio_violations == 0
            && self.ratio_mismatches == 0
    }
}

/// Checks every symmetric core with `2..=max_m` categories and sizes
/// `1..=max_s`, one representative per relabeling orbit: all-pairs
/// monotonicity on both ranges, symmetry in `n`, the ratio inequality,
/// and agreement between the ratio flags and adjacent comparisons.
pub fn sweep_core_ordering(bounds: &OrderingSweepBounds) -> OrderingSweepOutcome {
    let mut cores: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    for m in 2..=bounds.max_m {
        let sizes: Vec<u64> = (1..=bounds.max_s).collect();
        for_each_canonical(&[(m, sizes)], &mut |s: &[u64]| {
            let blocks: Vec<(usize, Vec<u64>)> = runs(s)
                .into_iter()
                .map(|(count, sj)| (count, (0..=sj / 2).collect()))
                .collect();
            for_each_canonical(&blocks, &mut |l: &[u64]| {
                cores.push((s.to_vec(), l.to_vec()));
            });
        });
    }

    let per_core: Vec<CoreTally> = cores
        .par_iter()
        .map(|(s, l)| tally_core(s, l))
        .collect();

    let mut outcome = OrderingSweepOutcome {
        cores: cores.len() as u64,
        upper_violations: 0,
        lower_violations: 0,
        symmetry_violations: 0,
        ratio_violations: 0,
        ratio_mismatches: 0,
        first_findings: Vec::new(),
    };
    for tally in per_core {
        outcome.upper_violations += tally.upper;
        outcome.lower_violations += tally.lower;
        outcome.symmetry_violations += tally.symmetry;
        outcome.ratio_violations += tally.ratio;
        outcome.ratio_mismatches += tally.mismatch;
        for finding in tally.findings {
            if outcome.first_findings.len() < 20 {
                outcome.first_findings.push(finding);
            }
        }
    }
    outcome
}

struct CoreTally {
    upper: u64,
    lower: u64,
    symmetry: u64,
    ratio: u64,
    mismatch: u64,
    findings: Vec<String>,
}

fn tally_core(s: &[u64], l: &[u64]) -> CoreTally {
    let sums = ColumnSums::new(s.to_vec());
    let core = SymmetricCore::new(sums.clone(), l).expect("sweep lowers are valid");
    let t = sums.total();
    let profile = profile_for(&sums, core.rect());
    let t_row = binomial_row(t);
    let probs: Vec<Rational> = (0..=t)
        .map(|n| ratio(profile.coeff(n).clone(), t_row[n as usize].clone()))
        .collect();
    let upper_start = t.div_ceil(2);
    let lower_end = t / 2;

    let mut tally = CoreTally {
        upper: 0,
        lower: 0,
        symmetry: 0,
        ratio: 0,
        mismatch: 0,
        findings: Vec::new(),
    };
    let note = |findings: &mut Vec<String>, text: String| {
        if findings.len() < 5 {
            findings.push(format!("s={s:?} l={l:?}: {text}"));
        }
    };

    for n in upper_start..t {
        for n_prime in n + 1..=t {
            if probs[n as usize] < probs[n_prime as usize] {
                tally.upper += 1;
                note(
                    &mut tally.findings,
                    format!("P_{n} < P_{n_prime} in the upper range"),
                );
            }
        }
    }
    for n_prime in 0..lower_end {
        for n in n_prime + 1..=lower_end {
            if probs[n_prime as usize] > probs[n as usize] {
                tally.lower += 1;
                note(
                    &mut tally.findings,
                    format!("P_{n_prime} > P_{n} in the lower range"),
                );
            }
        }
    }
    for n in 0..=t {
        if probs[n as usize] != probs[(t - n) as usize] {
            tally.symmetry += 1;
            note(&mut tally.findings, format!("P_{n} != P_{}", t - n));
        }
    }
    for flag in profile_ratio_flags(&profile) {
        if !flag.holds {
            tally.ratio += 1;
            note(
                &mut tally.findings,
                format!("ratio inequality fails at n={}", flag.n),
            );
        }
        let adjacent = probs[flag.n as usize] >= probs[flag.n as usize + 1];
        if flag.holds != adjacent {
            tally.mismatch += 1;
            note(
                &mut tally.findings,
                format!("ratio flag disagrees with probabilities at n={}", flag.n),
            );
        }
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::event_prob_enumerate;
    use crate::numeric::rational;
    use crate::simplex::parse_symmetric_core;
    use num_traits::Zero;

    #[test]
    fn scan_matches_direct_summation() {
        let sums = ColumnSums::new(vec![3, 4]);
        let rect: Rect = "1:2,0:3".parse().unwrap();
        let probs = scan_over_n(&sums, &rect);
        assert_eq!(probs.len(), 8);
        for n in 0..=7u64 {
            let spec = MhgSpec::new(n, sums.clone()).unwrap();
            assert_eq!(probs[n as usize], event_prob_enumerate(&spec, &rect));
        }
    }

    #[test]
    fn point_core_report() {
        let core = parse_symmetric_core("s=2,2;l=1,1").unwrap();
        let report = check_core_ordering(&core);
        let expected: Vec<Rational> = [(0, 1), (0, 1), (2, 3), (0, 1), (0, 1)]
            .iter()
            .map(|&(a, b)| rational(a, b).unwrap())
            .collect();
        assert_eq!(report.probs(), &expected[..]);
        assert!(report.upper_monotone());
        assert!(report.lower_monotone());
        assert!(report.symmetric());
        assert!(report.first_violation().is_none());
    }

    #[test]
    fn mixed_core_report() {
        let core = parse_symmetric_core("s=2,2;l=0,1").unwrap();
        let report = check_core_ordering(&core);
        let expected: Vec<Rational> = [(0, 1), (1, 2), (2, 3), (1, 2), (0, 1)]
            .iter()
            .map(|&(a, b)| rational(a, b).unwrap())
            .collect();
        assert_eq!(report.probs(), &expected[..]);
        assert!(report.upper_monotone());
        assert!(report.lower_monotone());
        assert!(report.symmetric());
    }

    #[test]
    fn asymmetric_pair_example() {
        let sums = ColumnSums::new(vec![4, 6]);
        let rect: Rect = "0:3,3:6".parse().unwrap();
        let cmp = check_asymmetric_pair(&sums, &rect, 5, 6).unwrap();
        assert_eq!(cmp.prob_n, rational(31, 42).unwrap());
        assert_eq!(cmp.prob_n_prime, rational(13, 14).unwrap());
        assert!(cmp.violated);
    }

    #[test]
    fn pair_with_equal_sample_sizes_never_violates() {
        let sums = ColumnSums::new(vec![4, 6]);
        let rect: Rect = "0:3,3:6".parse().unwrap();
        let cmp = check_asymmetric_pair(&sums, &rect, 6, 6).unwrap();
        assert_eq!(cmp.prob_n, cmp.prob_n_prime);
        assert!(!cmp.violated);
    }

    #[test]
    fn pair_preconditions() {
        let sums = ColumnSums::new(vec![4, 6]);
        let rect: Rect = "0:3,3:6".parse().unwrap();
        // Below the upper range.
        assert!(check_asymmetric_pair(&sums, &rect, 4, 6).is_err());
        // Decreasing pair.
        assert!(check_asymmetric_pair(&sums, &rect, 7, 6).is_err());
        // Beyond the population.
        assert!(check_asymmetric_pair(&sums, &rect, 6, 11).is_err());
    }

    #[test]
    fn ratio_flags_for_point_core() {
        let core = parse_symmetric_core("s=2,2;l=1,1").unwrap();
        let profile = profile_for(core.column_sums(), core.rect());
        let flags = profile_ratio_flags(&profile);
        assert_eq!(flags.len(), 2);
        assert!(flags.iter().all(|f| f.holds));
    }

    #[test]
    fn ratio_equality_without_truncation() {
        // With untruncated rows the profile is the binomial row of t and
        // the cross-multiplied comparison is an exact equality.
        let sums = ColumnSums::new(vec![3, 4]);
        let rect = Rect::full(&[3, 4]);
        let profile = profile_for(&sums, &rect);
        let t = profile.total();
        for n in t.div_ceil(2)..t {
            let lhs = profile.coeff(n) * BigUint::from(t - n);
            let rhs = profile.coeff(n + 1) * BigUint::from(n + 1);
            assert_eq!(lhs, rhs, "n={n}");
        }
        assert!(profile_ratio_flags(&profile).iter().all(|f| f.holds));
    }

    #[test]
    fn ratio_flags_hold_vacuously_on_zero_coefficients() {
        let core = parse_symmetric_core("s=2,2;l=1,1").unwrap();
        let profile = profile_for(core.column_sums(), core.rect());
        // w = [0, 0, 4, 0, 0]: the n=3 comparison is 0 >= 0.
        assert!(profile.coeff(3).is_zero());
        let flags = profile_ratio_flags(&profile);
        assert!(flags.iter().find(|f| f.n == 3).unwrap().holds);
    }

    #[test]
    fn sweep_smoke() {
        let outcome = sweep_core_ordering(&OrderingSweepBounds { max_m: 2, max_s: 3 });
        assert!(outcome.cores > 0);
        assert!(outcome.is_clean(), "{:?}", outcome.first_findings);
    }
}
