//! Interval-censored multinomial frequencies.
//!
//! Conditioning a multinomial count vector on a rectangular event changes
//! its moments; this module computes the conditional mean and second
//! moments exactly, by two independent routes. The first sums point
//! probabilities over the outcomes inside the rectangle. The second reads
//! coefficients off products of per-category truncated power series: with
//! `p_j = a_j / b`, the series for category `j` keeps terms
//! `a_j^k * n!/k!` for `k` inside interval `j`, and coefficient `n` of the
//! product recovers the event weight, with first and second moments given
//! by the same product with one or two series replaced by index-weighted
//! versions. All internal arithmetic is integer; a single common
//! denominator is divided out at the end.
//!
//! The module also quantifies how much conditioning shrinks the variance
//! of a linear combination `c^T X` relative to a multinomial with the
//! same conditional mean; see `variance_reduction`. For coordinate
//! projections the reduction is non-negative, and it is zero in exactly
//! two situations: the component is itself pinned at `0` or `n`, or the
//! event coincides with the cylinder that pins its zero components (in
//! which case the remaining counts are again jointly multinomial, e.g.
//! any event of probability one). Everywhere else the reduction is
//! strictly positive, which `sweep_censored_moments` verifies
//! exhaustively over a small grid.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::convolution::{poly_mul_capped, product_coeff_at};
use crate::error::{Error, Result};
use crate::hypergeom::ratio;
use crate::numeric::{binomial_row, Rational};
use crate::simplex::Rect;
use crate::sweep::{for_each_canonical, runs};

/// Sample size `n >= 1` and cell probabilities `p` summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultinomialSpec {
    n: u64,
    p: Vec<Rational>,
}

impl MultinomialSpec {
    /// Requires at least two categories, `n >= 1`, non-negative `p_j`,
    /// and `sum p_j == 1` exactly.
    pub fn new(n: u64, p: Vec<Rational>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::invalid("p", "need at least two categories"));
        }
        if n == 0 {
            return Err(Error::invalid("n", "sample size must be positive"));
        }
        if let Some(j) = p.iter().position(|pj| pj < &Rational::zero()) {
            return Err(Error::invalid(
                "p",
                format!("probability {j} is negative"),
            ));
        }
        let total: Rational = p.iter().sum();
        if total != Rational::one() {
            return Err(Error::invalid(
                "p",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        Ok(MultinomialSpec { n, p })
    }

    /// Sample size `n`.
    pub fn sample_size(&self) -> u64 {
        self.n
    }

    /// The cell probabilities.
    pub fn probabilities(&self) -> &[Rational] {
        &self.p
    }

    /// Number of categories `m`.
    pub fn category_count(&self) -> usize {
        self.p.len()
    }
}

/// Point probability `n!/(x_1!...x_m!) * prod p_j^{x_j}`.
pub fn multinomial_pmf(spec: &MultinomialSpec, x: &[u64]) -> Result<Rational> {
    if x.len() != spec.category_count() {
        return Err(Error::DimensionMismatch {
            context: "pmf argument",
            expected: spec.category_count(),
            got: x.len(),
        });
    }
    let total: u64 = x.iter().sum();
    if total != spec.n {
        return Err(Error::invalid(
            "x",
            format!("counts sum to {total}, expected {}", spec.n),
        ));
    }
    let coeff = crate::numeric::multinomial_coeff(spec.n, x)?;
    let mut num = BigInt::from(coeff);
    let mut den = BigInt::one();
    for (&xj, pj) in x.iter().zip(&spec.p) {
        num *= pow_int(pj.numer(), xj);
        den *= pow_int(pj.denom(), xj);
    }
    Ok(Rational::new(num, den))
}

/// Event probability and conditional first and second moments given a
/// rectangular event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensoredMoments {
    event_prob: Rational,
    mu: Vec<Rational>,
    second: Vec<Vec<Rational>>,
}

impl CensoredMoments {
    /// Probability of the conditioning event.
    pub fn event_prob(&self) -> &Rational {
        &self.event_prob
    }

    /// Conditional means `E[X_j | X in R]`.
    pub fn mu(&self) -> &[Rational] {
        &self.mu
    }

    /// Conditional second moments `E[X_j X_k | X in R]`.
    pub fn second(&self) -> &[Vec<Rational>] {
        &self.second
    }

    /// Conditional covariance `Cov(X_j, X_k | X in R)`.
    pub fn covariance(&self, j: usize, k: usize) -> Rational {
        &self.second[j][k] - &self.mu[j] * &self.mu[k]
    }
}

// Cell probabilities over a common denominator: p_j = a_j / b.
struct Scaled {
    a: Vec<BigUint>,
    b: BigUint,
}

fn scale(p: &[Rational]) -> Scaled {
    let mut b = BigUint::one();
    for pj in p {
        b = b.lcm(&pj.denom().to_biguint().expect("denominator is positive"));
    }
    let a = p
        .iter()
        .map(|pj| {
            let den = pj.denom().to_biguint().expect("denominator is positive");
            pj.numer().to_biguint().expect("probability is non-negative") * (&b / den)
        })
        .collect();
    Scaled { a, b }
}

// Intervals clamped to the values a count can take; None when the event
// is empty.
fn clamp(rect: &Rect, n: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let mut lo = Vec::with_capacity(rect.dim());
    let mut hi = Vec::with_capacity(rect.dim());
    for j in 0..rect.dim() {
        let l = rect.lower()[j];
        let u = rect.upper()[j].min(n);
        if l > u {
            return None;
        }
        lo.push(l);
        hi.push(u);
    }
    if lo.iter().sum::<u64>() > n || hi.iter().sum::<u64>() < n {
        return None;
    }
    Some((lo, hi))
}

fn check_dims(spec: &MultinomialSpec, rect: &Rect) -> Result<()> {
    if rect.dim() != spec.category_count() {
        return Err(Error::DimensionMismatch {
            context: "rectangle",
            expected: spec.category_count(),
            got: rect.dim(),
        });
    }
    Ok(())
}

/// Conditional moments by direct summation over the outcomes inside the
/// rectangle.
///
/// Fails with `ZeroProbabilityEvent` when the event has probability zero.
pub fn censored_moments(spec: &MultinomialSpec, rect: &Rect) -> Result<CensoredMoments> {
    check_dims(spec, rect)?;
    let n = spec.n;
    let m = spec.category_count();
    let scaled = scale(&spec.p);
    let (lo, hi) = clamp(rect, n).ok_or(Error::ZeroProbabilityEvent)?;

    let mut suffix_lo = vec![0u64; m + 1];
    let mut suffix_hi = vec![0u64; m + 1];
    for j in (0..m).rev() {
        suffix_lo[j] = suffix_lo[j + 1] + lo[j];
        suffix_hi[j] = suffix_hi[j + 1] + hi[j];
    }
    let rows: Vec<Arc<Vec<BigUint>>> = (0..=n).map(binomial_row).collect();

    let mut acc = BoxAccumulator {
        prob: BigUint::zero(),
        mu: vec![BigUint::zero(); m],
        second: vec![vec![BigUint::zero(); m]; m],
    };
    let mut xbuf = vec![0u64; m];
    sum_box(
        &SumBoxCtx {
            a: &scaled.a,
            rows: &rows,
            lo: &lo,
            hi: &hi,
            suffix_lo: &suffix_lo,
            suffix_hi: &suffix_hi,
        },
        0,
        n,
        &BigUint::one(),
        &mut xbuf,
        &mut acc,
    );

    finish_moments(acc, &scaled, n, m)
}

struct SumBoxCtx<'a> {
    a: &'a [BigUint],
    rows: &'a [Arc<Vec<BigUint>>],
    lo: &'a [u64],
    hi: &'a [u64],
    suffix_lo: &'a [u64],
    suffix_hi: &'a [u64],
}

struct BoxAccumulator {
    prob: BigUint,
    mu: Vec<BigUint>,
    second: Vec<Vec<BigUint>>,
}

impl BoxAccumulator {
    fn record(&mut self, term: &BigUint, x: &[u64]) {
        self.prob += term;
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0 {
                continue;
            }
            self.mu[j] += term * xj;
            for (k, &xk) in x.iter().enumerate().skip(j) {
                if xk == 0 {
                    continue;
                }
                self.second[j][k] += term * (xj * xk);
            }
        }
    }
}

// Walks the rectangle, keeping the partial weight
// prod_{k<j} C(rem_k, x_k) * a_k^{x_k}; the last coordinate is forced.
fn sum_box(
    ctx: &SumBoxCtx<'_>,
    j: usize,
    rem: u64,
    partial: &BigUint,
    xbuf: &mut Vec<u64>,
    acc: &mut BoxAccumulator,
) {
    let m = ctx.a.len();
    if j == m - 1 {
        if ctx.lo[j] <= rem && rem <= ctx.hi[j] {
            let term = partial * pow_uint(&ctx.a[j], rem);
            xbuf[j] = rem;
            acc.record(&term, xbuf);
        }
        return;
    }
    if rem < ctx.suffix_lo[j + 1] {
        return;
    }
    let min_x = ctx.lo[j].max(rem.saturating_sub(ctx.suffix_hi[j + 1]));
    let max_x = ctx.hi[j].min(rem - ctx.suffix_lo[j + 1]);
    if min_x > max_x {
        return;
    }
    let row = &ctx.rows[rem as usize];
    let mut power = pow_uint(&ctx.a[j], min_x);
    for x in min_x..=max_x {
        if x > min_x {
            power *= &ctx.a[j];
        }
        if !power.is_zero() {
            let next = partial * &row[x as usize] * &power;
            xbuf[j] = x;
            sum_box(ctx, j + 1, rem - x, &next, xbuf, acc);
        }
    }
}

fn finish_moments(
    acc: BoxAccumulator,
    scaled: &Scaled,
    n: u64,
    m: usize,
) -> Result<CensoredMoments> {
    if acc.prob.is_zero() {
        return Err(Error::ZeroProbabilityEvent);
    }
    let event_prob = ratio(acc.prob.clone(), pow_uint(&scaled.b, n));
    let mu: Vec<Rational> = acc
        .mu
        .iter()
        .map(|w| ratio(w.clone(), acc.prob.clone()))
        .collect();
    let mut second = vec![vec![Rational::zero(); m]; m];
    for j in 0..m {
        for k in j..m {
            let value = ratio(acc.second[j][k].clone(), acc.prob.clone());
            second[j][k] = value.clone();
            second[k][j] = value;
        }
    }
    Ok(CensoredMoments {
        event_prob,
        mu,
        second,
    })
}

/// Conditional moments by truncated power-series products; exactly equal
/// to `censored_moments` on every input.
///
/// Fails with `ZeroProbabilityEvent` when the event has probability zero.
pub fn censored_moments_series(
    spec: &MultinomialSpec,
    rect: &Rect,
) -> Result<CensoredMoments> {
    check_dims(spec, rect)?;
    let n = spec.n;
    let nn = n as usize;
    let m = spec.category_count();
    let scaled = scale(&spec.p);
    let (lo, hi) = clamp(rect, n).ok_or(Error::ZeroProbabilityEvent)?;

    // fact[k] = k!
    let mut fact = Vec::with_capacity(nn + 1);
    fact.push(BigUint::one());
    for k in 1..=n {
        fact.push(&fact[k as usize - 1] * k);
    }

    // Series for category j: coefficient a_j^k * n!/k! at degree k inside
    // the interval, zero elsewhere. The factorial scaling keeps every
    // coefficient an integer; the product then carries (n!)^m / n! extra,
    // divided out below.
    let mut series = vec![vec![BigUint::zero(); nn + 1]; m];
    for j in 0..m {
        let mut power = pow_uint(&scaled.a[j], lo[j]);
        for k in lo[j]..=hi[j] {
            if k > lo[j] {
                power *= &scaled.a[j];
            }
            series[j][k as usize] = &power * (&fact[nn] / &fact[k as usize]);
        }
    }
    let first_weighted: Vec<Vec<BigUint>> = series
        .iter()
        .map(|s| weighted(s, |k| BigUint::from(k)))
        .collect();
    let second_weighted: Vec<Vec<BigUint>> = series
        .iter()
        .map(|s| weighted(s, |k| BigUint::from(k * k)))
        .collect();

    // prefix[i] = series_0 x ... x series_{i-1}, capped at degree n.
    let unit = vec![BigUint::one()];
    let mut prefix: Vec<Vec<BigUint>> = Vec::with_capacity(m + 1);
    prefix.push(unit.clone());
    for j in 0..m {
        prefix.push(poly_mul_capped(&prefix[j], &series[j], nn));
    }
    let mut suffix: Vec<Vec<BigUint>> = vec![unit.clone(); m + 1];
    for j in (0..m).rev() {
        suffix[j] = poly_mul_capped(&suffix[j + 1], &series[j], nn);
    }

    let divisor = pow_uint(&fact[nn], m as u64 - 1);
    let weight = exact_div(prefix[m][nn].clone(), &divisor);
    if weight.is_zero() {
        return Err(Error::ZeroProbabilityEvent);
    }

    let excl: Vec<Vec<BigUint>> = (0..m)
        .map(|j| poly_mul_capped(&prefix[j], &suffix[j + 1], nn))
        .collect();

    let mut mu_weight = Vec::with_capacity(m);
    let mut second_weight = vec![vec![BigUint::zero(); m]; m];
    for j in 0..m {
        mu_weight.push(exact_div(
            product_coeff_at(&first_weighted[j], &excl[j], nn),
            &divisor,
        ));
        second_weight[j][j] = exact_div(
            product_coeff_at(&second_weighted[j], &excl[j], nn),
            &divisor,
        );
    }
    for j in 0..m {
        for k in j + 1..m {
            let cross = poly_mul_capped(&first_weighted[j], &first_weighted[k], nn);
            let mut gap = unit.clone();
            for (l, s) in series.iter().enumerate() {
                if l != j && l != k {
                    gap = poly_mul_capped(&gap, s, nn);
                }
            }
            let value = exact_div(product_coeff_at(&cross, &gap, nn), &divisor);
            second_weight[j][k] = value;
        }
    }

    let event_prob = ratio(weight.clone(), pow_uint(&scaled.b, n));
    let mu: Vec<Rational> = mu_weight
        .iter()
        .map(|w| ratio(w.clone(), weight.clone()))
        .collect();
    let mut second = vec![vec![Rational::zero(); m]; m];
    for j in 0..m {
        for k in j..m {
            let value = ratio(second_weight[j][k].clone(), weight.clone());
            second[j][k] = value.clone();
            second[k][j] = value;
        }
    }
    Ok(CensoredMoments {
        event_prob,
        mu,
        second,
    })
}

fn weighted(series: &[BigUint], f: impl Fn(u64) -> BigUint) -> Vec<BigUint> {
    series
        .iter()
        .enumerate()
        .map(|(k, c)| c * f(k as u64))
        .collect()
}

fn exact_div(value: BigUint, divisor: &BigUint) -> BigUint {
    let (q, r) = value.div_rem(divisor);
    debug_assert!(r.is_zero(), "non-exact division in series path");
    q
}

fn pow_uint(base: &BigUint, mut e: u64) -> BigUint {
    let mut result = BigUint::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

fn pow_int(base: &BigInt, mut e: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

fn rational_pow(base: &Rational, e: u64) -> Rational {
    Rational::new(pow_int(base.numer(), e), pow_int(base.denom(), e))
}

/// Variance of `c^T X` under the conditional law described by `moments`.
pub fn variance_of_combo(moments: &CensoredMoments, c: &[Rational]) -> Result<Rational> {
    let m = moments.mu.len();
    if c.len() != m {
        return Err(Error::DimensionMismatch {
            context: "combination coefficients",
            expected: m,
            got: c.len(),
        });
    }
    let mut quad = Rational::zero();
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        for (k, ck) in c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            quad += cj * ck * &moments.second[j][k];
        }
    }
    let mean: Rational = c
        .iter()
        .zip(&moments.mu)
        .map(|(cj, mj)| cj * mj)
        .sum();
    Ok(quad - &mean * &mean)
}

/// Variance `c^T X` would have under a multinomial with the same sample
/// size and mean vector `mu`: `sum c_j^2 mu_j - (sum c_j mu_j)^2 / n`.
pub fn reference_variance(
    moments: &CensoredMoments,
    n: u64,
    c: &[Rational],
) -> Result<Rational> {
    let m = moments.mu.len();
    if c.len() != m {
        return Err(Error::DimensionMismatch {
            context: "combination coefficients",
            expected: m,
            got: c.len(),
        });
    }
    if n == 0 {
        return Err(Error::invalid("n", "sample size must be positive"));
    }
    let mut lead = Rational::zero();
    let mut mean = Rational::zero();
    for (cj, mj) in c.iter().zip(&moments.mu) {
        lead += cj * cj * mj;
        mean += cj * mj;
    }
    Ok(lead - &mean * &mean / Rational::from_integer(BigInt::from(n)))
}

/// How much conditioning shrinks the variance of `c^T X`: the reference
/// variance minus the conditional variance.
pub fn variance_reduction(
    spec: &MultinomialSpec,
    rect: &Rect,
    c: &[Rational],
) -> Result<Rational> {
    let moments = censored_moments_series(spec, rect)?;
    let reference = reference_variance(&moments, spec.n, c)?;
    let actual = variance_of_combo(&moments, c)?;
    Ok(reference - actual)
}

/// Whether the rectangle intersects the simplex of totals `n` at all.
pub fn rect_intersects_simplex(n: u64, rect: &Rect) -> bool {
    clamp(rect, n).is_some()
}

/// Whether the rectangle cuts the simplex of totals `n` to a nonempty
/// proper subset, i.e. imposes a real constraint on at least one count.
/// Intended for rectangles with at least two coordinates.
pub fn rect_is_nontrivial(n: u64, rect: &Rect) -> bool {
    match clamp(rect, n) {
        None => false,
        Some((lo, hi)) => lo.iter().any(|&l| l > 0) || hi.iter().any(|&u| u < n),
    }
}

/// Bounds for `sweep_censored_moments`.
#[derive(Debug, Clone, Copy)]
pub struct MomentSweepBounds {
    /// Largest category count, inclusive; sweeps `2..=max_m`.
    pub max_m: usize,
    /// Largest sample size, inclusive; sweeps `1..=max_n`.
    pub max_n: u64,
    /// Probabilities range over multiples of `1/grid_denominator`.
    pub grid_denominator: u64,
}

impl Default for MomentSweepBounds {
    fn default() -> Self {
        MomentSweepBounds {
            max_m: 3,
            max_n: 8,
            grid_denominator: 8,
        }
    }
}

/// Tally of an exhaustive censored-moment sweep.
#[derive(Debug, Clone)]
pub struct MomentSweepOutcome {
    /// `(n, p, rect)` cells examined.
    pub cells: u64,
    /// Cells whose event has probability zero (both paths must agree).
    pub zero_probability_cells: u64,
    /// Cells where the two moment paths disagreed in values or in errors.
    pub cross_validation_failures: u64,
    /// Cells where conditional moments broke a structural identity:
    /// means summing to `n`, covariance rows summing to zero, or a mean
    /// leaving its interval.
    pub invariant_failures: u64,
    /// Components with nonzero reduction although the event has
    /// probability one.
    pub sure_event_nonzero: u64,
    /// Components pinned at `0` or `n` with nonzero reduction.
    pub pinned_nonzero: u64,
    /// Components with nonzero reduction although the event only pins
    /// its zero components, leaving the rest jointly multinomial.
    pub factorized_nonzero: u64,
    /// Components without strictly positive reduction in every remaining
    /// situation.
    pub interior_nonpositive: u64,
    /// Cells with every `p_j > 0` where the set-based nontriviality test
    /// disagreed with the event probability being below one.
    pub classifier_failures: u64,
    /// Human-readable details for the first few findings.
    pub first_findings: Vec<String>,
}

impl MomentSweepOutcome {
    pub fn is_clean(&self) -> bool {
        self.cross_validation_failures == 0
            && self.invariant_failures == 0
            && self.sure_event_nonzero == 0
            && self.pinned_nonzero == 0
            && self.factorized_nonzero == 0
            && self.interior_nonpositive == 0
            && self.classifier_failures == 0
    }
}

/// Cross-validates the two moment paths and the variance-reduction signs
/// over every category count `2..=max_m`, sample size `1..=max_n`,
/// probability vector on the grid, and rectangle `0 <= l <= u <= n`, one
/// representative per relabeling orbit.
pub fn sweep_censored_moments(bounds: &MomentSweepBounds) -> MomentSweepOutcome {
    let grid = bounds.grid_denominator;
    // Groups: one per (p multiset, n); rectangles are enumerated inside.
    let mut groups: Vec<(Vec<u64>, u64)> = Vec::new();
    for m in 2..=bounds.max_m {
        let weights: Vec<u64> = (0..=grid).collect();
        for_each_canonical(&[(m, weights)], &mut |idx: &[u64]| {
            if idx.iter().sum::<u64>() != grid {
                return;
            }
            for n in 1..=bounds.max_n {
                groups.push((idx.to_vec(), n));
            }
        });
    }

    let per_group: Vec<GroupTally> = groups
        .par_iter()
        .map(|(idx, n)| tally_group(idx, *n, grid))
        .collect();

    let mut outcome = MomentSweepOutcome {
        cells: 0,
        zero_probability_cells: 0,
        cross_validation_failures: 0,
        invariant_failures: 0,
        sure_event_nonzero: 0,
        pinned_nonzero: 0,
        factorized_nonzero: 0,
        interior_nonpositive: 0,
        classifier_failures: 0,
        first_findings: Vec::new(),
    };
    for tally in per_group {
        outcome.cells += tally.cells;
        outcome.zero_probability_cells += tally.zero_probability;
        outcome.cross_validation_failures += tally.cross_validation;
        outcome.invariant_failures += tally.invariant;
        outcome.sure_event_nonzero += tally.sure_event_nonzero;
        outcome.pinned_nonzero += tally.pinned_nonzero;
        outcome.factorized_nonzero += tally.factorized_nonzero;
        outcome.interior_nonpositive += tally.interior_nonpositive;
        outcome.classifier_failures += tally.classifier;
        for finding in tally.findings {
            if outcome.first_findings.len() < 20 {
                outcome.first_findings.push(finding);
            }
        }
    }
    outcome
}

#[derive(Default)]
struct GroupTally {
    cells: u64,
    zero_probability: u64,
    cross_validation: u64,
    invariant: u64,
    sure_event_nonzero: u64,
    pinned_nonzero: u64,
    factorized_nonzero: u64,
    interior_nonpositive: u64,
    classifier: u64,
    findings: Vec<String>,
}

fn tally_group(idx: &[u64], n: u64, grid: u64) -> GroupTally {
    let m = idx.len();
    let p: Vec<Rational> = idx
        .iter()
        .map(|&i| Rational::new(BigInt::from(i), BigInt::from(grid)))
        .collect();
    let spec = MultinomialSpec::new(n, p).expect("grid weights are a distribution");
    let all_positive = idx.iter().all(|&i| i > 0);
    let n_rat = Rational::from_integer(BigInt::from(n));

    let blocks: Vec<(usize, Vec<(u64, u64)>)> = runs(idx)
        .into_iter()
        .map(|(count, _)| {
            let mut intervals = Vec::new();
            for l in 0..=n {
                for u in l..=n {
                    intervals.push((l, u));
                }
            }
            (count, intervals)
        })
        .collect();

    let mut tally = GroupTally::default();
    for_each_canonical(&blocks, &mut |ivs: &[(u64, u64)]| {
        tally.cells += 1;
        let lo: Vec<u64> = ivs.iter().map(|&(l, _)| l).collect();
        let hi: Vec<u64> = ivs.iter().map(|&(_, u)| u).collect();
        let rect = Rect::new(lo, hi).expect("intervals are nonempty");
        let describe = || format!("n={n} p={idx:?}/{grid} rect={rect}");
        let note = |findings: &mut Vec<String>, text: String| {
            if findings.len() < 5 {
                findings.push(format!("{}: {text}", describe()));
            }
        };

        let by_sum = censored_moments(&spec, &rect);
        let by_series = censored_moments_series(&spec, &rect);
        let moments = match (by_sum, by_series) {
            (Err(Error::ZeroProbabilityEvent), Err(Error::ZeroProbabilityEvent)) => {
                tally.zero_probability += 1;
                if all_positive && rect_intersects_simplex(n, &rect) {
                    tally.classifier += 1;
                    note(
                        &mut tally.findings,
                        "zero probability although the rectangle meets the simplex".into(),
                    );
                }
                return;
            }
            (Ok(a), Ok(b)) => {
                if a != b {
                    tally.cross_validation += 1;
                    note(&mut tally.findings, "moment paths disagree".into());
                    return;
                }
                a
            }
            _ => {
                tally.cross_validation += 1;
                note(&mut tally.findings, "moment paths disagree on errors".into());
                return;
            }
        };

        // Structural identities of conditional moments.
        let mu_total: Rational = moments.mu().iter().sum();
        if mu_total != n_rat {
            tally.invariant += 1;
            note(&mut tally.findings, "means do not sum to n".into());
        }
        for j in 0..m {
            let row_total: Rational = moments.second()[j].iter().sum();
            if row_total != &moments.mu()[j] * &n_rat {
                tally.invariant += 1;
                note(&mut tally.findings, format!("covariance row {j} sum is nonzero"));
            }
            let mu_j = &moments.mu()[j];
            let lo_j = Rational::from_integer(BigInt::from(rect.lower()[j]));
            let hi_j = Rational::from_integer(BigInt::from(rect.upper()[j].min(n)));
            if mu_j < &lo_j || mu_j > &hi_j {
                tally.invariant += 1;
                note(&mut tally.findings, format!("mean {j} escapes its interval"));
            }
        }

        let certain = moments.event_prob() == &Rational::one();
        // Mass of the cylinder that pins exactly this event's zero
        // components. If the event exhausts that cylinder, the remaining
        // counts are jointly multinomial and nothing is reduced.
        let live_mass: Rational = moments
            .mu()
            .iter()
            .zip(spec.probabilities())
            .filter(|(mu_j, _)| !mu_j.is_zero())
            .map(|(_, pj)| pj.clone())
            .sum();
        let factorized = moments.event_prob() == &rational_pow(&live_mass, n);
        for j in 0..m {
            let mu_j = &moments.mu()[j];
            let variance = &moments.second()[j][j] - mu_j * mu_j;
            let reference = mu_j - mu_j * mu_j / &n_rat;
            let reduction = reference - variance;
            if certain {
                if !reduction.is_zero() {
                    tally.sure_event_nonzero += 1;
                    note(
                        &mut tally.findings,
                        format!("component {j} reduced under a sure event"),
                    );
                }
            } else if mu_j.is_zero() || mu_j == &n_rat {
                if !reduction.is_zero() {
                    tally.pinned_nonzero += 1;
                    note(
                        &mut tally.findings,
                        format!("pinned component {j} has nonzero reduction"),
                    );
                }
            } else if factorized {
                if !reduction.is_zero() {
                    tally.factorized_nonzero += 1;
                    note(
                        &mut tally.findings,
                        format!("component {j} reduced under a zero-pinning event"),
                    );
                }
            } else if reduction <= Rational::zero() {
                tally.interior_nonpositive += 1;
                note(
                    &mut tally.findings,
                    format!("component {j} reduction is not positive"),
                );
            }
        }

        if all_positive && rect_is_nontrivial(n, &rect) == certain {
            tally.classifier += 1;
            note(
                &mut tally.findings,
                "set nontriviality disagrees with the event probability".into(),
            );
        }
    });
    tally
}

/// Outcome of `sweep_zero_reduction_pairs`.
#[derive(Debug, Clone)]
pub struct ZeroReductionOutcome {
    /// `(n, p, u_3)` cells examined.
    pub cells: u64,
    /// Cells skipped because the event has probability zero.
    pub zero_probability_cells: u64,
    /// Cells where the reduction was not exactly zero.
    pub failures: u64,
    /// Human-readable details for the first few failures.
    pub first_findings: Vec<String>,
}

/// Sweeps the family of three-category instances where only the third
/// count is constrained (`X_3 <= u_3 < n`) and the combination is
/// `c = (-p_2, p_1, 0)`. The reduction is exactly zero for every such
/// instance: the constraint leaves this particular combination's variance
/// untouched.
pub fn sweep_zero_reduction_pairs(max_n: u64, grid: u64) -> ZeroReductionOutcome {
    let mut outcome = ZeroReductionOutcome {
        cells: 0,
        zero_probability_cells: 0,
        failures: 0,
        first_findings: Vec::new(),
    };
    for n in 1..=max_n {
        for i1 in 0..=grid {
            for i2 in 0..=(grid - i1) {
                let i3 = grid - i1 - i2;
                let p: Vec<Rational> = [i1, i2, i3]
                    .iter()
                    .map(|&i| Rational::new(BigInt::from(i), BigInt::from(grid)))
                    .collect();
                let c = vec![-p[1].clone(), p[0].clone(), Rational::zero()];
                let spec = MultinomialSpec::new(n, p).expect("grid distribution");
                for u3 in 0..n {
                    outcome.cells += 1;
                    let rect = Rect::new(vec![0, 0, 0], vec![n, n, u3])
                        .expect("intervals are nonempty");
                    match variance_reduction(&spec, &rect, &c) {
                        Err(Error::ZeroProbabilityEvent) => {
                            outcome.zero_probability_cells += 1;
                        }
                        Err(_) => unreachable!("validated inputs"),
                        Ok(reduction) => {
                            if !reduction.is_zero() {
                                outcome.failures += 1;
                                if outcome.first_findings.len() < 20 {
                                    outcome.first_findings.push(format!(
                                        "n={n} p=({i1},{i2},{i3})/{grid} u3={u3}: reduction {reduction}"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    outcome
}
