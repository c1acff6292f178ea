//! The multiple hypergeometric distribution.
//!
//! Draw `n` items without replacement from a population of `t = sum s_j`
//! items split into `m` categories of sizes `s_j`; `X_j` counts the draws
//! from category `j`. Point probabilities are exact rationals, and event
//! probabilities over rectangles are available through direct summation.
//! The summation here is the reference oracle; `convolution` computes the
//! same quantities through a product of truncated coefficient rows.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{binomial_row, Rational};
use crate::simplex::Rect;

/// Category sizes `s` and their total `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSums {
    s: Vec<u64>,
    t: u64,
}

impl ColumnSums {
    pub fn new(s: Vec<u64>) -> Self {
        let t = s.iter().sum();
        ColumnSums { s, t }
    }

    /// The category sizes.
    pub fn values(&self) -> &[u64] {
        &self.s
    }

    /// Population size `t`.
    pub fn total(&self) -> u64 {
        self.t
    }

    /// Number of categories.
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// A fully specified distribution: sample size `n` and column sums `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MhgSpec {
    n: u64,
    sums: ColumnSums,
}

impl MhgSpec {
    /// Requires at least two categories and `n <= t`.
    pub fn new(n: u64, sums: ColumnSums) -> Result<Self> {
        if sums.len() < 2 {
            return Err(Error::invalid("s", "need at least two categories"));
        }
        if n > sums.total() {
            return Err(Error::invalid(
                "n",
                format!("sample size {n} exceeds population {}", sums.total()),
            ));
        }
        Ok(MhgSpec { n, sums })
    }

    /// Sample size `n`.
    pub fn sample_size(&self) -> u64 {
        self.n
    }

    pub fn column_sums(&self) -> &ColumnSums {
        &self.sums
    }

    /// Number of categories `m`.
    pub fn category_count(&self) -> usize {
        self.sums.len()
    }

    /// Population size `t`.
    pub fn total(&self) -> u64 {
        self.sums.total()
    }
}

/// Whether `x` is a possible outcome: correct length, `x_j <= s_j`, and
/// total `n`.
pub fn in_support(spec: &MhgSpec, x: &[u64]) -> bool {
    x.len() == spec.category_count()
        && x.iter().sum::<u64>() == spec.sample_size()
        && x.iter().zip(spec.column_sums().values()).all(|(&v, &s)| v <= s)
}

/// Point probability `prod_j C(s_j, x_j) / C(t, n)`.
///
/// Zero when some `x_j > s_j`; counts that do not sum to `n` are rejected.
pub fn pmf(spec: &MhgSpec, x: &[u64]) -> Result<Rational> {
    if x.len() != spec.category_count() {
        return Err(Error::DimensionMismatch {
            context: "pmf argument",
            expected: spec.category_count(),
            got: x.len(),
        });
    }
    let total: u64 = x.iter().sum();
    if total != spec.sample_size() {
        return Err(Error::invalid(
            "x",
            format!("counts sum to {total}, expected {}", spec.sample_size()),
        ));
    }
    let mut num = BigUint::one();
    for (&xj, &sj) in x.iter().zip(spec.column_sums().values()) {
        if xj > sj {
            return Ok(Rational::zero());
        }
        num *= &binomial_row(sj)[xj as usize];
    }
    Ok(ratio(num, choose_total(spec)))
}

/// Probability that every count lands in its interval, by direct summation
/// over the outcomes inside the rectangle.
///
/// Panics if the rectangle dimension differs from the category count.
pub fn event_prob_enumerate(spec: &MhgSpec, rect: &Rect) -> Rational {
    assert_eq!(
        rect.dim(),
        spec.category_count(),
        "rect/spec dimension mismatch"
    );
    let s = spec.column_sums().values();
    let n = spec.sample_size();
    let m = s.len();

    // Clamp each interval to the values a count can take; the event is
    // unchanged because excluded points have probability zero.
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    for j in 0..m {
        let l = rect.lower()[j];
        let u = rect.upper()[j].min(s[j]).min(n);
        if l > u {
            return Rational::zero();
        }
        lo.push(l);
        hi.push(u);
    }
    // suffix_lo[j] / suffix_hi[j]: bounds on the mass placed at j..m.
    let mut suffix_lo = vec![0u64; m + 1];
    let mut suffix_hi = vec![0u64; m + 1];
    for j in (0..m).rev() {
        suffix_lo[j] = suffix_lo[j + 1] + lo[j];
        suffix_hi[j] = suffix_hi[j + 1] + hi[j];
    }
    let rows: Vec<Arc<Vec<BigUint>>> = s.iter().map(|&sj| binomial_row(sj)).collect();

    let mut acc = BigUint::zero();
    sum_box(
        &rows,
        &lo,
        &hi,
        &suffix_lo,
        &suffix_hi,
        0,
        n,
        &BigUint::one(),
        &mut acc,
    );
    ratio(acc, choose_total(spec))
}

#[allow(clippy::too_many_arguments)]
fn sum_box(
    rows: &[Arc<Vec<BigUint>>],
    lo: &[u64],
    hi: &[u64],
    suffix_lo: &[u64],
    suffix_hi: &[u64],
    j: usize,
    rem: u64,
    partial: &BigUint,
    acc: &mut BigUint,
) {
    let m = rows.len();
    if j == m - 1 {
        // Last coordinate is forced to the remaining mass.
        if lo[j] <= rem && rem <= hi[j] {
            *acc += partial * &rows[j][rem as usize];
        }
        return;
    }
    // Feasible choices leave the tail a reachable remainder.
    let min_x = lo[j].max(rem.saturating_sub(suffix_hi[j + 1]));
    let max_x = hi[j].min(rem.saturating_sub(suffix_lo[j + 1]));
    if rem < suffix_lo[j + 1] {
        return;
    }
    let mut x = min_x;
    while x <= max_x {
        let next = partial * &rows[j][x as usize];
        sum_box(
            rows,
            lo,
            hi,
            suffix_lo,
            suffix_hi,
            j + 1,
            rem - x,
            &next,
            acc,
        );
        x += 1;
    }
}

fn choose_total(spec: &MhgSpec) -> BigUint {
    binomial_row(spec.total())[spec.sample_size() as usize].clone()
}

pub(crate) fn ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;
    use crate::simplex::{enumerate_simplex, SymmetricCore};

    fn spec(n: u64, s: &[u64]) -> MhgSpec {
        MhgSpec::new(n, ColumnSums::new(s.to_vec())).unwrap()
    }

    #[test]
    fn construction_guards() {
        assert!(MhgSpec::new(3, ColumnSums::new(vec![5])).is_err());
        assert!(MhgSpec::new(11, ColumnSums::new(vec![4, 6])).is_err());
        assert!(MhgSpec::new(10, ColumnSums::new(vec![4, 6])).is_ok());
    }

    #[test]
    fn pmf_examples() {
        let d = spec(5, &[4, 6]);
        assert_eq!(pmf(&d, &[2, 3]).unwrap(), rational(10, 21).unwrap());
        assert_eq!(pmf(&d, &[5, 0]).unwrap(), rational(0, 1).unwrap());
        assert!(pmf(&d, &[2, 2]).is_err());
        assert!(pmf(&d, &[5]).is_err());
    }

    #[test]
    fn support_membership() {
        let d = spec(5, &[4, 6]);
        assert!(in_support(&d, &[2, 3]));
        assert!(!in_support(&d, &[5, 0]));
        assert!(!in_support(&d, &[1, 3]));
        assert!(!in_support(&d, &[5]));
    }

    #[test]
    fn pmf_sums_to_one() {
        for s in [vec![2, 3], vec![4, 6], vec![1, 1, 5], vec![3, 3, 3, 2]] {
            let sums = ColumnSums::new(s.clone());
            let t = sums.total();
            let m = s.len();
            for n in 0..=t {
                let d = MhgSpec::new(n, sums.clone()).unwrap();
                let mut total = Rational::zero();
                for x in enumerate_simplex(m, n).unwrap() {
                    total += pmf(&d, &x).unwrap();
                }
                assert_eq!(total, Rational::one(), "s={s:?} n={n}");
            }
        }
    }

    #[test]
    fn pmf_complement_symmetry() {
        // Drawing x of n is as likely as leaving s - x among the undrawn
        // t - n items.
        for s in [vec![2, 3], vec![4, 6], vec![2, 2, 3]] {
            let sums = ColumnSums::new(s.clone());
            let t = sums.total();
            let m = s.len();
            for n in 0..=t {
                let d = MhgSpec::new(n, sums.clone()).unwrap();
                let d_rev = MhgSpec::new(t - n, sums.clone()).unwrap();
                for x in enumerate_simplex(m, n).unwrap() {
                    if !in_support(&d, &x) {
                        continue;
                    }
                    let mirror: Vec<u64> =
                        x.iter().zip(&s).map(|(&v, &sj)| sj - v).collect();
                    assert_eq!(pmf(&d, &x).unwrap(), pmf(&d_rev, &mirror).unwrap());
                }
            }
        }
    }

    #[test]
    fn event_examples() {
        let r: Rect = "0:3,3:6".parse().unwrap();
        assert_eq!(
            event_prob_enumerate(&spec(5, &[4, 6]), &r),
            rational(31, 42).unwrap()
        );
        assert_eq!(
            event_prob_enumerate(&spec(6, &[4, 6]), &r),
            rational(13, 14).unwrap()
        );
        // Unconstrained rectangle covers everything.
        let full = Rect::full(&[4, 6]);
        assert_eq!(event_prob_enumerate(&spec(5, &[4, 6]), &full), Rational::one());
        // Intervals that the clamp empties give probability zero.
        let far: Rect = "5:9,0:6".parse().unwrap();
        assert_eq!(event_prob_enumerate(&spec(5, &[4, 6]), &far), Rational::zero());
    }

    #[test]
    fn event_matches_pointwise_sum() {
        let sums = ColumnSums::new(vec![3, 4, 2]);
        let t = sums.total();
        for n in 0..=t {
            let d = MhgSpec::new(n, sums.clone()).unwrap();
            for r in [
                "0:1,1:3,0:2".parse::<Rect>().unwrap(),
                "1:3,0:0,1:2".parse().unwrap(),
                "0:3,0:4,0:2".parse().unwrap(),
            ] {
                let mut expected = Rational::zero();
                for x in enumerate_simplex(3, n).unwrap() {
                    if r.contains(&x) {
                        expected += pmf(&d, &x).unwrap();
                    }
                }
                assert_eq!(event_prob_enumerate(&d, &r), expected, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn symmetric_core_events_match_at_mirrored_sample_sizes() {
        for s in [vec![2, 2], vec![3, 1], vec![2, 3, 2]] {
            let sums = ColumnSums::new(s.clone());
            let t = sums.total();
            let halves: Vec<u64> = s.iter().map(|&v| v / 2).collect();
            for lower in [vec![0; s.len()], halves] {
                let core = SymmetricCore::new(sums.clone(), &lower).unwrap();
                for n in 0..=t {
                    let a = event_prob_enumerate(
                        &MhgSpec::new(n, sums.clone()).unwrap(),
                        core.rect(),
                    );
                    let b = event_prob_enumerate(
                        &MhgSpec::new(t - n, sums.clone()).unwrap(),
                        core.rect(),
                    );
                    assert_eq!(a, b, "s={s:?} l={lower:?} n={n}");
                }
            }
        }
    }
}
