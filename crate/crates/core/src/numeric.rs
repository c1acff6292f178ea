//! Exact integer and rational arithmetic.
//!
//! Everything downstream works with arbitrary-precision integers and
//! reduced fractions; no floating point is used anywhere in the crate.
//! Binomial coefficients are served from cached Pascal rows so that
//! repeated sweeps over the same parameters stay cheap.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision reduced fraction.
pub type Rational = num_rational::BigRational;

fn row_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<BigUint>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<BigUint>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Row `n` of Pascal's triangle: `[C(n,0), ..., C(n,n)]`.
///
/// Rows are memoized behind a lock; callers share one immutable copy.
pub fn binomial_row(n: u64) -> Arc<Vec<BigUint>> {
    if let Some(row) = row_cache().read().unwrap().get(&n) {
        return Arc::clone(row);
    }
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        // C(n, k+1) = C(n, k) * (n - k) / (k + 1); the division is exact.
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    let row = Arc::new(row);
    Arc::clone(
        row_cache()
            .write()
            .unwrap()
            .entry(n)
            .or_insert(row),
    )
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    binomial_row(n)[k as usize].clone()
}

/// Multinomial coefficient `n! / (x_1! ... x_m!)`.
///
/// Rejects inputs whose counts do not sum to `n`.
pub fn multinomial_coeff(n: u64, x: &[u64]) -> Result<BigUint> {
    let total: u64 = x.iter().sum();
    if total != n {
        return Err(Error::invalid(
            "x",
            format!("counts sum to {total}, expected {n}"),
        ));
    }
    // n! / prod x_j! = prod_j C(rem_j, x_j) with rem_j the mass not yet placed.
    let mut rem = n;
    let mut coeff = BigUint::one();
    for &xj in x {
        coeff *= &binomial_row(rem)[xj as usize];
        rem -= xj;
    }
    Ok(coeff)
}

/// Reduced fraction `num / den` with the sign carried by the numerator.
pub fn rational(num: i64, den: i64) -> Result<Rational> {
    if den == 0 {
        return Err(Error::invalid("den", "denominator must be nonzero"));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Parses `"a/b"` or a bare integer `"a"` into a reduced fraction.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let text = text.trim();
    let (num_text, den_text) = match text.split_once('/') {
        Some((a, b)) => (a, b),
        None => (text, "1"),
    };
    let num: BigInt = num_text
        .trim()
        .parse()
        .map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = den_text
        .trim()
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("denominator must be nonzero"));
    }
    Ok(Rational::new(num, den))
}

/// Renders a fraction as `"num/den"` in lowest terms, e.g. `"31/42"`.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders a fraction in fixed-point decimal with `digits` places,
/// rounding ties to even.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let negative = r.is_negative();
    let num = r.numer().abs().to_biguint().expect("abs is non-negative");
    let den = r.denom().to_biguint().expect("denominator is positive");
    let scale = BigUint::from(10u32).pow(digits);
    let (mut q, rem) = (num * &scale).div_rem(&den);
    let twice = rem << 1;
    if twice > den || (twice == den && q.is_odd()) {
        q += 1u32;
    }
    let body = q.to_string();
    let mut out = String::new();
    if negative && !q.is_zero() {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&body);
        return out;
    }
    let digits = digits as usize;
    if body.len() > digits {
        let (int_part, frac_part) = body.split_at(body.len() - digits);
        out.push_str(int_part);
        out.push('.');
        out.push_str(frac_part);
    } else {
        out.push_str("0.");
        for _ in 0..digits - body.len() {
            out.push('0');
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 7), big(0));
        assert_eq!(binomial(9, 0), big(1));
        assert_eq!(binomial(10, 5), big(252));
        assert_eq!(binomial(4, -1), big(0));
        assert_eq!(binomial(0, 0), big(1));
    }

    #[test]
    fn binomial_matches_pascal_recurrence() {
        // Independent construction: additive Pascal triangle, no division.
        let mut prev: Vec<BigUint> = vec![BigUint::one()];
        for n in 0..=64u64 {
            for (k, expected) in prev.iter().enumerate() {
                assert_eq!(&binomial(n, k as i64), expected, "C({n},{k})");
            }
            let mut next = vec![BigUint::one()];
            for k in 1..prev.len() {
                next.push(&prev[k - 1] + &prev[k]);
            }
            next.push(BigUint::one());
            prev = next;
        }
    }

    #[test]
    fn binomial_rows_are_symmetric_and_unimodal() {
        for n in 0..=64u64 {
            let row = binomial_row(n);
            let len = row.len();
            for k in 0..len {
                assert_eq!(row[k], row[len - 1 - k]);
            }
            for k in 0..len / 2 {
                assert!(row[k] <= row[k + 1]);
            }
        }
    }

    #[test]
    fn binomial_row_memoization_is_transparent() {
        // A cached row must agree with a fresh multiplicative computation.
        let _ = binomial_row(40);
        let row = binomial_row(40);
        let mut c = BigUint::one();
        for k in 0..=40u64 {
            assert_eq!(row[k as usize], c);
            if k < 40 {
                c = c * (40 - k) / (k + 1);
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial_coeff(3, &[1, 1, 1]).unwrap(), big(6));
        assert_eq!(multinomial_coeff(4, &[2, 2]).unwrap(), big(6));
        assert_eq!(multinomial_coeff(3, &[3]).unwrap(), big(1));
        assert_eq!(multinomial_coeff(0, &[0, 0]).unwrap(), big(1));
        assert!(multinomial_coeff(4, &[1, 1]).is_err());
    }

    #[test]
    fn multinomial_matches_factorial_oracle() {
        fn factorial(n: u64) -> BigUint {
            (1..=n).fold(BigUint::one(), |acc, i| acc * i)
        }
        for n in 0..=10u64 {
            for a in 0..=n {
                for b in 0..=(n - a) {
                    let c = n - a - b;
                    let expected =
                        factorial(n) / (factorial(a) * factorial(b) * factorial(c));
                    assert_eq!(multinomial_coeff(n, &[a, b, c]).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn rational_examples() {
        assert_eq!(rational(186, 252).unwrap(), rational(31, 42).unwrap());
        let r = rational(5, -10).unwrap();
        assert_eq!(r, rational(-1, 2).unwrap());
        assert_eq!(fraction_string(&r), "-1/2");
        assert!(rational(1, 0).is_err());
    }

    #[test]
    fn parse_rational_round_trips() {
        assert_eq!(parse_rational("31/42").unwrap(), rational(31, 42).unwrap());
        assert_eq!(parse_rational("-1/2").unwrap(), rational(-1, 2).unwrap());
        assert_eq!(parse_rational("7").unwrap(), rational(7, 1).unwrap());
        assert_eq!(parse_rational("4/6").unwrap(), rational(2, 3).unwrap());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rendering_rounds_half_to_even() {
        let d = |n, de, digits| decimal_string(&rational(n, de).unwrap(), digits);
        assert_eq!(d(34, 35, 6), "0.971429");
        assert_eq!(d(31, 42, 6), "0.738095");
        assert_eq!(d(13, 14, 6), "0.928571");
        assert_eq!(d(1, 8, 2), "0.12"); // 0.125 ties to even 2
        assert_eq!(d(3, 8, 2), "0.38"); // 0.375 ties to even 8
        assert_eq!(d(-1, 8, 2), "-0.12");
        assert_eq!(d(0, 1, 6), "0.000000");
        assert_eq!(d(5, 2, 0), "2"); // 2.5 ties to even 2
        assert_eq!(d(7, 2, 0), "4"); // 3.5 ties to even 4
        assert_eq!(d(1234, 1, 2), "1234.00");
        assert_eq!(d(-1, 3, 4), "-0.3333");
    }
}
