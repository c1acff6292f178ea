//! The discrete simplex of frequency vectors and rectangular events.
//!
//! A frequency vector is a non-negative integer vector with a fixed total.
//! A rectangular event constrains each coordinate to a discrete interval.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hypergeom::ColumnSums;
use crate::numeric::binomial;

/// Streaming lexicographic enumeration of all length-`m` non-negative
/// integer vectors summing to `n`.
pub struct SimplexIter {
    next: Option<Vec<u64>>,
}

impl Iterator for SimplexIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        self.next = successor(&current);
        Some(current)
    }
}

// Lexicographic successor: bump the rightmost position that still has
// mass to its right, then push the remaining mass to the end.
fn successor(x: &[u64]) -> Option<Vec<u64>> {
    let m = x.len();
    let p = (0..m).rev().find(|&j| x[j] > 0)?;
    let i = if p == m - 1 {
        if m < 2 {
            return None;
        }
        m - 2
    } else if p == 0 {
        return None;
    } else {
        p - 1
    };
    let mut next = x.to_vec();
    let moved: u64 = next[i + 1..].iter().sum();
    for v in &mut next[i + 1..] {
        *v = 0;
    }
    next[i] += 1;
    next[m - 1] = moved - 1;
    Some(next)
}

/// Iterator over the simplex in ascending lexicographic order.
///
/// `(m, n) = (2, 5)` yields `(0,5), (1,4), ..., (5,0)`.
pub fn enumerate_simplex(m: usize, n: u64) -> Result<SimplexIter> {
    if m == 0 {
        return Err(Error::invalid("m", "need at least one category"));
    }
    let mut first = vec![0u64; m];
    first[m - 1] = n;
    Ok(SimplexIter { next: Some(first) })
}

/// Number of points in the simplex: `C(n + m - 1, m - 1)`.
pub fn simplex_size(m: usize, n: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::invalid("m", "need at least one category"));
    }
    Ok(binomial(n + m as u64 - 1, m as i64 - 1))
}

/// Per-coordinate discrete intervals `l_j <= x_j <= u_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    lo: Vec<u64>,
    hi: Vec<u64>,
}

impl Rect {
    /// Builds a rectangle from per-coordinate bounds; every interval must
    /// satisfy `l_j <= u_j`.
    pub fn new(lo: Vec<u64>, hi: Vec<u64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                context: "rectangle bounds",
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.is_empty() {
            return Err(Error::invalid("lo", "need at least one interval"));
        }
        for (j, (&l, &u)) in lo.iter().zip(&hi).enumerate() {
            if l > u {
                return Err(Error::invalid(
                    "lo",
                    format!("interval {j} is empty: {l} > {u}"),
                ));
            }
        }
        Ok(Rect { lo, hi })
    }

    /// The unconstrained rectangle `0 <= x_j <= bound_j`.
    pub fn full(bounds: &[u64]) -> Self {
        Rect {
            lo: vec![0; bounds.len()],
            hi: bounds.to_vec(),
        }
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// The lower bounds.
    pub fn lower(&self) -> &[u64] {
        &self.lo
    }

    /// The upper bounds.
    pub fn upper(&self) -> &[u64] {
        &self.hi
    }

    /// Whether `x` lies in every coordinate interval.
    ///
    /// Panics if `x` has a different dimension than the rectangle.
    pub fn contains(&self, x: &[u64]) -> bool {
        assert_eq!(x.len(), self.dim(), "rect/vector dimension mismatch");
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&l, &u))| l <= v && v <= u)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, (l, u)) in self.lo.iter().zip(&self.hi).enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}:{u}")?;
        }
        Ok(())
    }
}

impl FromStr for Rect {
    type Err = Error;

    /// Parses `"l1:u1,l2:u2,..."`.
    fn from_str(text: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            input: text.to_string(),
            reason,
        };
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for part in text.split(',') {
            let (l, u) = part
                .split_once(':')
                .ok_or_else(|| err(format!("interval `{part}` is not of the form l:u")))?;
            let l: u64 = l
                .trim()
                .parse()
                .map_err(|_| err(format!("bad lower bound `{l}`")))?;
            let u: u64 = u
                .trim()
                .parse()
                .map_err(|_| err(format!("bad upper bound `{u}`")))?;
            lo.push(l);
            hi.push(u);
        }
        Rect::new(lo, hi).map_err(|e| err(e.to_string()))
    }
}

/// A centrally symmetric rectangle: intervals `[l_j, s_j - l_j]` determined
/// by column sums `s` and lower bounds `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricCore {
    sums: ColumnSums,
    rect: Rect,
}

impl SymmetricCore {
    /// Builds the rectangle with intervals `[l_j, s_j - l_j]`; requires
    /// `2 * l_j <= s_j` so every interval is nonempty.
    pub fn new(sums: ColumnSums, lower: &[u64]) -> Result<Self> {
        if lower.len() != sums.len() {
            return Err(Error::DimensionMismatch {
                context: "core lower bounds",
                expected: sums.len(),
                got: lower.len(),
            });
        }
        let s = sums.values();
        for (j, (&l, &sj)) in lower.iter().zip(s).enumerate() {
            if 2 * l > sj {
                return Err(Error::invalid(
                    "lower",
                    format!("bound {j} exceeds its mirror: l={l} but s={sj}"),
                ));
            }
        }
        let hi: Vec<u64> = lower.iter().zip(s).map(|(&l, &sj)| sj - l).collect();
        let rect = Rect::new(lower.to_vec(), hi)?;
        Ok(SymmetricCore { sums, rect })
    }

    /// The column sums the core is symmetric about.
    pub fn column_sums(&self) -> &ColumnSums {
        &self.sums
    }

    /// The rectangle `[l_j, s_j - l_j]`.
    pub fn rect(&self) -> &Rect {
        &self.rect
    }

    /// The lower bounds `l`.
    pub fn lower(&self) -> &[u64] {
        self.rect.lower()
    }
}

/// Parses a comma-separated list of non-negative integers, e.g. `"4,6"`.
pub fn parse_counts(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|part| {
            part.trim().parse().map_err(|_| Error::Parse {
                input: text.to_string(),
                reason: format!("`{part}` is not a non-negative integer"),
            })
        })
        .collect()
}

/// Parses a symmetric core description `"s=4,4;l=1,1"`.
pub fn parse_symmetric_core(text: &str) -> Result<SymmetricCore> {
    let err = |reason: &str| Error::Parse {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    let (s_part, l_part) = text
        .split_once(';')
        .ok_or_else(|| err("expected `s=...;l=...`"))?;
    let s_text = s_part
        .trim()
        .strip_prefix("s=")
        .ok_or_else(|| err("first field must start with `s=`"))?;
    let l_text = l_part
        .trim()
        .strip_prefix("l=")
        .ok_or_else(|| err("second field must start with `l=`"))?;
    let sums = ColumnSums::new(parse_counts(s_text)?);
    let lower = parse_counts(l_text)?;
    SymmetricCore::new(sums, &lower)
}
