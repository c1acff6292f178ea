//! Rendering helpers: exact/decimal value pairs and the scan table.

use mhg_core::numeric::{decimal_string, fraction_string};
use mhg_core::Rational;
use serde_json::{json, Value};

/// An exact fraction together with its fixed-point decimal rendering.
pub struct Pair {
    pub exact: String,
    pub decimal: String,
}

pub fn pair(r: &Rational, digits: u32) -> Pair {
    Pair {
        exact: fraction_string(r),
        decimal: decimal_string(r, digits),
    }
}

impl Pair {
    pub fn json(&self) -> Value {
        json!({ "exact": self.exact, "decimal": self.decimal })
    }
}

/// Aligned text table of probabilities indexed by n: one row per sample
/// size, decimal first, exact fraction last.
pub fn scan_table(probs: &[Rational], digits: u32) -> String {
    let t = probs.len().saturating_sub(1);
    let w = t.to_string().len();
    let dw = digits as usize + 2;
    let mut out = String::new();
    out.push_str(&format!("{:>w$}  {:<dw$}  exact\n", "n", "decimal"));
    for (n, p) in probs.iter().enumerate() {
        out.push_str(&format!(
            "{n:>w$}  {:<dw$}  {}\n",
            decimal_string(p, digits),
            fraction_string(p),
        ));
    }
    out
}
