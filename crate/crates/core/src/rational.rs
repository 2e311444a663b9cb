//! Exact rational numbers and the few float conversions taken at output
//! boundaries.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for every length, weight and comparison.
pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn qi(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

/// Numerators over the least common denominator of `values`.
pub fn over_common_denominator<'a, I>(values: I) -> (Vec<BigInt>, BigInt)
where
    I: IntoIterator<Item = &'a Q> + Clone,
{
    let den = values.clone().into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values.into_iter().map(|v| v.numer() * (&den / v.denom())).collect();
    (nums, den)
}

/// Parses `"3"`, `"-1/4"` or `"2/6"` (reduced on the way in).
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Q::new(num, den))
}

pub(crate) fn parse_q_line(text: &str, line: usize) -> Result<Q> {
    parse_q(text).ok_or_else(|| Error::Parse {
        line,
        message: format!("not a rational number: {text:?}"),
    })
}

fn ln_bigint(value: &BigInt) -> f64 {
    debug_assert!(value.is_positive());
    let bits = value.bits();
    if bits < 960 {
        value.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = value >> shift;
        top.to_f64().unwrap_or(f64::INFINITY).ln() + (shift as f64) * std::f64::consts::LN_2
    }
}

/// Natural log of a positive rational; works for values far outside the f64 range.
pub fn ln_q(value: &Q) -> f64 {
    assert!(value.is_positive(), "log of non-positive rational {value}");
    ln_bigint(value.numer()) - ln_bigint(value.denom())
}

/// `ln(numer / denom)` for positive rationals, accurate when the ratio is near 1.
pub fn ln_ratio(numer: &Q, denom: &Q) -> f64 {
    let ratio = numer / denom;
    let delta = &ratio - Q::one();
    match delta.to_f64() {
        Some(d) if d.abs() < 0.5 => d.ln_1p(),
        _ => ln_q(&ratio),
    }
}

pub fn to_f64(value: &Q) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            -ln_q(&-value).exp()
        } else {
            ln_q(value).exp()
        }
    })
}

/// Integer weights over a common denominator.
#[derive(Debug, Clone)]
pub(crate) struct Scaled {
    pub den: BigInt,
    pub nums: Vec<BigInt>,
}

impl Scaled {
    pub fn new(values: &[Q]) -> Self {
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = values
            .iter()
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        Scaled { den, nums }
    }

    /// The numerators as `i128` when every sum of `terms` of them (each scaled
    /// by at most `factor`) provably fits.
    pub fn small(&self, terms: usize, factor: u64) -> Option<Vec<i128>> {
        let budget = 120u64.checked_sub(
            (usize::BITS - terms.max(1).leading_zeros()) as u64
                + (u64::BITS - factor.max(1).leading_zeros()) as u64
                + 2,
        )?;
        self.nums
            .iter()
            .map(|n| if n.bits() <= budget { n.to_i128() } else { None })
            .collect()
    }

    pub fn ratio<W: Weight>(&self, value: &W) -> Q {
        Q::new(value.to_bigint(), self.den.clone())
    }
}

/// Integer arithmetic used by the hot loops (shortest paths, profile minima);
/// implemented for `i128` when values fit and `BigInt` otherwise.
pub(crate) trait Weight:
    Clone
    + Ord
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn to_bigint(&self) -> BigInt;
}

impl Weight for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Weight for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(parse_q("2/6"), Some(q(1, 3)));
        assert_eq!(parse_q("-7"), Some(qi(-7)));
        assert_eq!(parse_q(" 3 / 4 "), Some(q(3, 4)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_q("x"), None);
        assert_eq!(q(6, 4).to_string(), "3/2");
        assert_eq!(qi(5).to_string(), "5");
    }

    #[test]
    fn common_denominator() {
        let v = [q(1, 4), q(-5, 6), qi(2)];
        let (nums, den) = over_common_denominator(&v);
        assert_eq!(den, BigInt::from(12));
        assert_eq!(nums, vec![BigInt::from(3), BigInt::from(-10), BigInt::from(24)]);
    }

    #[test]
    fn logs() {
        assert!((ln_q(&q(1, 2)) + std::f64::consts::LN_2).abs() < 1e-15);
        let near = Q::new(BigInt::from(1_000_001), BigInt::from(1_000_000));
        assert!((ln_ratio(&near, &Q::one()) - 1e-6f64.ln_1p()).abs() < 1e-20);
        let huge = Q::from_integer(BigInt::from(2).pow(3000));
        assert!((ln_q(&huge) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn scaling_round_trips() {
        let values = vec![q(1, 3), q(1, 4), q(5, 12)];
        let s = Scaled::new(&values);
        assert_eq!(s.den, BigInt::from(12));
        let small = s.small(10, 4).unwrap();
        assert_eq!(small, vec![4, 3, 5]);
        assert_eq!(s.ratio(&7i128), q(7, 12));
    }
}
