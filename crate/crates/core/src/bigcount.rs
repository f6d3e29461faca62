//! Arbitrary-precision nonnegative counts and their decimal renderings.
//!
//! Every tally in the crate is a [`Count`]. Game sizes routinely pass
//! 10^160, far beyond `u128` and well beyond what `f64` can hold exactly,
//! so all arithmetic here is exact and unsigned.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid decimal count {0:?}")]
    Parse(String),
}

/// An exact nonnegative integer of unbounded width.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow10(exp: u32) -> Self {
        Count(BigUint::from(10u32).pow(exp))
    }

    pub fn pow2(exp: u32) -> Self {
        Count(BigUint::one() << exp as usize)
    }

    pub fn add(&self, other: &Count) -> Count {
        Count(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &Count) -> Count {
        Count(&self.0 * &other.0)
    }

    /// `⌊self / d⌋`.
    pub fn floor_div(&self, d: &Count) -> Result<Count, CountError> {
        if d.is_zero() {
            return Err(CountError::DivisionByZero);
        }
        Ok(Count(self.0.div_floor(&d.0)))
    }

    /// `⌈self / d⌉`.
    pub fn ceil_div(&self, d: &Count) -> Result<Count, CountError> {
        if d.is_zero() {
            return Err(CountError::DivisionByZero);
        }
        Ok(Count(self.0.div_ceil(&d.0)))
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Count) -> Result<(Count, Count), CountError> {
        if d.is_zero() {
            return Err(CountError::DivisionByZero);
        }
        let (q, r) = self.0.div_rem(&d.0);
        Ok((Count(q), Count(r)))
    }

    /// Product with a machine-sized factor.
    pub fn mul_small(&self, k: u64) -> Count {
        Count(&self.0 * k)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Number of decimal digits (1 for zero).
    pub fn decimal_len(&self) -> usize {
        self.0.to_str_radix(10).len()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// Full decimal expansion, optionally grouped in threes by spaces.
    pub fn render_decimal(&self, grouping: bool) -> String {
        let digits = self.0.to_str_radix(10);
        if !grouping {
            return digits;
        }
        let lead = digits.len() % 3;
        let mut out = String::with_capacity(digits.len() + digits.len() / 3);
        for (i, ch) in digits.chars().enumerate() {
            if i > 0 && (i + 3 - lead).is_multiple_of(3) {
                out.push(' ');
            }
            out.push(ch);
        }
        out
    }

    /// Round to `sig_digits` significant digits, half up.
    ///
    /// Returns the kept digit string (exactly `sig_digits` long, untrimmed)
    /// and the decimal exponent of its first digit. Zero yields `("0…0", 0)`.
    pub fn round_significant(&self, sig_digits: usize) -> (String, i32) {
        assert!(sig_digits >= 1, "need at least one significant digit");
        let digits = self.0.to_str_radix(10);
        if self.is_zero() {
            return ("0".repeat(sig_digits), 0);
        }
        let exponent = digits.len() as i32 - 1;
        if digits.len() <= sig_digits {
            let mut kept = digits;
            while kept.len() < sig_digits {
                kept.push('0');
            }
            return (kept, exponent);
        }
        let mut kept: Vec<u8> = digits.as_bytes()[..sig_digits].to_vec();
        let round_up = digits.as_bytes()[sig_digits] >= b'5';
        let mut exponent = exponent;
        if round_up {
            let mut i = sig_digits;
            loop {
                if i == 0 {
                    // 99..9 rolled over into a new leading digit
                    kept.insert(0, b'1');
                    kept.truncate(sig_digits);
                    exponent += 1;
                    break;
                }
                i -= 1;
                if kept[i] == b'9' {
                    kept[i] = b'0';
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
        (String::from_utf8(kept).expect("ascii digits"), exponent)
    }

    /// `%g`-style scientific rendering: values whose rounded form stays below
    /// `10^sig_digits` print verbatim, everything else as `d.ddde±kk` with
    /// trailing mantissa zeros trimmed, no `+` on the exponent and at least
    /// two exponent digits.
    pub fn render_scientific(&self, sig_digits: usize) -> String {
        let (kept, exponent) = self.round_significant(sig_digits);
        if (exponent as usize) < sig_digits {
            return self.0.to_str_radix(10);
        }
        let (head, tail) = kept.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{exponent:02}")
        } else {
            format!("{head}.{tail}e{exponent:02}")
        }
    }

    /// Fixed-width scientific rendering (`%.{n}e` style) with no trimming and
    /// a bare exponent, as used by the limit-game table: `1.380e13`.
    /// Values below `10^sig_digits` print verbatim.
    pub fn render_scientific_fixed(&self, sig_digits: usize) -> String {
        let (kept, exponent) = self.round_significant(sig_digits);
        if (exponent as usize) < sig_digits {
            return self.0.to_str_radix(10);
        }
        let (head, tail) = kept.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exponent}")
        } else {
            format!("{head}.{tail}e{exponent}")
        }
    }

    pub fn parse_decimal(text: &str) -> Result<Count, CountError> {
        let cleaned: String = text
            .chars()
            .filter(|c| !matches!(c, ' ' | ',' | '_'))
            .collect();
        if cleaned.is_empty() || !cleaned.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CountError::Parse(text.to_string()));
        }
        BigUint::parse_bytes(cleaned.as_bytes(), 10)
            .map(Count)
            .ok_or_else(|| CountError::Parse(text.to_string()))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Count({})", self.0)
    }
}

impl FromStr for Count {
    type Err = CountError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Count::parse_decimal(s)
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<u32> for Count {
    fn from(v: u32) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<usize> for Count {
    fn from(v: usize) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Count> for &'a Count {
    type Output = Count;
    fn add(self, rhs: &'a Count) -> Count {
        Count(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Count> for Count {
    fn add_assign(&mut self, rhs: &Count) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Count {
    fn add_assign(&mut self, rhs: Count) {
        self.0 += rhs.0;
    }
}

impl AddAssign<u64> for Count {
    fn add_assign(&mut self, rhs: u64) {
        self.0 += rhs;
    }
}

impl Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        Count(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Count> for &'a Count {
    type Output = Count;
    fn mul(self, rhs: &'a Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl MulAssign<&Count> for Count {
    fn mul_assign(&mut self, rhs: &Count) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Count> for Count {
    fn sum<I: Iterator<Item = &'a Count>>(iter: I) -> Count {
        let mut acc = Count::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// Machine formats carry full decimal strings, never floats.
impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Count::parse_decimal(&text).map_err(serde::de::Error::custom)
    }
}
