//! Exact rational numbers and the integer combinatorics behind them.
//!
//! [`Rational`] is `num_rational::BigRational`: numerator and denominator are
//! arbitrary-precision, always reduced, denominator always positive.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_u64(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_biguint(value: BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, value))
}

/// Exact binary value of a finite float.
pub fn from_f64(value: f64) -> Result<Rational> {
    Rational::from_float(value).ok_or_else(|| Error::domain("non-finite float has no rational value"))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `base^exp` for a non-negative integer exponent, by repeated squaring.
pub fn pow(base: &Rational, mut exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &sq;
        }
        exp >>= 1;
        if exp > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

pub fn biguint_pow(base: &BigUint, exp: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// True when `value` lies in the closed unit interval.
pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Numerators of the binomial law with success probability `num/den`.
///
/// Term `k` is `C(n,k) num^k (den-num)^(n-k)`; the common denominator of every
/// term is `den^n`. Successive terms are produced by exact integer recurrence,
/// so a full sweep costs O(n) big-integer multiplications.
pub(crate) struct BinomialNumerators {
    n: u64,
    succ: BigUint,
    fail: BigUint,
    den: BigUint,
}

impl BinomialNumerators {
    pub(crate) fn new(n: u64, p: &Rational) -> Result<Self> {
        if !is_probability(p) {
            return Err(Error::domain("success probability must lie in [0, 1]"));
        }
        let den = p.denom().magnitude().clone();
        let succ = p.numer().magnitude().clone();
        let fail = &den - &succ;
        Ok(Self { n, succ, fail, den })
    }

    pub(crate) fn denominator(&self) -> BigUint {
        biguint_pow(&self.den, self.n)
    }

    pub(crate) fn term(&self, k: u64) -> BigUint {
        if k > self.n {
            return BigUint::zero();
        }
        binomial(self.n, k) * biguint_pow(&self.succ, k) * biguint_pow(&self.fail, self.n - k)
    }

    /// Sum of terms `lo..=hi` (clamped to the support).
    pub(crate) fn range_sum(&self, lo: u64, hi: u64) -> BigUint {
        let hi = hi.min(self.n);
        if lo > hi {
            return BigUint::zero();
        }
        if self.fail.is_zero() || self.succ.is_zero() {
            // degenerate laws: the only mass sits at k = n or k = 0
            return (lo..=hi).map(|k| self.term(k)).sum();
        }
        let mut term = self.term(lo);
        let mut total = term.clone();
        for k in lo..hi {
            // C(n,k+1) s^(k+1) f^(n-k-1) = C(n,k) s^k f^(n-k) * (n-k) s / ((k+1) f)
            term = term * (self.n - k) * &self.succ;
            term /= &self.fail * (k + 1);
            total += &term;
        }
        total
    }

    pub(crate) fn range_probability(&self, lo: u64, hi: u64) -> Rational {
        let num = self.range_sum(lo, hi);
        from_biguint(num) / from_biguint(self.denominator())
    }
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent (`"0.1"`,
/// `"-2.5e-3"`) into an exact rational. Decimals are read exactly, so `"0.1"`
/// is `1/10`, not the nearest double.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::parameter(alloc::format!("cannot read `{text}` as a rational"));
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = text[pos + 1..].parse().map_err(|_| bad())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::with_capacity(whole.len() + frac.len());
    all.push_str(whole);
    all.push_str(frac);
    let magnitude: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exponent - frac.len() as i64;
    if scale.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = int(10);
    let factor = pow(&ten, scale.unsigned_abs());
    let mut value = Rational::from_integer(magnitude);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if negative { -value } else { value })
}

/// Decimal rendering with `places` digits after the point, rounded half away
/// from zero. Exact: no floating point is involved.
pub fn to_decimal(value: &Rational, places: usize) -> String {
    let scale = pow(&int(10), places as u64);
    let scaled = value.abs() * Rational::from_integer(scale.to_integer());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice_r: BigInt = r * 2;
    let rounded = if twice_r >= *scaled.denom() { q + 1 } else { q };
    let mut digits = rounded.to_str_radix(10);
    if digits.len() <= places {
        let pad = places + 1 - digits.len();
        let mut padded = String::with_capacity(places + 1);
        padded.extend(core::iter::repeat('0').take(pad));
        padded.push_str(&digits);
        digits = padded;
    }
    let mut out = String::new();
    if value.is_negative() && rounded_is_nonzero(&digits) {
        out.push('-');
    }
    let split = digits.len() - places;
    out.push_str(&digits[..split]);
    if places > 0 {
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}

fn rounded_is_nonzero(digits: &str) -> bool {
    digits.bytes().any(|b| b != b'0')
}

/// `"p/q"`, or just `"p"` for integers.
pub fn to_fraction(value: &Rational) -> String {
    let mut out = String::new();
    if value.is_integer() {
        let _ = write!(out, "{}", value.numer());
    } else {
        let _ = write!(out, "{}/{}", value.numer(), value.denom());
    }
    out
}

/// Sum of a slice of rationals.
pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Values of a slice converted to floats.
pub fn to_f64_vec(values: &[Rational]) -> Vec<f64> {
    values.iter().map(to_f64).collect()
}
