//! Target concentration factors and exact number parsing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest accuracy level representable (`2^n` must fit in a `u64`).
pub const MAX_ACCURACY: u32 = 63;

/// Default accuracy cap for [`approximate_cf`].
pub const DEFAULT_APPROXIMATION_CAP: u32 = 30;

/// A dyadic concentration factor `x / 2^n` kept in lowest terms.
///
/// The numerator is always odd, and `0 < x < 2^n` with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTarget", into = "RawTarget")]
pub struct TargetCF {
    numerator: u64,
    accuracy: u32,
}

#[derive(Serialize, Deserialize)]
struct RawTarget {
    numerator: u64,
    accuracy: u32,
}

impl TryFrom<RawTarget> for TargetCF {
    type Error = Error;

    fn try_from(raw: RawTarget) -> Result<Self> {
        TargetCF::new(raw.numerator, raw.accuracy)
    }
}

impl From<TargetCF> for RawTarget {
    fn from(t: TargetCF) -> Self {
        RawTarget { numerator: t.numerator, accuracy: t.accuracy }
    }
}

impl TargetCF {
    /// Builds `numerator / 2^accuracy`, reducing even numerators.
    pub fn new(numerator: u64, accuracy: u32) -> Result<Self> {
        if accuracy == 0 || accuracy > MAX_ACCURACY {
            return Err(Error::AccuracyOutOfRange(accuracy));
        }
        if numerator == 0 || numerator >= 1u64 << accuracy {
            return Err(Error::OutOfRange(format!("{numerator}/2^{accuracy}")));
        }
        let shift = numerator.trailing_zeros();
        Ok(TargetCF { numerator: numerator >> shift, accuracy: accuracy - shift })
    }

    #[inline]
    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    /// Accuracy level `n`, also the number of mix-split operations.
    #[inline]
    pub fn accuracy(&self) -> u32 {
        self.accuracy
    }

    #[inline]
    pub fn denominator(&self) -> u64 {
        1u64 << self.accuracy
    }

    /// `(2^n - x) / 2^n`. Its plan swaps sample and buffer.
    pub fn complement(&self) -> TargetCF {
        TargetCF { numerator: self.denominator() - self.numerator, accuracy: self.accuracy }
    }

    pub fn value<S: Scalar>(&self) -> S {
        S::from_u64(self.numerator) * S::pow2(-(self.accuracy as i32))
    }

    /// Default tolerance `0.5 / 2^n`.
    pub fn default_tolerance<S: Scalar>(&self) -> S {
        S::pow2(-(self.accuracy as i32) - 1)
    }

    /// Scale factor `2^n` used for reporting errors.
    pub fn scale<S: Scalar>(&self) -> S {
        S::pow2(self.accuracy as i32)
    }
}

impl fmt::Display for TargetCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}

impl FromStr for TargetCF {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_target(s)
    }
}

/// Parses `"87/128"`, `"87/2^7"` or a decimal with explicit accuracy such as
/// `"0.6796875@7"`.
pub fn parse_target(text: &str) -> Result<TargetCF> {
    let text = text.trim();
    let malformed = || Error::MalformedTarget(text.to_string());

    if let Some((value, accuracy)) = text.split_once('@') {
        let accuracy: u32 = accuracy.trim().parse().map_err(|_| malformed())?;
        if accuracy == 0 || accuracy > MAX_ACCURACY {
            return Err(Error::AccuracyOutOfRange(accuracy));
        }
        let value = parse_decimal(value.trim()).map_err(|_| malformed())?;
        if !value.is_positive() || value >= BigRational::one() {
            return Err(Error::OutOfRange(value.to_string()));
        }
        let scaled = value * BigRational::from_integer(BigInt::one() << accuracy);
        if !scaled.is_integer() {
            return Err(Error::NotDyadic { value: text.to_string(), accuracy });
        }
        let numerator = scaled.to_integer().to_u64().ok_or_else(malformed)?;
        return TargetCF::new(numerator, accuracy);
    }

    let (num, den) = text.split_once('/').ok_or_else(malformed)?;
    let numerator: u64 = num.trim().parse().map_err(|_| malformed())?;
    let den = den.trim();
    let accuracy = if let Some(exp) = den.strip_prefix("2^") {
        exp.trim().parse::<u32>().map_err(|_| malformed())?
    } else {
        let d: u64 = den.parse().map_err(|_| {
            // a huge but well-formed integer is still a bad denominator
            if !den.is_empty() && den.bytes().all(|b| b.is_ascii_digit()) {
                Error::NotPowerOfTwo(den.to_string())
            } else {
                malformed()
            }
        })?;
        if !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(den.to_string()));
        }
        d.trailing_zeros()
    };
    if accuracy == 0 {
        return Err(Error::OutOfRange(text.to_string()));
    }
    if accuracy > MAX_ACCURACY {
        return Err(Error::AccuracyOutOfRange(accuracy));
    }
    TargetCF::new(numerator, accuracy)
}

/// Smallest-accuracy dyadic `x / 2^n` within `tolerance` of `value`.
pub fn approximate_cf(value: f64, tolerance: f64) -> Result<TargetCF> {
    approximate_cf_with_cap(value, tolerance, DEFAULT_APPROXIMATION_CAP)
}

/// [`approximate_cf`] with an explicit accuracy cap.
///
/// `x` is the integer nearest to `value * 2^n`, clamped into `1..2^n`; exact
/// ties go to the odd candidate. Scaling by a power of two is exact in binary64, so the
/// rounding decision itself is exact.
pub fn approximate_cf_with_cap(value: f64, tolerance: f64, cap: u32) -> Result<TargetCF> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::NonPositiveTolerance);
    }
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::OutOfRange(value.to_string()));
    }
    let cap = cap.min(MAX_ACCURACY);
    for n in 1..=cap {
        let scale = 2f64.powi(n as i32);
        let scaled = value * scale;
        let floor = scaled.floor();
        let frac = scaled - floor;
        let x = if frac < 0.5 {
            floor
        } else if frac > 0.5 {
            floor + 1.0
        } else if floor as u64 % 2 == 1 {
            floor
        } else {
            floor + 1.0
        };
        // the endpoints 0 and 2^n are not valid targets; their valid
        // neighbour is then the nearest admissible numerator
        let x = (x as u64).clamp(1, (1u64 << n) - 1);
        if (x as f64 / scale - value).abs() <= tolerance {
            return TargetCF::new(x, n);
        }
    }
    Err(Error::ToleranceTooTight { cap })
}

/// Exact decimal such as `"0.07"`, `"-1.5"`, `"3"` or `"2.5e-2"`.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let malformed = || Error::MalformedNumber(text.to_string());
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| malformed())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().map_err(|_| malformed())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    for _ in 0..shift.unsigned_abs() {
        value = if shift < 0 { value / ten.clone() } else { value * ten.clone() };
    }
    Ok(if negative { -value } else { value })
}

/// Exact number in decimal, `a/b` fraction or `p%` percentage form.
pub fn parse_exact(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some(percent) = text.strip_suffix('%') {
        return Ok(parse_exact(percent)? / BigRational::from_integer(BigInt::from(100)));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return Err(Error::MalformedNumber(text.to_string()));
        }
        return Ok(num / den);
    }
    parse_decimal(text)
}

/// Split-error magnitude: `"0.07"` and `"7%"` both give `7/100`.
pub fn parse_epsilon(text: &str) -> Result<BigRational> {
    let eps = parse_exact(text)?;
    if eps.is_negative() || eps >= BigRational::one() {
        return Err(Error::EpsilonOutOfRange(text.trim().to_string()));
    }
    Ok(eps)
}
