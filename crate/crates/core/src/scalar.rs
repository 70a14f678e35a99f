//! Arithmetic backends.
//!
//! Every kernel in this crate is written against [`Scalar`], so the same code
//! path runs in binary floating point (the fast default) and in exact rational
//! arithmetic (the verification oracle).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used as the verification backend.
pub type Exact = BigRational;

/// Number type the simulation kernels operate on.
///
/// Implementations must evaluate `+ - * /` as the corresponding field
/// operation; the kernels never reassociate, so a given backend produces
/// bit-identical results for a given input.
pub trait Scalar: num_traits::Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Short backend label for diagnostics.
    const NAME: &'static str;

    /// Whether arithmetic in this backend is exact.
    const EXACT: bool;

    fn from_ratio(numerator: i64, denominator: i64) -> Self;

    fn from_rational(value: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// `2^exp`, with `exp` possibly negative.
    fn pow2(exp: i32) -> Self {
        let two = Self::one() + Self::one();
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = acc * two.clone();
        }
        if exp < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    fn from_u64(value: u64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(value)))
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for f64 {
    const NAME: &'static str = "float";
    const EXACT: bool = false;

    fn from_ratio(numerator: i64, denominator: i64) -> Self {
        numerator as f64 / denominator as f64
    }

    fn from_rational(value: &BigRational) -> Self {
        rational_to_f64(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pow2(exp: i32) -> Self {
        2f64.powi(exp)
    }

    fn from_u64(value: u64) -> Self {
        value as f64
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "float32";
    const EXACT: bool = false;

    fn from_ratio(numerator: i64, denominator: i64) -> Self {
        (numerator as f64 / denominator as f64) as f32
    }

    fn from_rational(value: &BigRational) -> Self {
        rational_to_f64(value) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn pow2(exp: i32) -> Self {
        2f32.powi(exp)
    }

    fn from_u64(value: u64) -> Self {
        value as f32
    }
}

impl Scalar for BigRational {
    const NAME: &'static str = "rational";
    const EXACT: bool = true;

    fn from_ratio(numerator: i64, denominator: i64) -> Self {
        BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
    }

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn pow2(exp: i32) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp < 0 {
            BigRational::new(BigInt::one(), p)
        } else {
            BigRational::from_integer(p)
        }
    }
}

/// Nearest-ish `f64` for a big rational. `ToPrimitive` on `Ratio<BigInt>`
/// handles huge numerators and denominators without overflowing to NaN.
fn rational_to_f64(value: &BigRational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    ToPrimitive::to_f64(value).unwrap_or_else(|| {
        ToPrimitive::to_f64(value.numer()).unwrap_or(f64::NAN) / ToPrimitive::to_f64(value.denom()).unwrap_or(f64::NAN)
    })
}
