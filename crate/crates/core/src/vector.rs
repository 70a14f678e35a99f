//! Per-step split-error dispositions and error vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// What happens at one split of the mixing path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitDisposition {
    /// No error, the split is even (written `0`).
    Skip,
    /// The larger daughter `(T/2)(1+eps)` is carried on (`+`).
    Plus,
    /// The smaller daughter `(T/2)(1-eps)` is carried on (`-`).
    Minus,
}

impl SplitDisposition {
    pub const ALL: [SplitDisposition; 3] = [SplitDisposition::Skip, SplitDisposition::Plus, SplitDisposition::Minus];

    pub fn symbol(self) -> char {
        match self {
            SplitDisposition::Skip => '0',
            SplitDisposition::Plus => '+',
            SplitDisposition::Minus => '-',
        }
    }

    /// Accepts `+`, `-`, `0` plus the typographic `−` and `φ`.
    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            '0' | 'φ' | 'ϕ' | '_' => Some(SplitDisposition::Skip),
            '+' => Some(SplitDisposition::Plus),
            '-' | '−' => Some(SplitDisposition::Minus),
            _ => None,
        }
    }

    /// Signed multiplier of eps: `+1`, `-1` or `0`.
    pub fn sign<S: Scalar>(self) -> S {
        match self {
            SplitDisposition::Skip => S::zero(),
            SplitDisposition::Plus => S::one(),
            SplitDisposition::Minus => -S::one(),
        }
    }
}

impl fmt::Display for SplitDisposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Parses a compact vector string such as `"-0+00-"`. Commas, spaces and
/// enclosing brackets are ignored, so `"[-, φ, +, φ, φ, -]"` also parses.
pub fn parse_dispositions(text: &str) -> Result<Vec<SplitDisposition>> {
    let body = text.trim().trim_start_matches('[').trim_end_matches(']');
    body.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| SplitDisposition::from_symbol(c).ok_or_else(|| Error::MalformedVector(text.to_string())))
        .collect()
}

pub fn format_dispositions(dispositions: &[SplitDisposition]) -> String {
    dispositions.iter().map(|d| d.symbol()).collect()
}

/// Split magnitudes for the error-carrying steps.
#[derive(Debug, Clone, PartialEq)]
pub enum Magnitudes<S> {
    /// One eps for every non-skip entry.
    Uniform(S),
    PerStep(Vec<S>),
}

/// Dispositions for splits `O_1..O_{n-1}` together with their magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorVector<S> {
    dispositions: Vec<SplitDisposition>,
    magnitudes: Magnitudes<S>,
}

fn check_epsilon<S: Scalar>(eps: &S) -> Result<()> {
    if eps.is_negative() || *eps >= S::one() {
        Err(Error::EpsilonOutOfRange(eps.to_string()))
    } else {
        Ok(())
    }
}

impl<S: Scalar> ErrorVector<S> {
    pub fn new(dispositions: Vec<SplitDisposition>, epsilon: S) -> Result<Self> {
        check_epsilon(&epsilon)?;
        Ok(ErrorVector { dispositions, magnitudes: Magnitudes::Uniform(epsilon) })
    }

    pub fn with_magnitudes(dispositions: Vec<SplitDisposition>, magnitudes: Vec<S>) -> Result<Self> {
        if magnitudes.len() != dispositions.len() {
            return Err(Error::LengthMismatch { expected: dispositions.len(), actual: magnitudes.len() });
        }
        magnitudes.iter().try_for_each(check_epsilon)?;
        Ok(ErrorVector { dispositions, magnitudes: Magnitudes::PerStep(magnitudes) })
    }

    /// Error-free vector of the given length.
    pub fn skip(len: usize, epsilon: S) -> Result<Self> {
        Self::new(vec![SplitDisposition::Skip; len], epsilon)
    }

    pub fn parse(text: &str, epsilon: S) -> Result<Self> {
        Self::new(parse_dispositions(text)?, epsilon)
    }

    /// Single error at 1-based `step`, everything else skipped.
    pub fn single(len: usize, step: usize, disposition: SplitDisposition, epsilon: S) -> Result<Self> {
        if step == 0 || step > len {
            return Err(Error::PositionOutOfRange { step, max: len });
        }
        let mut dispositions = vec![SplitDisposition::Skip; len];
        dispositions[step - 1] = disposition;
        Self::new(dispositions, epsilon)
    }

    #[inline]
    pub fn dispositions(&self) -> &[SplitDisposition] {
        &self.dispositions
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.dispositions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.dispositions.is_empty()
    }

    pub fn magnitudes(&self) -> &Magnitudes<S> {
        &self.magnitudes
    }

    /// Magnitude applied at 0-based slot `index`.
    pub fn magnitude(&self, index: usize) -> &S {
        match &self.magnitudes {
            Magnitudes::Uniform(eps) => eps,
            Magnitudes::PerStep(list) => &list[index],
        }
    }

    /// Signed error `+eps`, `-eps` or `0` at 0-based slot `index`.
    pub fn signed_error(&self, index: usize) -> S {
        self.dispositions[index].sign::<S>() * self.magnitude(index).clone()
    }

    pub fn has_skip(&self) -> bool {
        self.dispositions.contains(&SplitDisposition::Skip)
    }
}

impl<S> fmt::Display for ErrorVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_dispositions(&self.dispositions))
    }
}

/// Owned disposition list usable as a map key or CLI argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dispositions(pub Vec<SplitDisposition>);

impl FromStr for Dispositions {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dispositions(s).map(Dispositions)
    }
}

impl fmt::Display for Dispositions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_dispositions(&self.0))
    }
}
