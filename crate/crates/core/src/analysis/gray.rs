use crate::error::{Error, Result};
use crate::vector::SplitDisposition;

/// Reflected-binary rank of a sign vector (`+` = 0, `-` = 1, first step is
/// the most significant bit).
///
/// Walking positions `0, 1, 2, ...` visits vectors that differ in exactly one
/// step at a time.
pub fn gray_position(signs: &[SplitDisposition]) -> Result<u64> {
    let mut word = 0u64;
    for (i, d) in signs.iter().enumerate() {
        let bit = match d {
            SplitDisposition::Plus => 0,
            SplitDisposition::Minus => 1,
            SplitDisposition::Skip => return Err(Error::SkipInSignVector(i + 1)),
        };
        word = (word << 1) | bit;
    }
    Ok(gray_decode(word))
}

/// Sign vector of length `len` at gray `position`.
pub fn sign_vector_at(position: u64, len: usize) -> Vec<SplitDisposition> {
    let word = gray_encode(position);
    (0..len)
        .map(|i| if (word >> (len - 1 - i)) & 1 == 1 { SplitDisposition::Minus } else { SplitDisposition::Plus })
        .collect()
}

#[inline]
pub fn gray_encode(index: u64) -> u64 {
    index ^ (index >> 1)
}

#[inline]
pub fn gray_decode(mut word: u64) -> u64 {
    let mut shift = 1;
    while shift < 64 {
        word ^= word >> shift;
        shift <<= 1;
    }
    word
}
