use rayon::prelude::*;

use crate::analysis::gray::{gray_encode, gray_position};
use crate::engine::simulate_cf;
use crate::error::{Error, Result};
use crate::plan::MixSplitPlan;
use crate::scalar::Scalar;
use crate::vector::{ErrorVector, SplitDisposition};

/// One simulated error vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationRow<S> {
    pub vector: ErrorVector<S>,
    pub produced_cf: S,
    /// `produced - target`.
    pub cf_error: S,
    /// `|cf_error| * 2^n`.
    pub scaled_abs_error: S,
    /// `scaled_abs_error < tolerance * 2^n`.
    pub within_tolerance: bool,
    /// Gray rank of the sign word over the enumerated positions; `None`
    /// when the row skips one of them.
    pub gray_position: Option<u64>,
}

/// Sorted, de-duplicated 1-based positions checked against the plan.
pub fn normalize_positions(plan: &MixSplitPlan, positions: &[usize]) -> Result<Vec<usize>> {
    if positions.is_empty() {
        return Err(Error::EmptyPositions);
    }
    let max = plan.error_slots();
    let mut out = positions.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&p| p == 0 || p > max) {
        return Err(Error::PositionOutOfRange { step: bad, max });
    }
    Ok(out)
}

/// Every slot `1..=n-1`.
pub fn all_positions(plan: &MixSplitPlan) -> Vec<usize> {
    (1..=plan.error_slots()).collect()
}

/// Number of vectors [`enumerate`] produces for `k` positions.
pub fn space_size(k: usize, include_skip: bool) -> u128 {
    if include_skip {
        3u128.saturating_pow(k as u32)
    } else {
        1u128.checked_shl(k as u32).unwrap_or(u128::MAX)
    }
}

/// Builds the `index`-th vector of the enumeration space.
///
/// Sign-only spaces are walked in gray order with the first position as the
/// most significant bit. Skip-inclusive spaces are walked lexicographically
/// with `0 < + < -`, first position most significant.
pub(crate) fn vector_at(len: usize, positions: &[usize], include_skip: bool, index: u64) -> Vec<SplitDisposition> {
    let mut dispositions = vec![SplitDisposition::Skip; len];
    let k = positions.len();
    if include_skip {
        let mut rest = index;
        for slot in (0..k).rev() {
            dispositions[positions[slot] - 1] = SplitDisposition::ALL[(rest % 3) as usize];
            rest /= 3;
        }
    } else {
        let word = gray_encode(index);
        for (slot, &p) in positions.iter().enumerate() {
            dispositions[p - 1] =
                if (word >> (k - 1 - slot)) & 1 == 1 { SplitDisposition::Minus } else { SplitDisposition::Plus };
        }
    }
    dispositions
}

fn restricted_gray(dispositions: &[SplitDisposition], positions: &[usize]) -> Option<u64> {
    let word: Vec<SplitDisposition> = positions.iter().map(|&p| dispositions[p - 1]).collect();
    gray_position(&word).ok()
}

/// Simulates every sign (or sign/skip) assignment over `positions`;
/// off-position steps are skipped. Rows come back in enumeration order.
pub fn enumerate<S: Scalar>(
    plan: &MixSplitPlan,
    epsilon: &S,
    positions: &[usize],
    include_skip: bool,
    tolerance: &S,
) -> Result<Vec<EnumerationRow<S>>> {
    let positions = normalize_positions(plan, positions)?;
    let count = space_size(positions.len(), include_skip);
    let count = u64::try_from(count).map_err(|_| Error::PositionOutOfRange { step: positions.len(), max: 63 })?;
    let target = plan.target();
    let target_value = target.value::<S>();
    let scale = target.scale::<S>();
    let scaled_tolerance = tolerance.clone() * scale.clone();
    let len = plan.error_slots();

    (0..count)
        .into_par_iter()
        .map(|index| {
            let dispositions = vector_at(len, &positions, include_skip, index);
            let gray = restricted_gray(&dispositions, &positions);
            let vector = ErrorVector::new(dispositions, epsilon.clone())?;
            let (produced_cf, _) = simulate_cf(plan, &vector)?;
            let cf_error = produced_cf.clone() - target_value.clone();
            let scaled_abs_error = cf_error.abs() * scale.clone();
            let within_tolerance = scaled_abs_error < scaled_tolerance;
            Ok(EnumerationRow {
                vector,
                produced_cf,
                cf_error,
                scaled_abs_error,
                within_tolerance,
                gray_position: gray,
            })
        })
        .collect()
}

/// Row count, within-tolerance count and largest scaled |error|.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationSummary<S> {
    pub rows: usize,
    pub within: usize,
    pub max_scaled_abs_error: S,
}

pub fn summarize<S: Scalar>(rows: &[EnumerationRow<S>]) -> EnumerationSummary<S> {
    let mut max = S::zero();
    for r in rows {
        if r.scaled_abs_error > max {
            max = r.scaled_abs_error.clone();
        }
    }
    EnumerationSummary {
        rows: rows.len(),
        within: rows.iter().filter(|r| r.within_tolerance).count(),
        max_scaled_abs_error: max,
    }
}
