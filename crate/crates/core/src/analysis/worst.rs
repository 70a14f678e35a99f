use rayon::prelude::*;

use crate::analysis::enumerate::{all_positions, space_size, vector_at};
use crate::analysis::gray::gray_position;
use crate::engine::scaled_error;
use crate::error::{Error, Result};
use crate::plan::{build_plan, MixSplitPlan};
use crate::scalar::Scalar;
use crate::target::TargetCF;
use crate::vector::ErrorVector;

/// How the exhaustive scans are scheduled. Both give identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase<S> {
    pub max_scaled_abs_error: S,
    /// Signed `(produced - target) * 2^n` of the argmax.
    pub scaled_error: S,
    pub argmax: ErrorVector<S>,
    /// Gray rank of the argmax when it has no skipped step.
    pub gray_position: Option<u64>,
    /// Vectors examined.
    pub space: u64,
}

#[derive(Debug, Clone)]
struct Candidate<S> {
    index: u64,
    abs: S,
    signed: S,
}

/// Larger |error| wins; equal values go to the lower enumeration index, so
/// the reduction is associative and commutative.
fn better<S: Scalar>(a: Candidate<S>, b: Candidate<S>) -> Candidate<S> {
    if b.abs > a.abs || (b.abs == a.abs && b.index < a.index) {
        b
    } else {
        a
    }
}

/// Exhaustive maximum of `|cf_error| * 2^n` over every vector of the plan.
///
/// The default space holds the `2^{n-1}` full sign vectors, ties resolved by
/// lowest gray position. With `include_skip` the `3^{n-1}` space is used and
/// ties go to the lexicographically smallest vector under `0 < + < -`.
pub fn worst_case<S: Scalar>(plan: &MixSplitPlan, epsilon: &S, include_skip: bool) -> Result<WorstCase<S>> {
    worst_case_with(plan, epsilon, include_skip, Execution::Parallel)
}

pub fn worst_case_with<S: Scalar>(
    plan: &MixSplitPlan,
    epsilon: &S,
    include_skip: bool,
    execution: Execution,
) -> Result<WorstCase<S>> {
    let len = plan.error_slots();
    let positions = all_positions(plan);
    let space =
        u64::try_from(space_size(len, include_skip)).map_err(|_| Error::AccuracyOutOfRange(plan.op_count() as u32))?;
    let eval = |index: u64| -> Result<Candidate<S>> {
        let v = ErrorVector::new(vector_at(len, &positions, include_skip, index), epsilon.clone())?;
        let signed = scaled_error(plan, &v)?;
        Ok(Candidate { index, abs: signed.abs(), signed })
    };
    let best = match execution {
        Execution::Serial => {
            let mut best = eval(0)?;
            for index in 1..space {
                best = better(best, eval(index)?);
            }
            best
        }
        Execution::Parallel => (0..space)
            .into_par_iter()
            .map(eval)
            .try_reduce_with(|a, b| Ok(better(a, b)))
            .expect("space is never empty")?,
    };
    let argmax = ErrorVector::new(vector_at(len, &positions, include_skip, best.index), epsilon.clone())?;
    let gray = gray_position(argmax.dispositions()).ok();
    Ok(WorstCase { max_scaled_abs_error: best.abs, scaled_error: best.signed, argmax, gray_position: gray, space })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<S> {
    pub target: TargetCF,
    pub max_scaled_error: S,
    pub argmax_vector: ErrorVector<S>,
}

/// Sign-only worst case for every odd numerator at accuracy `n`.
pub fn sweep_targets<S: Scalar>(accuracy: u32, epsilon: &S) -> Result<Vec<SweepRow<S>>> {
    sweep_targets_with(accuracy, epsilon, Execution::Parallel)
}

pub fn sweep_targets_with<S: Scalar>(accuracy: u32, epsilon: &S, execution: Execution) -> Result<Vec<SweepRow<S>>> {
    if !(2..=crate::target::MAX_ACCURACY).contains(&accuracy) {
        return Err(Error::AccuracyOutOfRange(accuracy));
    }
    let row = |x: u64| -> Result<SweepRow<S>> {
        let target = TargetCF::new(x, accuracy)?;
        let wc = worst_case_with(&build_plan(target), epsilon, false, execution)?;
        Ok(SweepRow { target, max_scaled_error: wc.max_scaled_abs_error, argmax_vector: wc.argmax })
    };
    let numerators = (1..(1u64 << accuracy)).step_by(2);
    match execution {
        Execution::Serial => numerators.map(row).collect(),
        Execution::Parallel => numerators.collect::<Vec<_>>().into_par_iter().map(row).collect(),
    }
}

/// Largest row of a sweep and every numerator attaining it.
///
/// Complementary targets have mathematically equal maxima; in floating point
/// they can differ in the last few bits, so inexact backends count rows
/// within a relative `1e-12` of the maximum as ties.
pub fn sweep_maximum<S: Scalar>(rows: &[SweepRow<S>]) -> Option<(S, Vec<u64>)> {
    let max = rows.iter().map(|r| &r.max_scaled_error).fold(None::<&S>, |m, v| match m {
        Some(m) if m >= v => Some(m),
        _ => Some(v),
    })?;
    let slack = if S::EXACT { S::zero() } else { max.clone() * S::from_ratio(1, 1_000_000_000_000) };
    let at = rows
        .iter()
        .filter(|r| max.clone() - r.max_scaled_error.clone() <= slack)
        .map(|r| r.target.numerator())
        .collect();
    Some((max.clone(), at))
}
