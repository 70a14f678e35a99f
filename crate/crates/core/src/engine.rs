//! Forward propagation of concentration and volume under split-errors.

use serde::Serialize;

use crate::droplet::{mix_op, split_op, DropletState};
use crate::error::{Error, Result};
use crate::plan::{MixSplitPlan, Reagent};
use crate::scalar::Scalar;
use crate::target::TargetCF;
use crate::vector::{ErrorVector, SplitDisposition};

/// State of one mix-split operation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTrace<S> {
    /// 1-based operation index.
    pub op_index: usize,
    /// Carried droplet entering the mixer.
    pub pre_mix: DropletState<S>,
    /// Merged droplet after mixing.
    pub post_mix: DropletState<S>,
    pub kept: DropletState<S>,
    pub discarded: DropletState<S>,
    pub disposition: SplitDisposition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult<S> {
    pub target: TargetCF,
    pub produced_cf: S,
    /// `produced - target`, signed.
    pub cf_error: S,
    /// `cf_error * 2^n`.
    pub scaled_error: S,
    pub final_volume: S,
    pub trace: Vec<StepTrace<S>>,
}

impl<S: Scalar> SimulationResult<S> {
    pub fn scaled_abs_error(&self) -> S {
        self.scaled_error.abs()
    }

    /// Strict `|cf_error| < tolerance`.
    pub fn within_tolerance(&self, tolerance: &S) -> bool {
        self.cf_error.abs() < *tolerance
    }

    /// Sample mass in both final daughters and every waste droplet.
    pub fn total_sample_mass(&self) -> S {
        let mut total = S::zero();
        for step in &self.trace {
            total = total + step.discarded.sample_mass();
        }
        if let Some(last) = self.trace.last() {
            total = total + last.kept.sample_mass();
        }
        total
    }
}

/// Runs `plan` with `ev` governing the splits after `O_1..O_{n-1}`.
/// The final split is even.
pub fn simulate<S: Scalar>(plan: &MixSplitPlan, ev: &ErrorVector<S>) -> Result<SimulationResult<S>> {
    simulate_with_final_split(plan, ev, SplitDisposition::Skip, &S::zero())
}

/// [`simulate`] with an explicit disposition for the final split `O_n`.
///
/// The final split only changes the delivered volume; the concentration of
/// both target daughters is fixed once `O_n` has mixed.
pub fn simulate_with_final_split<S: Scalar>(
    plan: &MixSplitPlan,
    ev: &ErrorVector<S>,
    final_disposition: SplitDisposition,
    final_epsilon: &S,
) -> Result<SimulationResult<S>> {
    let mut trace = Vec::with_capacity(plan.op_count());
    let last = propagate(plan, ev, final_disposition, final_epsilon, Some(&mut trace))?;
    Ok(finish(plan.target(), last, trace))
}

/// Produced CF and final volume, without building a trace.
///
/// Same arithmetic in the same order as [`simulate`], so the two agree
/// bit-for-bit.
pub fn simulate_cf<S: Scalar>(plan: &MixSplitPlan, ev: &ErrorVector<S>) -> Result<(S, S)> {
    let last = propagate(plan, ev, SplitDisposition::Skip, &S::zero(), None)?;
    Ok((last.concentration, last.volume))
}

/// Signed `produced - target` scaled by `2^n`, without a trace.
pub fn scaled_error<S: Scalar>(plan: &MixSplitPlan, ev: &ErrorVector<S>) -> Result<S> {
    let (cf, _) = simulate_cf(plan, ev)?;
    let target = plan.target();
    Ok((cf - target.value::<S>()) * target.scale::<S>())
}

fn finish<S: Scalar>(target: TargetCF, last: DropletState<S>, trace: Vec<StepTrace<S>>) -> SimulationResult<S> {
    let cf_error = last.concentration.clone() - target.value::<S>();
    let scaled_error = cf_error.clone() * target.scale::<S>();
    SimulationResult {
        target,
        produced_cf: last.concentration,
        cf_error,
        scaled_error,
        final_volume: last.volume,
        trace,
    }
}

fn propagate<S: Scalar>(
    plan: &MixSplitPlan,
    ev: &ErrorVector<S>,
    final_disposition: SplitDisposition,
    final_epsilon: &S,
    mut trace: Option<&mut Vec<StepTrace<S>>>,
) -> Result<DropletState<S>> {
    if ev.len() != plan.error_slots() {
        return Err(Error::LengthMismatch { expected: plan.error_slots(), actual: ev.len() });
    }
    let n = plan.op_count();
    let mut pre_mix = DropletState::unit(Reagent::Sample);
    let mut post_mix = mix_op(&pre_mix, Reagent::Buffer);
    for op in 1..=n {
        let (disposition, eps) =
            if op < n { (ev.dispositions()[op - 1], ev.magnitude(op - 1)) } else { (final_disposition, final_epsilon) };
        let (kept, discarded) = split_op(&post_mix, disposition, eps)?;
        if op == n {
            if let Some(t) = trace.as_deref_mut() {
                t.push(StepTrace { op_index: op, pre_mix, post_mix, kept: kept.clone(), discarded, disposition });
            }
            return Ok(kept);
        }
        let next = mix_op(&kept, plan.reagents()[op - 1]);
        if let Some(t) = trace.as_deref_mut() {
            t.push(StepTrace { op_index: op, pre_mix, post_mix, kept: kept.clone(), discarded, disposition });
        }
        pre_mix = kept;
        post_mix = next;
    }
    unreachable!("plans have at least one operation")
}
