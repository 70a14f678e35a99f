//! Accumulated-mass recurrence for the target droplet.
//!
//! An independent route to the forward engine. It carries an unnormalised
//! sample mass `P_i` and volume `Q_i`:
//!
//! ```text
//! P_0 = Q_0 = 1/2,   eps_0 = r_0 = 0
//! P_i = P_{i-1} (1 ± eps_{i-1}) + 2^{i-2} r_{i-1}
//! Q_i = Q_{i-1} (1 ± eps_{i-1}) + 2^{i-2}
//! C_i = P_i / Q_i,   V_i = Q_i / 2^{i-1}
//! ```
//!
//! `C_n` and `V_n` are the produced CF and the volume of each target daughter.

use crate::engine::SimulationResult;
use crate::error::{Error, Result};
use crate::plan::MixSplitPlan;
use crate::scalar::Scalar;
use crate::vector::ErrorVector;

/// Evaluates the recurrence and returns `(C_n, V_n)`.
pub fn recurrence_eval<S: Scalar>(plan: &MixSplitPlan, ev: &ErrorVector<S>) -> Result<(S, S)> {
    if ev.len() != plan.error_slots() {
        return Err(Error::LengthMismatch { expected: plan.error_slots(), actual: ev.len() });
    }
    let n = plan.op_count();
    let mut p = S::half();
    let mut q = S::half();
    for i in 1..=n {
        // step i consumes eps_{i-1} and r_{i-1}; both are zero for i = 1
        let (factor, r) = if i == 1 {
            (S::one(), S::zero())
        } else {
            (S::one() + ev.signed_error(i - 2), plan.reagents()[i - 2].cf_value::<S>())
        };
        let weight = S::pow2(i as i32 - 2);
        p = p * factor.clone() + weight.clone() * r;
        q = q * factor + weight;
    }
    let cf = p / q.clone();
    let volume = q / S::pow2(n as i32 - 1);
    Ok((cf, volume))
}

/// Largest CF and volume disagreement between the recurrence and a
/// simulation result.
pub fn recurrence_gap<S: Scalar>(
    plan: &MixSplitPlan,
    ev: &ErrorVector<S>,
    sim: &SimulationResult<S>,
) -> Result<(S, S)> {
    let (cf, volume) = recurrence_eval(plan, ev)?;
    Ok(((cf - sim.produced_cf.clone()).abs(), (volume - sim.final_volume.clone()).abs()))
}
