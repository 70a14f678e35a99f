use crate::engine::simulate_cf;
use crate::error::Result;
use crate::plan::MixSplitPlan;
use crate::scalar::Scalar;
use crate::vector::{ErrorVector, SplitDisposition};

/// Single-error outcome at one split.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCriticality<S> {
    /// 1-based split index.
    pub step: usize,
    /// Signed CF error when the larger daughter is carried on.
    pub larger_error: S,
    /// Signed CF error when the smaller daughter is carried on.
    pub smaller_error: S,
    pub critical: bool,
}

impl<S: Scalar> StepCriticality<S> {
    pub fn worst_abs_error(&self) -> S {
        let (a, b) = (self.larger_error.abs(), self.smaller_error.abs());
        if a >= b {
            a
        } else {
            b
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalityReport<S> {
    pub steps: Vec<StepCriticality<S>>,
}

impl<S> CriticalityReport<S> {
    /// 1-based indices of the critical steps.
    pub fn critical_steps(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| s.critical).map(|s| s.step).collect()
    }
}

/// A step is critical when a lone error there, in either direction, moves
/// the target by at least `tolerance`.
pub fn classify_critical_steps<S: Scalar>(
    plan: &MixSplitPlan,
    epsilon: &S,
    tolerance: &S,
) -> Result<CriticalityReport<S>> {
    let len = plan.error_slots();
    let target = plan.target().value::<S>();
    let steps = (1..=len)
        .map(|step| {
            let error = |d| -> Result<S> {
                let (cf, _) = simulate_cf(plan, &ErrorVector::single(len, step, d, epsilon.clone())?)?;
                Ok(cf - target.clone())
            };
            let larger_error = error(SplitDisposition::Plus)?;
            let smaller_error = error(SplitDisposition::Minus)?;
            let critical = larger_error.abs() >= *tolerance || smaller_error.abs() >= *tolerance;
            Ok(StepCriticality { step, larger_error, smaller_error, critical })
        })
        .collect::<Result<_>>()?;
    Ok(CriticalityReport { steps })
}
