//! Two-way (1:1) mix-split plans.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::droplet::{mix_op, DropletState};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::target::TargetCF;

/// Fluid dispensed into a mix-split step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reagent {
    Sample,
    Buffer,
}

impl Reagent {
    /// Concentration of the dispensed unit droplet: 1 for sample, 0 for buffer.
    pub fn cf_value<S: Scalar>(self) -> S {
        match self {
            Reagent::Sample => S::one(),
            Reagent::Buffer => S::zero(),
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Reagent::Sample
        } else {
            Reagent::Buffer
        }
    }

    pub fn bit(self) -> u64 {
        match self {
            Reagent::Sample => 1,
            Reagent::Buffer => 0,
        }
    }

    /// Sample and buffer exchanged.
    pub fn swapped(self) -> Self {
        match self {
            Reagent::Sample => Reagent::Buffer,
            Reagent::Buffer => Reagent::Sample,
        }
    }
}

impl fmt::Display for Reagent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reagent::Sample => "sample",
            Reagent::Buffer => "buffer",
        })
    }
}

/// Ordered mix-split schedule for a target CF.
///
/// Operation `O_1` always mixes one sample and one buffer droplet. Operation
/// `O_{i+1}` mixes the carried daughter of `O_i` with `reagents()[i - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixSplitPlan {
    target: TargetCF,
    reagents: Vec<Reagent>,
}

/// twoWayMix: reagent `r_i` is bit `i` of the numerator, for `i = 1..n-1`.
///
/// Bit 0 is always set and is the sample droplet of `O_1`. Each
/// `C_{i+1} = (C_i + r_i) / 2` consumes one more bit, so after `n` operations
/// the carried droplet holds exactly `x / 2^n`.
pub fn build_plan(target: TargetCF) -> MixSplitPlan {
    let x = target.numerator();
    let reagents = (1..target.accuracy()).map(|i| Reagent::from_bit((x >> i) & 1 == 1)).collect();
    MixSplitPlan { target, reagents }
}

impl MixSplitPlan {
    /// Rebuilds a plan from its reagent sequence `r_1..r_{n-1}`.
    pub fn from_reagents(reagents: Vec<Reagent>) -> Result<Self> {
        let accuracy = reagents.len() as u32 + 1;
        if accuracy > crate::target::MAX_ACCURACY {
            return Err(Error::AccuracyOutOfRange(accuracy));
        }
        let numerator = reagents.iter().enumerate().fold(1u64, |acc, (i, r)| acc | (r.bit() << (i + 1)));
        let target = TargetCF::new(numerator, accuracy)?;
        Ok(MixSplitPlan { target, reagents })
    }

    #[inline]
    pub fn target(&self) -> TargetCF {
        self.target
    }

    /// Reagents mixed at `O_2..O_n`.
    #[inline]
    pub fn reagents(&self) -> &[Reagent] {
        &self.reagents
    }

    /// Number of mix-split operations `n`.
    #[inline]
    pub fn op_count(&self) -> usize {
        self.reagents.len() + 1
    }

    /// Number of splits that can carry an error (all but the final one).
    #[inline]
    pub fn error_slots(&self) -> usize {
        self.reagents.len()
    }

    pub fn sample_count(&self) -> usize {
        1 + self.reagents.iter().filter(|r| **r == Reagent::Sample).count()
    }

    pub fn buffer_count(&self) -> usize {
        1 + self.reagents.iter().filter(|r| **r == Reagent::Buffer).count()
    }

    /// Unit droplets dispensed: `n + 1`.
    pub fn dispense_count(&self) -> usize {
        self.op_count() + 1
    }

    /// Waste daughters of an error-free run: one per non-final split.
    pub fn waste_count(&self) -> usize {
        self.error_slots()
    }

    /// Plan for the complementary target.
    pub fn complement(&self) -> MixSplitPlan {
        MixSplitPlan { target: self.target.complement(), reagents: self.reagents.iter().map(|r| r.swapped()).collect() }
    }
}

/// Error-free run: every split is exactly even.
pub fn ideal_simulate<S: Scalar>(plan: &MixSplitPlan) -> DropletState<S> {
    ideal_trajectory(plan).pop().expect("plan has at least one op")
}

/// Carried-daughter state after each of `O_1..O_n` under ideal splits.
pub fn ideal_trajectory<S: Scalar>(plan: &MixSplitPlan) -> Vec<DropletState<S>> {
    let mut states = Vec::with_capacity(plan.op_count());
    let first = mix_op(&DropletState::unit(Reagent::Sample), Reagent::Buffer);
    let mut carried = first.halved();
    states.push(carried.clone());
    for &reagent in plan.reagents() {
        carried = mix_op(&carried, reagent).halved();
        states.push(carried.clone());
    }
    states
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use num_traits::One;

    fn plan(x: u64, n: u32) -> MixSplitPlan {
        build_plan(TargetCF::new(x, n).unwrap())
    }

    fn bits(p: &MixSplitPlan) -> Vec<u64> {
        p.reagents().iter().map(|r| r.bit()).collect()
    }

    #[test]
    fn plan_for_87_over_128() {
        let p = plan(87, 7);
        assert_eq!(bits(&p), vec![1, 1, 0, 1, 0, 1]);
        let cfs: Vec<Exact> = ideal_trajectory::<Exact>(&p).into_iter().map(|s| s.concentration).collect();
        let expected: Vec<Exact> = [(1, 2), (3, 4), (7, 8), (7, 16), (23, 32), (23, 64), (87, 128)]
            .iter()
            .map(|&(a, b)| Exact::from_ratio(a, b))
            .collect();
        assert_eq!(cfs, expected);
    }

    #[test]
    fn plan_for_17_over_128() {
        let p = plan(17, 7);
        assert_eq!(bits(&p), vec![0, 0, 0, 1, 0, 0]);
        assert_eq!(ideal_simulate::<Exact>(&p).concentration, Exact::from_ratio(17, 128));
    }

    #[test]
    fn plan_for_one_half_is_a_single_op() {
        let p = plan(1, 1);
        assert!(p.reagents().is_empty());
        assert_eq!(p.op_count(), 1);
        let s = ideal_simulate::<Exact>(&p);
        assert_eq!(s.concentration, Exact::from_ratio(1, 2));
        assert!(s.volume.is_one());
    }

    #[test]
    fn ideal_simulation_is_exact_for_every_target_up_to_ten_ops() {
        for n in 1..=10u32 {
            for x in (1..(1u64 << n)).step_by(2) {
                let p = plan(x, n);
                let s = ideal_simulate::<Exact>(&p);
                assert_eq!(s.concentration, Exact::from_ratio(x as i64, 1 << n), "{x}/2^{n}");
                assert!(s.volume.is_one());
            }
        }
    }

    #[test]
    fn droplet_accounting() {
        for (x, n) in [(87, 7), (17, 7), (1, 1), (127, 7)] {
            let p = plan(x, n);
            assert_eq!(p.dispense_count(), n as usize + 1);
            assert_eq!(p.sample_count() + p.buffer_count(), p.dispense_count());
            assert_eq!(p.sample_count() as u32, 1 + (x >> 1).count_ones());
            assert_eq!(p.waste_count(), n as usize - 1);
        }
    }

    #[test]
    fn from_reagents_inverts_build_plan() {
        for n in 1..=9u32 {
            for x in (1..(1u64 << n)).step_by(2) {
                let p = plan(x, n);
                assert_eq!(MixSplitPlan::from_reagents(p.reagents().to_vec()).unwrap(), p);
            }
        }
    }

    #[test]
    fn complement_plan_matches_complement_target() {
        let p = plan(87, 7);
        assert_eq!(p.complement(), plan(41, 7));
    }
}
