//! Droplet state and the two primitive fluidic operations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plan::Reagent;
use crate::scalar::Scalar;
use crate::vector::SplitDisposition;

/// Concentration (fraction of raw sample) and volume (in 1X droplet units).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DropletState<S> {
    pub concentration: S,
    pub volume: S,
}

impl<S: Scalar> DropletState<S> {
    pub fn new(concentration: S, volume: S) -> Self {
        DropletState { concentration, volume }
    }

    /// A freshly dispensed 1X droplet.
    pub fn unit(reagent: Reagent) -> Self {
        DropletState { concentration: reagent.cf_value(), volume: S::one() }
    }

    /// Amount of sample carried, `concentration * volume`.
    pub fn sample_mass(&self) -> S {
        self.concentration.clone() * self.volume.clone()
    }

    pub(crate) fn halved(self) -> Self {
        DropletState { concentration: self.concentration, volume: self.volume * S::half() }
    }
}

/// Merges the carried droplet with one 1X droplet of `reagent`.
///
/// Sample mass is conserved: `c_out * (v + 1) = c * v + r`.
pub fn mix_op<S: Scalar>(carried: &DropletState<S>, reagent: Reagent) -> DropletState<S> {
    let volume = carried.volume.clone() + S::one();
    let mass = carried.concentration.clone() * carried.volume.clone() + reagent.cf_value::<S>();
    DropletState { concentration: mass / volume.clone(), volume }
}

/// Splits `parent` (total volume `T`) into daughters `(T/2)(1 +/- eps)`.
///
/// Returns `(kept, discarded)`; `Plus` keeps the larger daughter, `Minus` the
/// smaller one and `Skip` splits evenly regardless of `eps`.
pub fn split_op<S: Scalar>(
    parent: &DropletState<S>,
    disposition: SplitDisposition,
    epsilon: &S,
) -> Result<(DropletState<S>, DropletState<S>)> {
    if epsilon.is_negative() || *epsilon >= S::one() {
        return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
    }
    let half = parent.volume.clone() * S::half();
    let kept_volume = match disposition {
        SplitDisposition::Plus => half * (S::one() + epsilon.clone()),
        SplitDisposition::Minus => half * (S::one() - epsilon.clone()),
        SplitDisposition::Skip => half,
    };
    let discarded_volume = parent.volume.clone() - kept_volume.clone();
    Ok((
        DropletState::new(parent.concentration.clone(), kept_volume),
        DropletState::new(parent.concentration.clone(), discarded_volume),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn ex(a: i64, b: i64) -> Exact {
        Exact::from_ratio(a, b)
    }

    #[test]
    fn mix_with_buffer_halves_concentration() {
        let out = mix_op(&DropletState::new(0.875, 1.0), Reagent::Buffer);
        assert_eq!(out, DropletState::new(0.4375, 2.0));
    }

    #[test]
    fn mixing_pure_sample_stays_pure() {
        let out = mix_op(&DropletState::new(ex(1, 1), ex(107, 100)), Reagent::Sample);
        assert_eq!(out, DropletState::new(ex(1, 1), ex(207, 100)));
    }

    #[test]
    fn mix_after_larger_daughter() {
        let out = mix_op(&DropletState::new(ex(7, 16), ex(107, 100)), Reagent::Sample);
        // (0.4375 * 1.07 + 1) / 2.07 = 1.468125 / 2.07
        assert_eq!(out.concentration, ex(1_468_125, 2_070_000));
        assert_eq!(out.volume, ex(207, 100));
        assert!((out.concentration.to_f64() - 0.709_239_130_434_782_6).abs() < 1e-15);
    }

    #[test]
    fn split_plus_keeps_larger_daughter() {
        let parent = DropletState::new(ex(7, 16), ex(2, 1));
        let (kept, waste) = split_op(&parent, SplitDisposition::Plus, &ex(7, 100)).unwrap();
        assert_eq!(kept, DropletState::new(ex(7, 16), ex(107, 100)));
        assert_eq!(waste, DropletState::new(ex(7, 16), ex(93, 100)));
    }

    #[test]
    fn split_minus_keeps_smaller_daughter() {
        let parent = DropletState::new(ex(1, 2), ex(2, 1));
        let (kept, waste) = split_op(&parent, SplitDisposition::Minus, &ex(3, 100)).unwrap();
        assert_eq!(kept.volume, ex(97, 100));
        assert_eq!(waste.volume, ex(103, 100));
    }

    #[test]
    fn skip_splits_evenly_for_any_epsilon() {
        let parent = DropletState::new(ex(1_468_125, 2_070_000), ex(207, 100));
        for eps in [ex(0, 1), ex(7, 100), ex(99, 100)] {
            let (kept, waste) = split_op(&parent, SplitDisposition::Skip, &eps).unwrap();
            assert_eq!(kept, waste);
            assert_eq!(kept.volume, ex(1035, 1000));
            assert_eq!(kept.concentration, parent.concentration);
        }
    }

    #[test]
    fn split_rejects_degenerate_epsilon() {
        let parent = DropletState::new(0.5, 2.0);
        assert!(matches!(split_op(&parent, SplitDisposition::Plus, &1.0f64), Err(Error::EpsilonOutOfRange(_))));
        assert!(matches!(split_op(&parent, SplitDisposition::Minus, &-0.1f64), Err(Error::EpsilonOutOfRange(_))));
    }
}
