//! Closed-form CF errors for one and three consecutive erroneous splits.
//!
//! Each closed form has an operational twin in this module that composes
//! [`split_op`] and [`mix_op`] on the same input. The twins exist so the
//! algebra can be checked against the engine.
//!
//! Sign conventions differ between the two forms and follow the usual
//! presentation: the single-error form is `ideal - erroneous`, the
//! triple-error form is `erroneous - ideal` (the same sign as
//! [`SimulationResult::cf_error`](crate::engine::SimulationResult)).

use crate::droplet::{mix_op, split_op, DropletState};
use crate::plan::Reagent;
use crate::scalar::Scalar;
use crate::vector::SplitDisposition;

/// Maps a signed eps onto a disposition and its magnitude.
pub fn disposition_of<S: Scalar>(signed_epsilon: &S) -> (SplitDisposition, S) {
    if signed_epsilon.is_positive() {
        (SplitDisposition::Plus, signed_epsilon.clone())
    } else if signed_epsilon.is_negative() {
        (SplitDisposition::Minus, -signed_epsilon.clone())
    } else {
        (SplitDisposition::Skip, S::zero())
    }
}

/// Error in the intermediate CF after one mix, when the incoming droplet of
/// concentration `c` has volume `1 + eps` instead of 1X.
///
/// Sample: `eps (1 - c) / (4 + 2 eps)`. Buffer: `-eps c / (4 + 2 eps)`.
/// A positive `eps` means the incoming droplet is the larger daughter.
pub fn closed_form_single_error<S: Scalar>(c: &S, epsilon: &S, reagent: Reagent) -> S {
    let two = S::one() + S::one();
    let denominator = two.clone() * two.clone() + two * epsilon.clone();
    match reagent {
        Reagent::Sample => epsilon.clone() * (S::one() - c.clone()) / denominator,
        Reagent::Buffer => -(epsilon.clone() * c.clone()) / denominator,
    }
}

/// Operational twin of [`closed_form_single_error`]: uneven split of a 2X
/// droplet at `c`, then a mix with `reagent`.
///
/// # Panics
/// If `|epsilon| >= 1`.
pub fn composed_single_error<S: Scalar>(c: &S, epsilon: &S, reagent: Reagent) -> S {
    let parent = DropletState::new(c.clone(), S::one() + S::one());
    let (disposition, magnitude) = disposition_of(epsilon);
    let (kept, _) = split_op(&parent, disposition, &magnitude).expect("|epsilon| < 1");
    let mixed = mix_op(&kept, reagent);
    let ideal = (c.clone() + reagent.cf_value::<S>()) * S::half();
    ideal - mixed.concentration
}

/// CF error after three consecutive erroneous splits starting from a 2X
/// droplet at concentration `c`, mixing `reagents[k]` after split `k`.
///
/// With `a_k = 1 + eps_k`:
///
/// ```text
/// M = ((c a_1 + r_1) a_2 + 2 r_2) a_3 + 4 r_3
/// W = ((a_1 + 1) a_2 + 2) a_3 + 4
/// E = M / W - (c + r_1 + 2 r_2 + 4 r_3) / 8
/// ```
pub fn closed_form_triple_error<S: Scalar>(c: &S, epsilons: &[S; 3], reagents: &[Reagent; 3]) -> S {
    let two = S::one() + S::one();
    let four = two.clone() * two.clone();
    let a: Vec<S> = epsilons.iter().map(|e| S::one() + e.clone()).collect();
    let r: Vec<S> = reagents.iter().map(|r| r.cf_value::<S>()).collect();
    let mass = ((c.clone() * a[0].clone() + r[0].clone()) * a[1].clone() + two.clone() * r[1].clone()) * a[2].clone()
        + four.clone() * r[2].clone();
    let volume = ((a[0].clone() + S::one()) * a[1].clone() + two.clone()) * a[2].clone() + four.clone();
    let ideal = (c.clone() + r[0].clone() + two * r[1].clone() + four * r[2].clone()) / S::pow2(3);
    mass / volume - ideal
}

/// Operational twin of [`closed_form_triple_error`].
///
/// # Panics
/// If any `|epsilon| >= 1`.
pub fn composed_triple_error<S: Scalar>(c: &S, epsilons: &[S; 3], reagents: &[Reagent; 3]) -> S {
    let mut carried = DropletState::new(c.clone(), S::one() + S::one());
    let mut ideal = c.clone();
    for (eps, &reagent) in epsilons.iter().zip(reagents) {
        let (disposition, magnitude) = disposition_of(eps);
        let (kept, _) = split_op(&carried, disposition, &magnitude).expect("|epsilon| < 1");
        carried = mix_op(&kept, reagent);
        ideal = (ideal + reagent.cf_value::<S>()) * S::half();
    }
    carried.concentration - ideal
}

/// One branch of the triple-error family.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleBranch<S> {
    pub signs: [SplitDisposition; 3],
    pub error: S,
}

/// All eight `+/-` sign patterns at magnitude `epsilon`, ordered from
/// `[-,-,-]` to `[+,+,+]`.
pub fn triple_error_family<S: Scalar>(c: &S, epsilon: &S, reagents: &[Reagent; 3]) -> Vec<TripleBranch<S>> {
    (0..8u8)
        .map(|mask| {
            let signs: [SplitDisposition; 3] = std::array::from_fn(|k| {
                if mask >> (2 - k) & 1 == 1 {
                    SplitDisposition::Plus
                } else {
                    SplitDisposition::Minus
                }
            });
            let epsilons = signs.map(|d| d.sign::<S>() * epsilon.clone());
            TripleBranch { signs, error: closed_form_triple_error(c, &epsilons, reagents) }
        })
        .collect()
}

/// Index into [`triple_error_family`] of the branch with the largest |error|;
/// ties go to the lower index.
pub fn max_triple_branch<S: Scalar>(family: &[TripleBranch<S>]) -> usize {
    let mut best = 0;
    for (i, b) in family.iter().enumerate().skip(1) {
        if b.error.abs() > family[best].error.abs() {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use Reagent::{Buffer, Sample};

    #[test]
    fn single_error_examples() {
        let v = closed_form_single_error(&0.875f64, &0.07f64, Sample);
        assert!((v - 0.07 * 0.125 / 4.14).abs() < 1e-15);
        assert!((v - 0.002_113_526_570_048_309).abs() < 1e-12);
        assert_eq!(closed_form_single_error(&1.0f64, &0.07f64, Sample), 0.0);
        assert_eq!(closed_form_single_error(&1.0f64, &-0.07f64, Sample), 0.0);
        let neg = closed_form_single_error(&0.5f64, &-0.07f64, Sample);
        let pos = closed_form_single_error(&0.5f64, &0.07f64, Sample);
        assert!((neg + 0.009_067_357_512_953_367).abs() < 1e-12);
        assert!((pos - 0.008_454_106_280_193_236).abs() < 1e-12);
        assert!(neg.abs() > pos.abs());
    }

    #[test]
    fn single_error_buffer_form() {
        let v = closed_form_single_error(&0.4f64, &0.07f64, Buffer);
        assert!((v + 0.07 * 0.4 / 4.14).abs() < 1e-15);
    }

    #[test]
    fn single_error_matches_composition_exactly() {
        for (c, e) in [(1, 3), (7, 8), (0, 1), (1, 1)] {
            let c = Exact::from_ratio(c, e);
            for eps in [Exact::from_ratio(7, 100), Exact::from_ratio(-3, 100), Exact::from_ratio(0, 1)] {
                for r in [Sample, Buffer] {
                    assert_eq!(closed_form_single_error(&c, &eps, r), composed_single_error(&c, &eps, r));
                }
            }
        }
    }

    #[test]
    fn triple_error_vanishes_without_errors() {
        for c in [0.0, 0.3, 1.0] {
            assert_eq!(closed_form_triple_error(&c, &[0.0; 3], &[Buffer, Sample, Sample]), 0.0);
        }
    }

    #[test]
    fn triple_error_matches_composition_exactly() {
        let c = Exact::from_ratio(5, 16);
        let eps = [Exact::from_ratio(7, 100), Exact::from_ratio(-7, 100), Exact::from_ratio(3, 100)];
        for mask in 0..8u8 {
            let r = std::array::from_fn(|k| Reagent::from_bit(mask >> k & 1 == 1));
            assert_eq!(closed_form_triple_error(&c, &eps, &r), composed_triple_error(&c, &eps, &r));
        }
    }

    #[test]
    fn family_has_eight_distinct_ordered_branches() {
        let fam = triple_error_family(&0.3f64, &0.07f64, &[Buffer, Sample, Sample]);
        assert_eq!(fam.len(), 8);
        assert_eq!(fam[0].signs, [SplitDisposition::Minus; 3]);
        assert_eq!(fam[7].signs, [SplitDisposition::Plus; 3]);
        for i in 0..8 {
            for j in i + 1..8 {
                assert_ne!(fam[i].error, fam[j].error);
            }
        }
    }

    #[test]
    fn worst_branch_depends_on_starting_cf() {
        let r = [Buffer, Sample, Sample];
        let winners: std::collections::BTreeSet<usize> =
            (0..=100).map(|k| max_triple_branch(&triple_error_family(&(k as f64 / 100.0), &0.07f64, &r))).collect();
        assert!(winners.len() >= 2, "{winners:?}");
    }
}
