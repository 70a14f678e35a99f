//! Two-way (1:1) mix-split dilution plans for digital microfluidic biochips
//! and the propagation of volumetric split-errors through them.
//!
//! - [`target`]: dyadic target concentration factors and exact parsing.
//! - [`plan`]: twoWayMix schedules and the ideal run.
//! - [`droplet`], [`engine`]: mix and split primitives and the forward model.
//! - [`recurrence`], [`closed_form`]: independent algebraic routes used to
//!   cross-check the engine.
//! - [`analysis`]: exhaustive error-vector enumeration, worst case, critical
//!   steps and accuracy-level sweeps.
//! - [`export`]: JSON, CSV and DOT outputs.
//!
//! All kernels are generic over [`Scalar`]. [`f64`] is the working backend;
//! [`Exact`] (big rationals) is the oracle.

pub mod analysis;
pub mod closed_form;
pub mod droplet;
pub mod engine;
pub mod error;
pub mod export;
pub mod plan;
pub mod recurrence;
pub mod scalar;
pub mod target;
pub mod vector;

pub use analysis::{
    classify_critical_steps, enumerate, gray_position, sweep_targets, worst_case, CriticalityReport, EnumerationRow,
    SweepRow, WorstCase,
};
pub use closed_form::{closed_form_single_error, closed_form_triple_error};
pub use droplet::{mix_op, split_op, DropletState};
pub use engine::{simulate, simulate_with_final_split, SimulationResult, StepTrace};
pub use error::{Error, Result};
pub use plan::{build_plan, ideal_simulate, MixSplitPlan, Reagent};
pub use recurrence::recurrence_eval;
pub use scalar::{Exact, Scalar};
pub use target::{approximate_cf, parse_epsilon, parse_target, TargetCF};
pub use vector::{ErrorVector, SplitDisposition};

/// Binary64 backend.
pub type Float = f64;

pub type FloatDroplet = DropletState<f64>;
pub type ExactDroplet = DropletState<Exact>;

pub type FloatErrorVector = ErrorVector<f64>;
pub type ExactErrorVector = ErrorVector<Exact>;

pub type FloatSimulation = SimulationResult<f64>;
pub type ExactSimulation = SimulationResult<Exact>;

pub type FloatWorstCase = WorstCase<f64>;
pub type ExactWorstCase = WorstCase<Exact>;
