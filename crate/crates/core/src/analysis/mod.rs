//! Exhaustive error-vector analysis: enumeration, worst case, critical steps
//! and all-target sweeps.

mod critical;
mod enumerate;
mod gray;
mod worst;

pub use critical::{classify_critical_steps, CriticalityReport, StepCriticality};
pub use enumerate::{
    all_positions, enumerate, normalize_positions, space_size, summarize, EnumerationRow, EnumerationSummary,
};
pub use gray::{gray_decode, gray_encode, gray_position, sign_vector_at};
pub use worst::{
    sweep_maximum, sweep_targets, sweep_targets_with, worst_case, worst_case_with, Execution, SweepRow, WorstCase,
};
