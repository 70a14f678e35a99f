//! Machine-readable outputs: plan and trace JSON, CSV tables and DOT
//! sequencing graphs.

pub mod csv;
pub mod dot;
pub mod json;

pub use dot::plan_to_dot;
pub use json::{plan_from_json, plan_to_json, simulation_to_json, PlanDocument, SimulationDocument, TraceRecord};
