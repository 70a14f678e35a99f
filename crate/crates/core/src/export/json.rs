use serde::{Deserialize, Serialize};

use crate::engine::SimulationResult;
use crate::error::{Error, Result};
use crate::plan::{MixSplitPlan, Reagent};
use crate::scalar::Scalar;
use crate::target::parse_target;
use crate::vector::{format_dispositions, ErrorVector, SplitDisposition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub target: String,
    pub numerator: u64,
    pub accuracy: u32,
    pub ops: Vec<PlanOp>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanOp {
    pub index: usize,
    /// `"sample"`/`"buffer"` for dispensed droplets, `"carried"` for the
    /// daughter of the previous op.
    pub inputs: Vec<String>,
    /// Reagent dispensed into a carried droplet; `null` for the first op.
    pub reagent: Option<Reagent>,
}

impl PlanDocument {
    pub fn from_plan(plan: &MixSplitPlan) -> Self {
        let target = plan.target();
        let mut ops = vec![PlanOp { index: 1, inputs: vec!["sample".into(), "buffer".into()], reagent: None }];
        for (i, &r) in plan.reagents().iter().enumerate() {
            ops.push(PlanOp { index: i + 2, inputs: vec!["carried".into(), r.to_string()], reagent: Some(r) });
        }
        PlanDocument { target: target.to_string(), numerator: target.numerator(), accuracy: target.accuracy(), ops }
    }

    /// Rebuilds and cross-checks the plan.
    pub fn to_plan(&self) -> Result<MixSplitPlan> {
        let bad = |msg: String| Error::InvalidPlan(msg);
        let first = self.ops.first().ok_or_else(|| bad("no operations".into()))?;
        if first.reagent.is_some() {
            return Err(bad("first op mixes sample with buffer and takes no reagent".into()));
        }
        let mut reagents = Vec::with_capacity(self.ops.len().saturating_sub(1));
        for (i, op) in self.ops.iter().enumerate() {
            if op.index != i + 1 {
                return Err(bad(format!("op at position {} has index {}", i + 1, op.index)));
            }
            if i > 0 {
                reagents.push(op.reagent.ok_or_else(|| bad(format!("op {} has no reagent", op.index)))?);
            }
        }
        let plan = MixSplitPlan::from_reagents(reagents)?;
        let stated = parse_target(&self.target)?;
        if stated != plan.target() || self.numerator != stated.numerator() || self.accuracy != stated.accuracy() {
            return Err(bad(format!("ops realize {} but the file states {}", plan.target(), self.target)));
        }
        Ok(plan)
    }
}

pub fn plan_to_json(plan: &MixSplitPlan) -> String {
    serde_json::to_string_pretty(&PlanDocument::from_plan(plan)).expect("plan documents always serialize")
}

pub fn plan_from_json(text: &str) -> Result<MixSplitPlan> {
    let doc: PlanDocument = serde_json::from_str(text).map_err(|e| Error::InvalidPlan(e.to_string()))?;
    doc.to_plan()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub op: usize,
    pub cf: f64,
    pub total_volume: f64,
    pub kept_volume: f64,
    pub disposition: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub target: String,
    pub backend: String,
    pub epsilon: f64,
    pub vector: String,
    pub produced_cf: f64,
    pub produced_cf_x2n: f64,
    pub cf_error: f64,
    pub cf_error_x2n: f64,
    pub final_volume: f64,
    /// Exact `p/q` forms, present for the rational backend.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub produced_cf_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_volume_exact: Option<String>,
    pub trace: Vec<TraceRecord>,
}

pub fn trace_records<S: Scalar>(result: &SimulationResult<S>) -> Vec<TraceRecord> {
    result
        .trace
        .iter()
        .map(|s| TraceRecord {
            op: s.op_index,
            cf: s.post_mix.concentration.to_f64(),
            total_volume: s.post_mix.volume.to_f64(),
            kept_volume: s.kept.volume.to_f64(),
            disposition: disposition_label(s.disposition).to_string(),
        })
        .collect()
}

fn disposition_label(d: SplitDisposition) -> &'static str {
    match d {
        SplitDisposition::Skip => "none",
        SplitDisposition::Plus => "larger",
        SplitDisposition::Minus => "smaller",
    }
}

impl SimulationDocument {
    pub fn new<S: Scalar>(result: &SimulationResult<S>, vector: &ErrorVector<S>) -> Self {
        let scale = result.target.scale::<S>();
        let epsilon = if vector.is_empty() { 0.0 } else { vector.magnitude(0).to_f64() };
        SimulationDocument {
            target: result.target.to_string(),
            backend: S::NAME.to_string(),
            epsilon,
            vector: format_dispositions(vector.dispositions()),
            produced_cf: result.produced_cf.to_f64(),
            produced_cf_x2n: (result.produced_cf.clone() * scale).to_f64(),
            cf_error: result.cf_error.to_f64(),
            cf_error_x2n: result.scaled_error.to_f64(),
            final_volume: result.final_volume.to_f64(),
            produced_cf_exact: S::EXACT.then(|| result.produced_cf.to_string()),
            final_volume_exact: S::EXACT.then(|| result.final_volume.to_string()),
            trace: trace_records(result),
        }
    }
}

pub fn simulation_to_json<S: Scalar>(result: &SimulationResult<S>, vector: &ErrorVector<S>) -> String {
    serde_json::to_string_pretty(&SimulationDocument::new(result, vector))
        .expect("simulation documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::simulate;
    use crate::plan::build_plan;
    use crate::scalar::Exact;
    use crate::target::TargetCF;

    #[test]
    fn plan_json_shape() {
        let p = build_plan(TargetCF::new(87, 7).unwrap());
        let v: serde_json::Value = serde_json::from_str(&plan_to_json(&p)).unwrap();
        assert_eq!(v["target"], "87/128");
        assert_eq!(v["ops"].as_array().unwrap().len(), 7);
        assert_eq!(v["ops"][0]["reagent"], serde_json::Value::Null);
        assert_eq!(v["ops"][0]["inputs"], serde_json::json!(["sample", "buffer"]));
        assert_eq!(v["ops"][3]["reagent"], "buffer");
        assert_eq!(v["ops"][3]["index"], 4);
    }

    #[test]
    fn plan_json_round_trips() {
        for (x, n) in [(87, 7), (17, 7), (1, 1), (1023, 10)] {
            let p = build_plan(TargetCF::new(x, n).unwrap());
            assert_eq!(plan_from_json(&plan_to_json(&p)).unwrap(), p);
        }
    }

    #[test]
    fn inconsistent_plan_files_are_rejected() {
        let p = build_plan(TargetCF::new(87, 7).unwrap());
        let mut doc = PlanDocument::from_plan(&p);
        doc.target = "85/128".into();
        assert!(matches!(doc.to_plan(), Err(Error::InvalidPlan(_))));
        let mut doc = PlanDocument::from_plan(&p);
        doc.ops[2].reagent = None;
        assert!(matches!(doc.to_plan(), Err(Error::InvalidPlan(_))));
        let mut doc = PlanDocument::from_plan(&p);
        doc.ops.swap(1, 2);
        assert!(matches!(doc.to_plan(), Err(Error::InvalidPlan(_))));
        assert!(matches!(plan_from_json("{"), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn simulation_json_has_trace_records() {
        let p = build_plan(TargetCF::new(87, 7).unwrap());
        let ev = ErrorVector::parse("000+00", Exact::from_ratio(7, 100)).unwrap();
        let r = simulate(&p, &ev).unwrap();
        let doc: SimulationDocument = serde_json::from_str(&simulation_to_json(&r, &ev)).unwrap();
        assert_eq!(doc.backend, "rational");
        assert_eq!(doc.trace.len(), 7);
        assert_eq!(doc.trace[3].disposition, "larger");
        assert!((doc.trace[3].kept_volume - 1.07).abs() < 1e-15);
        assert_eq!(doc.trace[3].total_volume, 2.0);
        assert_eq!(doc.final_volume_exact.as_deref(), Some("807/800"));
        assert!((doc.produced_cf_x2n - 86.73).abs() < 0.005);
    }
}
