use std::io::Write;

use serde::Serialize;

use crate::analysis::{CriticalityReport, EnumerationRow, SweepRow};
use crate::engine::SimulationResult;
use crate::export::json::trace_records;
use crate::scalar::Scalar;
use crate::target::TargetCF;

#[derive(Serialize)]
struct EnumerationRecord {
    vector: String,
    gray_position: Option<u64>,
    produced_cf_x2n: f64,
    cf_error_x2n: f64,
    abs_error_x2n: f64,
    within_tolerance: bool,
}

#[derive(Serialize)]
struct SweepRecord {
    numerator: u64,
    accuracy: u32,
    max_error_x2n: f64,
    argmax_vector: String,
}

#[derive(Serialize)]
struct CriticalityRecord {
    step: usize,
    error_larger_x2n: f64,
    error_smaller_x2n: f64,
    critical: bool,
}

fn write_all<W: Write, R: Serialize>(out: W, records: impl IntoIterator<Item = R>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `vector,gray_position,produced_cf_x2n,cf_error_x2n,abs_error_x2n,within_tolerance`
pub fn write_enumeration<W: Write, S: Scalar>(out: W, target: TargetCF, rows: &[EnumerationRow<S>]) -> csv::Result<()> {
    let scale = target.scale::<S>();
    write_all(
        out,
        rows.iter().map(|r| EnumerationRecord {
            vector: r.vector.to_string(),
            gray_position: r.gray_position,
            produced_cf_x2n: (r.produced_cf.clone() * scale.clone()).to_f64(),
            cf_error_x2n: (r.cf_error.clone() * scale.clone()).to_f64(),
            abs_error_x2n: r.scaled_abs_error.to_f64(),
            within_tolerance: r.within_tolerance,
        }),
    )
}

/// `numerator,accuracy,max_error_x2n,argmax_vector`
pub fn write_sweep<W: Write, S: Scalar>(out: W, rows: &[SweepRow<S>]) -> csv::Result<()> {
    write_all(
        out,
        rows.iter().map(|r| SweepRecord {
            numerator: r.target.numerator(),
            accuracy: r.target.accuracy(),
            max_error_x2n: r.max_scaled_error.to_f64(),
            argmax_vector: r.argmax_vector.to_string(),
        }),
    )
}

/// `step,error_larger_x2n,error_smaller_x2n,critical`
pub fn write_criticality<W: Write, S: Scalar>(
    out: W,
    target: TargetCF,
    report: &CriticalityReport<S>,
) -> csv::Result<()> {
    let scale = target.scale::<S>();
    write_all(
        out,
        report.steps.iter().map(|s| CriticalityRecord {
            step: s.step,
            error_larger_x2n: (s.larger_error.clone() * scale.clone()).to_f64(),
            error_smaller_x2n: (s.smaller_error.clone() * scale.clone()).to_f64(),
            critical: s.critical,
        }),
    )
}

/// `op,cf,total_volume,kept_volume,disposition`
pub fn write_trace<W: Write, S: Scalar>(out: W, result: &SimulationResult<S>) -> csv::Result<()> {
    write_all(out, trace_records(result))
}
