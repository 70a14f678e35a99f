//! Command execution. Data goes to the returned buffer; human-readable
//! summaries go to `diag`, so data streams stay machine-parseable.

use std::io::Write;

use dmfb_dilution::analysis::{summarize, sweep_maximum, EnumerationRow};
use dmfb_dilution::export::{csv, plan_to_dot, plan_to_json, simulation_to_json};
use dmfb_dilution::vector::format_dispositions;
use dmfb_dilution::{
    classify_critical_steps, enumerate, simulate, sweep_targets, worst_case, ErrorVector, Scalar, TargetCF,
};
use serde_json::json;

use crate::args::{Action, Format};
use crate::CliError;

fn csv_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Io(e.to_string())
}

fn tolerance_for<S: Scalar>(target: TargetCF, tolerance: &Option<dmfb_dilution::Exact>) -> S {
    match tolerance {
        Some(t) => S::from_rational(t),
        None => target.default_tolerance::<S>(),
    }
}

fn rows_json<S: Scalar>(target: TargetCF, rows: &[EnumerationRow<S>]) -> serde_json::Value {
    let scale = target.scale::<S>();
    rows.iter()
        .map(|r| {
            json!({
                "vector": r.vector.to_string(),
                "gray_position": r.gray_position,
                "produced_cf_x2n": (r.produced_cf.clone() * scale.clone()).to_f64(),
                "cf_error_x2n": (r.cf_error.clone() * scale.clone()).to_f64(),
                "abs_error_x2n": r.scaled_abs_error.to_f64(),
                "within_tolerance": r.within_tolerance,
            })
        })
        .collect()
}

fn pretty(value: &serde_json::Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text.into_bytes()
}

/// Runs `action` in the scalar backend `S` and returns the data payload.
pub fn execute<S: Scalar>(action: &Action, format: Format, diag: &mut dyn Write) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    match action {
        Action::Plan { plan } => match format {
            Format::Dot => out.extend(plan_to_dot::<S>(plan, None).into_bytes()),
            _ => {
                out.extend(plan_to_json(plan).into_bytes());
                out.push(b'\n');
            }
        },

        Action::Simulate { plan, epsilon, vector } => {
            let ev = ErrorVector::new(vector.clone(), S::from_rational(epsilon))?;
            let result = simulate(plan, &ev)?;
            match format {
                Format::Csv => csv::write_trace(&mut out, &result).map_err(csv_err)?,
                Format::Dot => out.extend(plan_to_dot(plan, Some(&result)).into_bytes()),
                Format::Json => {
                    out.extend(simulation_to_json(&result, &ev).into_bytes());
                    out.push(b'\n');
                }
            }
            let _ = writeln!(
                diag,
                "produced CF x2^n: {:.4} (error {:+.4}), final volume {:.4}",
                (result.produced_cf.clone() * result.target.scale::<S>()).to_f64(),
                result.scaled_error.to_f64(),
                result.final_volume.to_f64()
            );
        }

        Action::Enumerate { plan, epsilon, positions, include_skip, tolerance } => {
            let target = plan.target();
            let tol = tolerance_for::<S>(target, tolerance);
            let rows = enumerate(plan, &S::from_rational(epsilon), positions, *include_skip, &tol)?;
            match format {
                Format::Json => out.extend(pretty(&rows_json(target, &rows))),
                _ => csv::write_enumeration(&mut out, target, &rows).map_err(csv_err)?,
            }
            let summary = summarize(&rows);
            let argmax = rows.iter().find(|r| r.scaled_abs_error == summary.max_scaled_abs_error);
            let _ = writeln!(diag, "rows: {}", summary.rows);
            let _ = writeln!(diag, "within tolerance: {} of {}", summary.within, summary.rows);
            let _ = writeln!(
                diag,
                "max abs_error_x2n: {:.4} at {}",
                summary.max_scaled_abs_error.to_f64(),
                argmax.map_or_else(String::new, |r| r.vector.to_string())
            );
        }

        Action::WorstCase { plan, epsilon, include_skip } => {
            let target = plan.target();
            let eps = S::from_rational(epsilon);
            let wc = worst_case(plan, &eps, *include_skip)?;
            let scale = target.scale::<S>();
            let result = simulate(plan, &wc.argmax)?;
            match format {
                Format::Csv => {
                    let row = EnumerationRow {
                        vector: wc.argmax.clone(),
                        produced_cf: result.produced_cf.clone(),
                        cf_error: result.cf_error.clone(),
                        scaled_abs_error: wc.max_scaled_abs_error.clone(),
                        within_tolerance: wc.max_scaled_abs_error < target.default_tolerance::<S>() * scale.clone(),
                        gray_position: wc.gray_position,
                    };
                    csv::write_enumeration(&mut out, target, &[row]).map_err(csv_err)?;
                }
                _ => out.extend(pretty(&json!({
                    "target": target.to_string(),
                    "backend": S::NAME,
                    "epsilon": eps.to_f64(),
                    "include_skip": include_skip,
                    "space": wc.space,
                    "argmax_vector": wc.argmax.to_string(),
                    "gray_position": wc.gray_position,
                    "produced_cf_x2n": (result.produced_cf.clone() * scale).to_f64(),
                    "cf_error_x2n": wc.scaled_error.to_f64(),
                    "max_error_x2n": wc.max_scaled_abs_error.to_f64(),
                }))),
            }
            let _ = writeln!(diag, "vectors searched: {}", wc.space);
            let _ = writeln!(
                diag,
                "max abs_error_x2n: {:.4} at {}{}",
                wc.max_scaled_abs_error.to_f64(),
                wc.argmax,
                wc.gray_position.map_or_else(String::new, |g| format!(" (gray position {g})"))
            );
        }

        Action::Classify { plan, epsilon, tolerance } => {
            let target = plan.target();
            let tol = tolerance_for::<S>(target, tolerance);
            let report = classify_critical_steps(plan, &S::from_rational(epsilon), &tol)?;
            match format {
                Format::Json => {
                    let scale = target.scale::<S>();
                    let steps: Vec<_> = report
                        .steps
                        .iter()
                        .map(|s| {
                            json!({
                                "step": s.step,
                                "error_larger_x2n": (s.larger_error.clone() * scale.clone()).to_f64(),
                                "error_smaller_x2n": (s.smaller_error.clone() * scale.clone()).to_f64(),
                                "critical": s.critical,
                            })
                        })
                        .collect();
                    out.extend(pretty(&json!({
                        "target": target.to_string(),
                        "tolerance_x2n": (tol * scale).to_f64(),
                        "critical_steps": report.critical_steps(),
                        "steps": steps,
                    })));
                }
                _ => csv::write_criticality(&mut out, target, &report).map_err(csv_err)?,
            }
            let critical: Vec<String> = report.critical_steps().iter().map(|s| s.to_string()).collect();
            let _ = writeln!(
                diag,
                "critical steps: {}",
                if critical.is_empty() { "none".to_string() } else { critical.join(", ") }
            );
        }

        Action::Sweep { accuracy, epsilon } => {
            let rows = sweep_targets(*accuracy, &S::from_rational(epsilon))?;
            let max = sweep_maximum(&rows);
            match format {
                Format::Json => {
                    let records: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "numerator": r.target.numerator(),
                                "accuracy": r.target.accuracy(),
                                "max_error_x2n": r.max_scaled_error.to_f64(),
                                "argmax_vector": format_dispositions(r.argmax_vector.dispositions()),
                            })
                        })
                        .collect();
                    out.extend(pretty(&json!({
                        "accuracy": accuracy,
                        "max_error_x2n": max.as_ref().map(|(m, _)| m.to_f64()),
                        "at_numerators": max.as_ref().map(|(_, at)| at.clone()),
                        "rows": records,
                    })));
                }
                _ => csv::write_sweep(&mut out, &rows).map_err(csv_err)?,
            }
            let _ = writeln!(diag, "rows: {}", rows.len());
            if let Some((m, at)) = max {
                let at: Vec<String> = at.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(diag, "max max_error_x2n: {:.4} at numerators {}", m.to_f64(), at.join(", "));
            }
        }
    }
    Ok(out)
}
