use std::fmt::Write;

use crate::engine::SimulationResult;
use crate::plan::{MixSplitPlan, Reagent};
use crate::scalar::Scalar;

fn dispense_node(out: &mut String, id: &str, reagent: Reagent) {
    let (label, color) = match reagent {
        Reagent::Sample => ("S", "lightblue"),
        Reagent::Buffer => ("B", "lightyellow"),
    };
    let _ =
        writeln!(out, "  {id} [label=\"{label}\", shape=circle, style=filled, fillcolor={color}, class=\"dispense\"];");
}

/// Sequencing graph with one node per dispensed droplet, mix-split op,
/// waste daughter and target daughter. Edges carry droplet volumes in 1X
/// units: ideal volumes, or the volumes of `run` when given.
pub fn plan_to_dot<S: Scalar>(plan: &MixSplitPlan, run: Option<&SimulationResult<S>>) -> String {
    let n = plan.op_count();
    let fmt_vol = |v: f64| format!("{v:.4}").trim_end_matches('0').trim_end_matches('.').to_string();
    let kept = |op: usize| run.map_or(1.0, |r| r.trace[op - 1].kept.volume.to_f64());
    let discarded = |op: usize| run.map_or(1.0, |r| r.trace[op - 1].discarded.volume.to_f64());

    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", plan.target());
    out.push_str("  rankdir=LR;\n");

    dispense_node(&mut out, "d1s", Reagent::Sample);
    dispense_node(&mut out, "d1b", Reagent::Buffer);
    for (i, &r) in plan.reagents().iter().enumerate() {
        dispense_node(&mut out, &format!("d{}", i + 2), r);
    }
    for op in 1..=n {
        let _ = writeln!(out, "  m{op} [label=\"M{op}\", shape=box, class=\"mixsplit\"];");
    }
    for op in 1..n {
        let _ = writeln!(out, "  w{op} [label=\"W\", shape=point, class=\"waste\"];");
    }
    let _ = writeln!(out, "  t1 [label=\"{}\", shape=doublecircle, class=\"target\"];", plan.target());
    let _ = writeln!(out, "  t2 [label=\"{}\", shape=doublecircle, class=\"target\"];", plan.target());

    out.push_str("  d1s -> m1 [label=\"1\"];\n  d1b -> m1 [label=\"1\"];\n");
    for op in 2..=n {
        let _ = writeln!(out, "  d{op} -> m{op} [label=\"1\"];");
        let _ = writeln!(out, "  m{} -> m{op} [label=\"{}\"];", op - 1, fmt_vol(kept(op - 1)));
        let _ = writeln!(out, "  m{} -> w{} [label=\"{}\", style=dashed];", op - 1, op - 1, fmt_vol(discarded(op - 1)));
    }
    let _ = writeln!(out, "  m{n} -> t1 [label=\"{}\"];", fmt_vol(kept(n)));
    let _ = writeln!(out, "  m{n} -> t2 [label=\"{}\"];", fmt_vol(discarded(n)));
    out.push_str("}\n");
    out
}
