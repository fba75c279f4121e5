//! Exact CNOT resource accounting.
//!
//! Only CNOTs are counted, since two-qubit gates dominate execution time
//! and error rates; single-qubit gates are free. Depth is as-soon-as-
//! possible scheduling on qubit lines *within* each pipeline stage, with
//! stages acting as barriers — the convention behind the closed forms
//! 8N−8 (preparation) and 12N+12 (projection), whose stages do not overlap.

use crate::circuit::{Circuit, Stage};
use crate::error::CircuitError;
use crate::gate::Gate;
use crate::lower::lower;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct StageMetrics {
    pub stage: String,
    pub cnot_count: usize,
    pub cnot_depth: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub width: usize,
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub per_stage: Vec<StageMetrics>,
}

impl MetricsReport {
    pub fn stage(&self, stage: Stage) -> Option<&StageMetrics> {
        self.per_stage.iter().find(|s| s.stage == stage.name())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }
}

/// Lower the circuit and count CNOTs and CNOT-only depth, total and per
/// stage.
pub fn metrics(c: &Circuit) -> Result<MetricsReport, CircuitError> {
    let low = lower(c)?;
    let mut per_stage = Vec::new();
    let mut total_count = 0usize;
    let mut total_depth = 0usize;

    // Stage ranges plus the gaps between them, in order.
    let mut segments: Vec<(Option<Stage>, std::ops::Range<usize>)> = Vec::new();
    let mut cursor = 0usize;
    for (stage, range) in low.stages() {
        if range.start > cursor {
            segments.push((None, cursor..range.start));
        }
        segments.push((Some(*stage), range.clone()));
        cursor = range.end;
    }
    if cursor < low.len() {
        segments.push((None, cursor..low.len()));
    }

    for (stage, range) in segments {
        let gates = &low.gates()[range];
        let count = gates.iter().filter(|g| g.is_cnot()).count();
        let depth = asap_cnot_depth(low.width(), gates);
        total_count += count;
        total_depth += depth;
        match stage {
            Some(s) => per_stage.push(StageMetrics {
                stage: s.name().to_string(),
                cnot_count: count,
                cnot_depth: depth,
            }),
            None if count > 0 => per_stage.push(StageMetrics {
                stage: "unstaged".to_string(),
                cnot_count: count,
                cnot_depth: depth,
            }),
            None => {}
        }
    }

    Ok(MetricsReport {
        width: low.width(),
        cnot_count: total_count,
        cnot_depth: total_depth,
        per_stage,
    })
}

/// Greedy as-soon-as-possible CNOT layering: each CNOT lands one step after
/// the later of its two lines; single-qubit gates cost nothing and impose
/// no extra ordering beyond the per-line times.
fn asap_cnot_depth(width: usize, gates: &[Gate]) -> usize {
    let mut time = vec![0usize; width];
    let mut depth = 0usize;
    for gate in gates {
        if let Gate::Cnot { control, target } = gate {
            let t = time[*control].max(time[*target]) + 1;
            time[*control] = t;
            time[*target] = t;
            depth = depth.max(t);
        }
    }
    depth
}
