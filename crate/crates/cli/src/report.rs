//! CSV report assembly (RFC 4180, LF line endings, header row).
//!
//! Floats are printed with 17 significant digits so a round-trip through
//! text is lossless and reruns are byte-comparable. Absent values are
//! empty cells.

use flowsmooth_core::Trajectory64;

use crate::experiment::SamplerSummary;

/// 17 significant digits: one leading digit plus 16 after the point.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub const SUMMARY_HEADER: &str = "sampler,algorithm,status,runs_ok,runs_failed,\
mean_endpoint_error,std_endpoint_error,mean_oscillation_energy,total_model_calls";

pub fn summary_csv(rows: &[SamplerSummary]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for row in rows {
        let status = if row.runs_failed == 0 {
            "ok"
        } else if row.runs_ok == 0 {
            "numeric_failure"
        } else {
            "partial"
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.label,
            row.algorithm,
            status,
            row.runs_ok,
            row.runs_failed,
            opt_float(row.mean_endpoint_error),
            opt_float(row.std_endpoint_error),
            opt_float(row.mean_oscillation_energy),
            row.total_model_calls,
        ));
    }
    out
}

/// Wall-clock sidecar. Deliberately a separate file: `summary.csv` is
/// part of the byte-determinism contract and timings are not.
pub fn timings_csv(rows: &[SamplerSummary]) -> String {
    let mut out = String::from("sampler,wall_time_seconds\n");
    for row in rows {
        out.push_str(&format!("{},{:.6}\n", row.label, row.wall_time_s));
    }
    out
}

/// Per-trajectory dump: one row per node. Rows `0..K` carry the state
/// at the step start plus that step's diagnostics; the final row carries
/// the terminal state with empty diagnostic cells.
pub fn trajectory_csv(traj: &Trajectory64) -> String {
    let dim = traj.states()[0].dim();
    let mut out = String::from("k,t");
    for j in 0..dim {
        out.push_str(&format!(",z{j}"));
    }
    out.push_str(",kappa,accepted_full_step,gamma_t,model_calls\n");

    for (k, (state, t)) in traj.states().iter().zip(traj.times()).enumerate() {
        out.push_str(&format!("{k},{}", format_float(*t)));
        for value in state.values() {
            out.push(',');
            out.push_str(&format_float(*value));
        }
        if let Some(record) = traj.records().get(k) {
            out.push_str(&format!(
                ",{},{},{},{}\n",
                opt_float(record.kappa),
                record
                    .accepted_full_step
                    .map(|b| b.to_string())
                    .unwrap_or_default(),
                opt_float(record.gamma_t),
                record.model_calls,
            ));
        } else {
            out.push_str(",,,,\n");
        }
    }
    out
}
