//! Trace and report serialization.
//!
//! Floats are written in Rust's shortest round-trip decimal form, so parsing
//! a value back yields bit-identical doubles and small integers stay small
//! (`25`, not `2.5e1`).

use std::fs;
use std::io::Write;
use std::path::Path;

use pcops::methods::IterationTrace;
use pcops::verification::VerificationReport;
use serde::Serialize;

use crate::config::TraceFormat;
use crate::runner::CliError;

/// Report document: the verification report plus a wall-clock stamp. The
/// stamp is the only field excluded from byte-for-byte determinism.
#[derive(Debug, Serialize)]
pub struct ReportFile<'a> {
    pub timestamp_unix_ms: u64,
    #[serde(flatten)]
    pub report: &'a VerificationReport,
}

fn io_err(path: &Path, err: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

/// Writes a trace in the requested format. The CSV schema is exactly
/// `k,residual_sq,dist_to_ref` with the distance column left empty when no
/// reference fixed point is attached.
pub fn emit_trace(trace: &IterationTrace, path: &Path, format: TraceFormat) -> Result<(), CliError> {
    match format {
        TraceFormat::Csv => {
            let mut out = String::with_capacity(32 * (trace.n + 1));
            out.push_str("k,residual_sq,dist_to_ref\n");
            for k in 0..trace.n {
                let rsq = trace.residual_sq[k];
                match &trace.dist_to_ref {
                    Some(d) => out.push_str(&format!("{k},{rsq},{}\n", d[k])),
                    None => out.push_str(&format!("{k},{rsq},\n")),
                }
            }
            fs::write(path, out).map_err(|e| io_err(path, e))
        }
        TraceFormat::Json => {
            let body = serde_json::to_string_pretty(trace)
                .map_err(|e| CliError::Io(format!("serializing trace: {e}")))?;
            fs::write(path, body).map_err(|e| io_err(path, e))
        }
    }
}

/// Writes the report JSON with its timestamp.
pub fn emit_report(report: &VerificationReport, path: &Path) -> Result<(), CliError> {
    let timestamp_unix_ms = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    let doc = ReportFile {
        timestamp_unix_ms,
        report,
    };
    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let body = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    file.write_all(body.as_bytes()).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pcops::methods::{iterate, FixedPointRef};
    use pcops::operator_core::{OperatorExpr, Point};

    #[test]
    fn identity_trace_csv_body() {
        let id = OperatorExpr::identity(2).unwrap();
        let x0 = Point::from_slice(&[1.0, 1.0]).unwrap();
        let mut trace = iterate(&id, &x0, 2, None, 0).unwrap();
        trace.attach_reference(&FixedPointRef {
            point: x0,
            residual: 0.0,
            tol: 1e-12,
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        emit_trace(&trace, &path, TraceFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "k,residual_sq,dist_to_ref\n0,0,0\n1,0,0\n");
    }

    #[test]
    fn gd_first_row_matches_hand_computation() {
        // f = x^2/2, gamma = 1, x0 = 5: row k=0 is "0,25,5"
        let f = pcops::atoms::SmoothConvexFn::quadratic(
            nalgebra::DMatrix::from_element(1, 1, 1.0),
            nalgebra::DVector::zeros(1),
            1.0,
        )
        .unwrap();
        let t = pcops::atoms::gradient_step(f, 1.0).unwrap();
        let x0 = Point::from_slice(&[5.0]).unwrap();
        let mut trace = iterate(&t, &x0, 3, None, 0).unwrap();
        trace.attach_reference(&FixedPointRef {
            point: Point::from_slice(&[0.0]).unwrap(),
            residual: 0.0,
            tol: 1e-12,
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        emit_trace(&trace, &path, TraceFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let first_row = text.lines().nth(1).unwrap();
        assert_eq!(first_row, "0,25,5");
    }

    #[test]
    fn csv_without_reference_leaves_dist_empty() {
        let id = OperatorExpr::identity(1).unwrap();
        let x0 = Point::from_slice(&[2.0]).unwrap();
        let trace = iterate(&id, &x0, 1, None, 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        emit_trace(&trace, &path, TraceFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "k,residual_sq,dist_to_ref\n0,0,\n");
    }

    #[test]
    fn json_round_trip_preserves_residuals_exactly() {
        let f = pcops::atoms::SmoothConvexFn::quadratic(
            nalgebra::DMatrix::from_element(1, 1, 1.7),
            nalgebra::DVector::from_element(1, 0.3),
            1.7,
        )
        .unwrap();
        let t = pcops::atoms::gradient_step(f, 0.7).unwrap();
        let x0 = Point::from_slice(&[5.1]).unwrap();
        let trace = iterate(&t, &x0, 20, None, 0).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.json");
        emit_trace(&trace, &path, TraceFormat::Json).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: IterationTrace = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.residual_sq, trace.residual_sq);
        assert_eq!(parsed.points, trace.points);
    }
}
