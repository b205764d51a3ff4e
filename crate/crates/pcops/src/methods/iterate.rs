//! Fixed-point iteration driver and per-run traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_core::{OperatorExpr, Point};

pub use crate::operator_core::FixedPointRef;

/// Iteration cap of the fixed-point search.
pub const FIXED_POINT_ITER_CAP: usize = 1_000_000;

/// Record of one fixed-point iteration `xᵏ⁺¹ = T(xᵏ)`.
///
/// `residual_sq[k] = ‖xᵏ − xᵏ⁺¹‖² = ‖Gxᵏ‖²` where `G = I − T`, the error
/// criterion the convergence bounds govern. `points` holds `x⁰ … xᴺ`, so
/// `points.len() == n + 1` and `residual_sq.len() == n` where `n` is the
/// number of steps actually performed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationTrace {
    pub points: Vec<Point>,
    pub residual_sq: Vec<f64>,
    /// `‖xᵏ − x⋆‖` for k = 0..n, when a reference fixed point is attached.
    pub dist_to_ref: Option<Vec<f64>>,
    /// Steps performed (may be fewer than requested when the stop
    /// tolerance is reached).
    pub n: usize,
    pub seed: u64,
    /// Description of the method that produced the trace.
    pub method: String,
}

impl IterationTrace {
    /// Computes `dist_to_ref` against a reference fixed point, one entry
    /// per residual row (`k = 0..n`).
    pub fn attach_reference(&mut self, reference: &FixedPointRef) {
        self.dist_to_ref = Some(
            self.points[..self.n]
                .iter()
                .map(|p| p.distance(&reference.point))
                .collect(),
        );
    }

    /// The displacement `Gxᵏ = xᵏ − xᵏ⁺¹` as raw coordinates (defined for
    /// `k < n`).
    pub fn displacement(&self, k: usize) -> nalgebra::DVector<f64> {
        self.points[k].coords() - self.points[k + 1].coords()
    }
}

/// Runs `xᵏ⁺¹ = T(xᵏ)` until `max_steps` steps have been taken or the
/// residual `‖Gxᵏ‖` falls to `stop_tol` or below (`None` disables the
/// residual stop and runs the full budget). At least one step is always
/// performed. The run is deterministic; `seed` is recorded in the trace for
/// provenance of seeded inputs.
pub fn iterate(
    t: &OperatorExpr,
    x0: &Point,
    max_steps: usize,
    stop_tol: Option<f64>,
    seed: u64,
) -> Result<IterationTrace> {
    if x0.dim() != t.dim() {
        return Err(Error::dim(t.dim(), x0.dim(), "iterate"));
    }
    if max_steps == 0 {
        return Err(Error::Input("iterate requires at least one step".into()));
    }
    if let Some(tol) = stop_tol {
        if tol.is_nan() || tol < 0.0 {
            return Err(Error::param("stop_tol", tol, "the range [0, inf)"));
        }
    }
    let mut points = Vec::with_capacity(max_steps + 1);
    let mut residual_sq = Vec::with_capacity(max_steps);
    points.push(x0.clone());
    let mut x = x0.clone();
    for k in 0..max_steps {
        let next = t.evaluate(&x).map_err(|e| match e {
            Error::Numeric { context } => Error::Numeric {
                context: format!("{context} at iteration {k}"),
            },
            other => other,
        })?;
        let rsq = x.distance(&next).powi(2);
        residual_sq.push(rsq);
        points.push(next.clone());
        x = next;
        if stop_tol.is_some_and(|tol| rsq.sqrt() <= tol) {
            break;
        }
    }
    let n = residual_sq.len();
    Ok(IterationTrace {
        points,
        residual_sq,
        dist_to_ref: None,
        n,
        seed,
        method: t.describe(),
    })
}

/// Iterates `T` from `x0` until `‖x − Tx‖ ≤ tol`, up to
/// [`FIXED_POINT_ITER_CAP`] steps. Requires a pseudocontractive (averaged)
/// certificate, which is what guarantees convergence to a fixed point.
pub fn find_fixed_point(t: &OperatorExpr, x0: &Point, tol: f64) -> Result<FixedPointRef> {
    if x0.dim() != t.dim() {
        return Err(Error::dim(t.dim(), x0.dim(), "find_fixed_point"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::param("tol", tol, "the open interval (0, inf)"));
    }
    if t.certificate().alpha().is_none() {
        return Err(Error::Cert(
            "fixed-point search requires a pseudocontractive (averaged) certificate".into(),
        ));
    }
    let mut x = x0.clone();
    let mut best = f64::INFINITY;
    for _ in 0..FIXED_POINT_ITER_CAP {
        let tx = t.evaluate(&x)?;
        let residual = x.distance(&tx);
        best = best.min(residual);
        if residual <= tol {
            return Ok(FixedPointRef {
                point: x,
                residual,
                tol,
            });
        }
        x = tx;
    }
    Err(Error::NoConvergence {
        iterations: FIXED_POINT_ITER_CAP,
        best_residual: best,
    })
}
