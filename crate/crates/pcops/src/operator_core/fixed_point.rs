//! Evidence of (numerical) fixed-point membership.

use serde::{Deserialize, Serialize};

use crate::operator_core::point::Point;

/// A point certified to sit in `Fix T` up to a stated tolerance: the
/// residual `‖x − Tx‖` observed at the point is recorded together with the
/// tolerance it was required to meet.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointRef {
    pub point: Point,
    pub residual: f64,
    pub tol: f64,
}
