//! Closed convex sets with closed-form orthogonal projections.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator_core::{AtomOp, Certificate, OperatorExpr, Point};

/// A nonempty closed convex subset of ℝⁿ with a closed-form projection.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSet {
    /// `{ z : lo ≤ z ≤ hi }` coordinatewise.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// `{ z : aᵀz ≤ b }`, a ≠ 0.
    Halfspace { a: Vec<f64>, b: f64 },
    /// `{ z : ‖z − center‖ ≤ r }`, r > 0.
    Ball { center: Vec<f64>, r: f64 },
    /// `{ z : aᵀz = b }`, a ≠ 0.
    Hyperplane { a: Vec<f64>, b: f64 },
}

impl ConvexSet {
    /// Validates the set invariants; call before use when the set comes from
    /// external input (the projection formulas assume them).
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexSet::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(Error::dim(lo.len().max(1), hi.len(), "box bounds"));
                }
                if !lo.iter().chain(hi.iter()).all(|v| v.is_finite()) {
                    return Err(Error::numeric("box bounds"));
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(Error::Input("box requires lo <= hi coordinatewise".into()));
                }
            }
            ConvexSet::Halfspace { a, b } | ConvexSet::Hyperplane { a, b } => {
                if a.is_empty() {
                    return Err(Error::dim(1, 0, "normal vector"));
                }
                if !a.iter().all(|v| v.is_finite()) || !b.is_finite() {
                    return Err(Error::numeric("halfspace/hyperplane parameters"));
                }
                if a.iter().all(|v| *v == 0.0) {
                    return Err(Error::Input(
                        "halfspace/hyperplane requires a nonzero normal".into(),
                    ));
                }
            }
            ConvexSet::Ball { center, r } => {
                if center.is_empty() {
                    return Err(Error::dim(1, 0, "ball center"));
                }
                if !center.iter().all(|v| v.is_finite()) || !r.is_finite() {
                    return Err(Error::numeric("ball parameters"));
                }
                if *r <= 0.0 {
                    return Err(Error::param("r", *r, "the open interval (0, inf)"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Box { lo, .. } => lo.len(),
            ConvexSet::Halfspace { a, .. } | ConvexSet::Hyperplane { a, .. } => a.len(),
            ConvexSet::Ball { center, .. } => center.len(),
        }
    }

    /// Orthogonal projection of raw coordinates onto the set.
    pub fn project_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            ConvexSet::Box { lo, hi } => DVector::from_iterator(
                x.len(),
                x.iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(v, (l, h))| v.clamp(*l, *h)),
            ),
            ConvexSet::Halfspace { a, b } => {
                let a = DVector::from_row_slice(a);
                let excess = a.dot(x) - b;
                if excess <= 0.0 {
                    x.clone()
                } else {
                    x - &a * (excess / a.norm_squared())
                }
            }
            ConvexSet::Ball { center, r } => {
                let c = DVector::from_row_slice(center);
                let d = x - &c;
                let norm = d.norm();
                if norm <= *r {
                    x.clone()
                } else {
                    c + d * (r / norm)
                }
            }
            ConvexSet::Hyperplane { a, b } => {
                let a = DVector::from_row_slice(a);
                x - &a * ((a.dot(x) - b) / a.norm_squared())
            }
        }
    }

    /// Squared distance to the set membership surface: 0 iff `x` is in the
    /// set (up to projection round-off).
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        (x - self.project_vec(x)).norm()
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Draws a member of the set: a scaled Gaussian point pushed into the
    /// set by projection. Used by sampling-based variational checks.
    pub fn sample_member<R: Rng>(&self, rng: &mut R, radius: f64) -> DVector<f64> {
        let n = self.dim();
        let raw = DVector::from_iterator(
            n,
            (0..n).map(|_| radius * rng.sample::<f64, _>(StandardNormal)),
        );
        self.project_vec(&raw)
    }

    /// Violation of the normal-cone condition `g ∈ N_C(z)`, by the
    /// closed-form cone description of each set kind. Returns the norm of
    /// the component of `g` outside the cone, or infinity when `z` is not
    /// in the set.
    ///
    /// Boundary detection uses an absolute tolerance `btol` on the active
    /// constraints.
    pub fn normal_cone_violation(&self, z: &DVector<f64>, g: &DVector<f64>, btol: f64) -> f64 {
        if self.distance(z) > btol {
            return f64::INFINITY;
        }
        match self {
            ConvexSet::Box { lo, hi } => {
                // coordinatewise: interior -> 0, lower face -> g <= 0, upper face -> g >= 0
                let mut worst: f64 = 0.0;
                for i in 0..z.len() {
                    let at_lo = (z[i] - lo[i]).abs() <= btol;
                    let at_hi = (hi[i] - z[i]).abs() <= btol;
                    let v = match (at_lo, at_hi) {
                        (true, true) => 0.0,
                        (true, false) => g[i].max(0.0),
                        (false, true) => (-g[i]).max(0.0),
                        (false, false) => g[i].abs(),
                    };
                    worst = worst.max(v);
                }
                worst
            }
            ConvexSet::Halfspace { a, b } => {
                let a = DVector::from_row_slice(a);
                if (a.dot(z) - b).abs() <= btol * a.norm() {
                    // boundary: cone is the ray of outward normals t*a, t >= 0
                    let t = (g.dot(&a) / a.norm_squared()).max(0.0);
                    (g - a * t).norm()
                } else {
                    // interior: cone is {0}
                    g.norm()
                }
            }
            ConvexSet::Ball { center, r } => {
                let c = DVector::from_row_slice(center);
                let d = z - c;
                if (d.norm() - r).abs() <= btol {
                    // boundary: cone is the outward radial ray
                    let u = &d / d.norm();
                    let t = g.dot(&u).max(0.0);
                    (g - u * t).norm()
                } else {
                    g.norm()
                }
            }
            ConvexSet::Hyperplane { a, .. } => {
                // cone is span{a} everywhere on the set
                let a = DVector::from_row_slice(a);
                let t = g.dot(&a) / a.norm_squared();
                (g - a * t).norm()
            }
        }
    }

    fn label(&self) -> String {
        match self {
            ConvexSet::Box { .. } => "box".into(),
            ConvexSet::Halfspace { .. } => "halfspace".into(),
            ConvexSet::Ball { r, .. } => format!("ball(r={r})"),
            ConvexSet::Hyperplane { .. } => "hyperplane".into(),
        }
    }
}

/// Orthogonal projection onto a convex set; firmly nonexpansive.
pub fn project(set: &ConvexSet, x: &Point) -> Result<Point> {
    if x.dim() != set.dim() {
        return Err(Error::dim(set.dim(), x.dim(), "project"));
    }
    Point::new(set.project_vec(x.coords()))
}

/// A projection atom carrying the firm-nonexpansiveness certificate.
#[derive(Debug, Clone)]
pub struct ProjectionAtom {
    set: ConvexSet,
}

impl ProjectionAtom {
    pub fn new(set: ConvexSet) -> Result<Self> {
        set.validate()?;
        Ok(ProjectionAtom { set })
    }

    pub fn set(&self) -> &ConvexSet {
        &self.set
    }
}

impl AtomOp for ProjectionAtom {
    fn id(&self) -> String {
        format!("proj[{}]", self.set.label())
    }
    fn dim(&self) -> usize {
        self.set.dim()
    }
    fn certificate(&self) -> Certificate {
        Certificate::firmly_nonexpansive()
    }
    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        self.set.project_vec(x)
    }
}

/// The projection atom as a certified expression.
pub fn projection_expr(set: ConvexSet) -> Result<OperatorExpr> {
    OperatorExpr::from_atom(ProjectionAtom::new(set)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(coords)
    }

    #[test]
    fn ball_projection_radial_formula() {
        let ball = ConvexSet::Ball {
            center: vec![0.0, 0.0],
            r: 1.0,
        };
        let p = ball.project_vec(&v(&[3.0, 4.0]));
        assert!((p - v(&[0.6, 0.8])).norm() <= 1e-15);
        // interior point is untouched
        let q = ball.project_vec(&v(&[0.2, -0.1]));
        assert_eq!(q, v(&[0.2, -0.1]));
    }

    #[test]
    fn halfspace_projection() {
        let hs = ConvexSet::Halfspace {
            a: vec![1.0, 0.0],
            b: 0.0,
        };
        // feasible point: projection is the identity
        assert_eq!(hs.project_vec(&v(&[-2.0, 3.0])), v(&[-2.0, 3.0]));
        // infeasible point: closed form x - max(0, a'x - b) a / |a|^2
        assert_eq!(hs.project_vec(&v(&[2.0, 3.0])), v(&[0.0, 3.0]));
    }

    #[test]
    fn box_and_hyperplane_projection() {
        let b = ConvexSet::Box {
            lo: vec![-1.0, -1.0],
            hi: vec![1.0, 1.0],
        };
        assert_eq!(b.project_vec(&v(&[2.0, -0.5])), v(&[1.0, -0.5]));
        let h = ConvexSet::Hyperplane {
            a: vec![1.0, 1.0],
            b: 0.0,
        };
        let p = h.project_vec(&v(&[1.0, 0.0]));
        assert!((p - v(&[0.5, -0.5])).norm() <= 1e-15);
    }

    #[test]
    fn validation_rejects_degenerate_sets() {
        assert!(ConvexSet::Ball {
            center: vec![0.0],
            r: 0.0
        }
        .validate()
        .is_err());
        assert!(ConvexSet::Halfspace {
            a: vec![0.0, 0.0],
            b: 1.0
        }
        .validate()
        .is_err());
        assert!(ConvexSet::Box {
            lo: vec![1.0],
            hi: vec![0.0]
        }
        .validate()
        .is_err());
    }

    #[test]
    fn normal_cone_of_ball_is_radial() {
        let ball = ConvexSet::Ball {
            center: vec![0.0, 0.0],
            r: 1.0,
        };
        let z = v(&[1.0, 0.0]);
        // outward radial direction is in the cone
        assert!(ball.normal_cone_violation(&z, &v(&[2.0, 0.0]), 1e-9) <= 1e-12);
        // tangential direction is not
        assert!(ball.normal_cone_violation(&z, &v(&[0.0, 1.0]), 1e-9) > 0.9);
        // interior point admits only zero
        let inner = v(&[0.0, 0.0]);
        assert!(ball.normal_cone_violation(&inner, &v(&[0.0, 0.0]), 1e-9) == 0.0);
        assert!(ball.normal_cone_violation(&inner, &v(&[0.1, 0.0]), 1e-9) > 0.0);
    }
}
