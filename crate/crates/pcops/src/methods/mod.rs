//! The method catalog, built as certified operator expressions.
//!
//! Each [`MethodSpec`] names a classical first-order method together with
//! its parameters; [`MethodSpec::build`] assembles the iteration operator as
//! an [`OperatorExpr`] whose certificate is derived by the calculus rather
//! than asserted. The derived modulus agrees with the closed-form value
//! stated for each method (exposed via [`MethodSpec::closed_form_nu`]), which
//! gives two independent routes to the same number.

pub mod iterate;

use crate::atoms::prox::{prox, ProxableFn};
use crate::atoms::sets::ConvexSet;
use crate::atoms::smooth::SmoothConvexFn;
use crate::atoms::{gradient_step, projection_expr, prox_expr};
use crate::error::{Error, Result};
use crate::operator_core::{compose_alpha, OperatorExpr, Point};

pub use iterate::{find_fixed_point, iterate, FixedPointRef, IterationTrace};

/// Default prox scale λ.
pub const DEFAULT_LAMBDA: f64 = 1.0;
/// Default relaxation parameter ω (over-relaxed).
pub const DEFAULT_OMEGA: f64 = 1.5;
/// Default convex-combination weight α of the generalized ADMM update.
pub const DEFAULT_ADMM_ALPHA: f64 = 0.75;

/// A method from the catalog, with its parameters.
///
/// Parameter windows are enforced by [`build`](Self::build):
/// `γ ∈ (0, 2/L)`, `ω ∈ (0, 2)`, `λ > 0`, `α ∈ (0, 1)`.
#[derive(Debug, Clone)]
pub enum MethodSpec {
    /// `x ↦ x`, the do-nothing baseline.
    Identity { dim: usize },
    /// `x ↦ x − γ∇f(x)`.
    GradientDescent { f: SmoothConvexFn, gamma: f64 },
    /// `(1−ω)I + ωP_C`.
    RelaxedProjection { set: ConvexSet, omega: f64 },
    /// `P_A ∘ P_B`.
    AlternatingProjections { a: ConvexSet, b: ConvexSet },
    /// `P_C ∘ (I − γ∇f)`, optionally with relaxed projection.
    ProjectedGradientDescent {
        set: ConvexSet,
        f: SmoothConvexFn,
        gamma: f64,
        omega: Option<f64>,
    },
    /// `prox_{g,λ}`.
    ProximalPoint {
        g: ProxableFn,
        lambda: f64,
        dim: usize,
    },
    /// `(1−ω)I + ω·prox_{g,λ}`.
    RelaxedProximalPoint {
        g: ProxableFn,
        lambda: f64,
        omega: f64,
        dim: usize,
    },
    /// `prox_{g,λ} ∘ (I − γ∇f)`, optionally with relaxed prox.
    ForwardBackward {
        f: SmoothConvexFn,
        g: ProxableFn,
        gamma: f64,
        lambda: f64,
        omega: Option<f64>,
    },
    /// The operator form `½I + ½R_g R_f` on the auxiliary variable, with
    /// `R_h = 2·prox_{h,λ} − I`. The primal estimate is `prox_{f,λ}(z)`.
    Admm {
        f: ProxableFn,
        g: ProxableFn,
        lambda: f64,
        dim: usize,
    },
    /// `(1−α)I + α·R_g R_f`, α ∈ (0, 1).
    GeneralizedAdmm {
        f: ProxableFn,
        g: ProxableFn,
        lambda: f64,
        alpha: f64,
        dim: usize,
    },
}

impl MethodSpec {
    /// Dimension of the iterate space.
    pub fn dim(&self) -> usize {
        match self {
            MethodSpec::Identity { dim } => *dim,
            MethodSpec::GradientDescent { f, .. } => f.dim(),
            MethodSpec::RelaxedProjection { set, .. } => set.dim(),
            MethodSpec::AlternatingProjections { a, .. } => a.dim(),
            MethodSpec::ProjectedGradientDescent { f, .. } => f.dim(),
            MethodSpec::ProximalPoint { dim, .. } => *dim,
            MethodSpec::RelaxedProximalPoint { dim, .. } => *dim,
            MethodSpec::ForwardBackward { f, .. } => f.dim(),
            MethodSpec::Admm { dim, .. } => *dim,
            MethodSpec::GeneralizedAdmm { dim, .. } => *dim,
        }
    }

    /// Assembles the iteration operator with its derived certificate.
    pub fn build(&self) -> Result<OperatorExpr> {
        match self {
            MethodSpec::Identity { dim } => OperatorExpr::identity(*dim),
            MethodSpec::GradientDescent { f, gamma } => gradient_step(f.clone(), *gamma),
            MethodSpec::RelaxedProjection { set, omega } => {
                projection_expr(set.clone())?.relax(*omega)
            }
            MethodSpec::AlternatingProjections { a, b } => {
                let pa = projection_expr(a.clone())?;
                let pb = projection_expr(b.clone())?;
                pa.compose(pb)
            }
            MethodSpec::ProjectedGradientDescent {
                set,
                f,
                gamma,
                omega,
            } => {
                let step = gradient_step(f.clone(), *gamma)?;
                let proj = projection_expr(set.clone())?;
                let proj = match omega {
                    Some(w) => proj.relax(*w)?,
                    None => proj,
                };
                proj.compose(step)
            }
            MethodSpec::ProximalPoint { g, lambda, dim } => prox_expr(g.clone(), *lambda, *dim),
            MethodSpec::RelaxedProximalPoint {
                g,
                lambda,
                omega,
                dim,
            } => prox_expr(g.clone(), *lambda, *dim)?.relax(*omega),
            MethodSpec::ForwardBackward {
                f,
                g,
                gamma,
                lambda,
                omega,
            } => {
                let step = gradient_step(f.clone(), *gamma)?;
                let backward = prox_expr(g.clone(), *lambda, f.dim())?;
                let backward = match omega {
                    Some(w) => backward.relax(*w)?,
                    None => backward,
                };
                backward.compose(step)
            }
            MethodSpec::Admm { f, g, lambda, dim } => reflected_pair(f, g, *lambda, *dim)
                .and_then(|rgrf| {
                    OperatorExpr::convex_combine(0.5, OperatorExpr::identity(*dim)?, rgrf)
                }),
            MethodSpec::GeneralizedAdmm {
                f,
                g,
                lambda,
                alpha,
                dim,
            } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(Error::param("alpha", *alpha, "the open interval (0, 1)"));
                }
                reflected_pair(f, g, *lambda, *dim).and_then(|rgrf| {
                    OperatorExpr::convex_combine(*alpha, OperatorExpr::identity(*dim)?, rgrf)
                })
            }
        }
    }

    /// The pseudocontractivity modulus stated in closed form for each
    /// method: `2/(γL) − 1` for the gradient step, `(2−ω)/ω` for the
    /// relaxations, 1 for projection/prox/ADMM, `1 − γL/2` for the
    /// forward-backward compositions, `(1−α)/α` for the generalized ADMM,
    /// and the composition formula for alternating projections.
    /// `None` for the identity, which has no finite modulus.
    pub fn closed_form_nu(&self) -> Option<f64> {
        let relaxed = |omega: f64| (2.0 - omega) / omega;
        match self {
            MethodSpec::Identity { .. } => None,
            MethodSpec::GradientDescent { f, gamma } => Some(2.0 / (gamma * f.lipschitz()) - 1.0),
            MethodSpec::RelaxedProjection { omega, .. } => Some(relaxed(*omega)),
            MethodSpec::AlternatingProjections { .. } => {
                let a = compose_alpha(0.5, 0.5);
                Some((1.0 - a) / a)
            }
            MethodSpec::ProjectedGradientDescent { f, gamma, omega, .. }
            | MethodSpec::ForwardBackward { f, gamma, omega, .. } => {
                let s = gamma * f.lipschitz() / 2.0;
                match omega {
                    // composition of the omega/2-averaged relaxation with
                    // the (gamma L / 2)-averaged gradient step
                    Some(w) => {
                        let a = compose_alpha(w / 2.0, s);
                        Some((1.0 - a) / a)
                    }
                    None => Some(1.0 - s),
                }
            }
            MethodSpec::ProximalPoint { .. } => Some(1.0),
            MethodSpec::RelaxedProximalPoint { omega, .. } => Some(relaxed(*omega)),
            MethodSpec::Admm { .. } => Some(1.0),
            MethodSpec::GeneralizedAdmm { alpha, .. } => Some((1.0 - alpha) / alpha),
        }
    }

    /// The analytic fixed point, for the instances where one is available
    /// in closed form: gradient descent on an invertible quadratic solves
    /// `Ax = b`, and the proximal point of a quadratic or `½‖·‖²` sits at
    /// the minimizer.
    pub fn analytic_fixed_point(&self) -> Option<Point> {
        match self {
            MethodSpec::GradientDescent { f, .. } => {
                f.minimizer().and_then(|m| Point::new(m).ok())
            }
            MethodSpec::ProximalPoint { g, dim, .. } => match g {
                ProxableFn::HalfNormSq { .. } => Point::zeros(*dim).ok(),
                ProxableFn::Quadratic { a, b } => a
                    .clone()
                    .cholesky()
                    .and_then(|c| Point::new(c.solve(b)).ok()),
                _ => None,
            },
            _ => None,
        }
    }

    /// For the ADMM forms, recovers the primal estimate `prox_{f,λ}(z)`
    /// from the auxiliary iterate.
    pub fn recover_primal(&self, z: &Point) -> Option<Point> {
        match self {
            MethodSpec::Admm { f, lambda, .. }
            | MethodSpec::GeneralizedAdmm { f, lambda, .. } => prox(f, *lambda, z).ok(),
            _ => None,
        }
    }
}

fn reflected_pair(f: &ProxableFn, g: &ProxableFn, lambda: f64, dim: usize) -> Result<OperatorExpr> {
    let rf = prox_expr(f.clone(), lambda, dim)?.reflect()?;
    let rg = prox_expr(g.clone(), lambda, dim)?.reflect()?;
    rg.compose(rf)
}

impl std::fmt::Display for MethodSpec {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodSpec::Identity { dim } => write!(out, "identity(dim={dim})"),
            MethodSpec::GradientDescent { f, gamma } => {
                write!(out, "gradient_descent(gamma={gamma}, L={})", f.lipschitz())
            }
            MethodSpec::RelaxedProjection { omega, .. } => {
                write!(out, "relaxed_projection(omega={omega})")
            }
            MethodSpec::AlternatingProjections { .. } => write!(out, "alternating_projections"),
            MethodSpec::ProjectedGradientDescent { gamma, omega, f, .. } => write!(
                out,
                "projected_gradient_descent(gamma={gamma}, omega={omega:?}, L={})",
                f.lipschitz()
            ),
            MethodSpec::ProximalPoint { lambda, .. } => {
                write!(out, "proximal_point(lambda={lambda})")
            }
            MethodSpec::RelaxedProximalPoint { lambda, omega, .. } => {
                write!(out, "relaxed_proximal_point(lambda={lambda}, omega={omega})")
            }
            MethodSpec::ForwardBackward {
                gamma,
                lambda,
                omega,
                f,
                ..
            } => write!(
                out,
                "forward_backward(gamma={gamma}, lambda={lambda}, omega={omega:?}, L={})",
                f.lipschitz()
            ),
            MethodSpec::Admm { lambda, .. } => write!(out, "admm(lambda={lambda})"),
            MethodSpec::GeneralizedAdmm { lambda, alpha, .. } => {
                write!(out, "generalized_admm(lambda={lambda}, alpha={alpha})")
            }
        }
    }
}
