//! Proximal mappings of a small catalog of convex functions.
//!
//! Every prox is evaluated in closed form (soft threshold, linear solve,
//! projection), never by an inner iterative solver, so the certificate
//! checks downstream see the exact mapping.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::atoms::sets::ConvexSet;
use crate::atoms::smooth::MAX_QUADRATIC_DIM;
use crate::error::{Error, Result};
use crate::operator_core::{AtomOp, Certificate, OperatorExpr, Point};

/// Tolerance within which a coordinate counts as sitting at the l1 kink.
const KINK_TOL: f64 = 1e-12;

/// A convex function with a closed-form proximal mapping
/// `prox_{f,λ}(x) = argmin_z { f(z) + 1/(2λ)‖z−x‖² }`.
#[derive(Debug, Clone)]
pub enum ProxableFn {
    /// `f(z) = w‖z‖₁`, w ≥ 0.
    L1 { weight: f64 },
    /// `f(z) = ½‖z‖²`.
    HalfNormSq { dim: usize },
    /// The indicator of a convex set; its prox is the projection.
    Indicator(ConvexSet),
    /// `f(z) = ½ zᵀA z − bᵀz` with `A` symmetric PSD.
    Quadratic { a: DMatrix<f64>, b: DVector<f64> },
}

impl ProxableFn {
    pub fn l1(weight: f64) -> Result<Self> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::param("weight", weight, "the range [0, inf)"));
        }
        Ok(ProxableFn::L1 { weight })
    }

    pub fn indicator(set: ConvexSet) -> Result<Self> {
        set.validate()?;
        Ok(ProxableFn::Indicator(set))
    }

    pub fn quadratic(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n || b.len() != n {
            return Err(Error::dim(n.max(1), a.ncols().max(b.len()), "quadratic"));
        }
        if n > MAX_QUADRATIC_DIM {
            return Err(Error::param(
                "n",
                n as f64,
                format!("the range [1, {MAX_QUADRATIC_DIM}]"),
            ));
        }
        let asym = (&a - a.transpose()).amax();
        if asym > 1e-10 {
            return Err(Error::Input(format!(
                "matrix is not symmetric within 1e-10: max asymmetry {asym:e}"
            )));
        }
        let shifted = &a + DMatrix::identity(n, n) * 1e-10;
        if shifted.cholesky().is_none() {
            return Err(Error::Input(
                "matrix is not positive semidefinite within 1e-10".into(),
            ));
        }
        Ok(ProxableFn::Quadratic { a, b })
    }

    /// L1 and HalfNormSq apply in any dimension; sets and quadratics fix one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ProxableFn::L1 { .. } => None,
            ProxableFn::HalfNormSq { dim } => Some(*dim),
            ProxableFn::Indicator(set) => Some(set.dim()),
            ProxableFn::Quadratic { a, .. } => Some(a.nrows()),
        }
    }

    /// Evaluates the prox on raw coordinates. `λ > 0` is the caller's
    /// responsibility here; the public entry points validate it.
    fn prox_vec(&self, lambda: f64, x: &DVector<f64>) -> DVector<f64> {
        match self {
            ProxableFn::L1 { weight } => {
                let thr = lambda * weight;
                x.map(|v| soft_threshold(v, thr))
            }
            ProxableFn::HalfNormSq { .. } => x / (1.0 + lambda),
            ProxableFn::Indicator(set) => set.project_vec(x),
            ProxableFn::Quadratic { a, b } => {
                // (I + lambda A) z = x + lambda b
                let n = a.nrows();
                let m = DMatrix::identity(n, n) + a * lambda;
                let chol = m.cholesky().expect("I + lambda A is positive definite");
                chol.solve(&(x + b * lambda))
            }
        }
    }

    /// Violation of `g ∈ ∂f(z)`, by the closed-form subdifferential of each
    /// kind: sign pattern for l1, gradient equality for the quadratics,
    /// normal-cone membership for indicators. Zero means exact membership.
    pub fn subgradient_violation(&self, z: &DVector<f64>, g: &DVector<f64>) -> f64 {
        match self {
            ProxableFn::L1 { weight } => {
                let w = *weight;
                let mut worst: f64 = 0.0;
                for i in 0..z.len() {
                    let v = if z[i].abs() <= KINK_TOL {
                        (g[i].abs() - w).max(0.0)
                    } else {
                        (g[i] - z[i].signum() * w).abs()
                    };
                    worst = worst.max(v);
                }
                worst
            }
            ProxableFn::HalfNormSq { .. } => (g - z).norm(),
            ProxableFn::Indicator(set) => set.normal_cone_violation(z, g, 1e-9),
            ProxableFn::Quadratic { a, b } => (g - (a * z - b)).norm(),
        }
    }

    /// Whether `g` is a subgradient of `f` at `z` within `tol`.
    pub fn is_subgradient(&self, z: &Point, g: &Point, tol: f64) -> bool {
        if z.dim() != g.dim() {
            return false;
        }
        if let Some(d) = self.dim() {
            if z.dim() != d {
                return false;
            }
        }
        self.subgradient_violation(z.coords(), g.coords()) <= tol
    }

    fn label(&self) -> String {
        match self {
            ProxableFn::L1 { weight } => format!("l1(w={weight})"),
            ProxableFn::HalfNormSq { .. } => "half_norm_sq".into(),
            ProxableFn::Indicator(set) => format!("indicator[{:?}]", set.dim()),
            ProxableFn::Quadratic { a, .. } => format!("quadratic(n={})", a.nrows()),
        }
    }
}

fn soft_threshold(v: f64, thr: f64) -> f64 {
    if v > thr {
        v - thr
    } else if v < -thr {
        v + thr
    } else {
        0.0
    }
}

/// Proximal mapping `prox_{f,λ}(x)`, λ > 0; firmly nonexpansive in `x`.
pub fn prox(f: &ProxableFn, lambda: f64, x: &Point) -> Result<Point> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::param("lambda", lambda, "the open interval (0, inf)"));
    }
    if let Some(d) = f.dim() {
        if d != x.dim() {
            return Err(Error::dim(d, x.dim(), "prox"));
        }
    }
    Point::new(f.prox_vec(lambda, x.coords()))
}

/// Checks `g ∈ ∂f(z)` with the default tolerance 1e-8.
pub fn subgradient_check(f: &ProxableFn, z: &Point, g: &Point) -> bool {
    f.is_subgradient(z, g, 1e-8)
}

/// A prox atom carrying the firm-nonexpansiveness certificate. For the
/// quadratic kind the factorization of `I + λA` is cached at construction.
pub struct ProxAtom {
    f: ProxableFn,
    lambda: f64,
    dim: usize,
    chol: Option<Cholesky<f64, Dyn>>,
}

impl ProxAtom {
    pub fn new(f: ProxableFn, lambda: f64, dim: usize) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::param("lambda", lambda, "the open interval (0, inf)"));
        }
        if let Some(d) = f.dim() {
            if d != dim {
                return Err(Error::dim(d, dim, "prox atom"));
            }
        }
        if dim == 0 {
            return Err(Error::dim(1, 0, "prox atom"));
        }
        let chol = match &f {
            ProxableFn::Quadratic { a, .. } => {
                let n = a.nrows();
                let m = DMatrix::identity(n, n) + a * lambda;
                Some(
                    m.cholesky()
                        .ok_or_else(|| Error::Input("I + lambda A is not positive definite".into()))?,
                )
            }
            _ => None,
        };
        Ok(ProxAtom {
            f,
            lambda,
            dim,
            chol,
        })
    }

    pub fn function(&self) -> &ProxableFn {
        &self.f
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl AtomOp for ProxAtom {
    fn id(&self) -> String {
        format!("prox[{}, lambda={}]", self.f.label(), self.lambda)
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn certificate(&self) -> Certificate {
        Certificate::firmly_nonexpansive()
    }
    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        match (&self.f, &self.chol) {
            (ProxableFn::Quadratic { b, .. }, Some(chol)) => chol.solve(&(x + b * self.lambda)),
            _ => self.f.prox_vec(self.lambda, x),
        }
    }
}

/// The prox atom as a certified expression.
pub fn prox_expr(f: ProxableFn, lambda: f64, dim: usize) -> Result<OperatorExpr> {
    OperatorExpr::from_atom(ProxAtom::new(f, lambda, dim)?)
}
