//! Smooth convex test functions with Lipschitz gradients.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator_core::{AtomOp, Certificate, OperatorExpr};

/// Symmetry/PSD slack accepted when validating quadratics.
const PSD_TOL: f64 = 1e-10;
/// Convergence tolerance of the power iteration used to validate L.
const POWER_ITER_TOL: f64 = 1e-8;
/// Matrices are capped at this size; the prox and projection oracles are
/// direct factorizations, which stop being "desk scale" beyond it.
pub const MAX_QUADRATIC_DIM: usize = 2000;

/// A convex function with an L-Lipschitz gradient.
///
/// Currently one kind: the quadratic `f(x) = ½ xᵀA x − bᵀx` with `A`
/// symmetric positive semidefinite, for which `∇f(x) = Ax − b` and the
/// sharp Lipschitz constant is `λ_max(A)`. The constant `L` is supplied by
/// the caller and validated against a power-iteration estimate of
/// `λ_max(A)`; it may be larger (certificates then stay conservative) but
/// never smaller.
#[derive(Debug, Clone)]
pub struct SmoothConvexFn {
    a: DMatrix<f64>,
    b: DVector<f64>,
    lipschitz: f64,
}

impl SmoothConvexFn {
    pub fn quadratic(a: DMatrix<f64>, b: DVector<f64>, lipschitz: f64) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::dim(n.max(1), a.ncols(), "quadratic matrix"));
        }
        if n > MAX_QUADRATIC_DIM {
            return Err(Error::param(
                "n",
                n as f64,
                format!("the range [1, {MAX_QUADRATIC_DIM}]"),
            ));
        }
        if b.len() != n {
            return Err(Error::dim(n, b.len(), "quadratic linear term"));
        }
        if !a.iter().all(|v| v.is_finite())
            || !b.iter().all(|v| v.is_finite())
            || !lipschitz.is_finite()
        {
            return Err(Error::numeric("quadratic data"));
        }
        let asym = (&a - a.transpose()).amax();
        if asym > PSD_TOL {
            return Err(Error::Input(format!(
                "matrix is not symmetric within {PSD_TOL}: max asymmetry {asym:e}"
            )));
        }
        // PSD within PSD_TOL: A + tol*I must admit a Cholesky factorization
        let shifted = &a + DMatrix::identity(n, n) * PSD_TOL;
        if shifted.cholesky().is_none() {
            return Err(Error::Input(format!(
                "matrix is not positive semidefinite within {PSD_TOL}"
            )));
        }
        let lambda_max = estimate_lambda_max(&a);
        if lipschitz < lambda_max - POWER_ITER_TOL * (1.0 + lambda_max) {
            return Err(Error::param(
                "lipschitz_L",
                lipschitz,
                format!("the range [lambda_max(A) ~ {lambda_max:.6e}, inf)"),
            ));
        }
        if lipschitz <= 0.0 {
            return Err(Error::param(
                "lipschitz_L",
                lipschitz,
                "the open interval (0, inf)",
            ));
        }
        Ok(SmoothConvexFn { a, b, lipschitz })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn linear_term(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.a * x)) - self.b.dot(x)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x - &self.b
    }

    /// The unconstrained minimizer `A⁻¹ b`, when `A` is invertible.
    pub fn minimizer(&self) -> Option<DVector<f64>> {
        self.a.clone().cholesky().map(|c| c.solve(&self.b))
    }
}

/// Power-iteration estimate of `λ_max(A)` for symmetric PSD `A`,
/// deterministic (fixed internal seed), converged to `POWER_ITER_TOL`.
pub fn estimate_lambda_max(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15);
    let mut v = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
    v /= v.norm();
    let mut lambda = 0.0f64;
    for _ in 0..10_000 {
        let av = a * &v;
        let norm = av.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = av.dot(&v); // Rayleigh quotient at the current unit vector
        v = av / norm;
        if (next - lambda).abs() <= POWER_ITER_TOL * (1.0 + next.abs()) {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// The gradient map `∇f` as a certified atom.
///
/// `(1/L)∇f` of a convex `f` with L-Lipschitz gradient is nonexpansive and
/// hence firmly nonexpansive, i.e. 1-inverse strongly monotone; rescaling by
/// L gives `∇f` the certificate `ism(1/L)`.
#[derive(Debug, Clone)]
pub struct GradientAtom {
    f: SmoothConvexFn,
}

impl GradientAtom {
    pub fn new(f: SmoothConvexFn) -> Self {
        GradientAtom { f }
    }
}

impl AtomOp for GradientAtom {
    fn id(&self) -> String {
        format!("grad[quadratic(n={})]", self.f.dim())
    }
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn certificate(&self) -> Certificate {
        Certificate::InverseStronglyMonotone {
            sigma: 1.0 / self.f.lipschitz,
        }
    }
    fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        self.f.gradient(x)
    }
}

/// Builds the gradient-descent update `I − γ∇f` as a certified expression.
///
/// Requires `γ ∈ (0, 2/L)` strictly; the derived certificate is
/// `(2/(γL) − 1)`-pseudocontractive. The expression is literally the
/// derivation chain: `∇f` carries `ism(1/L)`, scaling by γ gives
/// `ism(1/(γL))`, and the displacement of a σ > 1/2 inverse strongly
/// monotone map is `(2σ−1)`-pseudocontractive.
pub fn gradient_step(f: SmoothConvexFn, gamma: f64) -> Result<OperatorExpr> {
    let upper = 2.0 / f.lipschitz();
    if !(gamma > 0.0 && gamma < upper) {
        return Err(Error::param(
            "gamma",
            gamma,
            format!("the open interval (0, 2/L) = (0, {upper})"),
        ));
    }
    OperatorExpr::from_atom(GradientAtom::new(f))?
        .scale(gamma)?
        .displacement()
}
