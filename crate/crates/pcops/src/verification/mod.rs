//! Empirical verification of the certificate inequalities and the
//! convergence-rate claims they imply.
//!
//! Every check is a pure function over an operator expression or an
//! iteration trace, returning a [`ClaimCheck`] whose `worst_residual` is the
//! largest observed violation of the claim (so zero or negative means the
//! claim held with margin). Sampling-based checks draw seeded Gaussian
//! pairs and are deterministic given `(dim, seed, pairs)`.

pub mod report;
pub mod sampling;

use nalgebra::DVector;

use crate::atoms::prox::{prox, ProxableFn};
use crate::error::{Error, Result};
use crate::methods::iterate::{FixedPointRef, IterationTrace};
use crate::operator_core::{OperatorExpr, Point};

pub use report::{ClaimCheck, Provenance, Summary, VerificationReport};
pub use sampling::{PairSampler, DEFAULT_RADIUS};

/// Absolute slack allowed on the definitional inequalities.
pub const DEFINITION_TOL: f64 = 1e-9;
/// Relative slack of the monotone-decrease check.
pub const MONOTONE_TOL: f64 = 1e-10;
/// Absolute slack of the rate-bound check.
pub const RATE_TOL: f64 = 1e-10;
/// Absolute slack of the hard sub-linear bound.
pub const HARD_BOUND_TOL: f64 = 1e-9;
/// Tolerance of the prox-inclusion membership check.
pub const PROX_INCLUSION_TOL: f64 = 1e-8;
/// Pairs with displacement difference below this are skipped by
/// [`estimate_nu`].
pub const ESTIMATE_SKIP_TOL: f64 = 1e-12;
/// Residual the fixed-point reference must meet before rate checks accept it.
pub const REFERENCE_RESIDUAL_TOL: f64 = 1e-10;

/// Checks the ν-pseudocontractive inequality
/// `‖Tx−Ty‖² ≤ ‖x−y‖² − ν‖Gx−Gy‖²` over sampled pairs.
///
/// The residual of a pair is `‖Tx−Ty‖² − ‖x−y‖² + ν‖Gx−Gy‖²`; the check
/// passes when the worst residual stays within [`DEFINITION_TOL`].
pub fn check_definition(t: &OperatorExpr, nu: f64, pairs: usize, seed: u64) -> ClaimCheck {
    let context = format!("T={}, nu={nu}, seed={seed}", t.describe());
    let worst = worst_over_pairs(t, pairs, seed, |x, y, tx, ty| {
        let gdiff = (x - tx) - (y - ty);
        (tx - ty).norm_squared() - (x - y).norm_squared() + nu * gdiff.norm_squared()
    });
    ClaimCheck::new("definition", worst, DEFINITION_TOL, pairs, context)
}

/// Checks plain nonexpansiveness `‖Tx−Ty‖ ≤ ‖x−y‖` over sampled pairs.
pub fn check_nonexpansive(t: &OperatorExpr, pairs: usize, seed: u64) -> ClaimCheck {
    let context = format!("T={}, seed={seed}", t.describe());
    let worst = worst_over_pairs(t, pairs, seed, |x, y, tx, ty| {
        (tx - ty).norm() - (x - y).norm()
    });
    ClaimCheck::new("nonexpansive", worst, DEFINITION_TOL, pairs, context)
}

/// Checks σ-inverse strong monotonicity
/// `⟨Tx−Ty, x−y⟩ ≥ σ‖Tx−Ty‖²` over sampled pairs.
pub fn check_ism(t: &OperatorExpr, sigma: f64, pairs: usize, seed: u64) -> ClaimCheck {
    let context = format!("T={}, sigma={sigma}, seed={seed}", t.describe());
    let worst = worst_over_pairs(t, pairs, seed, |x, y, tx, ty| {
        let tdiff = tx - ty;
        sigma * tdiff.norm_squared() - tdiff.dot(&(x - y))
    });
    ClaimCheck::new("ism", worst, DEFINITION_TOL, pairs, context)
}

/// Empirical pseudocontractivity modulus: the infimum over sampled pairs of
/// `(‖x−y‖² − ‖Tx−Ty‖²) / ‖Gx−Gy‖²`, skipping pairs whose displacement
/// difference is below [`ESTIMATE_SKIP_TOL`]. Returns `None` when every
/// pair is skipped (e.g. for the identity). A correct certificate is never
/// larger than this estimate beyond sampling slack.
pub fn estimate_nu(t: &OperatorExpr, pairs: usize, seed: u64) -> Option<f64> {
    let mut sampler = PairSampler::new(t.dim(), seed);
    let mut inf: Option<f64> = None;
    for _ in 0..pairs {
        let (x, y) = sampler.pair();
        let (tx, ty) = match (t.eval_vec(&x), t.eval_vec(&y)) {
            (Ok(tx), Ok(ty)) => (tx, ty),
            _ => return None,
        };
        let gdiff = ((&x - &tx) - (&y - &ty)).norm_squared();
        if gdiff.sqrt() < ESTIMATE_SKIP_TOL {
            continue;
        }
        let ratio = ((&x - &y).norm_squared() - (tx - ty).norm_squared()) / gdiff;
        inf = Some(match inf {
            Some(v) => v.min(ratio),
            None => ratio,
        });
    }
    inf
}

/// Checks the monotone decrease of the displacement norms along a trace:
/// `‖Gxᵏ⁺¹‖² ≤ ‖Gxᵏ‖² − ν‖Gxᵏ−Gxᵏ⁺¹‖²`.
///
/// The tolerance is relative to the initial residual,
/// `MONOTONE_TOL · (1 + ‖Gx⁰‖²)`.
pub fn check_monotone_decrease(trace: &IterationTrace, nu: f64) -> Result<ClaimCheck> {
    if trace.n < 2 {
        return Err(Error::Input(format!(
            "monotone-decrease check needs at least 2 residuals, got {}",
            trace.n
        )));
    }
    let tol = MONOTONE_TOL * (1.0 + trace.residual_sq[0]);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..trace.n - 1 {
        let gk = trace.displacement(k);
        let gk1 = trace.displacement(k + 1);
        let violation = gk1.norm_squared() - gk.norm_squared() + nu * (gk - gk1).norm_squared();
        worst = worst.max(violation);
    }
    Ok(ClaimCheck::new(
        "lemma1-monotone-decrease",
        worst,
        tol,
        trace.n - 1,
        format!("method={}, nu={nu}, seed={}", trace.method, trace.seed),
    ))
}

/// Checks the rate bound `residual_sq[k] ≤ ‖x⁰−x⋆‖² / ((k+1)ν)` for every
/// recorded step.
pub fn check_rate_bound(
    trace: &IterationTrace,
    nu: f64,
    reference: &FixedPointRef,
) -> Result<ClaimCheck> {
    require_reference(reference)?;
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::param("nu", nu, "the open interval (0, inf)"));
    }
    let d0_sq = trace.points[0].distance(&reference.point).powi(2);
    let mut worst = f64::NEG_INFINITY;
    for (k, rsq) in trace.residual_sq.iter().enumerate() {
        let bound = d0_sq / ((k + 1) as f64 * nu);
        worst = worst.max(rsq - bound);
    }
    Ok(ClaimCheck::new(
        "thm2-rate-bound",
        worst,
        RATE_TOL,
        trace.n,
        format!(
            "method={}, nu={nu}, |x0-x*|^2={d0_sq:e}, ref_residual={:e}, seed={}",
            trace.method, reference.residual, trace.seed
        ),
    ))
}

/// Checks the hard sub-linear consequence `ν(k+1)·residual_sq[k] ≤ 2‖x⁰−x⋆‖²`
/// for every recorded step.
pub fn check_hard_small_o_bound(
    trace: &IterationTrace,
    nu: f64,
    reference: &FixedPointRef,
) -> Result<ClaimCheck> {
    require_reference(reference)?;
    if trace.n < 100 {
        return Err(Error::Input(format!(
            "sub-linear bound check needs at least 100 residuals, got {}",
            trace.n
        )));
    }
    let d0 = trace.points[0].distance(&reference.point);
    let cap = 2.0 * d0 * d0;
    let mut worst = f64::NEG_INFINITY;
    for (k, rsq) in trace.residual_sq.iter().enumerate() {
        worst = worst.max(nu * (k + 1) as f64 * rsq - cap);
    }
    Ok(ClaimCheck::new(
        "thm4-hard-bound",
        worst,
        HARD_BOUND_TOL,
        trace.n,
        format!(
            "method={}, nu={nu}, 2|x0-x*|^2={cap:e}, seed={}",
            trace.method, trace.seed
        ),
    ))
}

/// Heuristic decay-trend check of the `o(1/N)` claim: the weighted residual
/// `t(k) = ν(k+1)·residual_sq[k]` at the end of the trace must be at most a
/// tenth of its value one hundredth of the way in. A vanishing `t` passes
/// (`0 ≤ 0`). Distinct from the hard bound, which is an inequality implied
/// by the theory; the factor 10 over a 100x span is a calibration choice.
pub fn check_small_o_trend(trace: &IterationTrace, nu: f64) -> Result<ClaimCheck> {
    if trace.n < 100 {
        return Err(Error::Input(format!(
            "trend check needs at least 100 residuals, got {}",
            trace.n
        )));
    }
    let t = |k: usize| nu * (k + 1) as f64 * trace.residual_sq[k];
    let k_hi = trace.n - 1;
    let k_lo = k_hi / 100;
    let residual = t(k_hi) - t(k_lo) / 10.0;
    Ok(ClaimCheck::new(
        "thm4-trend",
        residual,
        0.0,
        trace.n,
        format!(
            "method={}, nu={nu}, t({k_lo})={:e}, t({k_hi})={:e}, seed={}",
            trace.method,
            t(k_lo),
            t(k_hi),
            trace.seed
        ),
    ))
}

/// Checks the prox inclusion `x − x⁺ ∈ λ∂f(x⁺)`: for sampled `x`, the
/// rescaled displacement `(x − x⁺)/λ` must be a subgradient of `f` at
/// `x⁺ = prox_{f,λ}(x)`.
pub fn check_prox_inclusion(
    f: &ProxableFn,
    lambda: f64,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<ClaimCheck> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::param("lambda", lambda, "the open interval (0, inf)"));
    }
    let mut sampler = PairSampler::new(dim, seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = sampler.point();
        let xp = prox(f, lambda, &Point::new(x.clone())?)?;
        let g = (&x - xp.coords()) / lambda;
        worst = worst.max(f.subgradient_violation(xp.coords(), &g));
    }
    Ok(ClaimCheck::new(
        "prox-inclusion",
        worst,
        PROX_INCLUSION_TOL,
        samples,
        format!("f={f:?}, lambda={lambda}, seed={seed}"),
    ))
}

fn require_reference(reference: &FixedPointRef) -> Result<()> {
    if reference.residual > REFERENCE_RESIDUAL_TOL {
        return Err(Error::Input(format!(
            "reference fixed point residual {:e} exceeds {REFERENCE_RESIDUAL_TOL:e}",
            reference.residual
        )));
    }
    Ok(())
}

/// Worst violation of a pairwise inequality over sampled pairs; infinity if
/// any evaluation fails, so the enclosing check fails rather than errors.
fn worst_over_pairs(
    t: &OperatorExpr,
    pairs: usize,
    seed: u64,
    violation: impl Fn(&DVector<f64>, &DVector<f64>, &DVector<f64>, &DVector<f64>) -> f64,
) -> f64 {
    let mut sampler = PairSampler::new(t.dim(), seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..pairs {
        let (x, y) = sampler.pair();
        match (t.eval_vec(&x), t.eval_vec(&y)) {
            (Ok(tx), Ok(ty)) => {
                worst = worst.max(violation(&x, &y, &tx, &ty));
            }
            _ => return f64::INFINITY,
        }
    }
    worst
}
