//! Independent numeric oracles used to freeze expected test values.
//!
//! These deliberately avoid the library's closed forms: projections are
//! recovered by grid minimization of the distance, prox values by 1-d grid
//! minimization of the prox objective, gradients by finite differences.

#![allow(dead_code)]

use nalgebra::DVector;

/// Multilevel 2-d grid minimization of `‖z − x‖` over a membership
/// predicate. Starts from the bounding window `[lo, hi]²` and refines the
/// window around the best feasible grid point. Accuracy is roughly
/// `span * (4/grid)^levels`.
pub fn grid_project_2d(
    contains: impl Fn(f64, f64) -> bool,
    x: (f64, f64),
    mut lo: (f64, f64),
    mut hi: (f64, f64),
    levels: usize,
    grid: usize,
) -> (f64, f64) {
    let mut best = (f64::NAN, f64::NAN);
    for _ in 0..levels {
        let step = (
            (hi.0 - lo.0) / grid as f64,
            (hi.1 - lo.1) / grid as f64,
        );
        let mut best_d = f64::INFINITY;
        for i in 0..=grid {
            for j in 0..=grid {
                let z = (lo.0 + step.0 * i as f64, lo.1 + step.1 * j as f64);
                if !contains(z.0, z.1) {
                    continue;
                }
                let d = (z.0 - x.0).hypot(z.1 - x.1);
                if d < best_d {
                    best_d = d;
                    best = z;
                }
            }
        }
        assert!(best_d.is_finite(), "no feasible grid point found");
        lo = (best.0 - 2.0 * step.0, best.1 - 2.0 * step.1);
        hi = (best.0 + 2.0 * step.0, best.1 + 2.0 * step.1);
    }
    best
}

/// Multilevel 1-d grid minimization of a convex objective over `[lo, hi]`.
pub fn grid_minimize_1d(
    objective: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    levels: usize,
    grid: usize,
) -> f64 {
    let mut best = f64::NAN;
    for _ in 0..levels {
        let step = (hi - lo) / grid as f64;
        let mut best_v = f64::INFINITY;
        for i in 0..=grid {
            let z = lo + step * i as f64;
            let v = objective(z);
            if v < best_v {
                best_v = v;
                best = z;
            }
        }
        lo = best - 2.0 * step;
        hi = best + 2.0 * step;
    }
    best
}

/// The prox objective `f(z) + (z − x)² / (2λ)` minimized on a 1-d grid.
pub fn grid_prox_1d(f: impl Fn(f64) -> f64, lambda: f64, x: f64) -> f64 {
    let span = 10.0 + x.abs();
    grid_minimize_1d(
        |z| f(z) + (z - x) * (z - x) / (2.0 * lambda),
        x - span,
        x + span,
        6,
        400,
    )
}

/// Central finite-difference gradient with step `h`.
pub fn fd_gradient(f: impl Fn(&DVector<f64>) -> f64, x: &DVector<f64>, h: f64) -> DVector<f64> {
    let mut g = DVector::zeros(x.len());
    for i in 0..x.len() {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[i] += h;
        minus[i] -= h;
        g[i] = (f(&plus) - f(&minus)) / (2.0 * h);
    }
    g
}

/// Dense angular search for the point of the unit circle centered at the
/// origin that minimizes a distance functional.
pub fn circle_argmin(distance: impl Fn(f64, f64) -> f64) -> (f64, f64) {
    let n = 2000;
    let mut center = 0.0f64;
    let mut span = std::f64::consts::PI;
    let mut best_theta = 0.0f64;
    for _ in 0..8 {
        let mut best_d = f64::INFINITY;
        for i in 0..=n {
            let theta = center - span + 2.0 * span * i as f64 / n as f64;
            let d = distance(theta.cos(), theta.sin());
            if d < best_d {
                best_d = d;
                best_theta = theta;
            }
        }
        center = best_theta;
        span = span * 4.0 / n as f64;
    }
    (best_theta.cos(), best_theta.sin())
}
