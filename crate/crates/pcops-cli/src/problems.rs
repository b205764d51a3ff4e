//! Seeded desk-scale problem generators.

use nalgebra::{DMatrix, DVector};
use pcops::atoms::{ConvexSet, ProxableFn, SmoothConvexFn};
use pcops::operator_core::Point;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::{ProblemConfig, ProxFnConfig};
use crate::runner::CliError;

/// The pieces a problem instance can supply; the runner matches them
/// against what the chosen method needs.
pub struct GeneratedProblem {
    /// Smooth part for gradient-based methods.
    pub smooth: Option<SmoothConvexFn>,
    /// The same smooth part in proxable form (for ADMM-style methods).
    pub smooth_prox: Option<ProxableFn>,
    /// Nonsmooth part for prox-based methods.
    pub g: Option<ProxableFn>,
    pub set_a: Option<ConvexSet>,
    pub set_b: Option<ConvexSet>,
    pub x0: Point,
}

impl GeneratedProblem {
    pub fn dim(&self) -> usize {
        self.x0.dim()
    }
}

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| {
        let g: f64 = rng.sample(StandardNormal);
        scale * g
    }))
}

fn gaussian_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_iterator(rows, cols, (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    gaussian_mat(rng, n, n).qr().q()
}

/// SPD matrix with the given eigenvalues, by orthogonal conjugation.
fn spd_with_spectrum(rng: &mut ChaCha8Rng, eigenvalues: &[f64]) -> DMatrix<f64> {
    let n = eigenvalues.len();
    let q = random_orthogonal(rng, n);
    let d = DMatrix::from_diagonal(&DVector::from_row_slice(eigenvalues));
    let a = &q * d * q.transpose();
    // symmetrize away the conjugation round-off
    (&a + a.transpose()) * 0.5
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn build_prox_fn(cfg: &ProxFnConfig) -> Result<ProxableFn, CliError> {
    let f = match cfg {
        ProxFnConfig::L1 { weight } => ProxableFn::l1(*weight),
        ProxFnConfig::HalfNormSq => return Err(CliError::Config(
            "half_norm_sq requires the enclosing problem to carry the dimension".into(),
        )),
        ProxFnConfig::Indicator { set } => ProxableFn::indicator(set.clone()),
    };
    f.map_err(|e| CliError::Config(e.to_string()))
}

fn build_prox_fn_with_dim(cfg: &ProxFnConfig, dim: usize) -> Result<ProxableFn, CliError> {
    match cfg {
        ProxFnConfig::HalfNormSq => Ok(ProxableFn::HalfNormSq { dim }),
        other => build_prox_fn(other),
    }
}

/// Materializes a problem instance from its configuration.
pub fn generate(cfg: &ProblemConfig) -> Result<GeneratedProblem, CliError> {
    match cfg {
        ProblemConfig::PointSpace { dim, seed } => {
            if *dim == 0 {
                return Err(CliError::Config("point_space requires dim >= 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let x0 = Point::new(gaussian_vec(&mut rng, *dim, 3.0))
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(GeneratedProblem {
                smooth: None,
                smooth_prox: None,
                g: None,
                set_a: None,
                set_b: None,
                x0,
            })
        }
        ProblemConfig::SpdQuadratic {
            dim,
            spectrum,
            seed,
            set,
        } => {
            if *dim == 0 {
                return Err(CliError::Config("spd_quadratic requires dim >= 1".into()));
            }
            let [lo, hi] = *spectrum;
            if !(lo >= 0.0 && hi >= lo && hi > 0.0) {
                return Err(CliError::Config(format!(
                    "spectrum [{lo}, {hi}] must satisfy 0 <= lo <= hi and hi > 0"
                )));
            }
            if let Some(s) = set {
                s.validate().map_err(|e| CliError::Config(e.to_string()))?;
                if s.dim() != *dim {
                    return Err(CliError::Config(format!(
                        "constraint set dimension {} does not match problem dim {dim}",
                        s.dim()
                    )));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let a = spd_with_spectrum(&mut rng, &linspace(lo, hi, *dim));
            let b = gaussian_vec(&mut rng, *dim, 1.0);
            let x0 = Point::new(gaussian_vec(&mut rng, *dim, 3.0))
                .map_err(|e| CliError::Config(e.to_string()))?;
            let smooth = SmoothConvexFn::quadratic(a.clone(), b.clone(), hi)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let smooth_prox =
                ProxableFn::quadratic(a, b).map_err(|e| CliError::Config(e.to_string()))?;
            Ok(GeneratedProblem {
                smooth: Some(smooth),
                smooth_prox: Some(smooth_prox),
                g: None,
                set_a: set.clone(),
                set_b: None,
                x0,
            })
        }
        ProblemConfig::Lasso {
            rows,
            cols,
            nonzeros,
            weight,
            seed,
        } => {
            if *rows == 0 || *cols == 0 {
                return Err(CliError::Config("lasso requires rows, cols >= 1".into()));
            }
            if nonzeros > cols {
                return Err(CliError::Config(format!(
                    "nonzeros = {nonzeros} exceeds cols = {cols}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let design = gaussian_mat(&mut rng, *rows, *cols);
            let mut truth = DVector::zeros(*cols);
            for idx in sample(&mut rng, *cols, *nonzeros) {
                truth[idx] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            }
            let noise = gaussian_vec(&mut rng, *rows, 0.01);
            let y = &design * truth + noise;
            let gram = design.transpose() * &design;
            let gram = (&gram + gram.transpose()) * 0.5;
            let rhs = design.transpose() * y;
            // a sound upper bound on lambda_max: power iteration converges
            // from below and would make the derived certificates over-tight
            let lipschitz = gram.symmetric_eigen().eigenvalues.max() * (1.0 + 1e-9);
            let smooth = SmoothConvexFn::quadratic(gram.clone(), rhs.clone(), lipschitz)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let smooth_prox =
                ProxableFn::quadratic(gram, rhs).map_err(|e| CliError::Config(e.to_string()))?;
            let g = ProxableFn::l1(*weight).map_err(|e| CliError::Config(e.to_string()))?;
            let x0 = Point::zeros(*cols).map_err(|e| CliError::Config(e.to_string()))?;
            Ok(GeneratedProblem {
                smooth: Some(smooth),
                smooth_prox: Some(smooth_prox),
                g: Some(g),
                set_a: None,
                set_b: None,
                x0,
            })
        }
        ProblemConfig::Sets { a, b, seed } => {
            a.validate().map_err(|e| CliError::Config(e.to_string()))?;
            if let Some(b) = b {
                b.validate().map_err(|e| CliError::Config(e.to_string()))?;
                if b.dim() != a.dim() {
                    return Err(CliError::Config(format!(
                        "set dimensions differ: {} vs {}",
                        a.dim(),
                        b.dim()
                    )));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let x0 = Point::new(gaussian_vec(&mut rng, a.dim(), 3.0))
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(GeneratedProblem {
                smooth: None,
                smooth_prox: None,
                g: None,
                set_a: Some(a.clone()),
                set_b: b.clone(),
                x0,
            })
        }
        ProblemConfig::Separable { g, dim, seed } => {
            if *dim == 0 {
                return Err(CliError::Config("separable requires dim >= 1".into()));
            }
            let g = build_prox_fn_with_dim(g, *dim)?;
            if let Some(d) = g.dim() {
                if d != *dim {
                    return Err(CliError::Config(format!(
                        "prox function dimension {d} does not match problem dim {dim}"
                    )));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let x0 = Point::new(gaussian_vec(&mut rng, *dim, 3.0))
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(GeneratedProblem {
                smooth: None,
                smooth_prox: None,
                g: Some(g),
                set_a: None,
                set_b: None,
                x0,
            })
        }
    }
}
