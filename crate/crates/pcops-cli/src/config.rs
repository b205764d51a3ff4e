//! Experiment configuration: one JSON document per experiment.

use std::path::PathBuf;

use pcops::atoms::ConvexSet;
use serde::{Deserialize, Serialize};

/// Default number of sampled pairs for the pairwise inequality checks.
fn default_pairs() -> usize {
    10_000
}

/// Default number of samples for the prox-inclusion check.
fn default_samples() -> usize {
    1_000
}

fn default_formats() -> Vec<TraceFormat> {
    vec![TraceFormat::Csv, TraceFormat::Json]
}

/// A complete experiment: method, problem instance, run parameters, the
/// checks to perform, and where to put the outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub method: MethodConfig,
    pub problem: ProblemConfig,
    pub run: RunConfig,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub output: OutputConfig,
    /// Optional explicit starting point (otherwise generated from the
    /// problem seed).
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MethodConfig {
    Identity,
    GradientDescent { gamma: f64 },
    RelaxedProjection { omega: f64 },
    AlternatingProjections,
    ProjectedGradientDescent { gamma: f64, omega: Option<f64> },
    ProximalPoint { lambda: f64 },
    RelaxedProximalPoint { lambda: f64, omega: f64 },
    ForwardBackward { gamma: f64, lambda: f64, omega: Option<f64> },
    Admm { lambda: f64 },
    GeneralizedAdmm { lambda: f64, alpha: f64 },
}

impl MethodConfig {
    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Identity => "identity",
            MethodConfig::GradientDescent { .. } => "gradient_descent",
            MethodConfig::RelaxedProjection { .. } => "relaxed_projection",
            MethodConfig::AlternatingProjections => "alternating_projections",
            MethodConfig::ProjectedGradientDescent { .. } => "projected_gradient_descent",
            MethodConfig::ProximalPoint { .. } => "proximal_point",
            MethodConfig::RelaxedProximalPoint { .. } => "relaxed_proximal_point",
            MethodConfig::ForwardBackward { .. } => "forward_backward",
            MethodConfig::Admm { .. } => "admm",
            MethodConfig::GeneralizedAdmm { .. } => "generalized_admm",
        }
    }
}

/// The problem instance the method runs on. Matrix problems are generated
/// from a seed; sets are given explicitly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemConfig {
    /// Just an iterate space (for the identity method).
    PointSpace { dim: usize, seed: u64 },
    /// Random SPD quadratic with eigenvalues spread linearly over
    /// `[spectrum[0], spectrum[1]]`; the Lipschitz constant is
    /// `spectrum[1]`. Generated by orthogonal conjugation of the spectrum
    /// with a seeded random orthogonal matrix. The optional set makes the
    /// instance usable for projected methods.
    SpdQuadratic {
        dim: usize,
        spectrum: [f64; 2],
        seed: u64,
        #[serde(default)]
        set: Option<ConvexSet>,
    },
    /// Random lasso-style instance: a seeded Gaussian design matrix `D`,
    /// a sparse ground truth with `nonzeros` entries, observations
    /// `y = Dx + 0.01 noise`, smooth part `½‖Dz − y‖²` and l1 weight
    /// `weight`.
    Lasso {
        rows: usize,
        cols: usize,
        nonzeros: usize,
        weight: f64,
        seed: u64,
    },
    /// One or two explicit convex sets (for projection methods).
    Sets {
        a: ConvexSet,
        #[serde(default)]
        b: Option<ConvexSet>,
        seed: u64,
    },
    /// A separable nonsmooth function (for proximal-point methods).
    Separable {
        g: ProxFnConfig,
        dim: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProxFnConfig {
    L1 { weight: f64 },
    HalfNormSq,
    Indicator { set: ConvexSet },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Iteration budget.
    pub n: usize,
    /// Residual threshold for early stopping; absent means run the full
    /// budget.
    #[serde(default)]
    pub stop_tol: Option<f64>,
    pub seed: u64,
    /// Sampled pairs per pairwise check.
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    /// Samples for the prox-inclusion check.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; falls back to `--out`, then `$PCOPS_OUT`, then
    /// `./pcops_out`.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<TraceFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: None,
            formats: default_formats(),
        }
    }
}

/// The checks the runner knows how to perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    /// Definitional pseudocontractive inequality at the derived modulus.
    Definition,
    /// Empirical modulus is at least the certified one.
    EstimateNu,
    /// Monotone decrease of the displacement norms.
    MonotoneDecrease,
    /// O(1/N) rate bound against the fixed-point reference.
    RateBound,
    /// Hard sub-linear bound `nu (k+1) r_k <= 2 d0^2`.
    HardSmallO,
    /// Heuristic decay trend of `nu (k+1) r_k`.
    Trend,
    /// Prox displacement is a subgradient at the prox output.
    ProxInclusion,
}

/// Resolves a config claim id to checks. Short aliases expand to their
/// canonical claims; `thm4` expands to both theorem-4 sub-checks.
pub fn resolve_check_id(id: &str) -> Option<Vec<CheckKind>> {
    let one = |k| Some(vec![k]);
    match id {
        "definition" => one(CheckKind::Definition),
        "estimate-nu" => one(CheckKind::EstimateNu),
        "lemma1" | "lemma1-monotone-decrease" => one(CheckKind::MonotoneDecrease),
        "thm2" | "thm2-rate-bound" => one(CheckKind::RateBound),
        "thm4-hard" | "thm4-hard-bound" => one(CheckKind::HardSmallO),
        "thm4-trend" => one(CheckKind::Trend),
        "thm4" => Some(vec![CheckKind::HardSmallO, CheckKind::Trend]),
        "prox-inclusion" => one(CheckKind::ProxInclusion),
        _ => None,
    }
}

/// Every claim id accepted by [`resolve_check_id`], for diagnostics.
pub const KNOWN_CHECK_IDS: &[&str] = &[
    "definition",
    "estimate-nu",
    "lemma1",
    "lemma1-monotone-decrease",
    "thm2",
    "thm2-rate-bound",
    "thm4",
    "thm4-hard",
    "thm4-hard-bound",
    "thm4-trend",
    "prox-inclusion",
];
