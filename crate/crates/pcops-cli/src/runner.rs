//! Experiment orchestration: validate, build, iterate, check, persist.
//!
//! Exit-status contract: 0 when every requested check passes, 1 when any
//! check fails, 2 for configuration problems (parse errors, unknown claim
//! ids, parameter-window violations, inapplicable checks, output I/O), and
//! 3 for numeric failures (non-finite iterates, no convergence of the
//! fixed-point reference).

use std::fs;
use std::path::PathBuf;

use pcops::atoms::ProxableFn;
use pcops::error::Error;
use pcops::methods::{find_fixed_point, iterate, FixedPointRef, MethodSpec};
use pcops::operator_core::{OperatorExpr, Point};
use pcops::verification::{
    check_definition, check_hard_small_o_bound, check_monotone_decrease, check_prox_inclusion,
    check_rate_bound, check_small_o_trend, estimate_nu, ClaimCheck, Provenance,
    VerificationReport,
};
use sha2::{Digest, Sha256};

use crate::config::{
    resolve_check_id, CheckKind, ExperimentConfig, MethodConfig, TraceFormat, KNOWN_CHECK_IDS,
};
use crate::emit::{emit_report, emit_trace};
use crate::problems::{generate, GeneratedProblem};

/// Tolerance of the fixed-point reference computed before the measured run.
pub const REFERENCE_TOL: f64 = 1e-12;
/// Slack allowed between the certified modulus and the sampled estimate.
pub const ESTIMATE_SLACK: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    /// Configuration problem: parse error, invalid parameter, unknown or
    /// inapplicable check, unusable output path.
    Config(String),
    /// Numeric failure during the run.
    Numeric(String),
    /// Output I/O failure.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

/// Maps library errors at experiment-setup time: every setup failure is a
/// configuration problem except numeric blow-ups.
fn setup_err(e: Error) -> CliError {
    match e {
        Error::Numeric { .. } => CliError::Numeric(e.to_string()),
        Error::NoConvergence { .. } => CliError::Numeric(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

pub struct RunOptions {
    pub config_path: PathBuf,
    pub out_override: Option<PathBuf>,
    pub seed_override: Option<u64>,
    pub quiet: bool,
}

pub struct RunOutcome {
    pub report: VerificationReport,
    pub out_dir: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> u8 {
        exit_code_for_report(&self.report)
    }
}

/// Exit status implied by a report: 0 iff every check passed.
pub fn exit_code_for_report(report: &VerificationReport) -> u8 {
    if report.all_passed() {
        0
    } else {
        1
    }
}

/// Reads, validates, runs, persists, and summarizes one experiment.
pub fn run_experiment(opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let raw = fs::read(&opts.config_path)
        .map_err(|e| CliError::Config(format!("{}: {e}", opts.config_path.display())))?;
    let mut config: ExperimentConfig = serde_json::from_slice(&raw).map_err(|e| {
        CliError::Config(format!(
            "{}: line {}, column {}: {e}",
            opts.config_path.display(),
            e.line(),
            e.column()
        ))
    })?;
    if let Some(seed) = opts.seed_override {
        config.run.seed = seed;
    }

    let checks = resolve_checks(&config)?;
    let problem = generate(&config.problem)?;
    let x0 = resolve_x0(&config, &problem)?;
    let (spec, prox_parts) = build_spec(&config.method, &problem)?;
    let expr = spec.build().map_err(setup_err)?;
    if x0.dim() != expr.dim() {
        return Err(CliError::Config(format!(
            "x0 has dimension {}, method needs {}",
            x0.dim(),
            expr.dim()
        )));
    }
    validate_checks(&checks, &config, &prox_parts)?;

    // The reference fixed point is computed before the measured run. Rate
    // checks require it; otherwise a failure just leaves the distance
    // column empty.
    let reference_required = checks
        .iter()
        .any(|c| matches!(c, CheckKind::RateBound | CheckKind::HardSmallO));
    let reference = compute_reference(&spec, &expr, &x0, reference_required)?;

    let mut trace = iterate(&expr, &x0, config.run.n, config.run.stop_tol, config.run.seed)
        .map_err(|e| match e {
            Error::Numeric { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Config(other.to_string()),
        })?;
    trace.method = format!("{spec}");
    if let Some(r) = &reference {
        trace.attach_reference(r);
    }

    let claim_checks = run_checks(
        &checks,
        &config,
        &spec,
        &expr,
        &trace,
        reference.as_ref(),
        &prox_parts,
        problem.dim(),
    )?;

    let report = VerificationReport::new(
        claim_checks,
        Provenance {
            config_hash: sha256_hex(&raw),
            seed: config.run.seed,
            build: format!("pcops-cli {}", env!("CARGO_PKG_VERSION")),
        },
    );

    let out_dir = resolve_out_dir(opts, &config);
    fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    for format in &config.output.formats {
        let name = match format {
            TraceFormat::Csv => "trace.csv",
            TraceFormat::Json => "trace.json",
        };
        emit_trace(&trace, &out_dir.join(name), *format)?;
    }
    emit_report(&report, &out_dir.join("report.json"))?;

    if !opts.quiet {
        for check in &report.checks {
            println!("{}", check.summary_line());
        }
        println!(
            "{} passed, {} failed; outputs in {}",
            report.summary.passed,
            report.summary.failed,
            out_dir.display()
        );
    }
    Ok(RunOutcome { report, out_dir })
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn resolve_out_dir(opts: &RunOptions, config: &ExperimentConfig) -> PathBuf {
    if let Some(dir) = &opts.out_override {
        return dir.clone();
    }
    if let Some(dir) = &config.output.dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var("PCOPS_OUT") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("pcops_out")
}

fn resolve_checks(config: &ExperimentConfig) -> Result<Vec<CheckKind>, CliError> {
    let mut out = Vec::new();
    for id in &config.checks {
        let kinds = resolve_check_id(id).ok_or_else(|| {
            CliError::Config(format!(
                "unknown claim id {id:?}; known ids: {}",
                KNOWN_CHECK_IDS.join(", ")
            ))
        })?;
        for kind in kinds {
            if !out.contains(&kind) {
                out.push(kind);
            }
        }
    }
    Ok(out)
}

fn resolve_x0(config: &ExperimentConfig, problem: &GeneratedProblem) -> Result<Point, CliError> {
    match &config.x0 {
        Some(coords) => Point::from_slice(coords).map_err(|e| CliError::Config(e.to_string())),
        None => Ok(problem.x0.clone()),
    }
}

/// Matches the method against what the problem provides and collects the
/// proximal components the prox-inclusion check will exercise.
#[allow(clippy::type_complexity)]
fn build_spec(
    method: &MethodConfig,
    problem: &GeneratedProblem,
) -> Result<(MethodSpec, Vec<(ProxableFn, f64)>), CliError> {
    let dim = problem.dim();
    let need = |what: &str, method: &MethodConfig| {
        CliError::Config(format!(
            "method {:?} requires a problem providing {what}",
            method.name()
        ))
    };
    let smooth = || {
        problem
            .smooth
            .clone()
            .ok_or_else(|| need("a smooth quadratic (spd_quadratic or lasso)", method))
    };
    let set_a = || {
        problem
            .set_a
            .clone()
            .ok_or_else(|| need("a convex set", method))
    };
    let gpart = || {
        problem
            .g
            .clone()
            .or_else(|| problem.smooth_prox.clone())
            .ok_or_else(|| need("a proxable function", method))
    };
    let indicator = |set: &pcops::atoms::ConvexSet| {
        ProxableFn::indicator(set.clone()).map_err(|e| CliError::Config(e.to_string()))
    };

    match method {
        MethodConfig::Identity => Ok((MethodSpec::Identity { dim }, vec![])),
        MethodConfig::GradientDescent { gamma } => Ok((
            MethodSpec::GradientDescent {
                f: smooth()?,
                gamma: *gamma,
            },
            vec![],
        )),
        MethodConfig::RelaxedProjection { omega } => {
            let set = set_a()?;
            let parts = vec![(indicator(&set)?, 1.0)];
            Ok((MethodSpec::RelaxedProjection { set, omega: *omega }, parts))
        }
        MethodConfig::AlternatingProjections => {
            let a = set_a()?;
            let b = problem
                .set_b
                .clone()
                .ok_or_else(|| need("two convex sets", method))?;
            let parts = vec![(indicator(&a)?, 1.0), (indicator(&b)?, 1.0)];
            Ok((MethodSpec::AlternatingProjections { a, b }, parts))
        }
        MethodConfig::ProjectedGradientDescent { gamma, omega } => {
            let set = set_a()?;
            let parts = vec![(indicator(&set)?, 1.0)];
            Ok((
                MethodSpec::ProjectedGradientDescent {
                    set,
                    f: smooth()?,
                    gamma: *gamma,
                    omega: *omega,
                },
                parts,
            ))
        }
        MethodConfig::ProximalPoint { lambda } => {
            let g = gpart()?;
            let parts = vec![(g.clone(), *lambda)];
            Ok((
                MethodSpec::ProximalPoint {
                    g,
                    lambda: *lambda,
                    dim,
                },
                parts,
            ))
        }
        MethodConfig::RelaxedProximalPoint { lambda, omega } => {
            let g = gpart()?;
            let parts = vec![(g.clone(), *lambda)];
            Ok((
                MethodSpec::RelaxedProximalPoint {
                    g,
                    lambda: *lambda,
                    omega: *omega,
                    dim,
                },
                parts,
            ))
        }
        MethodConfig::ForwardBackward {
            gamma,
            lambda,
            omega,
        } => {
            let g = problem
                .g
                .clone()
                .ok_or_else(|| need("a nonsmooth part (lasso or separable)", method))?;
            let parts = vec![(g.clone(), *lambda)];
            Ok((
                MethodSpec::ForwardBackward {
                    f: smooth()?,
                    g,
                    gamma: *gamma,
                    lambda: *lambda,
                    omega: *omega,
                },
                parts,
            ))
        }
        MethodConfig::Admm { lambda } => {
            let (f, g) = admm_parts(problem, method)?;
            let parts = vec![(f.clone(), *lambda), (g.clone(), *lambda)];
            Ok((
                MethodSpec::Admm {
                    f,
                    g,
                    lambda: *lambda,
                    dim,
                },
                parts,
            ))
        }
        MethodConfig::GeneralizedAdmm { lambda, alpha } => {
            let (f, g) = admm_parts(problem, method)?;
            let parts = vec![(f.clone(), *lambda), (g.clone(), *lambda)];
            Ok((
                MethodSpec::GeneralizedAdmm {
                    f,
                    g,
                    lambda: *lambda,
                    alpha: *alpha,
                    dim,
                },
                parts,
            ))
        }
    }
}

fn admm_parts(
    problem: &GeneratedProblem,
    method: &MethodConfig,
) -> Result<(ProxableFn, ProxableFn), CliError> {
    let f = problem.smooth_prox.clone().ok_or_else(|| {
        CliError::Config(format!(
            "method {:?} requires a problem with a proxable smooth part (spd_quadratic or lasso)",
            method.name()
        ))
    })?;
    let g = problem.g.clone().ok_or_else(|| {
        CliError::Config(format!(
            "method {:?} requires a problem with a nonsmooth part (lasso)",
            method.name()
        ))
    })?;
    Ok((f, g))
}

fn validate_checks(
    checks: &[CheckKind],
    config: &ExperimentConfig,
    prox_parts: &[(ProxableFn, f64)],
) -> Result<(), CliError> {
    for check in checks {
        match check {
            CheckKind::Definition | CheckKind::EstimateNu => {
                if config.run.pairs == 0 {
                    return Err(CliError::Config(
                        "pairwise checks require run.pairs >= 1".into(),
                    ));
                }
            }
            CheckKind::MonotoneDecrease => {
                if config.run.n < 2 {
                    return Err(CliError::Config(
                        "lemma1-monotone-decrease requires run.n >= 2".into(),
                    ));
                }
            }
            CheckKind::HardSmallO | CheckKind::Trend => {
                if config.run.n < 100 {
                    return Err(CliError::Config(
                        "theorem-4 checks require run.n >= 100".into(),
                    ));
                }
            }
            CheckKind::RateBound => {}
            CheckKind::ProxInclusion => {
                if prox_parts.is_empty() {
                    return Err(CliError::Config(
                        "prox-inclusion is not applicable: the method has no proximal component"
                            .into(),
                    ));
                }
                if config.run.samples == 0 {
                    return Err(CliError::Config(
                        "prox-inclusion requires run.samples >= 1".into(),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn compute_reference(
    spec: &MethodSpec,
    expr: &OperatorExpr,
    x0: &Point,
    required: bool,
) -> Result<Option<FixedPointRef>, CliError> {
    match find_fixed_point(expr, x0, REFERENCE_TOL) {
        Ok(mut reference) => {
            // cross-validate against the analytic solution when one exists
            if let Some(analytic) = spec.analytic_fixed_point() {
                let gap = reference.point.distance(&analytic);
                if gap > 1e-6 {
                    return Err(CliError::Numeric(format!(
                        "fixed point differs from the analytic solution by {gap:e}"
                    )));
                }
                // the analytic point is the sharper reference
                if let Ok(moved) = expr.evaluate(&analytic) {
                    let residual = analytic.distance(&moved);
                    if residual <= reference.residual {
                        reference = FixedPointRef {
                            point: analytic,
                            residual,
                            tol: REFERENCE_TOL,
                        };
                    }
                }
            }
            Ok(Some(reference))
        }
        Err(e) if required => Err(CliError::Numeric(e.to_string())),
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_checks(
    checks: &[CheckKind],
    config: &ExperimentConfig,
    spec: &MethodSpec,
    expr: &OperatorExpr,
    trace: &pcops::methods::IterationTrace,
    reference: Option<&FixedPointRef>,
    prox_parts: &[(ProxableFn, f64)],
    dim: usize,
) -> Result<Vec<ClaimCheck>, CliError> {
    let seed = config.run.seed;
    let pairs = config.run.pairs;
    // the identity carries no finite modulus; its inequalities hold for
    // any nu, so 1 is used as a stand-in
    let nu = expr.certificate().nu().unwrap_or(1.0);
    let mut out = Vec::new();
    for check in checks {
        match check {
            CheckKind::Definition => {
                out.push(check_definition(expr, nu, pairs, seed));
            }
            CheckKind::EstimateNu => {
                let check = match estimate_nu(expr, pairs, seed) {
                    Some(est) => ClaimCheck::new(
                        "estimate-nu",
                        nu - est,
                        ESTIMATE_SLACK,
                        pairs,
                        format!("method={spec}, certified nu={nu}, estimate={est}, seed={seed}"),
                    ),
                    None => ClaimCheck::new(
                        "estimate-nu",
                        0.0,
                        ESTIMATE_SLACK,
                        pairs,
                        format!("method={spec}: every sampled pair was fixed; nothing to estimate"),
                    ),
                };
                out.push(check);
            }
            CheckKind::MonotoneDecrease => {
                out.push(check_monotone_decrease(trace, nu).map_err(setup_err)?);
            }
            CheckKind::RateBound => {
                let r = reference.expect("validated: reference required");
                out.push(check_rate_bound(trace, nu, r).map_err(setup_err)?);
            }
            CheckKind::HardSmallO => {
                let r = reference.expect("validated: reference required");
                out.push(check_hard_small_o_bound(trace, nu, r).map_err(setup_err)?);
            }
            CheckKind::Trend => {
                out.push(check_small_o_trend(trace, nu).map_err(setup_err)?);
            }
            CheckKind::ProxInclusion => {
                for (f, lambda) in prox_parts {
                    let d = f.dim().unwrap_or(dim);
                    out.push(
                        check_prox_inclusion(f, *lambda, d, config.run.samples, seed)
                            .map_err(setup_err)?,
                    );
                }
            }
        }
    }
    Ok(out)
}
