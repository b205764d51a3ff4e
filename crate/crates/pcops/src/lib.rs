//! Certified operator calculus for convex optimization.
//!
//! This crate builds the iterative updates of classical convex optimization
//! methods (projections, gradient steps, proximal maps, and the splitting
//! methods assembled from them) as expression trees in which every node
//! carries a machine-checked *pseudocontractivity certificate*, and provides
//! an iteration driver plus an empirical verification harness for the
//! inequalities and convergence rates those certificates imply.
//!
//! An operator `T` is ν-pseudocontractive when
//! `‖Tx−Ty‖² ≤ ‖x−y‖² − ν‖Gx−Gy‖²` for all `x, y`, where `G = I−T` is the
//! displacement operator and ν > 0. (Note: some texts use the word
//! *pseudocontractive* for a different property; this crate uses it only in
//! the sense above.) The class is closed under composition and convex
//! combination with an explicit parameter calculus, which is what makes
//! certificates of compound methods derivable from the certificates of their
//! parts.
//!
//! Module map:
//!
//! * [`operator_core`]: points, certificates, the certificate calculus, and
//!   certified operator expressions.
//! * [`atoms`]: concrete certified atoms: projections onto convex sets,
//!   gradient steps of smooth convex functions, and proximal maps.
//! * [`methods`]: the method catalog (gradient descent through ADMM) built
//!   as certified expressions, plus the fixed-point iteration driver.
//! * [`verification`]: empirical checks of the definitional inequalities,
//!   the monotone-decrease lemma, and the `O(1/N)` / `o(1/N)` residual
//!   bounds, producing machine-readable reports.

pub mod atoms;
pub mod error;
pub mod methods;
pub mod operator_core;
pub mod verification;

pub use error::{Error, Result};
pub use operator_core::{CertClass, Certificate, OperatorExpr, Point};
