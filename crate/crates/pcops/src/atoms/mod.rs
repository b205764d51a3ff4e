//! Concrete certified operator atoms: projections onto standard convex
//! sets, gradient steps of smooth convex functions, and proximal maps.

pub mod prox;
pub mod sets;
pub mod smooth;

pub use prox::{prox, prox_expr, subgradient_check, ProxAtom, ProxableFn};
pub use sets::{project, projection_expr, ConvexSet, ProjectionAtom};
pub use smooth::{estimate_lambda_max, gradient_step, GradientAtom, SmoothConvexFn};
