//! Points, certificates, and certified operator expressions.

pub mod certificate;
pub mod expr;
pub mod fixed_point;
pub mod point;

pub use certificate::{compose_alpha, CertClass, Certificate, Conversion, Referent, CERT_REL_TOL};
pub use expr::{AtomOp, OperatorExpr};
pub use fixed_point::FixedPointRef;
pub use point::Point;
