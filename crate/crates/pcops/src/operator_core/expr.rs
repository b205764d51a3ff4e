//! Certified operator expression trees.
//!
//! An [`OperatorExpr`] is an evaluable map `ℝⁿ → ℝⁿ` built from atoms and the
//! structural operations compose, convex-combine, relax, reflect,
//! displacement, and scale. Every node carries a [`Certificate`] derived
//! bottom-up by the certificate calculus, so any expression that can be
//! constructed comes with a provable operator-class claim. Construction fails
//! (rather than producing an uncertified tree) when an operation's
//! certificate precondition is not met.
//!
//! Expressions are immutable after construction and evaluation is pure, so an
//! expression can be shared freely across threads.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::operator_core::certificate::{Certificate, CertClass};
use crate::operator_core::point::Point;

/// An evaluable atom: a concrete certified map such as a projection,
/// a gradient, or a proximal step.
pub trait AtomOp: Send + Sync {
    /// Short identifier used in method descriptions and reports.
    fn id(&self) -> String;
    fn dim(&self) -> usize;
    /// The operator-class certificate this atom is constructed with.
    fn certificate(&self) -> Certificate;
    /// Evaluates the map. The input is guaranteed to have `dim()` entries.
    fn eval(&self, x: &DVector<f64>) -> DVector<f64>;
}

#[derive(Clone)]
enum Node {
    Identity,
    Atom(Arc<dyn AtomOp>),
    /// `Compose(a, b)` is the map `x ↦ a(b(x))`.
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    /// `(1−t)·left + t·right`, `t ∈ [0,1]`.
    ConvexCombine(f64, Box<OperatorExpr>, Box<OperatorExpr>),
    /// `(1−ω)x + ω·inner(x)`, `ω ∈ (0,2)`.
    Relax(f64, Box<OperatorExpr>),
    /// `2·inner(x) − x`.
    Reflect(Box<OperatorExpr>),
    /// `x − inner(x)`.
    Displacement(Box<OperatorExpr>),
    /// `γ·inner(x)`, γ > 0.
    Scale(f64, Box<OperatorExpr>),
}

/// A certified operator expression.
#[derive(Clone)]
pub struct OperatorExpr {
    node: Node,
    cert: Certificate,
    dim: usize,
}

impl OperatorExpr {
    /// The identity map on ℝⁿ, carrying the reserved α = 0 certificate.
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::dim(1, 0, "identity operator"));
        }
        Ok(OperatorExpr {
            node: Node::Identity,
            cert: Certificate::identity(),
            dim,
        })
    }

    /// Wraps a concrete atom.
    pub fn atom(atom: Arc<dyn AtomOp>) -> Result<Self> {
        let dim = atom.dim();
        if dim == 0 {
            return Err(Error::dim(1, 0, "atom operator"));
        }
        let cert = atom.certificate();
        if cert.alpha() == Some(0.0) {
            return Err(Error::Cert(
                "the alpha = 0 certificate slot is reserved for the identity".into(),
            ));
        }
        Ok(OperatorExpr {
            node: Node::Atom(atom),
            cert,
            dim,
        })
    }

    pub fn from_atom(atom: impl AtomOp + 'static) -> Result<Self> {
        Self::atom(Arc::new(atom))
    }

    /// The composition `self ∘ rhs`, evaluating `self(rhs(x))`.
    pub fn compose(self, rhs: OperatorExpr) -> Result<Self> {
        check_dims(&self, &rhs, "compose")?;
        let cert = Certificate::compose(&self.cert, &rhs.cert)?;
        Ok(OperatorExpr {
            dim: self.dim,
            node: Node::Compose(Box::new(self), Box::new(rhs)),
            cert,
        })
    }

    /// The convex combination `(1−t)·left + t·right`, `t ∈ [0,1]`.
    pub fn convex_combine(t: f64, left: OperatorExpr, right: OperatorExpr) -> Result<Self> {
        check_dims(&left, &right, "convex combination")?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::param("t", t, "the closed interval [0, 1]"));
        }
        let cert = Certificate::combine(t, &left.cert, &right.cert)?;
        Ok(OperatorExpr {
            dim: left.dim,
            node: Node::ConvexCombine(t, Box::new(left), Box::new(right)),
            cert,
        })
    }

    /// The relaxation `(1−ω)I + ω·self`, `ω ∈ (0,2)`; requires a firmly
    /// nonexpansive (ν ≥ 1) operand.
    pub fn relax(self, omega: f64) -> Result<Self> {
        let cert = self.cert.relaxed(omega)?;
        Ok(OperatorExpr {
            dim: self.dim,
            node: Node::Relax(omega, Box::new(self)),
            cert,
        })
    }

    /// The reflection `2·self − I`; requires a firmly nonexpansive (ν ≥ 1)
    /// operand and yields a nonexpansive operator.
    pub fn reflect(self) -> Result<Self> {
        match self.cert.alpha() {
            Some(alpha) if alpha <= 0.5 => Ok(OperatorExpr {
                dim: self.dim,
                node: Node::Reflect(Box::new(self)),
                cert: Certificate::Nonexpansive,
            }),
            _ => Err(Error::Cert(
                "reflection requires a firmly nonexpansive operand (nu >= 1)".into(),
            )),
        }
    }

    /// The displacement `G = I − self`.
    ///
    /// For an averaged operand the displacement is `1/(2α)`-inverse strongly
    /// monotone; for a σ-inverse-strongly-monotone operand with σ > 1/2 the
    /// displacement is `(2σ−1)`-pseudocontractive (σ = 1/2 gives bare
    /// nonexpansiveness). This is the step that turns a certified `γ∇f`
    /// into a certified gradient-descent update.
    pub fn displacement(self) -> Result<Self> {
        let cert = match self.cert {
            Certificate::Averaged { alpha } if alpha > 0.0 => self.cert.displacement_ism()?,
            Certificate::Averaged { .. } => {
                return Err(Error::Cert(
                    "the displacement of the identity carries no certificate".into(),
                ));
            }
            Certificate::InverseStronglyMonotone { sigma } => {
                if sigma > 0.5 {
                    self.cert.convert(CertClass::Averaged)?.cert
                } else if sigma == 0.5 {
                    Certificate::Nonexpansive
                } else {
                    return Err(Error::Cert(format!(
                        "displacement of a sigma = {sigma} < 1/2 ism operand is uncertified"
                    )));
                }
            }
            Certificate::Nonexpansive => {
                return Err(Error::Cert(
                    "displacement requires an averaged or ism certificate".into(),
                ));
            }
        };
        Ok(OperatorExpr {
            dim: self.dim,
            node: Node::Displacement(Box::new(self)),
            cert,
        })
    }

    /// The scaled operator `γ·self`, γ > 0; restricted to inverse strongly
    /// monotone operands (the only class whose certificate survives scaling).
    pub fn scale(self, gamma: f64) -> Result<Self> {
        let cert = self.cert.scaled_ism(gamma)?;
        Ok(OperatorExpr {
            dim: self.dim,
            node: Node::Scale(gamma, Box::new(self)),
            cert,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The certificate derived for this node.
    pub fn certificate(&self) -> Certificate {
        self.cert
    }

    /// Recomputes the certificate from the children, bottom-up. Equals
    /// [`certificate`](Self::certificate) by construction; exposed so the
    /// consistency can be asserted.
    pub fn derive_certificate(&self) -> Result<Certificate> {
        match &self.node {
            Node::Identity => Ok(Certificate::identity()),
            Node::Atom(a) => Ok(a.certificate()),
            Node::Compose(l, r) => {
                Certificate::compose(&l.derive_certificate()?, &r.derive_certificate()?)
            }
            Node::ConvexCombine(t, l, r) => {
                Certificate::combine(*t, &l.derive_certificate()?, &r.derive_certificate()?)
            }
            Node::Relax(omega, i) => i.derive_certificate()?.relaxed(*omega),
            Node::Reflect(_) => Ok(Certificate::Nonexpansive),
            Node::Displacement(i) => {
                let inner = i.derive_certificate()?;
                match inner {
                    Certificate::Averaged { .. } => inner.displacement_ism(),
                    Certificate::InverseStronglyMonotone { sigma } => {
                        if sigma == 0.5 {
                            Ok(Certificate::Nonexpansive)
                        } else {
                            Ok(inner.convert(CertClass::Averaged)?.cert)
                        }
                    }
                    Certificate::Nonexpansive => {
                        Err(Error::Cert("uncertifiable displacement".into()))
                    }
                }
            }
            Node::Scale(gamma, i) => i.derive_certificate()?.scaled_ism(*gamma),
        }
    }

    /// Evaluates the expression at `x`.
    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        if x.dim() != self.dim {
            return Err(Error::dim(self.dim, x.dim(), "evaluate"));
        }
        let out = self.eval_vec(x.coords())?;
        Point::new(out)
    }

    /// Evaluates on a raw coordinate vector (callers guarantee the length).
    pub fn eval_vec(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let out = match &self.node {
            Node::Identity => x.clone(),
            Node::Atom(a) => a.eval(x),
            Node::Compose(l, r) => l.eval_vec(&r.eval_vec(x)?)?,
            Node::ConvexCombine(t, l, r) => {
                let lv = l.eval_vec(x)?;
                let rv = r.eval_vec(x)?;
                lv * (1.0 - t) + rv * *t
            }
            Node::Relax(omega, i) => {
                let iv = i.eval_vec(x)?;
                x * (1.0 - omega) + iv * *omega
            }
            Node::Reflect(i) => i.eval_vec(x)? * 2.0 - x,
            Node::Displacement(i) => x - i.eval_vec(x)?,
            Node::Scale(gamma, i) => i.eval_vec(x)? * *gamma,
        };
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::numeric(self.describe()))
        }
    }

    /// Compact structural description, e.g. `relax(1.5, prox[l1(w=1)])`.
    pub fn describe(&self) -> String {
        match &self.node {
            Node::Identity => "identity".into(),
            Node::Atom(a) => a.id(),
            Node::Compose(l, r) => format!("({} . {})", l.describe(), r.describe()),
            Node::ConvexCombine(t, l, r) => {
                format!("combine(t={t}, {}, {})", l.describe(), r.describe())
            }
            Node::Relax(omega, i) => format!("relax(omega={omega}, {})", i.describe()),
            Node::Reflect(i) => format!("reflect({})", i.describe()),
            Node::Displacement(i) => format!("displacement({})", i.describe()),
            Node::Scale(gamma, i) => format!("scale(gamma={gamma}, {})", i.describe()),
        }
    }
}

impl std::fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "OperatorExpr({}, dim={}, cert={})",
            self.describe(),
            self.dim,
            self.cert
        )
    }
}

fn check_dims(a: &OperatorExpr, b: &OperatorExpr, what: &str) -> Result<()> {
    if a.dim != b.dim {
        Err(Error::dim(a.dim, b.dim, what.to_string()))
    } else {
        Ok(())
    }
}
