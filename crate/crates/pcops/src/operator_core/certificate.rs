//! Operator-class certificates and the calculus that propagates them.
//!
//! A [`Certificate`] asserts that an operator `T : ℝⁿ → ℝⁿ` belongs to one of
//! three interrelated classes:
//!
//! * **ν-pseudocontractive**: `‖Tx−Ty‖² ≤ ‖x−y‖² − ν‖Gx−Gy‖²` with `G = I−T`
//!   and `ν > 0`. The ν = 1 case is the familiar *firmly nonexpansive* class.
//! * **α-averaged**: `T = (1−α)I + αN` with `N` nonexpansive and `α ∈ (0,1)`.
//! * **σ-inverse strongly monotone** (co-coercive):
//!   `⟨Tx−Ty, x−y⟩ ≥ σ‖Tx−Ty‖²` with `σ > 0`.
//!
//! The first two are views of the same property (`ν = (1−α)/α`,
//! `α = 1/(1+ν)`), so the averaged parameter is the canonical stored form and
//! ν is computed on demand. The third is a property of monotone maps such as
//! scaled gradients, and it transfers to and from the averaged family through
//! the displacement operator `G = I−T` (`σ_G = 1/(2α)`).
//!
//! A caution on terminology: *pseudocontractive* is used here exclusively in
//! the sense of the squared-norm inequality above. Parts of the optimization
//! literature use the same word for an unrelated property; no compatibility
//! with that usage is attempted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for certificate arithmetic identities.
pub const CERT_REL_TOL: f64 = 1e-12;

/// The operator classes a certificate can be converted between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertClass {
    Nonexpansive,
    Pseudocontractive,
    Averaged,
    InverseStronglyMonotone,
}

impl std::fmt::Display for CertClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CertClass::Nonexpansive => "nonexpansive",
            CertClass::Pseudocontractive => "pseudocontractive",
            CertClass::Averaged => "averaged",
            CertClass::InverseStronglyMonotone => "inverse strongly monotone",
        };
        f.write_str(name)
    }
}

/// A certificate of operator-class membership.
///
/// Stored canonically: the pseudocontractive/averaged family keeps the
/// averaged parameter α, and the ν and σ readings are derived views.
/// `Averaged { alpha: 0.0 }` is reserved for the identity operator, which
/// enters the composition algebra through the α = 0 slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// Nonexpansive with no sharper modulus.
    Nonexpansive,
    /// α-averaged, α ∈ [0,1); α = 0 only for the identity.
    Averaged { alpha: f64 },
    /// σ-inverse strongly monotone, σ > 0.
    InverseStronglyMonotone { sigma: f64 },
}

/// Which operator a converted certificate describes: the original map `T`,
/// or its displacement `G = I − T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Referent {
    Operator,
    Displacement,
}

/// Result of [`Certificate::convert`]: the certificate in the target class,
/// together with the operator it applies to. Conversions within the
/// pseudocontractive/averaged family keep describing `T`; conversions
/// to or from the inverse-strongly-monotone form describe `I − T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conversion {
    pub cert: Certificate,
    pub applies_to: Referent,
}

impl Certificate {
    /// ν-pseudocontractive, ν > 0. Stored as `Averaged(1/(1+ν))`.
    pub fn pseudocontractive(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::param("nu", nu, "the open interval (0, inf)"));
        }
        Ok(Certificate::Averaged {
            alpha: 1.0 / (1.0 + nu),
        })
    }

    /// α-averaged, α ∈ (0,1).
    pub fn averaged(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
            return Err(Error::param("alpha", alpha, "the open interval (0, 1)"));
        }
        Ok(Certificate::Averaged { alpha })
    }

    /// Firm nonexpansiveness, i.e. ν = 1 (equivalently α = 1/2).
    pub fn firmly_nonexpansive() -> Self {
        Certificate::Averaged { alpha: 0.5 }
    }

    /// The identity operator's certificate: the reserved α = 0 slot.
    pub fn identity() -> Self {
        Certificate::Averaged { alpha: 0.0 }
    }

    /// σ-inverse strongly monotone, σ > 0.
    pub fn ism(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::param("sigma", sigma, "the open interval (0, inf)"));
        }
        Ok(Certificate::InverseStronglyMonotone { sigma })
    }

    pub fn nonexpansive() -> Self {
        Certificate::Nonexpansive
    }

    /// Averaged parameter α ∈ [0,1), if this certificate carries one.
    pub fn alpha(&self) -> Option<f64> {
        match self {
            Certificate::Averaged { alpha } => Some(*alpha),
            _ => None,
        }
    }

    /// Pseudocontractivity modulus ν = (1−α)/α. `None` for the identity
    /// slot (α = 0, where ν is unbounded) and for non-averaged certificates.
    pub fn nu(&self) -> Option<f64> {
        match self {
            Certificate::Averaged { alpha } if *alpha > 0.0 => Some((1.0 - alpha) / alpha),
            _ => None,
        }
    }

    /// Inverse-strong-monotonicity modulus σ, if this certificate carries one.
    pub fn sigma(&self) -> Option<f64> {
        match self {
            Certificate::InverseStronglyMonotone { sigma } => Some(*sigma),
            _ => None,
        }
    }

    /// Whether the certified operator is nonexpansive. True for every
    /// averaged certificate, the identity, and σ ≥ 1 inverse strong
    /// monotonicity (`‖Tx−Ty‖ ≤ (1/σ)‖x−y‖`).
    pub fn implies_nonexpansive(&self) -> bool {
        match self {
            Certificate::Nonexpansive => true,
            Certificate::Averaged { .. } => true,
            Certificate::InverseStronglyMonotone { sigma } => *sigma >= 1.0,
        }
    }

    /// Converts between the equivalent class readings of one operator.
    ///
    /// * Pseudocontractive ↔ Averaged: views of the same stored α.
    /// * Averaged → InverseStronglyMonotone: yields `σ = 1/(2α)` *for the
    ///   displacement* `G = I−T`.
    /// * InverseStronglyMonotone → Pseudocontractive/Averaged: yields
    ///   `ν = 2σ−1` (σ > 1/2) *for the displacement* `I−T`.
    /// * anything nonexpansive → Nonexpansive (forgetting the modulus).
    ///
    /// A bare `Nonexpansive` certificate carries no modulus and cannot be
    /// converted to a parameterized class.
    pub fn convert(&self, target: CertClass) -> Result<Conversion> {
        let same = |cert| Conversion {
            cert,
            applies_to: Referent::Operator,
        };
        let displaced = |cert| Conversion {
            cert,
            applies_to: Referent::Displacement,
        };
        match (self, target) {
            (Certificate::Averaged { alpha }, CertClass::Averaged)
            | (Certificate::Averaged { alpha }, CertClass::Pseudocontractive) => {
                if *alpha == 0.0 {
                    return Err(Error::Conversion(
                        "the identity slot (alpha = 0) has no finite modulus".into(),
                    ));
                }
                Ok(same(Certificate::Averaged { alpha: *alpha }))
            }
            (Certificate::Averaged { alpha }, CertClass::InverseStronglyMonotone) => {
                if *alpha == 0.0 {
                    return Err(Error::Conversion(
                        "the identity slot (alpha = 0) has no displacement modulus".into(),
                    ));
                }
                Ok(displaced(Certificate::InverseStronglyMonotone {
                    sigma: 1.0 / (2.0 * alpha),
                }))
            }
            (Certificate::InverseStronglyMonotone { sigma }, CertClass::Pseudocontractive)
            | (Certificate::InverseStronglyMonotone { sigma }, CertClass::Averaged) => {
                if *sigma <= 0.5 {
                    return Err(Error::Conversion(format!(
                        "sigma = {sigma} <= 1/2: displacement is not pseudocontractive"
                    )));
                }
                Ok(displaced(Certificate::Averaged {
                    alpha: 1.0 / (2.0 * sigma),
                }))
            }
            (Certificate::InverseStronglyMonotone { .. }, CertClass::InverseStronglyMonotone) => {
                Ok(same(*self))
            }
            (cert, CertClass::Nonexpansive) => {
                if cert.implies_nonexpansive() {
                    Ok(same(Certificate::Nonexpansive))
                } else {
                    Err(Error::Conversion(format!(
                        "{cert:?} does not imply nonexpansiveness"
                    )))
                }
            }
            (Certificate::Nonexpansive, _) => Err(Error::Conversion(
                "a bare nonexpansive certificate carries no modulus".into(),
            )),
        }
    }

    /// Certificate of the relaxation `(1−ω)I + ωF` for firmly nonexpansive
    /// (or stronger) `F`: `(2−ω)/ω`-pseudocontractive, i.e. ω/2-averaged.
    ///
    /// Requires ν ≥ 1 (α ≤ 1/2): the underlying argument reflects `F`, and
    /// the reflection `2F − I` is nonexpansive only for firmly nonexpansive
    /// `F`. The identity slot is accepted (relaxing the identity gives back
    /// the identity, which satisfies any averagedness claim).
    pub fn relaxed(&self, omega: f64) -> Result<Certificate> {
        if !(omega > 0.0 && omega < 2.0) {
            return Err(Error::param("omega", omega, "the open interval (0, 2)"));
        }
        match self.alpha() {
            Some(alpha) if alpha <= 0.5 => Ok(Certificate::Averaged { alpha: omega / 2.0 }),
            Some(alpha) => Err(Error::Cert(format!(
                "relaxation requires a firmly nonexpansive operand (nu >= 1); got alpha = {alpha} > 1/2"
            ))),
            None => Err(Error::Cert(
                "relaxation requires an averaged-family certificate".into(),
            )),
        }
    }

    /// Certificate of the composition `T₁T₂` of two averaged-family
    /// operators: `α_co = (α₁+α₂−2α₁α₂)/(1−α₁α₂)` with `α₁, α₂ ∈ [0,1)`.
    ///
    /// Compositions where at least one side lacks an α slot but both sides
    /// are nonexpansive yield a bare `Nonexpansive` certificate.
    pub fn compose(a: &Certificate, b: &Certificate) -> Result<Certificate> {
        match (a.alpha(), b.alpha()) {
            (Some(a1), Some(a2)) => {
                let alpha = compose_alpha(a1, a2);
                Ok(Certificate::Averaged { alpha })
            }
            _ => {
                if a.implies_nonexpansive() && b.implies_nonexpansive() {
                    Ok(Certificate::Nonexpansive)
                } else {
                    Err(Error::Cert(
                        "composition requires both operands certified at least nonexpansive"
                            .into(),
                    ))
                }
            }
        }
    }

    /// Certificate of the convex combination `(1−t)T₁ + tT₂`, `t ∈ [0,1]`:
    /// `α_cc = (1−t)α₁ + tα₂` for averaged-family operands. The combination
    /// of the identity (α = 0) with a bare nonexpansive operator is
    /// t-averaged by the definition of averagedness; combinations that are
    /// merely nonexpansive on both sides stay nonexpansive.
    pub fn combine(t: f64, a: &Certificate, b: &Certificate) -> Result<Certificate> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::param("t", t, "the closed interval [0, 1]"));
        }
        match (a.alpha(), b.alpha()) {
            (Some(a1), Some(a2)) => Ok(Certificate::Averaged {
                alpha: (1.0 - t) * a1 + t * a2,
            }),
            (Some(a1), None) if a1 == 0.0 && b.implies_nonexpansive() => {
                if t == 0.0 {
                    Ok(Certificate::identity())
                } else if t < 1.0 {
                    Ok(Certificate::Averaged { alpha: t })
                } else {
                    Ok(Certificate::Nonexpansive)
                }
            }
            (None, Some(a2)) if a2 == 0.0 && a.implies_nonexpansive() => {
                // mirror image of the case above
                Certificate::combine(1.0 - t, b, a)
            }
            _ => {
                if a.implies_nonexpansive() && b.implies_nonexpansive() {
                    Ok(Certificate::Nonexpansive)
                } else {
                    Err(Error::Cert(
                        "convex combination requires both operands certified at least nonexpansive"
                            .into(),
                    ))
                }
            }
        }
    }

    /// Certificate of the displacement `G = I−T` of a ν-pseudocontractive
    /// operator: `(1+ν)/2`-inverse strongly monotone.
    pub fn displacement_ism(&self) -> Result<Certificate> {
        let nu = self.nu().ok_or_else(|| {
            Error::Cert("displacement certificate requires a pseudocontractive operand".into())
        })?;
        Ok(Certificate::InverseStronglyMonotone {
            sigma: (1.0 + nu) / 2.0,
        })
    }

    /// Certificate of the scaled operator `γT` of a σ-inverse strongly
    /// monotone `T`: `σ/γ`-inverse strongly monotone, γ > 0.
    pub fn scaled_ism(&self, gamma: f64) -> Result<Certificate> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::param("gamma", gamma, "the open interval (0, inf)"));
        }
        let sigma = self.sigma().ok_or_else(|| {
            Error::Cert("scaling preserves certificates only for inverse strongly monotone operands"
                .into())
        })?;
        Ok(Certificate::InverseStronglyMonotone {
            sigma: sigma / gamma,
        })
    }
}

/// The averaged parameter of a composition, `(α₁+α₂−2α₁α₂)/(1−α₁α₂)`,
/// defined for `α₁, α₂ ∈ [0,1)`. Symmetric in its arguments.
pub fn compose_alpha(a1: f64, a2: f64) -> f64 {
    (a1 + a2 - 2.0 * a1 * a2) / (1.0 - a1 * a2)
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::Nonexpansive => write!(f, "nonexpansive"),
            Certificate::Averaged { alpha } if *alpha == 0.0 => write!(f, "identity (alpha=0)"),
            Certificate::Averaged { alpha } => {
                write!(f, "averaged(alpha={alpha}) / pseudocontractive(nu={})",
                    (1.0 - alpha) / alpha)
            }
            Certificate::InverseStronglyMonotone { sigma } => write!(f, "ism(sigma={sigma})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu_of(c: &Certificate) -> f64 {
        c.nu().unwrap()
    }

    #[test]
    fn firmly_nonexpansive_is_half_averaged() {
        // nu = 1 <-> alpha = 1/2
        let c = Certificate::pseudocontractive(1.0).unwrap();
        assert_eq!(c.alpha(), Some(0.5));
        assert_eq!(nu_of(&c), 1.0);
        assert_eq!(c, Certificate::firmly_nonexpansive());
    }

    #[test]
    fn pseudocontractive_three_is_quarter_averaged() {
        // solving nu = (1-alpha)/alpha for nu = 3 gives alpha = 1/4
        let c = Certificate::pseudocontractive(3.0).unwrap();
        assert_eq!(c.alpha(), Some(0.25));
        assert_eq!(nu_of(&c), 3.0);
    }

    #[test]
    fn averaged_half_displacement_is_one_ism() {
        let c = Certificate::averaged(0.5).unwrap();
        let conv = c.convert(CertClass::InverseStronglyMonotone).unwrap();
        assert_eq!(conv.applies_to, Referent::Displacement);
        assert_eq!(conv.cert.sigma(), Some(1.0));
    }

    #[test]
    fn displacement_ism_formula() {
        // nu = 1 -> sigma = 1; nu = 3 -> sigma = 2; nu -> 0+ -> sigma -> 1/2
        let sigma = |nu: f64| {
            Certificate::pseudocontractive(nu)
                .unwrap()
                .displacement_ism()
                .unwrap()
                .sigma()
                .unwrap()
        };
        assert_eq!(sigma(1.0), 1.0);
        assert_eq!(sigma(3.0), 2.0);
        let near_half = sigma(1e-9);
        assert!((near_half - 0.5).abs() < 1e-9);
        assert!(Certificate::pseudocontractive(0.0).is_err());
    }

    #[test]
    fn conversion_round_trips_within_tolerance() {
        for nu in [0.1, 0.3, 1.0, 2.5, 7.0, 19.0] {
            let c = Certificate::pseudocontractive(nu).unwrap();
            let avg = c.convert(CertClass::Averaged).unwrap().cert;
            let back = avg.convert(CertClass::Pseudocontractive).unwrap().cert;
            let rel = (back.nu().unwrap() - nu).abs() / nu;
            assert!(rel <= CERT_REL_TOL, "nu={nu} round trip error {rel}");
        }
        for alpha in [0.05, 0.25, 0.5, 0.75, 0.95] {
            let c = Certificate::averaged(alpha).unwrap();
            let nu = c.nu().unwrap();
            let back = Certificate::pseudocontractive(nu).unwrap().alpha().unwrap();
            assert!((back - alpha).abs() / alpha <= CERT_REL_TOL);
        }
    }

    #[test]
    fn nonexpansive_has_no_modulus() {
        let c = Certificate::nonexpansive();
        assert!(c.convert(CertClass::Pseudocontractive).is_err());
        assert!(c.convert(CertClass::Averaged).is_err());
        assert!(c.convert(CertClass::InverseStronglyMonotone).is_err());
        assert!(c.convert(CertClass::Nonexpansive).is_ok());
    }

    #[test]
    fn relax_formula_matches_closed_form() {
        let fne = Certificate::firmly_nonexpansive();
        // omega = 1 leaves the operator unchanged
        assert_eq!(nu_of(&fne.relaxed(1.0).unwrap()), 1.0);
        // (2 - 1.5)/1.5 = 1/3
        let over = fne.relaxed(1.5).unwrap();
        assert!((nu_of(&over) - 1.0 / 3.0).abs() <= CERT_REL_TOL);
        // (2 - 0.5)/0.5 = 3
        let under = fne.relaxed(0.5).unwrap();
        assert!((nu_of(&under) - 3.0).abs() <= 3.0 * CERT_REL_TOL);
        for omega in [0.25, 1.0, 1.75] {
            let got = nu_of(&fne.relaxed(omega).unwrap());
            let want = (2.0 - omega) / omega;
            assert!(
                (got - want).abs() <= want.abs() * CERT_REL_TOL,
                "omega={omega}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn relax_rejects_bad_inputs() {
        let fne = Certificate::firmly_nonexpansive();
        assert!(matches!(fne.relaxed(0.0), Err(Error::Param { .. })));
        assert!(matches!(fne.relaxed(2.0), Err(Error::Param { .. })));
        // nu < 1 (alpha > 1/2) is not firmly nonexpansive
        let weak = Certificate::pseudocontractive(0.5).unwrap();
        assert!(matches!(weak.relaxed(1.5), Err(Error::Cert(_))));
        assert!(matches!(
            Certificate::nonexpansive().relaxed(1.5),
            Err(Error::Cert(_))
        ));
    }

    #[test]
    fn compose_half_half_is_two_thirds_exactly() {
        let h = Certificate::averaged(0.5).unwrap();
        let c = Certificate::compose(&h, &h).unwrap();
        assert_eq!(c.alpha(), Some(2.0 / 3.0));
        // nu_co = (1 - a1 - a2 + a1 a2)/(a1 + a2 - 2 a1 a2) = 1/2
        assert!((c.nu().unwrap() - 0.5).abs() <= CERT_REL_TOL);
    }

    #[test]
    fn compose_with_identity_slot_is_noop() {
        let h = Certificate::averaged(0.5).unwrap();
        let id = Certificate::identity();
        assert_eq!(Certificate::compose(&h, &id).unwrap().alpha(), Some(0.5));
        assert_eq!(Certificate::compose(&id, &h).unwrap().alpha(), Some(0.5));
    }

    #[test]
    fn compose_is_symmetric_bitwise() {
        let certs = [
            Certificate::averaged(0.17).unwrap(),
            Certificate::averaged(0.5).unwrap(),
            Certificate::averaged(0.93).unwrap(),
            Certificate::identity(),
        ];
        for a in &certs {
            for b in &certs {
                let ab = Certificate::compose(a, b).unwrap().alpha().unwrap();
                let ba = Certificate::compose(b, a).unwrap().alpha().unwrap();
                assert_eq!(ab.to_bits(), ba.to_bits());
            }
        }
    }

    #[test]
    fn compose_of_nonexpansives_is_nonexpansive() {
        let n = Certificate::nonexpansive();
        let h = Certificate::averaged(0.5).unwrap();
        assert_eq!(
            Certificate::compose(&n, &h).unwrap(),
            Certificate::Nonexpansive
        );
        assert_eq!(
            Certificate::compose(&n, &n).unwrap(),
            Certificate::Nonexpansive
        );
        // ISM sigma < 1 does not imply nonexpansive
        let weak = Certificate::ism(0.25).unwrap();
        assert!(Certificate::compose(&n, &weak).is_err());
    }

    #[test]
    fn combine_formula() {
        let a = Certificate::averaged(0.3).unwrap();
        let b = Certificate::averaged(0.9).unwrap();
        // t = 0 selects the left operand
        assert_eq!(Certificate::combine(0.0, &a, &b).unwrap().alpha(), Some(0.3));
        // symmetric case
        let h = Certificate::averaged(0.5).unwrap();
        assert_eq!(
            Certificate::combine(0.5, &h, &h).unwrap().alpha(),
            Some(0.5)
        );
        // (3/4)*0.2 + (1/4)*0.6 = 0.3
        let a2 = Certificate::averaged(0.2).unwrap();
        let b2 = Certificate::averaged(0.6).unwrap();
        let got = Certificate::combine(0.25, &a2, &b2).unwrap().alpha().unwrap();
        assert!((got - 0.3).abs() <= CERT_REL_TOL);
        assert!(matches!(
            Certificate::combine(1.5, &a, &b),
            Err(Error::Param { .. })
        ));
    }

    #[test]
    fn combine_identity_with_nonexpansive_is_t_averaged() {
        // the ADMM shape: (1-t) I + t N with N nonexpansive
        let id = Certificate::identity();
        let n = Certificate::nonexpansive();
        let c = Certificate::combine(0.5, &id, &n).unwrap();
        assert_eq!(c.alpha(), Some(0.5));
        assert_eq!(c.nu(), Some(1.0));
        let c = Certificate::combine(0.25, &id, &n).unwrap();
        assert_eq!(c.alpha(), Some(0.25));
        // mirrored operand order
        let c = Certificate::combine(0.75, &n, &id).unwrap();
        assert_eq!(c.alpha(), Some(0.25));
    }

    #[test]
    fn ism_scaling() {
        let one = Certificate::ism(1.0).unwrap();
        assert_eq!(one.scaled_ism(1.0).unwrap().sigma(), Some(1.0));
        // gamma = 1/L with L = 2: sigma = 1 / (1/2) = 2
        assert_eq!(one.scaled_ism(0.5).unwrap().sigma(), Some(2.0));
        let half = Certificate::ism(0.5).unwrap();
        assert_eq!(half.scaled_ism(2.0).unwrap().sigma(), Some(0.25));
        assert!(matches!(one.scaled_ism(0.0), Err(Error::Param { .. })));
        assert!(matches!(one.scaled_ism(-1.0), Err(Error::Param { .. })));
        assert!(matches!(
            Certificate::firmly_nonexpansive().scaled_ism(1.0),
            Err(Error::Cert(_))
        ));
    }

    #[test]
    fn ism_to_pseudocontractive_via_displacement() {
        // sigma > 1/2: I - T is (2 sigma - 1)-pseudocontractive
        let c = Certificate::ism(1.0).unwrap();
        let conv = c.convert(CertClass::Pseudocontractive).unwrap();
        assert_eq!(conv.applies_to, Referent::Displacement);
        assert_eq!(conv.cert.nu(), Some(1.0));
        // sigma <= 1/2 carries no pseudocontractive displacement claim
        let flat = Certificate::ism(0.5).unwrap();
        assert!(flat.convert(CertClass::Pseudocontractive).is_err());
    }
}
