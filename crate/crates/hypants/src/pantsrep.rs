//! Classification of parabolic pants representations.
//!
//! A pants representation sends the two free generators of the
//! thrice-punctured-sphere group to Moebius transformations `C1`, `C2`; the
//! third peripheral element is the product `C1*C2`. When all three images are
//! parabolic, exactly two shapes are possible: either the generators share a
//! fixed point (the reducible family of translations), or the representation
//! is conjugate to one rigid pair with no free parameter. [`classify_pants_rep`]
//! decides which, and produces the conjugating map.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::moebius::{ComplexValue, IsometryTag, MoebiusError, MoebiusTransform};
use crate::tol::Tol;

#[derive(Debug, Error)]
pub enum PantsError {
    #[error("peripheral element {name} classifies as {found}, expected parabolic or identity")]
    NotParabolic { name: &'static str, found: IsometryTag },
    #[error("boundary condition failed: expected {expected}, got {got}")]
    BoundaryCondition { expected: &'static str, got: ComplexValue },
    #[error("conjugation does not reach the rigid normal form (residual {residual:.3e})")]
    NormalFormMismatch { residual: f64 },
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// The rigid generator pair: `z -> z + 2` and its lower-triangular partner.
pub fn rigid_c1() -> MoebiusTransform {
    MoebiusTransform::from_real(1.0, 2.0, 0.0, 1.0).expect("unimodular")
}

/// Second rigid generator, `[[1,0],[-2,1]]`.
pub fn rigid_c2() -> MoebiusTransform {
    MoebiusTransform::from_real(1.0, 0.0, -2.0, 1.0).expect("unimodular")
}

/// Images of the two pants generators; the third boundary element is the
/// product and is never stored separately.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PantsRepresentation {
    pub c1: MoebiusTransform,
    pub c2: MoebiusTransform,
}

impl PantsRepresentation {
    pub fn new(c1: MoebiusTransform, c2: MoebiusTransform) -> PantsRepresentation {
        PantsRepresentation { c1, c2 }
    }

    pub fn product(&self) -> MoebiusTransform {
        self.c1.compose(&self.c2)
    }

    /// Checks that all three peripheral images are parabolic or identity,
    /// returning the three classification tags on success.
    pub fn peripheral_tags(&self, tol: Tol) -> Result<[IsometryTag; 3], PantsError> {
        let named: [(&'static str, MoebiusTransform); 3] = [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c1*c2", self.product()),
        ];
        let mut tags = [IsometryTag::Identity; 3];
        for (slot, (name, m)) in tags.iter_mut().zip(named) {
            let tag = m.classify(tol).tag;
            match tag {
                IsometryTag::Parabolic | IsometryTag::Identity => *slot = tag,
                found => return Err(PantsError::NotParabolic { name, found }),
            }
        }
        Ok(tags)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalFormKind {
    Reducible,
    Rigid,
}

/// Result of classification: the kind, the conjugator realizing the normal
/// form, the translation parameters in the reducible case, and a degeneracy
/// flag raised when any peripheral image is trivial.
#[derive(Debug, Clone, Copy)]
pub struct PantsNormalForm {
    pub kind: NormalFormKind,
    pub conjugator: MoebiusTransform,
    /// Translation parameters `(z1, z2)` of the conjugated generators;
    /// present exactly in the reducible case.
    pub params: Option<(Complex64, Complex64)>,
    /// Set when `c1`, `c2`, or their product is the identity.
    pub degenerate: bool,
}

impl Serialize for PantsNormalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PantsNormalForm", 4)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("conjugator", &self.conjugator)?;
        let params = self
            .params
            .map(|(z1, z2)| [[z1.re, z1.im], [z2.re, z2.im]]);
        st.serialize_field("params", &params)?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.end()
    }
}

/// The Moebius map sending `p` to infinity: the identity when `p` is already
/// infinite, otherwise `z -> -1/(z - p)` (chosen over `1/(z-p)` so the
/// determinant is already 1).
fn send_to_infinity(p: ComplexValue) -> MoebiusTransform {
    match p {
        ComplexValue::Infinity => MoebiusTransform::identity(),
        ComplexValue::Finite(p) => MoebiusTransform::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
            -p,
        )
        .expect("determinant is 1"),
    }
}

/// The Moebius map sending `p1` to infinity and `p2` to 0; requires
/// `p1 != p2`.
fn send_to_infinity_and_zero(p1: ComplexValue, p2: ComplexValue) -> MoebiusTransform {
    match (p1, p2) {
        (ComplexValue::Infinity, ComplexValue::Finite(q)) => MoebiusTransform::translation(-q),
        (ComplexValue::Finite(p), ComplexValue::Infinity) => {
            // z -> 1/(z - p): p to infinity, infinity to 0.
            MoebiusTransform::new(
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                -p,
            )
            .expect("determinant is -1, normalizable")
        }
        (ComplexValue::Finite(p), ComplexValue::Finite(q)) => {
            // z -> (z - q)/(z - p).
            MoebiusTransform::new(
                Complex64::new(1.0, 0.0),
                -q,
                Complex64::new(1.0, 0.0),
                -p,
            )
            .expect("p != q gives nonzero determinant")
        }
        (ComplexValue::Infinity, ComplexValue::Infinity) => {
            unreachable!("called with distinct fixed points")
        }
    }
}

/// Translation parameter of a parabolic fixing infinity: `a12/a11`, which
/// is lift-independent.
fn translation_param(m: &MoebiusTransform) -> Complex64 {
    m.a12() / m.a11()
}

/// Decides whether a peripheral-parabolic pants representation is reducible
/// or conjugate to the rigid pair, and returns the conjugator.
///
/// Reducible output is normalized by the map sending the common fixed point
/// to infinity (no rescaling), so `params` retains the input's scale; the
/// conjugation invariant is the ratio `z2/z1`. Rigid output satisfies
/// `conjugator * c_i * conjugator^-1 = rigid_c_i` within tolerance.
pub fn classify_pants_rep(
    rep: &PantsRepresentation,
    tol: Tol,
) -> Result<PantsNormalForm, PantsError> {
    let tags = rep.peripheral_tags(tol)?;
    let [tag1, tag2, tag_prod] = tags;

    // Trivial generators: tagged degenerate-reducible rather than an error,
    // normalized so the surviving parabolic (if any) fixes infinity.
    if tag1 == IsometryTag::Identity || tag2 == IsometryTag::Identity {
        let (conjugator, z1, z2) = match (tag1, tag2) {
            (IsometryTag::Identity, IsometryTag::Identity) => {
                let zero = Complex64::new(0.0, 0.0);
                (MoebiusTransform::identity(), zero, zero)
            }
            (IsometryTag::Identity, _) => {
                let p = rep.c2.fixed_points(tol)?[0];
                let s = send_to_infinity(p);
                let c2n = s.conjugate(&rep.c2);
                (s, Complex64::new(0.0, 0.0), translation_param(&c2n))
            }
            (_, IsometryTag::Identity) => {
                let p = rep.c1.fixed_points(tol)?[0];
                let s = send_to_infinity(p);
                let c1n = s.conjugate(&rep.c1);
                (s, translation_param(&c1n), Complex64::new(0.0, 0.0))
            }
            _ => unreachable!(),
        };
        return Ok(PantsNormalForm {
            kind: NormalFormKind::Reducible,
            conjugator,
            params: Some((z1, z2)),
            degenerate: true,
        });
    }

    let p1 = rep.c1.fixed_points(tol)?[0];
    let p2 = rep.c2.fixed_points(tol)?[0];

    if p1.approx_eq(&p2, tol) {
        let s = send_to_infinity(p1);
        let z1 = translation_param(&s.conjugate(&rep.c1));
        let z2 = translation_param(&s.conjugate(&rep.c2));
        return Ok(PantsNormalForm {
            kind: NormalFormKind::Reducible,
            conjugator: s,
            params: Some((z1, z2)),
            degenerate: tag_prod == IsometryTag::Identity,
        });
    }

    // Distinct fixed points: move them to (infinity, 0), then rescale so c1
    // becomes z -> z + 2. Parabolicity of the product then forces c2 into
    // the lower-triangular partner with no further freedom.
    let m0 = send_to_infinity_and_zero(p1, p2);
    let t = translation_param(&m0.conjugate(&rep.c1));
    let scale = MoebiusTransform::scaling(Complex64::new(2.0, 0.0) / t)?;
    let conjugator = scale.compose(&m0);

    let r1 = conjugator.conjugate(&rep.c1).distance(&rigid_c1());
    let r2 = conjugator.conjugate(&rep.c2).distance(&rigid_c2());
    let residual = r1.max(r2);
    // The rigid form is forced exactly; a miss here means the inputs only
    // marginally satisfied the parabolicity checks. Allow the residual a
    // modest factor over the classification tolerance for conditioning.
    if residual > 1e3 * tol.abs_for(1.0) {
        return Err(PantsError::NormalFormMismatch { residual });
    }
    Ok(PantsNormalForm {
        kind: NormalFormKind::Rigid,
        conjugator,
        params: None,
        degenerate: false,
    })
}

/// Recovers the parameter `a` from a matrix with boundary values
/// `M(0) = 1` and `M(1) = infinity`.
///
/// Any determinant-1 matrix with those boundary values has the shape
/// `[[a^-1 - a, a], [-a, a]]`; the sign ambiguity of the stored lift is
/// resolved by canonicalizing `a` into the right half-plane (real part
/// positive, or on the imaginary axis with positive imaginary part).
pub fn extract_q_param(m: &MoebiusTransform, tol: Tol) -> Result<Complex64, PantsError> {
    // M(0) = a12/a22 must be 1 and M(1) forces a21 + a22 = 0; check the
    // entry identities at matrix scale rather than dividing.
    if !tol.complex_eq(m.a12(), m.a22()) {
        return Err(PantsError::BoundaryCondition {
            expected: "M(0) = 1",
            got: m.apply(ComplexValue::finite(0.0, 0.0)),
        });
    }
    if !tol.complex_eq(m.a21(), -m.a22()) {
        return Err(PantsError::BoundaryCondition {
            expected: "M(1) = infinity",
            got: m.apply(ComplexValue::finite(1.0, 0.0)),
        });
    }
    Ok(canonical_half_plane(m.a22()))
}

/// Flips the sign of `a` if needed so that `arg a` lies in `(-pi/2, pi/2]`.
pub fn canonical_half_plane(a: Complex64) -> Complex64 {
    let zero = 1e-12 * a.norm();
    if a.re.abs() > zero {
        if a.re < 0.0 {
            -a
        } else {
            a
        }
    } else if a.im < 0.0 {
        -a
    } else {
        a
    }
}
