//! Moebius transformations of the Riemann sphere as isometries of upper
//! half-space, with determinant-1 matrix representatives canonicalized up
//! to the PSL(2,C) sign ambiguity.
//!
//! This module provides:
//! - [`ComplexValue`]: a point of the sphere boundary, C together with infinity
//! - [`MoebiusTransform`]: a det-1 2x2 complex matrix modulo sign
//! - [`IsometryClass`]: identity / parabolic / elliptic / loxodromic tagging

use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::tol::Tol;

/// Relative threshold deciding which entries count as zero during sign
/// canonicalization. Kept well below every user-facing tolerance.
const CANON_ZERO_FACTOR: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MoebiusError {
    #[error("matrix is singular or nearly singular (|det| = {0:.3e})")]
    Singular(f64),
    #[error("fixed points of the identity are the whole sphere")]
    IdentityHasNoIsolatedFixedPoints,
}

/// A point of the boundary sphere: a finite complex number or infinity.
///
/// Infinity is a first-class tagged value, never a large float.
#[derive(Debug, Clone, Copy)]
pub enum ComplexValue {
    Finite(Complex64),
    Infinity,
}

impl ComplexValue {
    pub fn finite(re: f64, im: f64) -> ComplexValue {
        debug_assert!(re.is_finite() && im.is_finite());
        ComplexValue::Finite(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> ComplexValue {
        ComplexValue::Finite(z)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ComplexValue::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ComplexValue::Finite(z) => Some(*z),
            ComplexValue::Infinity => None,
        }
    }

    /// Equality: exact for infinity, relative tolerance for finite values.
    pub fn approx_eq(&self, other: &ComplexValue, tol: Tol) -> bool {
        match (self, other) {
            (ComplexValue::Infinity, ComplexValue::Infinity) => true,
            (ComplexValue::Finite(a), ComplexValue::Finite(b)) => tol.complex_eq(*a, *b),
            _ => false,
        }
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> ComplexValue {
        ComplexValue::Finite(z)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexValue::Finite(z) => write!(f, "{}", z),
            ComplexValue::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ComplexValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ComplexValue::Finite(z) => [z.re, z.im].serialize(serializer),
            ComplexValue::Infinity => {
                use serde::ser::SerializeMap;
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("inf", &true)?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ComplexValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Inf { inf: bool },
        }
        match Repr::deserialize(deserializer)? {
            Repr::Pair([re, im]) => Ok(ComplexValue::finite(re, im)),
            Repr::Inf { inf: true } => Ok(ComplexValue::Infinity),
            Repr::Inf { inf: false } => Err(D::Error::custom("\"inf\" must be true")),
        }
    }
}

/// Classification tag of a Moebius transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryTag {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

impl fmt::Display for IsometryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryTag::Identity => "identity",
            IsometryTag::Parabolic => "parabolic",
            IsometryTag::Elliptic => "elliptic",
            IsometryTag::Loxodromic => "loxodromic",
        };
        f.write_str(s)
    }
}

/// Classification result: tag plus the trace of the canonical representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryClass {
    pub tag: IsometryTag,
    pub trace: Complex64,
}

/// A det-1 2x2 complex matrix modulo sign, acting on the boundary sphere by
/// `z -> (a11 z + a12) / (a21 z + a22)`.
///
/// Construction normalizes the determinant to 1 and canonicalizes the sign so
/// that the first nonzero entry in row-major order has argument in
/// `(-pi/2, pi/2]`; PSL equality then reduces to entrywise comparison.
#[derive(Debug, Clone, Copy)]
pub struct MoebiusTransform {
    a11: Complex64,
    a12: Complex64,
    a21: Complex64,
    a22: Complex64,
}

impl MoebiusTransform {
    /// Builds a transform from arbitrary matrix entries, normalizing the
    /// determinant to 1 and canonicalizing the sign.
    pub fn new(
        a11: Complex64,
        a12: Complex64,
        a21: Complex64,
        a22: Complex64,
    ) -> Result<MoebiusTransform, MoebiusError> {
        let det = a11 * a22 - a12 * a21;
        let scale = [a11, a12, a21, a22]
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if det.norm() <= 1e-14 * scale * scale {
            return Err(MoebiusError::Singular(det.norm()));
        }
        let s = det.sqrt();
        let mut m = MoebiusTransform {
            a11: a11 / s,
            a12: a12 / s,
            a21: a21 / s,
            a22: a22 / s,
        };
        m.canonicalize_sign();
        Ok(m)
    }

    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Result<MoebiusTransform, MoebiusError> {
        MoebiusTransform::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    /// Builds from real entries; handy for the integral matrices used
    /// throughout.
    pub fn from_real(
        a11: f64,
        a12: f64,
        a21: f64,
        a22: f64,
    ) -> Result<MoebiusTransform, MoebiusError> {
        MoebiusTransform::new(
            Complex64::new(a11, 0.0),
            Complex64::new(a12, 0.0),
            Complex64::new(a21, 0.0),
            Complex64::new(a22, 0.0),
        )
    }

    pub fn identity() -> MoebiusTransform {
        MoebiusTransform {
            a11: Complex64::new(1.0, 0.0),
            a12: Complex64::new(0.0, 0.0),
            a21: Complex64::new(0.0, 0.0),
            a22: Complex64::new(1.0, 0.0),
        }
    }

    /// The parabolic translation `z -> z + c`.
    pub fn translation(c: Complex64) -> MoebiusTransform {
        let mut m = MoebiusTransform {
            a11: Complex64::new(1.0, 0.0),
            a12: c,
            a21: Complex64::new(0.0, 0.0),
            a22: Complex64::new(1.0, 0.0),
        };
        m.canonicalize_sign();
        m
    }

    /// The scaling `z -> lambda z` for `lambda != 0`.
    pub fn scaling(lambda: Complex64) -> Result<MoebiusTransform, MoebiusError> {
        if lambda.norm() == 0.0 {
            return Err(MoebiusError::Singular(0.0));
        }
        let s = lambda.sqrt();
        MoebiusTransform::new(s, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), s.inv())
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn a11(&self) -> Complex64 {
        self.a11
    }
    pub fn a12(&self) -> Complex64 {
        self.a12
    }
    pub fn a21(&self) -> Complex64 {
        self.a21
    }
    pub fn a22(&self) -> Complex64 {
        self.a22
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    /// Flips the sign of every entry if needed so the first nonzero entry in
    /// row-major order has argument in `(-pi/2, pi/2]`.
    fn canonicalize_sign(&mut self) {
        let entries = [self.a11, self.a12, self.a21, self.a22];
        let scale = entries.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let zero = CANON_ZERO_FACTOR * scale;
        let lead = entries.iter().find(|z| z.norm() > zero);
        let flip = match lead {
            Some(z) => {
                if z.re.abs() > zero {
                    z.re < 0.0
                } else {
                    z.im < 0.0
                }
            }
            None => false,
        };
        if flip {
            self.a11 = -self.a11;
            self.a12 = -self.a12;
            self.a21 = -self.a21;
            self.a22 = -self.a22;
        }
    }

    /// Matrix product `self * other`, i.e. the map applying `other` first.
    pub fn compose(&self, other: &MoebiusTransform) -> MoebiusTransform {
        let mut m = MoebiusTransform {
            a11: self.a11 * other.a11 + self.a12 * other.a21,
            a12: self.a11 * other.a12 + self.a12 * other.a22,
            a21: self.a21 * other.a11 + self.a22 * other.a21,
            a22: self.a21 * other.a12 + self.a22 * other.a22,
        };
        // Renormalize: the product determinant drifts from 1 only by rounding,
        // but repeated products accumulate.
        let det = m.det();
        let s = det.sqrt();
        m.a11 /= s;
        m.a12 /= s;
        m.a21 /= s;
        m.a22 /= s;
        m.canonicalize_sign();
        m
    }

    /// Inverse via the adjugate; exact for det-1 matrices.
    pub fn inverse(&self) -> MoebiusTransform {
        let mut m = MoebiusTransform {
            a11: self.a22,
            a12: -self.a12,
            a21: -self.a21,
            a22: self.a11,
        };
        m.canonicalize_sign();
        m
    }

    /// The conjugate `self * other * self^-1`.
    pub fn conjugate(&self, other: &MoebiusTransform) -> MoebiusTransform {
        self.compose(other).compose(&self.inverse())
    }

    /// PSL equality: canonicalized entries agree within tolerance. Both signs
    /// are tried so that values straddling the canonicalization boundary
    /// still compare equal.
    pub fn approx_eq(&self, other: &MoebiusTransform, tol: Tol) -> bool {
        let eq = |m: &MoebiusTransform, sign: f64| {
            tol.complex_eq(self.a11, sign * m.a11)
                && tol.complex_eq(self.a12, sign * m.a12)
                && tol.complex_eq(self.a21, sign * m.a21)
                && tol.complex_eq(self.a22, sign * m.a22)
        };
        eq(other, 1.0) || eq(other, -1.0)
    }

    /// Largest entrywise distance to another transform, minimized over the
    /// PSL sign. This is the residual used by relation checks.
    pub fn distance(&self, other: &MoebiusTransform) -> f64 {
        let dist = |sign: f64| {
            [
                (self.a11 - sign * other.a11).norm(),
                (self.a12 - sign * other.a12).norm(),
                (self.a21 - sign * other.a21).norm(),
                (self.a22 - sign * other.a22).norm(),
            ]
            .into_iter()
            .fold(0.0f64, f64::max)
        };
        dist(1.0).min(dist(-1.0))
    }

    pub fn is_identity(&self, tol: Tol) -> bool {
        self.approx_eq(&MoebiusTransform::identity(), tol)
    }

    /// True when the transform fixes infinity, i.e. the lower-left entry
    /// vanishes at the matrix scale.
    pub fn fixes_infinity(&self, tol: Tol) -> bool {
        let scale = self.entry_scale();
        self.a21.norm() <= tol.abs_for(scale)
    }

    fn entry_scale(&self) -> f64 {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    }

    /// Trace-based classification. Identity is detected before parabolic so
    /// the parabolic tag always means a nontrivial transform.
    pub fn classify(&self, tol: Tol) -> IsometryClass {
        let t = self.trace();
        if self.is_identity(tol) {
            return IsometryClass {
                tag: IsometryTag::Identity,
                trace: t,
            };
        }
        let eps = tol.abs_for(t.norm());
        let two = Complex64::new(2.0, 0.0);
        let tag = if (t - two).norm() <= eps || (t + two).norm() <= eps {
            IsometryTag::Parabolic
        } else if t.im.abs() <= eps && t.re.abs() < 2.0 {
            IsometryTag::Elliptic
        } else {
            IsometryTag::Loxodromic
        };
        IsometryClass { tag, trace: t }
    }

    /// Fixed points on the boundary sphere: one point for parabolics, two
    /// otherwise. Infinity sorts first, finite points by (re, im).
    pub fn fixed_points(&self, tol: Tol) -> Result<Vec<ComplexValue>, MoebiusError> {
        let class = self.classify(tol);
        if class.tag == IsometryTag::Identity {
            return Err(MoebiusError::IdentityHasNoIsolatedFixedPoints);
        }
        let parabolic = class.tag == IsometryTag::Parabolic;
        if self.fixes_infinity(tol) {
            // a21 = 0: infinity is always fixed; the second root is
            // a12 / (a22 - a11) unless the transform is parabolic.
            if parabolic {
                return Ok(vec![ComplexValue::Infinity]);
            }
            let second = self.a12 / (self.a22 - self.a11);
            return Ok(vec![ComplexValue::Infinity, ComplexValue::Finite(second)]);
        }
        let diff = self.a11 - self.a22;
        if parabolic {
            let z = diff / (2.0 * self.a21);
            return Ok(vec![ComplexValue::Finite(z)]);
        }
        // Roots of a21 z^2 + (a22 - a11) z - a12 = 0; the discriminant equals
        // tr^2 - 4 for det-1 matrices.
        let disc = (self.trace() * self.trace() - 4.0).sqrt();
        let z1 = (diff + disc) / (2.0 * self.a21);
        let z2 = (diff - disc) / (2.0 * self.a21);
        let mut pts = [z1, z2];
        pts.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        Ok(vec![
            ComplexValue::Finite(pts[0]),
            ComplexValue::Finite(pts[1]),
        ])
    }

    /// Entries as nested `[re, im]` pairs, the JSON wire layout.
    pub fn to_wire(&self) -> [[[f64; 2]; 2]; 2] {
        [
            [[self.a11.re, self.a11.im], [self.a12.re, self.a12.im]],
            [[self.a21.re, self.a21.im], [self.a22.re, self.a22.im]],
        ]
    }

    /// Builds from the JSON wire layout, normalizing as [`MoebiusTransform::new`].
    pub fn from_wire(m: [[[f64; 2]; 2]; 2]) -> Result<MoebiusTransform, MoebiusError> {
        let e = |i: usize, j: usize| Complex64::new(m[i][j][0], m[i][j][1]);
        MoebiusTransform::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// Applies the transform to a boundary point, with projective handling of
    /// infinity and vanishing denominators.
    pub fn apply(&self, z: ComplexValue) -> ComplexValue {
        match z {
            ComplexValue::Infinity => {
                if self.a21.norm() <= CANON_ZERO_FACTOR * self.entry_scale() {
                    ComplexValue::Infinity
                } else {
                    ComplexValue::Finite(self.a11 / self.a21)
                }
            }
            ComplexValue::Finite(z) => {
                let num = self.a11 * z + self.a12;
                let den = self.a21 * z + self.a22;
                // Cancellation test: den counts as zero relative to the
                // magnitudes entering it.
                let den_scale = self.a21.norm() * z.norm() + self.a22.norm();
                if den.norm() <= CANON_ZERO_FACTOR * den_scale.max(1.0) {
                    ComplexValue::Infinity
                } else {
                    ComplexValue::Finite(num / den)
                }
            }
        }
    }
}

impl fmt::Display for MoebiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

impl std::ops::Mul for MoebiusTransform {
    type Output = MoebiusTransform;

    fn mul(self, rhs: MoebiusTransform) -> MoebiusTransform {
        self.compose(&rhs)
    }
}

/// Wire format: `{"m": [[[re,im],[re,im]],[[re,im],[re,im]]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    m: [[[f64; 2]; 2]; 2],
}

impl Serialize for MoebiusTransform {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr { m: self.to_wire() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MoebiusTransform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        MoebiusTransform::from_wire(repr.m).map_err(|err| D::Error::custom(err.to_string()))
    }
}
