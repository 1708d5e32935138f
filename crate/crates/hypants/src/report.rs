//! Claim reports: the machine-readable record of each verified statement.
//!
//! A [`ClaimReport`] names the claim, states it in one line, lists the
//! computed quantities, and carries a verdict. Quantities that come from the
//! literature rather than from computation here are labelled with a
//! provenance string and force the verdict [`Verdict::AssumedConstant`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    AssumedConstant,
}

/// A named computed quantity: real, complex (as `[re, im]`), or a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportedValue {
    Real(f64),
    Complex([f64; 2]),
    Text(String),
}

impl From<f64> for ReportedValue {
    fn from(x: f64) -> ReportedValue {
        ReportedValue::Real(x)
    }
}

impl From<Complex64> for ReportedValue {
    fn from(z: Complex64) -> ReportedValue {
        ReportedValue::Complex([z.re, z.im])
    }
}

impl From<&str> for ReportedValue {
    fn from(s: &str) -> ReportedValue {
        ReportedValue::Text(s.to_string())
    }
}

/// Record of a single verified claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub id: String,
    /// One-line statement of what is being checked.
    pub anchor: String,
    /// Named quantities entering the check, keyed deterministically.
    pub computed: BTreeMap<String, ReportedValue>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ClaimReport {
    /// Starts a report with the claim's registered statement and a
    /// provisional pass verdict.
    pub fn new(id: &str, tolerance: f64) -> ClaimReport {
        ClaimReport {
            id: id.to_string(),
            anchor: statement_for(id).unwrap_or("").to_string(),
            computed: BTreeMap::new(),
            tolerance,
            verdict: Verdict::Pass,
        }
    }

    pub fn record(mut self, name: &str, value: impl Into<ReportedValue>) -> ClaimReport {
        self.computed.insert(name.to_string(), value.into());
        self
    }

    /// Downgrades the verdict to fail when `ok` is false; keeps any earlier
    /// fail sticky.
    pub fn check(mut self, ok: bool) -> ClaimReport {
        if !ok {
            self.verdict = Verdict::Fail;
        }
        self
    }

    /// Marks a claim as resting on a cited constant rather than a
    /// recomputation. A failed check still wins: assumed never hides a
    /// broken precondition.
    pub fn assumed(mut self) -> ClaimReport {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::AssumedConstant;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub assumed: usize,
}

/// The full verification output: claims in registry order plus totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub claims: Vec<ClaimReport>,
    pub summary: Summary,
}

impl FullReport {
    pub fn from_claims(claims: Vec<ClaimReport>) -> FullReport {
        let mut summary = Summary {
            pass: 0,
            fail: 0,
            assumed: 0,
        };
        for claim in &claims {
            match claim.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::AssumedConstant => summary.assumed += 1,
            }
        }
        FullReport { claims, summary }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }
}

/// One-line statements for every registered claim, keyed by claim id. This
/// table is the single source for report `anchor` fields; a sync test checks
/// it against the registry.
pub const CLAIM_STATEMENTS: &[(&str, &str)] = &[
    (
        "trace-2-plus-2z",
        "The product of [[1,2],[0,1]] with [[1,0],[z,1]] has trace 2+2z, so a parabolic or trivial product forces z = 0 or z = -2.",
    ),
    (
        "rigid-normal-form",
        "A pants representation with all three peripheral images parabolic and distinct generator fixed points is conjugate to the pair [[1,2],[0,1]], [[1,0],[-2,1]].",
    ),
    (
        "q-relations",
        "The family Q(a) = [[1/a - a, a], [-a, a]] satisfies C1 Q^2 = Q^2 C2, and Q^-1 C1 Q commutes with C1 C2, for every nonzero a.",
    ),
    (
        "q-boundary-values",
        "Q(a) maps 0 to 1 and 1 to infinity for every nonzero a.",
    ),
    (
        "volume-whitehead",
        "The complete hyperbolic volume of the Whitehead link complement is four times Catalan's constant, 3.663862...",
    ),
    (
        "index-volume",
        "Half of 3.663862... is 1.831931..., strictly below the 2.0298 volume lower bound for cusped orientable hyperbolic 3-manifolds, so the Whitehead complement cannot cover any orientable manifold with degree larger than 1.",
    ),
    (
        "cusp-area-constant",
        "A maximal cusp cross-section of a cusped hyperbolic 3-manifold has area at least 3.35 (cited constant, not recomputed here).",
    ),
    (
        "horocycle-length-bound",
        "A slope on a maximal cusp boundary has length at least 1 (cited constant, not recomputed here).",
    ),
    (
        "tangent-product-4",
        "Two tangent horocycles arising from adjacent full-sized horoballs have length product exactly 4.",
    ),
    (
        "length-product-bound",
        "Expanding two disjoint horocycles until tangency multiplies the length product by e^(2 gap) with gap >= 0, so the original product is at most the tangent value 4.",
    ),
    (
        "delta-area-bound",
        "On a flat torus, |Delta(s1,s2)| * Area <= l(s1) * l(s2), with equality exactly for orthogonal geodesics.",
    ),
    (
        "parity-obstruction",
        "With c3 = -c1 - c2 in homology, Delta(c1,c2) + Delta(c1,c3) + Delta(c2,c3) = Delta(c1,c2); an even total combined with |Delta| <= 1 forces every pairwise intersection number to vanish.",
    ),
    (
        "b-range",
        "The two horocycle lengths a >= b on the cusp torus satisfy 1 <= b <= 2: at least 1 by the slope-length bound, at most 2 because b^2 <= ab <= 4.",
    ),
    (
        "straddle-branches",
        "A point avoiding the unit disks centered at multiples of a/2 and the radius-a/4 disks at the midpoints has |Im w| at least sqrt(1 - 4/a^2) when a >= 2 sqrt(2), and at least sqrt(1 - (a/4)^2) when a <= 2 sqrt(2).",
    ),
    (
        "special-config-2sqrt2",
        "Requiring b = 4/a together with b = 2 sqrt(1 - 4/a^2) pins a = 2 sqrt(2), b = sqrt(2), w = sqrt(2)/2 + i sqrt(2)/2, where the two strings of height-1/2 horoballs coincide and are tangent to their neighbors.",
    ),
    (
        "figure-eight-case",
        "The boundary case a = 4, b = 1, ab = 4 is realized by the figure-eight knot complement (cited identification; arithmetic preconditions checked here).",
    ),
    (
        "seen-area-quadratic",
        "(pi-1) t^2 - 2 pi t + 3 pi/2 has negative discriminant and positive minimum pi (pi-3) / (2 (pi-1)) at t = pi/(pi-1), so pi/2 + 4 pi (t/2 - 1/2)^2 <= t^2 has no positive solution t.",
    ),
];

pub fn statement_for(id: &str) -> Option<&'static str> {
    CLAIM_STATEMENTS
        .iter()
        .find(|(key, _)| *key == id)
        .map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_verdicts() {
        let claims = vec![
            ClaimReport::new("tangent-product-4", 1e-9),
            ClaimReport::new("cusp-area-constant", 1e-9).assumed(),
            ClaimReport::new("volume-whitehead", 1e-6).check(false),
        ];
        let report = FullReport::from_claims(claims);
        assert_eq!(report.summary.pass, 1);
        assert_eq!(report.summary.assumed, 1);
        assert_eq!(report.summary.fail, 1);
        assert!(report.has_failures());
    }

    #[test]
    fn check_is_sticky() {
        let claim = ClaimReport::new("tangent-product-4", 1e-9)
            .check(false)
            .check(true);
        assert_eq!(claim.verdict, Verdict::Fail);
    }

    #[test]
    fn statements_cover_known_ids() {
        assert!(statement_for("seen-area-quadratic").is_some());
        assert!(statement_for("no-such-claim").is_none());
    }

    #[test]
    fn report_json_shape() {
        let claim = ClaimReport::new("tangent-product-4", 1e-9)
            .record("product", 4.0)
            .record("z", Complex64::new(1.0, -2.0))
            .record("source", "computed");
        let report = FullReport::from_claims(vec![claim]);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"verdict\":\"pass\""));
        assert!(json.contains("\"product\":4.0"));
        assert!(json.contains("\"z\":[1.0,-2.0]"));
        assert!(json.contains("\"summary\":{\"pass\":1,\"fail\":0,\"assumed\":0}"));
    }

    #[test]
    fn assumed_constant_kebab_case() {
        let v = serde_json::to_string(&Verdict::AssumedConstant).unwrap();
        assert_eq!(v, "\"assumed-constant\"");
    }
}
