//! Relative tolerance used by every approximate comparison in the crate.

use num_complex::Complex64;

/// Environment variable that overrides the default tolerance.
pub const EPS_ENV_VAR: &str = "HYPANTS_EPS";

/// Relative comparison tolerance.
///
/// Two values are considered equal when their distance is at most
/// `eps * max(1, |x|, |y|)`, so the tolerance acts absolutely near the
/// unit scale and relatively for large magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol(pub f64);

impl Tol {
    pub const DEFAULT: Tol = Tol(1e-9);

    pub fn new(eps: f64) -> Tol {
        Tol(eps)
    }

    /// Reads `HYPANTS_EPS` from the environment, falling back to the default.
    pub fn from_env() -> Tol {
        match std::env::var(EPS_ENV_VAR) {
            Ok(s) => s.parse::<f64>().map(Tol).unwrap_or(Tol::DEFAULT),
            Err(_) => Tol::DEFAULT,
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }

    /// Absolute threshold for comparing values of the given magnitude scale.
    pub fn abs_for(self, scale: f64) -> f64 {
        self.0 * scale.abs().max(1.0)
    }

    pub fn real_eq(self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.0 * x.abs().max(y.abs()).max(1.0)
    }

    pub fn complex_eq(self, x: Complex64, y: Complex64) -> bool {
        (x - y).norm() <= self.0 * x.norm().max(y.norm()).max(1.0)
    }

    /// True when `x` is negligible at the given scale.
    pub fn is_zero_at(self, x: f64, scale: f64) -> bool {
        x.abs() <= self.abs_for(scale)
    }
}

impl Default for Tol {
    fn default() -> Tol {
        Tol::DEFAULT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_unit_scale_is_absolute() {
        let tol = Tol(1e-9);
        assert!(tol.real_eq(0.0, 5e-10));
        assert!(!tol.real_eq(0.0, 5e-9));
    }

    #[test]
    fn large_scale_is_relative() {
        let tol = Tol(1e-9);
        assert!(tol.real_eq(1e12, 1e12 + 100.0));
        assert!(!tol.real_eq(1e12, 1e12 + 1e5));
    }

    #[test]
    fn complex_eq_uses_norm() {
        let tol = Tol(1e-9);
        let a = Complex64::new(3.0, 4.0);
        assert!(tol.complex_eq(a, a + Complex64::new(0.0, 2e-9)));
        assert!(!tol.complex_eq(a, a + Complex64::new(1e-6, 0.0)));
    }
}
