//! Geometry of immersed thrice-punctured spheres in cusped hyperbolic
//! 3-manifolds: Moebius-transformation algebra, parabolic pants
//! representations, the one-parameter Whitehead-link family, horoball
//! packing in upper half-space, and a registry of numerically verified
//! quantitative claims.

pub mod horoball;
pub mod moebius;
pub mod pantsrep;
pub mod report;
pub mod svg;
pub mod tol;
pub mod verify;
pub mod whitehead;

pub use moebius::{ComplexValue, IsometryClass, IsometryTag, MoebiusError, MoebiusTransform};
pub use tol::Tol;
