//! Dynamical experiments: strip maps and their renormalization, first
//! returns of eigenflows to sections, the skew-product counterexamples, and
//! equidistribution diagnostics.

pub mod counterexample;
pub mod diagonal;
pub mod equidistribution;
pub mod golden;
pub mod section;
pub mod torus;

pub use torus::{
    first_return, psi, psi_identity_check, renormalization_check, strip_family, PiecewiseTorusMap,
    TorusBranch, TorusPoint2,
};
