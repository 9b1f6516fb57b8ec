//! Exact computations for self-induced niltranslations and nilflow
//! sections on the three-dimensional Heisenberg group.

pub mod scalar;
pub mod factorization;
pub mod freegroup;
pub mod heisenberg;
pub mod dynamics;
pub mod sampling;
pub mod verify;
