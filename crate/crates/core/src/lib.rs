//! Spacetime algebra, orthonormal-frame geometry, Killing symmetry checks
//! and energy-momentum identities, evaluated numerically with exact jets.

pub mod catalog;
pub mod clifford;
pub mod energy;
pub mod expr;
pub mod geometry;
pub mod jet;
pub mod report;
pub mod selftest;
pub mod spec;
pub mod suite;
pub mod symmetry;
