//! Energy-momentum 3-forms, their conservation identities, the gravitational
//! superpotential and pseudo-tensor, and the mass surface integral.
//!
//! Matter stress is written 𝒯_a with 𝒯_{ab} = 𝒯_a·θ_b; the physical
//! densities are ⋆T^a = −⋆𝒯^a. Units have 8πG/c⁴ = 1.
//!
//! The mass integral depends on the chart: the same metric in other
//! coordinates can give a different value, and nothing here decides which one
//! is the physical mass.

mod em;
mod grav;
mod mass;

pub use em::*;
pub use grav::*;
pub use mass::*;
