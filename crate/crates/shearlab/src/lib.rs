//! Shear coordinates on the Farey tessellation.
//!
//! The crate is organized around the pipeline: exact Farey combinatorics
//! ([`farey`]) feed shear functions ([`shear`]) into the developing cocycle
//! ([`develop`]), whose output is certified by quasisymmetry functionals
//! ([`shear`]), bending diagnostics ([`qfcheck`]), and the crossing counter
//! ([`intersect`]). The [`surfaces`] module generates two concrete example
//! triangulations. All transformation algebra lives in [`mobius`].

pub mod develop;
pub mod farey;
pub mod intersect;
pub mod mobius;
pub mod qfcheck;
pub mod shear;
pub mod surfaces;
