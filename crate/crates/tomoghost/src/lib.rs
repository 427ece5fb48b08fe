//! Switching components (ghosts) in the integer lattice.
//!
//! A discrete X-ray of a finite point set counts the points on each lattice
//! line parallel to a given direction. Two distinct sets with identical
//! X-rays in every direction of a prescribed set form a *switching
//! component* (a *ghost*). This crate provides:
//!
//! * exact X-ray computation and tomographic-equivalence testing ([`xray`]),
//! * the classical hypercube-projection and regular-polygon ghost
//!   constructions, coprime direction selection and census ([`constructions`]),
//! * arbitrary-precision pigeonhole counting certificates for the existence
//!   of ghosts on finite grids ([`bounds`]),
//! * exhaustive backtracking oracles: minimum ghost size, uniqueness of
//!   reconstruction, lattice U-gon checking ([`search`]),
//! * conversion of planar ghosts into Prouhet-Tarry-Escott solutions
//!   ([`pte`]).
//!
//! All arithmetic is exact (integers, big integers, rationals); floating
//! point appears only in clearly marked diagnostic quantities.

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod lattice;
pub mod pte;
pub mod search;
pub mod xray;

pub use error::Error;
pub use lattice::{Direction, DirectionSet, Grid, Point, PointConfiguration};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
