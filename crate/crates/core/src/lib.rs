//! Computational machinery for elliptic polar spaces `Q^-(2r+1, q)` and
//! their m-ovoids.
//!
//! The crate builds finite fields and projective geometries from scratch,
//! enumerates the points, lines and generators of elliptic quadrics,
//! verifies (weighted) m-ovoids and 1-systems, evaluates the modular
//! admissibility filter and lower bounds for m, constructs ovoids by field
//! reduction, and runs deterministic pruned backtracking searches.
//!
//! Everything is exact integer / finite-field arithmetic; there is no
//! floating point anywhere. The crate is `no_std` (with `alloc`): IO, file
//! formats and the command line front end live in the companion crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod admissibility;
pub mod constructions;
pub mod gf;
mod linalg;
pub mod ovoid;
pub mod projgeom;
pub mod quadric;
pub mod search;
