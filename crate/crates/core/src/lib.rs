//! Finite, checkable ingredients of sub-exponential complexity bounds for
//! triangle billiards.
//!
//! - [`geometry`]: triangles, kites and their unfoldings.
//! - [`enumeration`]: generalized diagonals by corridor search, with a
//!   brute-force oracle and the complexity table `P_n`.
//! - [`partitions`]: indexed partitions of a vertex sector, good-position
//!   triples and the ratio-jump searches.
//! - [`trigpoly`]: exact trigonometric polynomials in `(α, β)`, symbolic
//!   unfolded coordinates and area polynomials.
//! - [`measure`]: Monte Carlo estimates of sublevel-set measure.
//! - [`analysis`]: growth fits, the constants system, gap sequences and bound
//!   reports.

pub mod analysis;
pub mod enumeration;
pub mod geometry;
pub mod measure;
pub mod partitions;
pub mod real;
pub mod trigpoly;

pub use geometry::{make_triangle, AngleSpec, GeometryError, Point, TriangleShape, Vertex};
