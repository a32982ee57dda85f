//! Computational toolkit for small covers of simple cells, the right-angled
//! Coxeter semidirect machine, universal cycle realization over the
//! permutahedron, and spherical fine/sparse map synthesis.
//!
//! Every construction emits a checkable certificate: degrees are recounted
//! from signed preimages, covers are re-verified cell by cell, and the
//! permutahedron sparseness inequality is certified in exact arithmetic.

pub mod coxeter;
pub mod gf2;
pub mod io;
pub mod permutahedron;
pub mod realization;
pub mod simplicial;
pub mod small_cover;
pub mod sphere_maps;

mod exact;
mod perm;

pub use permutahedron::OmegaSet;
pub use simplicial::{AbstractComplex, OrientedPseudoManifold, SimplicialMap, VertexColoring};
