//! Boundary slopes of cusped 3-manifolds from ideal triangulations.
//!
//! The pipeline runs in five stages, each with its own module:
//!
//! 1. [`triangulation`]: parse a face-gluing table and compute edge classes.
//! 2. [`gluing`]: count shape-parameter edges per class and build the integer
//!    exponent matrix of the gluing equations.
//! 3. [`degeneration`]: for an index vector over `{0, 1, ∞}`, form the
//!    degeneration matrix and its vector of signed maximal minors, then apply
//!    the sign test that certifies an ideal point.
//! 4. [`peripheral`]: pair meridian and longitude exponent vectors with the
//!    direction vector of a certified ideal point to obtain valuations and a
//!    boundary slope.
//! 5. [`search`]: evaluate given index lists, or enumerate all `3^n` of them.
//!
//! [`families`] grows the two layered-solid-torus families one tetrahedron at
//! a time and checks their closed-form degeneration vectors.
//!
//! All arithmetic that feeds a sign decision is exact.

pub mod data;
pub mod degeneration;
pub mod error;
pub mod exact;
pub mod families;
pub mod gluing;
pub mod matrix;
pub mod peripheral;
pub mod search;
pub mod triangulation;

pub use degeneration::{
    degeneration_matrix, degeneration_vector, is_ideal_point, DegenerationIndex,
    DegenerationVector, IndexValue,
};
pub use error::{Error, Result};
pub use gluing::{EdgeSelector, ExponentMatrix, GluingSystem, ParamKind, RowOrder};
pub use matrix::IntMatrix;
pub use peripheral::{
    boundary_slope, direction_vector, valuations, wedge, PeripheralCurves, Slope, SlopeProblem,
    SlopeResult, Valuations,
};
pub use search::{exhaustive_search, verify_indices, SearchOptions, SearchReport};
pub use triangulation::{EdgeClass, Face, FaceGluing, Perm, Triangulation, VertexPair};
