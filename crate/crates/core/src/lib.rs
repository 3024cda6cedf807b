//! Computational tools for mod-`p` Steenrod operations, periodicity of
//! finite graded cohomology rings, and fixed-point combinatorics of torus
//! isotropy representations.

pub mod corpus;
pub mod field;
pub mod linalg;
pub mod periodicity;
pub mod rings;
pub mod steenrod;
pub mod suites;
pub mod web;
