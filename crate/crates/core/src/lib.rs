//! Exact computations on simplicial and crystallographic hyperplane
//! arrangements: chambers, reflections, Cartan matrices, Weyl groupoid
//! closures, localizations, bound checks, and a bounded rank-3 search.

pub mod catalog;
pub mod geometry;
pub mod groupoid;
pub mod io;
pub mod linalg;
pub mod localization;
pub mod rank2;
pub mod search;
pub mod verifier;
