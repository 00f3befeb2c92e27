//! Lightlike geometry of codimension-two spacelike surfaces in
//! Lorentz-Minkowski 4-space.

// Tensor code indexes several arrays with the same loop variables, and
// `!(x > tol)` comparisons are meant to reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod graph;
pub mod grid;
pub mod minkowski;
pub mod normalized;
pub mod series;
pub mod special;
pub mod surface;
pub mod variation;

pub use error::{GeometryError, ParseError};
pub use minkowski::{CausalClass, Vec4};
