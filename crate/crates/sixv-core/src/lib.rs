//! Stochastic six-vertex model in a half-infinite strip.
//!
//! Exact sampling of the path measure, evaluation of the symmetric rational
//! functions `F_λ` and `G^c_ν`, the difference operators `D^k_m` and their
//! contour-integral form, and the GUE-corners edge statistics.

pub mod asymptotics;
pub mod brute;
pub mod contour;
pub mod error;
pub mod gt;
pub mod numerics;
pub mod ops;
pub mod params;
pub mod sampler;
pub mod signature;
pub mod symm;
pub mod weights;

pub use error::{Error, Result};
pub use params::{delta_parameter, validate_params, ModelParams, Spin, Violation};
pub use signature::{extract_holes, height_function, Hole, HoleArray, PathCollection, Signature};
pub use weights::{conj_vertex_weight, vertex_weight, ArrowConfig};
pub use num_complex;
