//! Multidegrees of the gradient-of-determinant map on linear spaces of
//! matrices, and the invariants they encode: chromatic polynomials, degrees
//! and ML-degrees of Gaussian linear concentration models, Euler
//! characteristics of determinantal hypersurface complements, and counts
//! of quadrics through points and tangent to hyperplanes.

pub mod error;
pub mod graphcomb;
pub mod invariants;
pub mod linalg;
pub mod matspace;
pub mod multidegree;
pub mod poly;
pub mod rng;
pub mod tracker;

pub use error::{Error, Result};
