//! Small-cancellation group toolkit: presentations and pieces, Dehn's
//! algorithm, finite regions of Cayley graphs with geodesics and contours,
//! the contour/edge arrays `xi` and `eta`, and the vertex array `Phi` built
//! from them. All quantities are exact rationals.

pub mod arrays;
pub mod cayley;
pub mod error;
pub mod presentation;
pub mod properarray;
pub mod rational;
pub mod sparse;
pub mod wordproblem;

pub use error::{Error, Result};
pub use presentation::{Letter, Presentation, Word};
pub use rational::Q;
