//! Exact symbolic tensor calculus on graded bundles.

pub mod calculus;
pub mod chart;
pub mod checkers;
pub mod error;
pub mod lifts;
pub mod linalg;
pub mod battery;
pub mod oracle;
pub mod poly;
pub mod random;
pub mod tensor;

pub use chart::{Chart, Degree, GradingKind};
pub use error::{Error, Result};
pub use poly::{int, rat, Monomial, Poly, Rational, Var};
pub use tensor::{BlockSymmetry, Index, Symmetry, TensorField};
