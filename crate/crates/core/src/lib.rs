//! Exact analysis of Z-periodic piecewise-linear cut-generating functions.
//!
//! The core types are generic over an exact [`Scalar`]; the aliases below fix
//! the usual choices.
//!
//! ```
//! use cutgen::{compendium, analysis, Rational};
//! use cutgen::scalar::Scalar;
//!
//! let pi = compendium::gmic(&Rational::ratio(4, 5)).unwrap();
//! assert!(analysis::minimality_test(&pi, None).unwrap().is_minimal);
//! ```

pub mod analysis;
pub mod compendium;
pub mod deltap;
pub mod error;
pub mod json;
pub mod linalg;
pub mod pwl;
pub mod render;
pub mod scalar;
pub mod union_find;

pub use error::{Error, Result};
pub use pwl::{LimitTriple, PiecewiseLinear, Side};
pub use scalar::Scalar;
pub use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Machine-word rationals; fast, but overflow panics.
pub type SmallRational = num_rational::Ratio<i64>;

pub type PiecewiseFunction = PiecewiseLinear<Rational>;
pub type Face = deltap::Face<Rational>;
pub type Triple = deltap::Triple<Rational>;
pub type IntervalOrPoint = deltap::IntervalOrPoint<Rational>;
pub type VertexSign = deltap::VertexSign<Rational>;
pub type MinimalityReport = analysis::MinimalityReport<Rational>;
pub type ExtremalityReport = analysis::ExtremalityReport<Rational>;
pub type AdditiveFaceSet = analysis::AdditiveFaceSet<Rational>;
pub type CoveredComponents = analysis::CoveredComponents<Rational>;
