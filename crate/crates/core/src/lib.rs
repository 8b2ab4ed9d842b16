//! Exact toroidal resolution of plane curve singularities over ℚ.
//!
//! A curve is resolved by iterated regularized Newton modifications. The
//! result is a fan tree decorated with indices, exponents and contact
//! complexities, from which log-discrepancies, divisorial valuations, jumping
//! numbers and monomial presentations of multiplier ideals are read off.

pub mod error;
pub mod json;
pub mod lattice;
pub mod multiplier;
pub mod newton;
pub mod oracles;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod resolution;
pub mod tree;
pub mod upoly;

pub use error::{Error, Result};
pub use lattice::{Chart, Cone2, Fan2, LatticeVec};
pub use newton::NewtonPolygon;
pub use poly::BiPoly;
pub use rat::{Rat, Slope};
pub use multiplier::{ideal_presentation, jumping_numbers, lct, shift_by_period, xi_of_monomial, IdealPresentation, Monomial};
pub use resolution::{resolve, Curve, Factor, Resolution};
pub use tree::{FanTree, ValuationTable};
