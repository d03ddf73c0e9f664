//! Exact checker for colouring arguments in 3-space: red unit-distance pairs
//! against blue unit-step arithmetic progressions.

pub mod algebra;
pub mod certs;
pub mod color;
pub mod deduction;
pub mod geometry;
pub mod lattice;
pub mod report;

pub use color::Color;
