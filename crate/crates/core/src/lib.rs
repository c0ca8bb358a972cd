//! Exact arithmetic for valued Newton polygon subdivisions of plane curves:
//! p-adic lifts, lower-hull faces, residue systems over finite fields,
//! canonical jumps and local linear algebra over Z_(p).

pub mod dvrlin;
pub mod error;
pub mod ff;
pub mod ff2;
pub mod jumps;
pub mod parse;
pub mod polytope;
pub mod regularity;
pub mod report;
pub mod rat;

pub use error::{Error, Result};
pub use rat::{ExtRat, Rat};
