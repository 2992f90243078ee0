//! Exact computer-algebra toolkit for re-checking the finite computations behind a
//! characteristic-7 stable degeneration of a quintic surface.
//!
//! The layers build on each other: [`arith`] (coefficient rings), [`poly`] (sparse
//! polynomials and their text grammar), [`linalg`] (exact linear systems), [`curve`]
//! (local plane-curve analysis), [`linser`] (linear series on ℙ¹×ℙ¹), [`picard`]
//! (divisor-class lattices), and [`scenarios`], which ties them to the concrete data.

pub mod arith;
pub mod curve;
pub mod linalg;
pub mod linser;
pub mod picard;
pub mod poly;
pub mod scenarios;

pub use arith::{FieldElem, RingDescriptor};
pub use poly::{MPoly, VarRegistry};
