//! Exact computations on the infinite wedge for the stationary Gromov-Witten
//! theory of the orbifold line P[r].
//!
//! Everything is exact: coefficients are arbitrary-precision rationals and
//! transcendental pieces (`x ln x`, `ln x`, `sqrt(2 pi)`, `1/Gamma`) stay symbolic.

pub mod bilinear;
pub mod error;
pub mod fock;
pub mod gw;
pub mod parallel;
pub mod partitions;
pub mod series;
pub mod special;
pub mod wave;
pub mod wedge;

pub use error::{Error, Result};
pub use series::{rat, int, Rational, TruncSeries, Var};
