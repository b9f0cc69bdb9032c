//! Polynomials generated by `(1 + B(z)t + A(z)t³)^(-α)`: coefficients,
//! zeros, the integral representation of `P_m(z)` on `(-∞, -4/27)` and the
//! limiting distribution of its zeros.

pub mod cubic;
pub mod curve;
pub mod density;
pub mod error;
pub mod gamma;
pub mod integral;
pub mod poly;
pub mod quad;
pub mod roots;
pub mod series;
pub mod winding;

pub use error::{Error, Result};
