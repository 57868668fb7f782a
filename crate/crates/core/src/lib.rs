//! Type II multiple orthogonal polynomials of Charlier and Meixner type on
//! an r-star, in exact Gaussian-rational or arbitrary-precision complex
//! arithmetic.
//!
//! Every polynomial is stored in the variable `t = z^r`; the mass points
//! `z = k^(1/r) omega^j` enter all sums only through the lattice value `k`.

pub mod analysis;
pub mod cli;
pub mod constructors;
pub mod error;
pub mod measures;
pub mod numeric;
pub mod poly;
pub mod recurrence;

pub use error::{Error, Result};
pub use measures::{CharlierParams, Family, FamilyParams, MeixnerParams};
pub use numeric::{Coeff, ExactScalar, PrecisionConfig, Scalar};
pub use poly::{MultiIndex, PolyT, StarPolynomial};
