//! Temperley-Lieb recoupling, lattice picture calculus and a local-Hamiltonian
//! anyonic medium on the punctured disk.

pub mod cyclo;
pub mod error;
pub mod functor;
pub mod lattice;
pub mod linalg;
pub mod medium;
pub mod quad;
pub mod scalar;
pub mod skein;
pub mod symbolic;

pub use error::{Error, Result};
pub use scalar::Coefficient;

use num_rational::BigRational;

/// Exact cyclotomic number with arbitrary-precision rational coefficients.
pub type CycloNum = cyclo::Cyclo<BigRational>;

/// Kauffman level data over exact rationals.
pub type Level = skein::Kauffman<BigRational>;
/// Exact skein element.
pub type Skein = skein::SkeinElement<BigRational>;
