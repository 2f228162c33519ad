//! Decompositions of binomial ideals in polynomial rings over exact fields.

pub mod binoccular;
pub mod congruence;
pub mod error;
pub mod fiber;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod irreducible;
pub mod lattice;
pub mod linalg;
pub mod mesoprimary;
pub mod parse;
pub mod poly;
pub mod render;
pub mod soccular;
pub mod verify;

pub use error::{Error, Result};
pub use fiber::{Fiber, MonoidPrime};
pub use field::{Field, Fp, Rational};
pub use ideal::Ideal;
pub use poly::{Exponent, Polynomial, TermOrder};

pub type QIdeal = Ideal<Rational>;
pub type FpIdeal = Ideal<Fp>;
pub type QPolynomial = Polynomial<Rational>;
pub type FpPolynomial = Polynomial<Fp>;
