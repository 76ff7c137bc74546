//! Exact and certified real arithmetic.
//!
//! [`IntPolynomial`] carries integer polynomials; [`roots`] isolates their
//! real roots and certifies disks around complex ones. [`AlgebraicNumber`]
//! is a real root with its minimal polynomial, [`FieldElem`] an element of a
//! simple number field, and [`BigReal`] a midpoint-radius ball.

mod bigreal;
mod field;
mod number;
mod poly;
mod relation;
pub mod roots;

pub use bigreal::BigReal;
pub use field::{FieldElem, NumberField};
pub use number::{is_irreducible, is_pisot, AlgebraicNumber, MAX_DEGREE};
pub use poly::{power_polynomial, IntPolynomial, SturmChain};
pub use relation::{log_ratio, multiplicative_relation, Relation, DEFAULT_SEARCH_BOUND};
pub use roots::{isolate_real_roots, ComplexPair, RealRoot, RootIsolation};

