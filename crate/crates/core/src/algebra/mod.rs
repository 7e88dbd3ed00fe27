//! Exact scalars, polynomials, Weil-algebra elements and linear algebra.

pub mod field;
pub mod linalg;
pub mod polynomial;
pub mod rational;
pub mod weil;

pub use field::{FieldId, Scalar};
pub use polynomial::{Monomial, Polynomial};
pub use rational::Rat;
pub use weil::{merge_sign, Ambient, ExtMask, WeilElement};
