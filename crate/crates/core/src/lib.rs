//! Word algebras for q-analogues of multiple zeta values.
//!
//! The crate models the algebra of words over `{xi, z1, z2, ...}` with
//! coefficients in `Q[h]`, its harmonic, integral shuffle and star products,
//! numerical evaluation of the associated q-series and q-polylogarithms, and
//! exact computation of the spaces of linear relations they generate.

pub mod arith;
pub mod checks;
pub mod element;
pub mod error;
pub mod linalg;
pub mod parse;
pub mod products;
pub mod qeval;
pub mod relations;
pub mod space;
pub mod word;

pub use arith::{HPoly, Rational, Scalar};
pub use element::{AElement, Element, XElement};
pub use error::{Error, Result};
pub use space::Space;
pub use word::{ALetter, AWord, Index, Monomial, Word, XLetter, XWord};
