//! Exact arithmetic for the polynomial family f_(m,p): finite fields,
//! plane orbits, zigzag representations, orders of appearance,
//! trinomial factorization degrees and Morgan-Voyce polynomials.

pub mod appearance;
pub mod arith;
pub mod dickson;
pub mod error;
pub mod fmp;
pub mod gf;
pub mod morganvoyce;
pub mod planes;
pub mod trinomials;
pub mod upoly;
pub mod zigzag;

pub use error::{Error, Result};
pub use gf::{make_field, FieldDesc, FieldElem, FieldTable, FiniteField, PrimeField};
pub use upoly::{DegreeMultiset, DensePoly, IntPoly};
