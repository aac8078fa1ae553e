//! Exact computer-algebra kernel.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`] — exact scalars: rationals, prime fields, rational functions;
//! * [`monomial`], [`ring`], [`poly`] — sparse multivariate polynomials over
//!   multi-block rings with lex/grevlex/elimination orders;
//! * [`matrix`] — deterministic exact row reduction;
//! * [`numpoly`] — integer-valued numerical polynomials in the binomial basis;
//! * [`groebner`] — reduced Gröbner bases, division, products, elimination,
//!   colon and saturation kernels;
//! * [`hilbert`] — graded dimensions, Hilbert polynomials, saturation with
//!   respect to the irrelevant ideal, greedy binomial representations;
//! * [`exterior`] — exterior algebra, Plücker coordinates, contractions,
//!   Grassmann relations, subspace recovery;
//! * [`hilbscheme`] — parameter-space data for saturated homogeneous ideals
//!   with a prescribed Hilbert polynomial, with the point/ideal dictionary;
//! * [`topology`] — finite Noetherian topologies: irreducibility,
//!   components, foundational rank, degree;
//! * [`pairs`] — the generic pair model: lambda functions, tame formulas
//!   and their evaluation, ordinal rank, formula emitters and rewrites.

pub mod catalog;
pub mod error;
pub mod exterior;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod hilbscheme;
pub mod matrix;
pub mod monomial;
pub mod numpoly;
pub mod pairs;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod topology;

pub use error::{Error, Result};
