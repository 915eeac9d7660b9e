//! Mechanical re-derivation of the classification of simple transitive
//! 2-representations for 2-categories of projective functors over monomial
//! quiver algebras, by exhaustive integer-matrix search.
//!
//! The pipeline is: parse a quiver with zero relations, build the
//! path-counting tables ([`algebra`]), enumerate the candidate matrices of
//! the big projective functor ([`roots`]), split each candidate into a
//! family of component matrices respecting the composition table
//! ([`decomp`]), and decide which families can come from an actual
//! 2-representation by solving for the Cartan data of the acting algebra
//! ([`classify`]). Everything is exact integer arithmetic; permutation
//! orbits are handled in [`canonical`].

pub mod algebra;
pub mod canonical;
pub mod classify;
pub mod corpus;
pub mod decomp;
pub mod matrix;
pub mod report;
pub mod roots;
pub mod selftest;

/// Concrete scalar used by the pipeline. All quantities are small (bounded
/// by dim(A) and its squares), so a fixed-width signed integer is exact.
pub type Int = i64;
/// Concrete matrix type used by the pipeline.
pub type Mat = matrix::Matrix<Int>;
