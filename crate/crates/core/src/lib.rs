//! Exact computer algebra for linear differential equations y' = Ay over the
//! rational function fields Q(z) and Q(i)(z).
//!
//! The crate computes rational (flat) solutions of Fuchsian systems, invariant
//! symmetric bilinear forms and their signatures under a chosen ordering of
//! Q(z), order-2 Galois cocycles (validation, Hilbert-90 certificates, twisted
//! forms, center lifts), Lie-algebra valued equation generators, and a rank-1
//! radical analyzer that decides ordering compatibility of the candidate
//! solution fields.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod classify;
pub mod cohomology;
pub mod diffmod;
pub mod expr;
pub mod factor;
pub mod forms;
pub mod groups;
pub mod mat;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod sturm;

pub use diffmod::{rational_solutions, DiffModule, FlatBasis, SolverBounds};
pub use forms::Signature;
pub use groups::GroupSpec;
pub use mat::Mat;
pub use poly::Poly;
pub use ratfunc::{OrderingSpec, RatFunc};
pub use scalar::{Base, Field, GaussRational, Rational, Scalar};
