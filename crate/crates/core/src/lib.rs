//! Quaternionic indefinite linear algebra.
//!
//! The crate builds up, layer by layer, the finite-dimensional machinery of
//! indefinite inner product spaces over the quaternions:
//!
//! * [`quat`] — scalar arithmetic in the division algebra `H`;
//! * [`matrix`] — dense quaternionic matrices, the complex adjoint embedding
//!   and a Hermitian eigensolver built on it;
//! * [`space`] — Gram-matrix inner product spaces, fundamental
//!   decompositions and the fundamental symmetry;
//! * [`subspace`] — orthogonal companions, ortho-complementation criteria,
//!   classification and projections;
//! * [`norms`] — quadratic semi-norms, Minkowski functionals, polar norms,
//!   the Gram operator, the Mackey seminorm and the self-polar iteration;
//! * [`krein`] — Krein-space verification, the quaternionic Stein equation
//!   and the scaffold showing that a uniformly positive subspace is
//!   ortho-complemented;
//! * [`io`] — the JSON matrix format shared with the CLI.
//!
//! Everything is pure and immutable: values can be shared or sent between
//! threads freely.

pub mod cmatrix;
pub mod error;
pub mod io;
pub mod krein;
pub mod matrix;
pub mod norms;
pub mod quat;
pub mod space;
pub mod subspace;

pub use error::{Error, Result};
pub use matrix::{HermEig, QMatrix};
pub use quat::Quaternion;
pub use space::{
    Definiteness, FundamentalDecomposition, InnerProductSpace, Signature, VectorClass,
};
pub use subspace::{
    KansasCheck, OrthoCertificate, Subspace, SubspaceClass, SubspaceReport,
};
