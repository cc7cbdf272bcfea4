//! Exact computational algebra for Mathieu subspaces of full matrix algebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`], [`matrix`], [`subspace`]: prime fields and rationals, dense
//!   exact matrices, canonical (RREF) subspaces.
//! * [`poly`]: sparse multivariate polynomials and exact generic rank of
//!   polynomial matrices over the rational function field.
//! * [`matspace`]: subspaces of `Mat_n(K)`, trace-dual constraint spaces,
//!   the column filtration and its binary profile.
//! * [`normalize`]: the conjugation algorithm that puts a constraint space
//!   into normal form, and the rectangle-injectivity checker built on it.
//! * [`idempotent`]: affine families of block idempotents inside a subspace.
//! * [`mathieu`]: exhaustive finite-field semantics (power trajectories,
//!   radicals, the four Mathieu types, left ideals).
//!
//! Enumeration-heavy routines run on rayon when the `parallel` feature is
//! enabled (the default) and fall back to plain iterators otherwise; see
//! [`par::Exec`].

pub mod error;
pub mod field;
pub mod idempotent;
pub mod mathieu;
pub mod matrix;
pub mod matspace;
pub mod normalize;
pub mod par;
pub mod poly;
pub mod random;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use matrix::DenseMatrix;
pub use matspace::{BinaryProfile, MatrixSubspace};
pub use subspace::VectorSubspace;
