//! Seeded random matrices and subspaces for tests, benches and the CLI.

use rand::Rng;

use crate::field::{Field, Scalar};
use crate::matrix::DenseMatrix;
use crate::matspace::MatrixSubspace;

/// Rational entries are drawn from `-RATIONAL_SPREAD..=RATIONAL_SPREAD`.
const RATIONAL_SPREAD: i64 = 3;

pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        Field::Rationals => field.from_i64(rng.gen_range(-RATIONAL_SPREAD..=RATIONAL_SPREAD)),
    }
}

/// Each entry is nonzero-candidate with probability `density`, otherwise 0.
pub fn random_matrix<R: Rng + ?Sized>(field: Field, n: usize, density: f64, rng: &mut R) -> DenseMatrix {
    let entries = (0..n * n)
        .map(|_| {
            if rng.gen_bool(density) {
                random_scalar(field, rng)
            } else {
                field.zero()
            }
        })
        .collect();
    DenseMatrix::from_entries(field, n, n, entries)
}

/// A subspace of `Mat_n(K)` of exactly dimension `dim`, spanned by sparse
/// random matrices.
pub fn random_subspace<R: Rng + ?Sized>(field: Field, n: usize, dim: usize, rng: &mut R) -> MatrixSubspace {
    assert!(dim <= n * n, "dimension {dim} exceeds {}", n * n);
    let mut space = MatrixSubspace::zero(field, n);
    while space.dim() < dim {
        let m = random_matrix(field, n, 0.4, rng);
        if !space.contains(&m) {
            space = space
                .sum(&MatrixSubspace::span(field, n, &[m]))
                .expect("same field and size");
        }
    }
    space
}

pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> DenseMatrix {
    loop {
        let m = random_matrix(field, n, 1.0, rng);
        if m.invert().is_ok() {
            return m;
        }
    }
}
