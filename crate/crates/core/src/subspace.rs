//! Subspaces of `K^N` held in canonical RREF form.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::DenseMatrix;

/// A subspace of `K^ambient_dim`. The basis matrix is the RREF of any
/// spanning set with zero rows removed, so two subspaces are equal iff
/// their basis matrices are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorSubspace {
    field: Field,
    ambient_dim: usize,
    basis: DenseMatrix,
}

impl VectorSubspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        VectorSubspace {
            field,
            ambient_dim,
            basis: DenseMatrix::zeros(field, 0, ambient_dim),
        }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        VectorSubspace {
            field,
            ambient_dim,
            basis: DenseMatrix::identity(field, ambient_dim),
        }
    }

    pub fn span(field: Field, ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        Self::from_row_matrix(&DenseMatrix::from_rows(field, ambient_dim, vectors))
    }

    /// Row space of `m`.
    pub fn from_row_matrix(m: &DenseMatrix) -> Self {
        let r = m.rref();
        VectorSubspace {
            field: m.field(),
            ambient_dim: m.cols(),
            basis: r.reduced.block(0, r.rank, 0, m.cols()),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical RREF basis, one vector per row.
    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Pivot (leading one) position of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("RREF rows are nonzero")
            })
            .collect()
    }

    fn check_compatible(&self, other: &VectorSubspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Membership by reduction against the RREF basis.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length");
        let mut rest = v.to_vec();
        for (i, p) in self.pivots().into_iter().enumerate() {
            if rest[p].is_zero() {
                continue;
            }
            let c = rest[p].clone();
            for (x, b) in rest.iter_mut().zip(self.basis.row(i)) {
                *x = &*x - &(&c * b);
            }
        }
        rest.iter().all(Scalar::is_zero)
    }

    pub fn member(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: v.len(),
            });
        }
        Ok(self.contains(v))
    }

    pub fn sum(&self, other: &VectorSubspace) -> Result<VectorSubspace> {
        self.check_compatible(other)?;
        Ok(Self::from_row_matrix(&self.basis.stack(&other.basis)))
    }

    /// `V ∩ W` from the kernel of `[V^t | -W^t]`: a kernel vector `(a, b)`
    /// gives the common element `a V = b W`.
    pub fn intersect(&self, other: &VectorSubspace) -> Result<VectorSubspace> {
        self.check_compatible(other)?;
        let dv = self.dim();
        let neg_w = other.basis.scale(&-self.field.one());
        let system = self.basis.transpose().augment(&neg_w.transpose());
        let kernel = system.kernel();
        let vectors: Vec<Vec<Scalar>> = kernel
            .basis_vectors()
            .into_iter()
            .map(|coeffs| {
                let a = DenseMatrix::from_rows(self.field, dv, &[coeffs[..dv].to_vec()]);
                (&a * &self.basis).into_entries()
            })
            .collect();
        Ok(Self::span(self.field, self.ambient_dim, &vectors))
    }

    pub fn equals(&self, other: &VectorSubspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self == other)
    }

    pub fn is_subspace_of(&self, other: &VectorSubspace) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// Whether every basis vector is a standard unit vector, i.e. the space
    /// is a coordinate subspace.
    pub fn is_coordinate_subspace(&self) -> bool {
        (0..self.dim()).all(|i| self.basis.row(i).iter().filter(|x| !x.is_zero()).count() == 1)
    }

    /// Coordinates `i` on which some vector of the space is nonzero.
    pub fn support(&self) -> Vec<bool> {
        (0..self.ambient_dim)
            .map(|j| (0..self.dim()).any(|i| !self.basis[(i, j)].is_zero()))
            .collect()
    }
}
