//! Subspaces of `Mat_n(K)`, their trace duals, the column filtration
//! `C_0 ⊆ C_1 ⊆ ... ⊆ C_n` and its binary profile.
//!
//! Matrices are vectorized row-major: entry `(i, j)` is coordinate `i*n + j`.
//! Filtration levels and standard basis vectors `e_k` are 1-based in this
//! module's API, matching how the profile is usually written down; matrix
//! entries stay 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::DenseMatrix;
use crate::par::{self, Exec};
use crate::poly::generic_rank_of_action;
use crate::subspace::VectorSubspace;

/// A `K`-subspace of `Mat_n(K)` with canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixSubspace {
    n: usize,
    space: VectorSubspace,
}

pub fn vectorize(m: &DenseMatrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

pub fn unvectorize(field: Field, n: usize, v: &[Scalar]) -> DenseMatrix {
    DenseMatrix::from_entries(field, n, n, v.to_vec())
}

/// The standard basis vector `e_k` of `K^n`, 1-based.
pub fn unit_vector(field: Field, n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[k - 1] = field.one();
    v
}

fn check_level(k: usize, n: usize, lo: usize) -> Result<()> {
    if k < lo || k > n {
        return Err(Error::OutOfRange { index: k, lo, hi: n });
    }
    Ok(())
}

impl MatrixSubspace {
    pub fn span(field: Field, n: usize, matrices: &[DenseMatrix]) -> Self {
        let vectors: Vec<Vec<Scalar>> = matrices
            .iter()
            .map(|m| {
                assert!(m.rows() == n && m.cols() == n, "expected {n}x{n} matrices");
                vectorize(m)
            })
            .collect();
        MatrixSubspace {
            n,
            space: VectorSubspace::span(field, n * n, &vectors),
        }
    }

    pub fn from_vector_subspace(n: usize, space: VectorSubspace) -> Self {
        assert_eq!(space.ambient_dim(), n * n, "ambient dimension must be n^2");
        MatrixSubspace { n, space }
    }

    pub fn zero(field: Field, n: usize) -> Self {
        Self::from_vector_subspace(n, VectorSubspace::zero(field, n * n))
    }

    pub fn full(field: Field, n: usize) -> Self {
        Self::from_vector_subspace(n, VectorSubspace::full(field, n * n))
    }

    pub fn scalars(field: Field, n: usize) -> Self {
        Self::span(field, n, &[DenseMatrix::identity(field, n)])
    }

    /// The trace-zero hyperplane `H`.
    pub fn trace_zero(field: Field, n: usize) -> Self {
        Self::scalars(field, n).constraint_space()
    }

    /// `{M : rows of `constraints` applied to vec(M) vanish}`.
    pub fn from_linear_conditions(field: Field, n: usize, conditions: &[Vec<Scalar>]) -> Self {
        if conditions.is_empty() {
            return Self::full(field, n);
        }
        let a = DenseMatrix::from_rows(field, n * n, conditions);
        Self::from_vector_subspace(n, a.kernel())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn codim(&self) -> usize {
        self.n * self.n - self.dim()
    }

    pub fn vector_space(&self) -> &VectorSubspace {
        &self.space
    }

    pub fn basis_matrices(&self) -> Vec<DenseMatrix> {
        self.space
            .basis_vectors()
            .iter()
            .map(|v| unvectorize(self.field(), self.n, v))
            .collect()
    }

    pub fn contains(&self, m: &DenseMatrix) -> bool {
        self.space.contains(m.entries())
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&DenseMatrix::identity(self.field(), self.n))
    }

    pub fn sum(&self, other: &MatrixSubspace) -> Result<MatrixSubspace> {
        Ok(Self::from_vector_subspace(self.n, self.space.sum(&other.space)?))
    }

    pub fn intersect(&self, other: &MatrixSubspace) -> Result<MatrixSubspace> {
        Ok(Self::from_vector_subspace(
            self.n,
            self.space.intersect(&other.space)?,
        ))
    }

    pub fn is_subspace_of(&self, other: &MatrixSubspace) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    /// `self + K·I`.
    pub fn with_identity(&self) -> MatrixSubspace {
        self.sum(&Self::scalars(self.field(), self.n))
            .expect("same ring")
    }

    /// Whether every basis element has trace zero.
    pub fn is_traceless(&self) -> bool {
        self.basis_matrices().iter().all(|m| m.trace().is_zero())
    }

    /// `{C : tr(C M) = 0 for all M in self}`, via the Hadamard form
    /// `tr(CM) = sum_ij C_ij M_ji`: the coefficient vector of each
    /// condition is `vec(M^t)`.
    pub fn constraint_space(&self) -> MatrixSubspace {
        let rows: Vec<Vec<Scalar>> = self
            .basis_matrices()
            .iter()
            .map(|m| vectorize(&m.transpose()))
            .collect();
        Self::from_linear_conditions(self.field(), self.n, &rows)
    }

    /// `span{t^-1 M t : M in self}`.
    pub fn conjugate(&self, t: &DenseMatrix) -> Result<MatrixSubspace> {
        if t.rows() != self.n || t.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: t.rows(),
            });
        }
        let t_inv = t.invert()?;
        let images: Vec<DenseMatrix> = self
            .basis_matrices()
            .iter()
            .map(|m| &(&t_inv * m) * t)
            .collect();
        Ok(Self::span(self.field(), self.n, &images))
    }

    /// `C_k = {C in self : C e_{k+1} = ... = C e_n = 0}` for `0 <= k <= n`.
    pub fn filtration_level(&self, k: usize) -> Result<MatrixSubspace> {
        check_level(k, self.n, 0)?;
        let basis = self.basis_matrices();
        if k == self.n || basis.is_empty() {
            return Ok(self.clone());
        }
        // coefficients alpha with sum_i alpha_i B_i vanishing on columns > k
        let n = self.n;
        let field = self.field();
        let mut conditions = Vec::new();
        for row in 0..n {
            for col in k..n {
                conditions.push(basis.iter().map(|b| b[(row, col)].clone()).collect::<Vec<_>>());
            }
        }
        let a = DenseMatrix::from_rows(field, basis.len(), &conditions);
        let combos = a.kernel();
        let matrices: Vec<DenseMatrix> = combos
            .basis_vectors()
            .iter()
            .map(|alpha| {
                alpha
                    .iter()
                    .zip(&basis)
                    .fold(DenseMatrix::zeros(field, n, n), |acc, (c, b)| {
                        &acc + &b.scale(c)
                    })
            })
            .collect();
        Ok(Self::span(field, n, &matrices))
    }

    /// `span{C v : C in self}`.
    pub fn column_space(&self, v: &[Scalar]) -> Result<VectorSubspace> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let images: Vec<Vec<Scalar>> = self.basis_matrices().iter().map(|c| c.mul_vec(v)).collect();
        Ok(VectorSubspace::span(self.field(), self.n, &images))
    }

    /// `C_k e_k`.
    pub fn level_column_space(&self, k: usize) -> Result<VectorSubspace> {
        check_level(k, self.n, 1)?;
        self.filtration_level(k)?
            .column_space(&unit_vector(self.field(), self.n, k))
    }

    pub fn binary_profile(&self) -> BinaryProfile {
        binary_profile_with(self, Exec::default())
    }
}

/// The binary matrix `B_ij = dim e_i^t C_j e_j`, its column counts, the
/// dimensions `dim C_j e_j` and the generic dimensions `d_0..d_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryProfile {
    pub n: usize,
    /// `matrix[i][j]` is `B_{(i+1)(j+1)}`.
    pub matrix: Vec<Vec<u8>>,
    /// `b[j]` is `b_{j+1}`.
    pub b: Vec<usize>,
    /// `col_dims[j]` is `dim C_{j+1} e_{j+1}`.
    pub col_dims: Vec<usize>,
    /// `d[k]` for `k = 0..=n`.
    pub d: Vec<usize>,
}

impl BinaryProfile {
    /// `B_ij` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.matrix[i - 1][j - 1]
    }

    /// `b_j`, 1-based.
    pub fn b_of(&self, j: usize) -> usize {
        self.b[j - 1]
    }

    /// `dim C_j e_j`, 1-based.
    pub fn col_dim(&self, j: usize) -> usize {
        self.col_dims[j - 1]
    }

    /// `B_ij = 0` implies `B_i(j-1) = 0`.
    pub fn is_row_increasing(&self) -> bool {
        (1..=self.n).all(|i| (2..=self.n).all(|j| self.entry(i, j) == 1 || self.entry(i, j - 1) == 0))
    }

    /// `B_ij = 0` implies `B_(i+1)j = 0` whenever `i + 1 < j`.
    pub fn is_column_decreasing_above_diagonal(&self, j: usize) -> bool {
        (1..j.saturating_sub(1)).all(|i| self.entry(i, j) == 1 || self.entry(i + 1, j) == 0)
    }

    pub fn is_decreasing_above_diagonal(&self) -> bool {
        (1..=self.n).all(|j| self.is_column_decreasing_above_diagonal(j))
    }

    /// `b_j = dim C_j e_j = d_j` for every `j`.
    pub fn counts_match_generic(&self) -> bool {
        (1..=self.n).all(|j| self.b_of(j) == self.col_dim(j) && self.col_dim(j) == self.d[j])
    }
}

pub fn binary_profile_with(c_n: &MatrixSubspace, exec: Exec) -> BinaryProfile {
    let n = c_n.n();
    let field = c_n.field();
    let levels: Vec<(Vec<u8>, usize, usize)> = par::map(exec, (1..=n).collect(), |j| {
        let level = c_n.filtration_level(j).expect("level in range");
        let col = level
            .column_space(&unit_vector(field, n, j))
            .expect("vector length");
        let support: Vec<u8> = col.support().into_iter().map(u8::from).collect();
        (support, col.dim(), generic_rank_of_action(&level))
    });
    let mut matrix = vec![vec![0u8; n]; n];
    let mut col_dims = Vec::with_capacity(n);
    let mut d = vec![0];
    for (j, (support, dim, dk)) in levels.into_iter().enumerate() {
        for (i, s) in support.into_iter().enumerate() {
            matrix[i][j] = s;
        }
        col_dims.push(dim);
        d.push(dk);
    }
    let b = (0..n).map(|j| (0..n).map(|i| matrix[i][j] as usize).sum()).collect();
    BinaryProfile {
        n,
        matrix,
        b,
        col_dims,
        d,
    }
}

/// Top-right `r x (n-r)` block: the first `r` rows and last `n - r` columns.
pub fn rct(m: &DenseMatrix, r: usize) -> Result<DenseMatrix> {
    let n = m.rows();
    if r == 0 || r >= n {
        return Err(Error::OutOfRange {
            index: r,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    Ok(m.block(0, r, r, n))
}

pub fn is_rct_zero(m: &DenseMatrix, r: usize) -> Result<bool> {
    Ok(rct(m, r)?.is_zero())
}

/// `{C in space : rct_r(C) = 0}`.
pub fn rct_kernel(space: &MatrixSubspace, r: usize) -> Result<MatrixSubspace> {
    let n = space.n();
    let field = space.field();
    if r == 0 || r >= n {
        return Err(Error::OutOfRange {
            index: r,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    let mut conditions = Vec::new();
    for i in 0..r {
        for j in r..n {
            let mut row = vec![field.zero(); n * n];
            row[i * n + j] = field.one();
            conditions.push(row);
        }
    }
    space.intersect(&MatrixSubspace::from_linear_conditions(field, n, &conditions))
}

/// `dim_K span{C v : C in space}` without building the canonical subspace.
fn column_rank(basis: &[DenseMatrix], n: usize, field: Field, v: &[Scalar]) -> usize {
    if basis.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|c| c.mul_vec(v)).collect();
    DenseMatrix::from_columns(field, n, &cols).rank()
}

/// A vector `v` with `v_{k+1} = ... = v_n = 0` and `dim C_k v = d_k`
/// (and `v_k = 1` when `require_pivot_one`). Found by a lexicographic scan
/// of `S^k` where `S` holds the first `min(#K, max(d_k + 1, 2))` canonical
/// elements; the maximal-minor polynomial (times `x_k` in the pivot case)
/// is homogeneous, so such a grid cannot miss once `#K >= d_k`
/// (`> d_k` in the pivot case). Below that bound all of `K^k` is scanned
/// and `FieldTooSmall` is returned only if no vector works.
pub fn find_generic_vector(c_n: &MatrixSubspace, k: usize, require_pivot_one: bool) -> Result<Vec<Scalar>> {
    let n = c_n.n();
    check_level(k, n, 1)?;
    let field = c_n.field();
    let level = c_n.filtration_level(k)?;
    let d = generic_rank_of_action(&level);
    if d == 0 {
        return Ok(unit_vector(field, n, k));
    }
    let needed = if require_pivot_one { d + 1 } else { d };
    let guaranteed = field.has_at_least(needed);
    let grid = if guaranteed {
        field.canonical_elements((d + 1).max(2))
    } else {
        field.all_elements()?
    };
    let basis = level.basis_matrices();
    let mut idx = vec![0usize; k];
    loop {
        let mut v = vec![field.zero(); n];
        for (slot, &i) in v.iter_mut().zip(&idx) {
            *slot = grid[i].clone();
        }
        let pivot_ok = !require_pivot_one || !v[k - 1].is_zero();
        if pivot_ok && column_rank(&basis, n, field, &v) == d {
            if require_pivot_one {
                let s = v[k - 1].inv();
                v = v.iter().map(|x| x * &s).collect();
            }
            return Ok(v);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                assert!(
                    !guaranteed,
                    "no vector attains the generic rank {d} on the grid at level {k}; \
                     this contradicts the grid nonvanishing bound"
                );
                return Err(Error::FieldTooSmall {
                    required: needed,
                    available: field.cardinality().unwrap_or(u64::MAX),
                });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < grid.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All subspaces of `Mat_n(F_p)` of the given dimension, in RREF
/// enumeration order.
pub fn enumerate_subspaces(field: Field, n: usize, dim: usize) -> Result<Vec<MatrixSubspace>> {
    let elements = field.all_elements()?;
    let big_n = n * n;
    if dim > big_n {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free slots: row r, columns right of pivot r that are not pivots
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..big_n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut assign = vec![0usize; free.len()];
        loop {
            let mut m = DenseMatrix::zeros(field, dim, big_n);
            for (r, &p) in pivots.iter().enumerate() {
                m[(r, p)] = field.one();
            }
            for (&(r, c), &a) in free.iter().zip(&assign) {
                m[(r, c)] = elements[a].clone();
            }
            out.push(MatrixSubspace::from_vector_subspace(
                n,
                VectorSubspace::from_row_matrix(&m),
            ));
            let mut pos = free.len();
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                assign[pos] += 1;
                if assign[pos] < elements.len() {
                    done = false;
                    break;
                }
                assign[pos] = 0;
            }
            if done {
                break;
            }
        }
        // next combination of pivot columns
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < big_n - dim + i {
                pivots[i] += 1;
                for t in i + 1..dim {
                    pivots[t] = pivots[t - 1] + 1;
                }
                break;
            }
        }
    }
}
