//! Dense exact matrices over a [`Field`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::subspace::VectorSubspace;

/// Row-major dense matrix. All entries belong to `field`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Output of [`DenseMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: DenseMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Solution set of `a x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    NoSolution,
    Solutions {
        particular: Vec<Scalar>,
        directions: VectorSubspace,
    },
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// The matrix unit `E_{ij}` (0-based indices).
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m[(i, j)] = field.one();
        m
    }

    pub fn from_entries(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        debug_assert!(entries.iter().all(|e| e.field() == field));
        DenseMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from integer rows, reducing into `field`.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| field.from_i64(x)));
        }
        Self::from_entries(field, r, c, entries)
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length");
            entries.extend(row.iter().cloned());
        }
        Self::from_entries(field, rows.len(), cols, entries)
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, x) in diag.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_entries(
            self.field,
            self.rows,
            self.cols,
            self.entries.iter().map(|x| x * s).collect(),
        )
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).fold(self.field.zero(), |acc, i| &acc + &self[(i, i)])
    }

    /// `tr(self * other)` as the Hadamard sum `sum_ij self_ij other_ji`.
    pub fn trace_pairing(&self, other: &DenseMatrix) -> Scalar {
        assert!(self.rows == other.cols && self.cols == other.rows);
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    acc = &acc + &(a * &other[(j, i)]);
                }
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut b = Self::zeros(self.field, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                b[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        b
    }

    pub fn stack(&self, below: &DenseMatrix) -> Self {
        assert_eq!(self.cols, below.cols);
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        Self::from_entries(self.field, self.rows + below.rows, self.cols, entries)
    }

    pub fn augment(&self, right: &DenseMatrix) -> Self {
        assert_eq!(self.rows, right.rows);
        let mut m = Self::zeros(self.field, self.rows, self.cols + right.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..right.cols {
                m[(i, self.cols + j)] = right[(i, j)].clone();
            }
        }
        m
    }

    /// Gauss-Jordan reduction to the unique reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = m[(row, col)].inv();
            for j in col..m.cols {
                m[(row, j)] = &m[(row, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let factor = m[(i, col)].clone();
                for j in col..m.cols {
                    let delta = &factor * &m[(row, j)];
                    m[(i, j)] = &m[(i, j)] - &delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            reduced: m,
            rank: row,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{v : self * v = 0}`.
    pub fn kernel(&self) -> VectorSubspace {
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<Scalar>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&reduced[(r, f)];
                }
                v
            })
            .collect();
        VectorSubspace::span(self.field, self.cols, &basis)
    }

    /// All solutions of `self * x = b`.
    pub fn solve_affine(&self, b: &[Scalar]) -> Result<AffineSolution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let aug = self.augment(&DenseMatrix::from_columns(self.field, self.rows, &[b.to_vec()]));
        let Rref {
            reduced, pivots, ..
        } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(AffineSolution::NoSolution);
        }
        let mut particular = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            particular[p] = reduced[(r, self.cols)].clone();
        }
        Ok(AffineSolution::Solutions {
            particular,
            directions: self.kernel(),
        })
    }

    pub fn invert(&self) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let Rref {
            reduced, pivots, ..
        } = self.augment(&DenseMatrix::identity(self.field, n)).rref();
        if !pivots.iter().take(n).copied().eq(0..n) {
            return Err(Error::Singular);
        }
        Ok(reduced.block(0, n, n, 2 * n))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let mut det = self.field.one();
        for col in 0..m.cols {
            let Some(piv) = (col..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                return self.field.zero();
            };
            if piv != col {
                m.swap_rows(col, piv);
                det = -det;
            }
            det = &det * &m[(col, col)];
            let inv = m[(col, col)].inv();
            for i in col + 1..m.rows {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let factor = &m[(i, col)] * &inv;
                for j in col..m.cols {
                    let delta = &factor * &m[(col, j)];
                    m[(i, j)] = &m[(i, j)] - &delta;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Whether every entry strictly above the diagonal is zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    /// Convenience for tests and reports: entries as residues or rationals
    /// rendered to strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "product dimensions");
        let mut out = DenseMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        DenseMatrix::from_entries(
            self.field,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        DenseMatrix::from_entries(
            self.field,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::Prime(p)
    }

    #[test]
    fn rref_identity() {
        let id = DenseMatrix::identity(f(5), 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_zero() {
        let z = DenseMatrix::zeros(Field::Rationals, 2, 4);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_all_ones_f2() {
        let m = DenseMatrix::from_i64(f(2), &[&[1, 1], &[1, 1]]);
        let r = m.rref();
        assert_eq!(r.reduced, DenseMatrix::from_i64(f(2), &[&[1, 1], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(DenseMatrix::identity(f(3), 3).kernel().dim(), 0);
        let z = DenseMatrix::zeros(Field::Rationals, 2, 3).kernel();
        assert_eq!(z, VectorSubspace::full(Field::Rationals, 3));
        let k = DenseMatrix::from_i64(f(5), &[&[1, 2]]).kernel();
        let expected = VectorSubspace::span(f(5), 2, &[vec![f(5).from_i64(3), f(5).one()]]);
        assert_eq!(k, expected);
    }

    #[test]
    fn solve_affine_examples() {
        let a = DenseMatrix::identity(f(3), 2);
        let b = [f(3).from_i64(1), f(3).from_i64(2)];
        match a.solve_affine(&b).unwrap() {
            AffineSolution::Solutions {
                particular,
                directions,
            } => {
                assert_eq!(particular, b.to_vec());
                assert_eq!(directions.dim(), 0);
            }
            AffineSolution::NoSolution => panic!("expected a solution"),
        }

        let z = DenseMatrix::zeros(f(3), 1, 2);
        assert_eq!(z.solve_affine(&[f(3).one()]).unwrap(), AffineSolution::NoSolution);

        let a = DenseMatrix::from_i64(f(2), &[&[1, 1]]);
        match a.solve_affine(&[f(2).one()]).unwrap() {
            AffineSolution::Solutions {
                particular,
                directions,
            } => {
                assert_eq!(particular, vec![f(2).one(), f(2).zero()]);
                assert_eq!(
                    directions,
                    VectorSubspace::span(f(2), 2, &[vec![f(2).one(), f(2).one()]])
                );
            }
            AffineSolution::NoSolution => panic!("expected a solution"),
        }
        assert!(matches!(
            a.solve_affine(&[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_affine_matches_enumeration_f2() {
        // all 4 vectors of F_2^2 against x + y = 1
        let field = f(2);
        let a = DenseMatrix::from_i64(field, &[&[1, 1]]);
        let AffineSolution::Solutions {
            particular,
            directions,
        } = a.solve_affine(&[field.one()]).unwrap()
        else {
            panic!()
        };
        for x in 0..2 {
            for y in 0..2 {
                let v = vec![field.from_i64(x), field.from_i64(y)];
                let solves = a.mul_vec(&v)[0].is_one();
                let diff: Vec<Scalar> = v.iter().zip(&particular).map(|(a, b)| a - b).collect();
                assert_eq!(solves, directions.contains(&diff));
            }
        }
    }

    #[test]
    fn invert_examples() {
        let id = DenseMatrix::identity(f(7), 4);
        assert_eq!(id.invert().unwrap(), id);
        let m = DenseMatrix::from_i64(f(2), &[&[1, 1], &[0, 1]]);
        assert_eq!(m.invert().unwrap(), m);
        assert_eq!(&m * &m, DenseMatrix::identity(f(2), 2));
        let s = DenseMatrix::from_i64(Field::Rationals, &[&[1, 1], &[1, 1]]);
        assert_eq!(s.invert(), Err(Error::Singular));
    }

    #[test]
    fn determinant_and_trace() {
        let q = Field::Rationals;
        let m = DenseMatrix::from_i64(q, &[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), q.from_i64(1));
        assert_eq!(m.trace(), q.from_i64(6));
        let a = DenseMatrix::from_i64(q, &[&[1, 2], &[3, 4]]);
        let b = DenseMatrix::from_i64(q, &[&[0, 5], &[6, 7]]);
        assert_eq!(a.trace_pairing(&b), (&a * &b).trace());
    }
}
