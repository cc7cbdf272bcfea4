//! Sparse multivariate polynomials over a [`Field`] and exact rank of
//! polynomial matrices over the rational function field `K(x_1, ..., x_m)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matspace::MatrixSubspace;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// A polynomial in `nvars` variables. Zero coefficients are never stored,
/// so derived equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index");
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        Self::monomial(exp, field.one())
    }

    pub fn monomial(exp: Monomial, coeff: Scalar) -> Self {
        let mut p = Self::zero(coeff.field(), exp.len());
        p.add_term(exp, coeff);
        p
    }

    /// Linear form `sum_i coeffs[i] x_i`.
    pub fn linear_form(field: Field, coeffs: &[Scalar]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(field, nvars);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; nvars];
            exp[i] = 1;
            p.add_term(exp, c.clone());
        }
        p
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (exp, c) in terms {
            assert_eq!(exp.len(), nvars, "exponent arity");
            p.add_term(exp, c);
        }
        p
    }

    fn add_term(&mut self, exp: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_compatible(&self, other: &MultiPoly) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "polynomial ring mismatch"
        );
    }

    pub fn scalar_mul(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = self.field.zero();
        for (exp, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(exp) {
                if k > 0 {
                    t = &t * &x.pow(k as u64);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Leading term in lex order (the largest exponent vector).
    fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// nonzero remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.check_compatible(divisor);
        let (dexp, dc) = divisor.leading().expect("division by zero polynomial");
        let dinv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.field, self.nvars);
        while let Some((rexp, rc)) = rem.leading() {
            if rexp.iter().zip(dexp).any(|(r, d)| r < d) {
                return None;
            }
            let qexp: Monomial = rexp.iter().zip(dexp).map(|(r, d)| r - d).collect();
            let qc = rc * &dinv;
            let step = Self::monomial(qexp, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Some(quot)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_compatible(rhs);
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                #[allow(clippy::suspicious_arithmetic_impl)]
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(exp, c)| {
                let mono: Vec<String> = exp
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, k)
                        }
                    })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", c, mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Matrix with polynomial entries, all in the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(field: Field, nvars: usize, rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        assert!(
            entries.iter().all(|p| p.field == field && p.nvars == nvars),
            "entries must share the ring"
        );
        PolyMatrix {
            field,
            nvars,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_columns(field: Field, nvars: usize, rows: usize, columns: Vec<Vec<MultiPoly>>) -> Self {
        let cols = columns.len();
        let mut entries = vec![MultiPoly::zero(field, nvars); rows * cols];
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, p) in col.into_iter().enumerate() {
                entries[i * cols + j] = p;
            }
        }
        Self::new(field, nvars, rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    /// Substitute a point for the variables.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<crate::matrix::DenseMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.evaluate(point))
            .collect::<Result<Vec<_>>>()?;
        Ok(crate::matrix::DenseMatrix::from_entries(
            self.field, self.rows, self.cols, entries,
        ))
    }

    /// Rank over the fraction field `K(x)`, by fraction-free (Bareiss)
    /// elimination. Every division by the previous pivot is exact by
    /// Sylvester's identity; a nonzero remainder aborts.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<MultiPoly>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut prev = MultiPoly::constant(self.field.one(), self.nvars);
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            let pivot = m[rank][col].clone();
            for i in rank + 1..self.rows {
                let factor = m[i][col].clone();
                #[allow(clippy::needless_range_loop)]
                for j in col..self.cols {
                    let num = &(&pivot * &m[i][j]) - &(&factor * &m[rank][j]);
                    m[i][j] = num.div_exact(&prev).unwrap_or_else(|| {
                        panic!("inexact Bareiss division: ({num}) / ({prev})")
                    });
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

/// Rank over `K(x)` of a polynomial matrix.
pub fn poly_matrix_rank(m: &PolyMatrix) -> usize {
    m.rank()
}

/// Lexicographic scan of `s^nvars` (first coordinate slowest) for a point
/// where `f` does not vanish.
pub fn find_nonvanishing(f: &MultiPoly, s: &[Scalar]) -> Option<Vec<Scalar>> {
    if f.is_zero() || s.is_empty() {
        return None;
    }
    let n = f.nvars();
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<Scalar> = idx.iter().map(|&i| s[i].clone()).collect();
        if !f.evaluate(&point).expect("arity").is_zero() {
            return Some(point);
        }
        // odometer increment, last coordinate fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < s.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Whether the nonvanishing guarantee for `f` on the grid `s^n` applies:
/// `#s > deg f`, or `f` homogeneous with `0 ∈ s` and `#s >= max(deg f, 2)`.
pub fn grid_is_sufficient(f: &MultiPoly, s: &[Scalar]) -> bool {
    let d = f.degree().unwrap_or(0) as usize;
    s.len() > d
        || (f.is_homogeneous() && s.iter().any(Scalar::is_zero) && s.len() >= d.max(2))
}

/// The `n x D` polynomial matrix whose columns are `C x` for the canonical
/// basis `C` of `v`, in variables `x_1..x_n`.
pub fn action_matrix(v: &MatrixSubspace) -> PolyMatrix {
    let n = v.n();
    let field = v.field();
    let columns = v
        .basis_matrices()
        .iter()
        .map(|c| (0..n).map(|i| MultiPoly::linear_form(field, c.row(i))).collect())
        .collect();
    PolyMatrix::from_columns(field, n, n, columns)
}

/// `dim_{K(x)} (K(x) ⊗ V) x`.
pub fn generic_rank_of_action(v: &MatrixSubspace) -> usize {
    if v.dim() == 0 {
        return 0;
    }
    action_matrix(v).rank()
}

/// `dim_{K(t)} (K(t) ⊗ V)(e_k + t e_j)` for 1-based `k`, `j`.
pub fn generic_rank_univariate(v: &MatrixSubspace, k: usize, j: usize) -> Result<usize> {
    let n = v.n();
    for idx in [k, j] {
        if idx == 0 || idx > n {
            return Err(Error::OutOfRange {
                index: idx,
                lo: 1,
                hi: n,
            });
        }
    }
    if v.dim() == 0 {
        return Ok(0);
    }
    let field = v.field();
    let t = MultiPoly::var(field, 1, 0);
    let columns: Vec<Vec<MultiPoly>> = v
        .basis_matrices()
        .iter()
        .map(|c| {
            (0..n)
                .map(|i| {
                    let constant = MultiPoly::constant(c[(i, k - 1)].clone(), 1);
                    &constant + &t.scalar_mul(&c[(i, j - 1)])
                })
                .collect()
        })
        .collect();
    Ok(PolyMatrix::from_columns(field, 1, n, columns).rank())
}
