//! Affine families of idempotents with a fixed identity block, and the
//! certificate that a space holds complementary idempotents whose sum is
//! unipotent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{AffineSolution, DenseMatrix};
use crate::matspace::{rct_kernel, MatrixSubspace};
use crate::normalize::main2_conclusion_holds;
use crate::subspace::VectorSubspace;

/// Which diagonal block of the idempotent is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdempotentForm {
    /// `[[I_r, 0], [X, 0]]`, rank `r`.
    Upper,
    /// `[[0, 0], [X, I_(n-r)]]`, rank `n - r`.
    Lower,
}

/// `{ particular + block(x) : x ∈ directions }` where `block` places a
/// vectorized `(n-r) x r` matrix in the lower-left corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFamily {
    pub n: usize,
    pub r: usize,
    pub particular: DenseMatrix,
    pub directions: VectorSubspace,
    pub form: IdempotentForm,
}

impl AffineFamily {
    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    pub fn rank(&self) -> usize {
        match self.form {
            IdempotentForm::Upper => self.r,
            IdempotentForm::Lower => self.n - self.r,
        }
    }

    /// `particular + sum_i coeffs[i] * direction_i`.
    pub fn member(&self, coeffs: &[Scalar]) -> DenseMatrix {
        assert_eq!(coeffs.len(), self.dim(), "one coefficient per direction");
        let field = self.particular.field();
        let mut x = vec![field.zero(); self.directions.ambient_dim()];
        for (c, d) in coeffs.iter().zip(self.directions.basis_vectors()) {
            for (xi, di) in x.iter_mut().zip(&d) {
                *xi = &*xi + &(c * di);
            }
        }
        &self.particular + &lower_left(field, self.n, self.r, &x)
    }

    /// Every member, for a finite field.
    pub fn members(&self) -> Result<Vec<DenseMatrix>> {
        let elements = self.particular.field().all_elements()?;
        let d = self.dim();
        let count = (elements.len() as u128).pow(d as u32);
        if count > crate::mathieu::ENUMERATION_LIMIT as u128 {
            return Err(Error::TooLarge {
                size: count,
                limit: crate::mathieu::ENUMERATION_LIMIT,
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut idx = vec![0usize; d];
        loop {
            let coeffs: Vec<Scalar> = idx.iter().map(|&i| elements[i].clone()).collect();
            out.push(self.member(&coeffs));
            let Some(pos) = (0..d).rev().find(|&p| idx[p] + 1 < elements.len()) else {
                return Ok(out);
            };
            idx[pos] += 1;
            for i in &mut idx[pos + 1..] {
                *i = 0;
            }
        }
    }
}

/// The `n x n` matrix with `x` (row-major, `(n-r) x r`) in rows `r..n`,
/// columns `0..r`.
fn lower_left(field: Field, n: usize, r: usize, x: &[Scalar]) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, n, n);
    for b in r..n {
        for a in 0..r {
            m[(b, a)] = x[(b - r) * r + a].clone();
        }
    }
    m
}

fn identity_block(field: Field, n: usize, r: usize, form: IdempotentForm) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(field, n, n);
    let range = match form {
        IdempotentForm::Upper => 0..r,
        IdempotentForm::Lower => r..n,
    };
    for i in range {
        m[(i, i)] = field.one();
    }
    m
}

/// `N`: the elements of `m` supported on the lower-left `(n-r) x r` block.
pub fn lower_left_part(m: &MatrixSubspace, r: usize) -> MatrixSubspace {
    let field = m.field();
    let n = m.n();
    let units: Vec<DenseMatrix> = (r..n)
        .flat_map(|b| (0..r).map(move |a| DenseMatrix::unit(field, n, b, a)))
        .collect();
    m.intersect(&MatrixSubspace::span(field, n, &units))
        .expect("same ring")
}

fn check_block_size(n: usize, r: usize) -> Result<()> {
    if r < 1 || r + 1 > n {
        return Err(Error::OutOfRange {
            index: r,
            lo: 1,
            hi: n.saturating_sub(1),
        });
    }
    Ok(())
}

/// All idempotents of `m` of the given form, provided every constraint `C`
/// with `rct_r(C) = 0` has a trace-zero leading `r x r` (upper) or
/// trailing `(n-r) x (n-r)` (lower) principal block.
pub fn idempotent_family(m: &MatrixSubspace, r: usize, form: IdempotentForm) -> Result<AffineFamily> {
    let n = m.n();
    check_block_size(n, r)?;
    let field = m.field();
    let constraints = m.constraint_space();
    let diagonal = match form {
        IdempotentForm::Upper => 0..r,
        IdempotentForm::Lower => r..n,
    };
    let block_trace =
        |c: &DenseMatrix| diagonal.clone().fold(field.zero(), |acc, i| &acc + &c[(i, i)]);
    if let Some(witness) = rct_kernel(&constraints, r)?
        .basis_matrices()
        .into_iter()
        .find(|c| !block_trace(c).is_zero())
    {
        return Err(Error::HypothesisFailed { witness });
    }

    // tr(C E) = block trace of C + sum_{a<r<=b} C_ab X_(b-r)a
    let cols = (n - r) * r;
    let basis = constraints.basis_matrices();
    let mut rows = Vec::with_capacity(basis.len());
    let mut rhs = Vec::with_capacity(basis.len());
    for c in &basis {
        let mut row = vec![field.zero(); cols];
        for b in r..n {
            for a in 0..r {
                row[(b - r) * r + a] = c[(a, b)].clone();
            }
        }
        rows.push(row);
        rhs.push(-block_trace(c));
    }
    let fixed = identity_block(field, n, r, form);
    let (particular, directions) = if basis.is_empty() {
        (fixed, VectorSubspace::full(field, cols))
    } else {
        let system = DenseMatrix::from_rows(field, cols, &rows);
        match system.solve_affine(&rhs)? {
            AffineSolution::Solutions { particular, directions } => {
                (&fixed + &lower_left(field, n, r, &particular), directions)
            }
            AffineSolution::NoSolution => {
                panic!("idempotent system inconsistent although the trace hypothesis holds")
            }
        }
    };
    Ok(AffineFamily {
        n,
        r,
        particular,
        directions,
        form,
    })
}

/// Idempotents `e` (rank `r`, upper form) and `e_prime` (rank `n - r`,
/// lower form) in `m` with `e + e_prime` unipotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullSpaceCertificate {
    pub e: DenseMatrix,
    pub e_prime: DenseMatrix,
    pub r: usize,
}

impl FullSpaceCertificate {
    pub fn sum(&self) -> DenseMatrix {
        &self.e + &self.e_prime
    }

    /// `(e + e' - I)^n = 0`.
    pub fn is_unipotent(&self) -> bool {
        let s = self.sum();
        let n = s.rows();
        (&s - &DenseMatrix::identity(s.field(), n)).pow(n as u64).is_zero()
    }

    /// `A = A (e+e')^-1 e + A (e+e')^-1 e'`.
    pub fn decomposes(&self, a: &DenseMatrix) -> bool {
        let inv = self.sum().invert().expect("unipotent matrices are invertible");
        let left = a * &inv;
        &(&left * &self.e) + &(&left * &self.e_prime) == *a
    }
}

/// Requires `I ∉ C` and that every `C ∈ C ⊕ K·I` with `rct_r(C) = 0` is
/// scalar.
pub fn full_space_certificate(m: &MatrixSubspace, r: usize) -> Result<FullSpaceCertificate> {
    let n = m.n();
    check_block_size(n, r)?;
    let field = m.field();
    let c = m.constraint_space();
    if c.contains_identity() {
        return Err(Error::PreconditionViolated(
            "the identity lies in the constraint space".into(),
        ));
    }
    if !main2_conclusion_holds(&c, r)? {
        let scalars = MatrixSubspace::scalars(field, n);
        let witness = rct_kernel(&c.with_identity(), r)?
            .basis_matrices()
            .into_iter()
            .find(|x| !scalars.contains(x))
            .expect("kernel is larger than the scalars");
        return Err(Error::HypothesisFailed { witness });
    }
    let e = idempotent_family(m, r, IdempotentForm::Upper)?.particular;
    let e_prime = idempotent_family(m, r, IdempotentForm::Lower)?.particular;
    let cert = FullSpaceCertificate { e, e_prime, r };
    assert!(cert.is_unipotent(), "e + e' is not unipotent");
    assert!(
        cert.decomposes(&DenseMatrix::unit(field, n, 0, 0)),
        "decomposition identity failed"
    );
    Ok(cert)
}
