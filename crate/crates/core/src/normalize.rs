//! Conjugation moves that normalize the binary profile of a space `C_n`,
//! the full normalization driver, and the rectangle-injectivity
//! conclusion built on top of it.
//!
//! A move with matrix `T` replaces the current space `C` by `T^-1 C T`; the
//! accumulated conjugator is the product of all move matrices in order, so
//! the final space is always `conjugate(input, t_total)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mathieu::all_matrices;
use crate::matrix::DenseMatrix;
use crate::matspace::{
    find_generic_vector, rct_kernel, unit_vector, BinaryProfile, MatrixSubspace,
};
use crate::par::{self, Exec};
use crate::poly::{generic_rank_of_action, generic_rank_univariate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    DoublePass,
    SinglePass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    GenericVector,
    UnitTriangular,
    Permutation,
}

/// Shape of the matrix used by [`move_generic_vector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenericForm {
    /// Column `k` is `v`, columns right of `k` are the identity.
    TrailingIdentity,
    /// The identity with column `k` replaced by `v`, where `v_k = 1`.
    PivotColumn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub level: usize,
    pub t: DenseMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    pub t_total: DenseMatrix,
    pub c_n_final: MatrixSubspace,
    pub profile: BinaryProfile,
    pub branch: Branch,
    pub log: Vec<Move>,
}

/// The row-monotonicity hypothesis at `(j, k)`:
/// `dim C_j e_j >= dim_{K(t)} C_j (e_k + t e_j)`.
pub fn zero_l_condition(c_n: &MatrixSubspace, j: usize, k: usize) -> Result<bool> {
    let level = c_n.filtration_level(j)?;
    let univariate = generic_rank_univariate(&level, k, j)?;
    let col_dim = level.column_space(&unit_vector(c_n.field(), c_n.n(), j))?.dim();
    Ok(col_dim >= univariate)
}

fn identity_move(c_n: &MatrixSubspace) -> (DenseMatrix, MatrixSubspace) {
    (DenseMatrix::identity(c_n.field(), c_n.n()), c_n.clone())
}

/// Conjugates so that `dim C_k e_k` reaches the generic dimension `d_k`.
/// A no-op when it already does.
pub fn move_generic_vector(
    c_n: &MatrixSubspace,
    k: usize,
    form: GenericForm,
) -> Result<(DenseMatrix, MatrixSubspace)> {
    let n = c_n.n();
    let field = c_n.field();
    let level = c_n.filtration_level(k)?;
    if level.dim() == 0 {
        return Ok(identity_move(c_n));
    }
    let d_k = generic_rank_of_action(&level);
    let current = level.column_space(&unit_vector(field, n, k))?.dim();
    if current == d_k {
        return Ok(identity_move(c_n));
    }
    let v = find_generic_vector(c_n, k, form == GenericForm::PivotColumn)?;
    let mut t = DenseMatrix::identity(field, n);
    for (i, x) in v.iter().enumerate() {
        t[(i, k - 1)] = x.clone();
    }
    if v[k - 1].is_zero() {
        // keep T invertible: the column freed by v takes e_k
        let i0 = (0..k).rev().find(|&i| !v[i].is_zero()).expect("v is nonzero");
        for i in 0..n {
            t[(i, i0)] = field.zero();
        }
        t[(k - 1, i0)] = field.one();
    }
    let next = c_n.conjugate(&t)?;
    Ok((t, next))
}

/// Lower-triangular conjugation making `C_k e_k` a coordinate subspace.
/// Column `p` of `T` is the RREF basis vector of `C_k e_k` with leading
/// position `p`; the remaining columns are unit vectors.
pub fn move_unit_triangular(c_n: &MatrixSubspace, k: usize) -> Result<(DenseMatrix, MatrixSubspace)> {
    let n = c_n.n();
    let w = c_n.level_column_space(k)?;
    if w.is_coordinate_subspace() {
        return Ok(identity_move(c_n));
    }
    let mut t = DenseMatrix::identity(c_n.field(), n);
    for (row, p) in w.pivots().into_iter().enumerate() {
        for i in 0..n {
            t[(i, p)] = w.basis()[(row, i)].clone();
        }
    }
    debug_assert!(t.is_lower_triangular());
    let next = c_n.conjugate(&t)?;
    assert!(
        next.level_column_space(k)?.is_coordinate_subspace(),
        "lower-triangular move at level {k} left C_k e_k without a unit-vector basis"
    );
    Ok((t, next))
}

/// Permutes the first `s` coordinates, `s < k` maximal with `B_sk = 1`, so
/// that column `k` of `B` becomes decreasing above the diagonal.
pub fn move_permutation(c_n: &MatrixSubspace, k: usize) -> Result<(DenseMatrix, MatrixSubspace)> {
    let n = c_n.n();
    let field = c_n.field();
    let support = c_n.level_column_space(k)?.support();
    let Some(s) = (1..k).rev().find(|&i| support[i - 1]) else {
        return Ok(identity_move(c_n));
    };
    let (ones, zeros): (Vec<usize>, Vec<usize>) = (0..s).partition(|&i| support[i]);
    let order: Vec<usize> = ones.into_iter().chain(zeros).collect();
    if order.iter().copied().eq(0..s) {
        return Ok(identity_move(c_n));
    }
    let mut p = DenseMatrix::identity(field, n);
    for q in 0..s {
        p[(q, q)] = field.zero();
    }
    for (q, &src) in order.iter().enumerate() {
        p[(q, src)] = field.one();
    }
    // T = P^-1, so T^-1 C T = P C P^-1
    let t = p.transpose();
    let next = c_n.conjugate(&t)?;
    Ok((t, next))
}

struct Run {
    cur: MatrixSubspace,
    t_total: DenseMatrix,
    log: Vec<Move>,
}

impl Run {
    fn apply(&mut self, kind: MoveKind, level: usize, step: (DenseMatrix, MatrixSubspace)) {
        let (t, next) = step;
        if t == DenseMatrix::identity(t.field(), t.rows()) {
            return;
        }
        self.t_total = &self.t_total * &t;
        self.cur = next;
        self.log.push(Move { kind, level, t });
    }

    fn dump(&self) -> String {
        let mut s = String::new();
        for (i, m) in self.log.iter().enumerate() {
            let _ = write!(s, "move {i}: {:?} at level {}\n{}", m.kind, m.level, m.t);
        }
        s
    }
}

/// Postcondition failures of [`normalize_main3`] for a final profile; empty
/// when everything holds.
///
/// Checked: `b_j = dim C_j e_j = d_j` for all `j`; `B` increasing in every
/// row; columns decreasing above the diagonal when
/// `#K > min{b_(n-1), n-1}`; and, when `I ∈ C_n`,
/// `b_n > min{b_(n-1), n-1}` and `B_(n-1)n >= B_n(n-1)`.
pub fn main3_violations(profile: &BinaryProfile, field: Field, contains_identity: bool) -> Vec<String> {
    let n = profile.n;
    let mut out = Vec::new();
    if !profile.counts_match_generic() {
        out.push(format!(
            "b = {:?}, dim C_j e_j = {:?}, d = {:?} disagree",
            profile.b, profile.col_dims, profile.d
        ));
    }
    if !profile.is_row_increasing() {
        out.push("B is not increasing in every row".into());
    }
    if n >= 2 {
        let m = profile.b_of(n - 1).min(n - 1);
        if field.has_at_least(m + 1) && !profile.is_decreasing_above_diagonal() {
            out.push(format!("#K > {m} but B is not decreasing above the diagonal"));
        }
        if contains_identity {
            if profile.b_of(n) <= m {
                out.push(format!("b_n = {} does not exceed {m}", profile.b_of(n)));
            }
            if profile.entry(n - 1, n) < profile.entry(n, n - 1) {
                out.push("B_(n-1)n < B_n(n-1)".into());
            }
        }
    }
    out
}

/// Conjugates `c_n` so that its binary profile satisfies the normal-form
/// postconditions listed in [`main3_violations`]. Requires `#K >= d_n`.
pub fn normalize_main3(c_n: &MatrixSubspace) -> Result<NormalizationResult> {
    let n = c_n.n();
    let field = c_n.field();
    let d_n = generic_rank_of_action(c_n);
    if !field.has_at_least(d_n) {
        return Err(Error::FieldTooSmall {
            required: d_n,
            available: field.cardinality().unwrap_or(u64::MAX),
        });
    }
    let mut run = Run {
        cur: c_n.clone(),
        t_total: DenseMatrix::identity(field, n),
        log: Vec::new(),
    };
    let step = move_generic_vector(&run.cur, n, GenericForm::TrailingIdentity)?;
    run.apply(MoveKind::GenericVector, n, step);

    // d_(n-1) is fixed from here on
    let d_prev = if n >= 2 {
        generic_rank_of_action(&run.cur.filtration_level(n - 1)?)
    } else {
        0
    };
    let branch = if field.has_at_least(d_prev.min(n.saturating_sub(1)) + 1) {
        Branch::SinglePass
    } else {
        Branch::DoublePass
    };

    match branch {
        Branch::DoublePass => {
            for k in (1..n).rev() {
                let step = move_generic_vector(&run.cur, k, GenericForm::TrailingIdentity)?;
                run.apply(MoveKind::GenericVector, k, step);
            }
            for k in (1..=n).rev() {
                let step = move_unit_triangular(&run.cur, k)?;
                run.apply(MoveKind::UnitTriangular, k, step);
            }
        }
        Branch::SinglePass => {
            for k in (1..=n).rev() {
                let d_k = generic_rank_of_action(&run.cur.filtration_level(k)?);
                if d_k == n {
                    // C_k e_k becomes all of K^n, so b_k = n with nothing else to do
                    let step = move_generic_vector(&run.cur, k, GenericForm::TrailingIdentity)?;
                    run.apply(MoveKind::GenericVector, k, step);
                    continue;
                }
                if k < n {
                    let step = move_generic_vector(&run.cur, k, GenericForm::PivotColumn)?;
                    run.apply(MoveKind::GenericVector, k, step);
                }
                let step = move_unit_triangular(&run.cur, k)?;
                run.apply(MoveKind::UnitTriangular, k, step);
                let step = move_permutation(&run.cur, k)?;
                run.apply(MoveKind::Permutation, k, step);
            }
        }
    }

    let profile = run.cur.binary_profile();
    let violations = main3_violations(&profile, field, c_n.contains_identity());
    assert!(
        violations.is_empty(),
        "normalization postconditions failed: {violations:?}\nprofile: {profile:?}\n{}",
        run.dump()
    );
    Ok(NormalizationResult {
        t_total: run.t_total,
        c_n_final: run.cur,
        profile,
        branch,
        log: run.log,
    })
}

/// Whether every `C ∈ c ⊕ K·I` with `rct_r(C) = 0` is a scalar matrix.
pub fn main2_conclusion_holds(c: &MatrixSubspace, r: usize) -> Result<bool> {
    let with_id = c.with_identity();
    Ok(rct_kernel(&with_id, r)? == MatrixSubspace::scalars(c.field(), c.n()))
}

/// A conjugator `t` and block size `r` such that, after replacing the
/// constraint space `C` by `t^-1 C t`, every rct-zero element of `C ⊕ K·I`
/// is scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Main2Certificate {
    pub t: DenseMatrix,
    pub r: usize,
    pub normalization: NormalizationResult,
}

/// Normalizes `C ⊕ K·I` for the constraint space `C` of `m` and reads off
/// the rectangle size `r = d_n - 1`.
pub fn apply_main2(m: &MatrixSubspace) -> Result<Main2Certificate> {
    let n = m.n();
    let c = m.constraint_space();
    if c.contains_identity() {
        return Err(Error::PreconditionViolated(
            "the identity lies in the constraint space".into(),
        ));
    }
    if c.dim() == 0 || c.dim() >= n {
        return Err(Error::PreconditionViolated(format!(
            "constraint space has dimension {}, need 0 < dim < {n}",
            c.dim()
        )));
    }
    let c_n = c.with_identity();
    let normalization = normalize_main3(&c_n)?;
    let r = normalization.profile.d[n] - 1;
    let t = normalization.t_total.clone();
    let conjugated = c.conjugate(&t)?;
    assert!(
        (1..n).contains(&r) && main2_conclusion_holds(&conjugated, r)?,
        "normalized constraint space fails the rectangle conclusion for r = {r}; profile {:?}",
        normalization.profile
    );
    Ok(Main2Certificate { t, r, normalization })
}

/// Every invertible `n x n` matrix over a prime field, in lexicographic
/// order of entries.
pub fn general_linear_group(field: Field, n: usize) -> Result<Vec<DenseMatrix>> {
    Ok(all_matrices(field, n)?
        .into_iter()
        .filter(|m| m.invert().is_ok())
        .collect())
}

/// All `(T, r)` with `T ∈ GL_n(F_p)` and `1 <= r < n` for which the
/// conjugated constraint space satisfies [`main2_conclusion_holds`].
pub fn exhaustive_main2_search(c: &MatrixSubspace, exec: Exec) -> Result<Vec<(DenseMatrix, usize)>> {
    let n = c.n();
    let group = general_linear_group(c.field(), n)?;
    let hits = par::map(exec, group, |t| {
        let conj = c.conjugate(&t).expect("invertible");
        (1..n)
            .filter(|&r| main2_conclusion_holds(&conj, r).expect("r in range"))
            .map(|r| (t.clone(), r))
            .collect::<Vec<_>>()
    });
    Ok(hits.into_iter().flatten().collect())
}
