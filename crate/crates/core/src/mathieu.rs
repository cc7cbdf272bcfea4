//! Brute-force semantics over prime fields: power trajectories, radicals,
//! Mathieu-subspace verification for all four types, and the structural
//! checks built on them.
//!
//! "`x^m ∈ M` for `m ≫ 0`" is decided on the eventual cycle of the powers
//! of `a`: over a finite field the sequence `a, a^2, ...` is eventually
//! periodic, so a condition holds for all large `m` iff it holds at every
//! cycle element.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::DenseMatrix;
use crate::matspace::MatrixSubspace;
use crate::par::{self, Exec};
use crate::subspace::VectorSubspace;

/// Largest number of matrices any exhaustive scan will visit.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

fn prime_of(field: Field) -> Result<u32> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rationals => Err(Error::RequiresFiniteField),
    }
}

fn guarded_count(p: u32, exponent: usize) -> Result<u64> {
    let size = (p as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_LIMIT as u128 {
        return Err(Error::TooLarge {
            size,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(size as u64)
}

/// `p^(n^2)`, if within [`ENUMERATION_LIMIT`].
pub fn matrix_count(field: Field, n: usize) -> Result<u64> {
    guarded_count(prime_of(field)?, n * n)
}

/// The `index`-th matrix of `Mat_n(F_p)` in lexicographic order of the
/// row-major entries (entry `(0,0)` varies slowest).
pub fn matrix_at(field: Field, n: usize, mut index: u64) -> DenseMatrix {
    let p = prime_of(field).expect("prime field") as u64;
    let mut entries = vec![field.zero(); n * n];
    for slot in entries.iter_mut().rev() {
        *slot = field.from_i64((index % p) as i64);
        index /= p;
    }
    DenseMatrix::from_entries(field, n, n, entries)
}

pub fn all_matrices(field: Field, n: usize) -> Result<Vec<DenseMatrix>> {
    let count = matrix_count(field, n)?;
    Ok((0..count).map(|i| matrix_at(field, n, i)).collect())
}

/// Every element of `m`, as combinations of its canonical basis.
pub fn elements_of(m: &MatrixSubspace) -> Result<Vec<DenseMatrix>> {
    let field = m.field();
    let p = prime_of(field)?;
    let basis = m.basis_matrices();
    let count = guarded_count(p, basis.len())?;
    let mut out = Vec::with_capacity(count as usize);
    for mut index in 0..count {
        let mut acc = DenseMatrix::zeros(field, m.n(), m.n());
        for b in basis.iter().rev() {
            let c = field.from_i64((index % p as u64) as i64);
            index /= p as u64;
            acc = &acc + &b.scale(&c);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Tests `x ∈ M` as `tr(C x) = 0` for a basis of the constraint space.
struct Membership {
    constraints: Vec<DenseMatrix>,
}

impl Membership {
    fn new(m: &MatrixSubspace) -> Self {
        Membership {
            constraints: m.constraint_space().basis_matrices(),
        }
    }

    fn contains(&self, x: &DenseMatrix) -> bool {
        self.constraints
            .iter()
            .all(|c| c.trace_pairing(x).is_zero())
    }
}

/// Powers `a^1, ..., a^t` followed by the cycle `a^(t+1), ..., a^(t+period)`,
/// with `a^(m+period) = a^m` for all `m > t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTrajectory {
    pub a: DenseMatrix,
    pub tail: Vec<DenseMatrix>,
    pub cycle: Vec<DenseMatrix>,
}

impl PowerTrajectory {
    pub fn tail_len(&self) -> usize {
        self.tail.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// `a^m` for `m >= 1`.
    pub fn power(&self, m: u64) -> &DenseMatrix {
        assert!(m >= 1, "exponents start at 1");
        let m = m as usize;
        if m <= self.tail.len() {
            &self.tail[m - 1]
        } else {
            &self.cycle[(m - self.tail.len() - 1) % self.cycle.len()]
        }
    }

    /// Exponent of `cycle[offset]`.
    pub fn cycle_exponent(&self, offset: usize) -> u64 {
        (self.tail.len() + 1 + offset) as u64
    }

    pub fn all(&self) -> impl Iterator<Item = &DenseMatrix> {
        self.tail.iter().chain(&self.cycle)
    }
}

pub fn power_trajectory(a: &DenseMatrix) -> Result<PowerTrajectory> {
    prime_of(a.field())?;
    let mut seen: HashMap<DenseMatrix, usize> = HashMap::new();
    let mut powers = Vec::new();
    let mut x = a.clone();
    loop {
        if let Some(&start) = seen.get(&x) {
            let cycle = powers.split_off(start);
            return Ok(PowerTrajectory {
                a: a.clone(),
                tail: powers,
                cycle,
            });
        }
        seen.insert(x.clone(), powers.len());
        let next = &x * a;
        powers.push(x);
        x = next;
    }
}

/// `{a : a^m ∈ s for all m ≫ 0}` in enumeration order.
pub fn radical(s: &MatrixSubspace) -> Result<Vec<DenseMatrix>> {
    radical_with(s, Exec::default())
}

pub fn radical_with(s: &MatrixSubspace, exec: Exec) -> Result<Vec<DenseMatrix>> {
    scan(s, exec, |t, member| t.cycle.iter().all(|x| member.contains(x)))
}

/// `{a : a^m ∈ s for all m >= 1}` in enumeration order.
pub fn full_power_set(s: &MatrixSubspace) -> Result<Vec<DenseMatrix>> {
    full_power_set_with(s, Exec::default())
}

pub fn full_power_set_with(s: &MatrixSubspace, exec: Exec) -> Result<Vec<DenseMatrix>> {
    scan(s, exec, |t, member| t.all().all(|x| member.contains(x)))
}

fn scan<F>(s: &MatrixSubspace, exec: Exec, keep: F) -> Result<Vec<DenseMatrix>>
where
    F: Fn(&PowerTrajectory, &Membership) -> bool + Send + Sync,
{
    let field = s.field();
    let n = s.n();
    let count = matrix_count(field, n)?;
    let member = Membership::new(s);
    Ok(par::filter_map_indices(exec, count, |i| {
        let a = matrix_at(field, n, i);
        let t = power_trajectory(&a).expect("prime field");
        keep(&t, &member).then_some(a)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MathieuType {
    Left,
    Right,
    PreTwoSided,
    TwoSided,
}

impl MathieuType {
    pub const ALL: [MathieuType; 4] = [
        MathieuType::Left,
        MathieuType::Right,
        MathieuType::PreTwoSided,
        MathieuType::TwoSided,
    ];
}

/// `a^m ∈ M` for all `m >= 1`, yet `b a^m c ∉ M` (with absent factors
/// omitted) at `m = exponent` and hence at `exponent + k·period` for all
/// `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub a: DenseMatrix,
    pub b: Option<DenseMatrix>,
    pub c: Option<DenseMatrix>,
    pub exponent: u64,
    pub period: u64,
}

impl Witness {
    pub fn product(&self, x: &DenseMatrix) -> DenseMatrix {
        let left = match &self.b {
            Some(b) => b * x,
            None => x.clone(),
        };
        match &self.c {
            Some(c) => &left * c,
            None => left,
        }
    }

    /// Recomputes the failure from scratch with plain matrix powers.
    pub fn replay(&self, m: &MatrixSubspace) -> bool {
        let last = self.exponent + 2 * self.period;
        let all_powers_inside = (1..=last).all(|k| m.contains(&self.a.pow(k)));
        let escapes = (0..3).all(|j| {
            let x = self.a.pow(self.exponent + j * self.period);
            !m.contains(&self.product(&x))
        });
        all_powers_inside && escapes
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MathieuVerdict {
    pub kind: MathieuType,
    pub holds: bool,
    pub witness: Option<Witness>,
}

fn units(field: Field, n: usize) -> Vec<DenseMatrix> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| DenseMatrix::unit(field, n, i, j)))
        .collect()
}

/// Exhaustive check over all `a ∈ Mat_n(F_p)`. By linearity in `b` and `c`
/// it suffices to test matrix units; the witness reported is the first in
/// the order (a, exponent, b, c).
pub fn verify_mathieu(m: &MatrixSubspace, kind: MathieuType) -> Result<MathieuVerdict> {
    verify_mathieu_with(m, kind, Exec::default())
}

pub fn verify_mathieu_with(m: &MatrixSubspace, kind: MathieuType, exec: Exec) -> Result<MathieuVerdict> {
    let field = m.field();
    let n = m.n();
    let count = matrix_count(field, n)?;
    let member = Membership::new(m);
    let units = units(field, n);
    let witness = par::find_first_index(exec, count, |i| {
        let a = matrix_at(field, n, i);
        let t = power_trajectory(&a).expect("prime field");
        if !t.all().all(|x| member.contains(x)) {
            return None;
        }
        t.cycle.iter().enumerate().find_map(|(offset, x)| {
            let (b, c) = first_escape(kind, x, &units, &member)?;
            Some(Witness {
                a: a.clone(),
                b,
                c,
                exponent: t.cycle_exponent(offset),
                period: t.period() as u64,
            })
        })
    });
    Ok(MathieuVerdict {
        kind,
        holds: witness.is_none(),
        witness,
    })
}

type Factors = (Option<DenseMatrix>, Option<DenseMatrix>);

fn first_escape(kind: MathieuType, x: &DenseMatrix, units: &[DenseMatrix], member: &Membership) -> Option<Factors> {
    let left = || {
        units
            .iter()
            .find(|b| !member.contains(&(*b * x)))
            .map(|b| (Some(b.clone()), None))
    };
    let right = || {
        units
            .iter()
            .find(|c| !member.contains(&(x * *c)))
            .map(|c| (None, Some(c.clone())))
    };
    match kind {
        MathieuType::Left => left(),
        MathieuType::Right => right(),
        MathieuType::PreTwoSided => left().or_else(right),
        MathieuType::TwoSided => units.iter().find_map(|b| {
            let bx = b * x;
            units
                .iter()
                .find(|c| !member.contains(&(&bx * *c)))
                .map(|c| (Some(b.clone()), Some(c.clone())))
        }),
    }
}

/// Idempotents of `m`, by enumerating its elements.
pub fn idempotents_of(m: &MatrixSubspace) -> Result<Vec<DenseMatrix>> {
    Ok(elements_of(m)?
        .into_iter()
        .filter(|e| &(e * e) == e)
        .collect())
}

/// `{M : M_n1 = ... = M_n(n-1) = 0 = tr M + a·M_nn}`.
///
/// Over a prime field `F_p` the parameter always lies in `F_p`, so
/// `p ∈ {n, n+1}` is rejected; so are `p ∈ {1, ..., n-1}` and parameters
/// with `0 ∈ {1, ..., n} + {0, a}`.
pub fn proposition_family(field: Field, n: usize, a: &Scalar) -> Result<MatrixSubspace> {
    assert_eq!(a.field(), field, "parameter field");
    let p = field.characteristic() as usize;
    if p != 0 && p < n {
        return Err(Error::PreconditionViolated(format!(
            "characteristic {p} lies in 1..={}",
            n - 1
        )));
    }
    if p == n || p == n + 1 {
        return Err(Error::PreconditionViolated(format!(
            "characteristic {p} ∈ {{n, n+1}} needs a parameter outside the prime field"
        )));
    }
    for i in 1..=n {
        let i = field.from_i64(i as i64);
        if i.is_zero() || (&i + a).is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "0 ∈ {{1..{n}}} + {{0, {a}}}"
            )));
        }
    }
    let mut conditions = Vec::with_capacity(n);
    for j in 0..n - 1 {
        let mut row = vec![field.zero(); n * n];
        row[(n - 1) * n + j] = field.one();
        conditions.push(row);
    }
    let mut trace_row = vec![field.zero(); n * n];
    for i in 0..n {
        trace_row[i * n + i] = field.one();
    }
    let last = (n - 1) * n + (n - 1);
    trace_row[last] = &trace_row[last] + a;
    conditions.push(trace_row);
    Ok(MatrixSubspace::from_linear_conditions(field, n, &conditions))
}

/// Coefficients of `det(tI - a)` in ascending degree, from the power sums
/// `tr(a^i)` via Newton's identities. Needs `k` invertible for `k <= n`.
pub fn newton_char_poly(a: &DenseMatrix) -> Result<Vec<Scalar>> {
    let field = a.field();
    let n = a.rows();
    let chr = field.characteristic() as usize;
    if chr != 0 && chr <= n {
        return Err(Error::PreconditionViolated(format!(
            "Newton identities divide by {chr}, which is zero in {field}"
        )));
    }
    let mut sums = Vec::with_capacity(n);
    let mut power = DenseMatrix::identity(field, n);
    for _ in 0..n {
        power = &power * a;
        sums.push(power.trace());
    }
    // e_k = (1/k) sum_{i=1..k} (-1)^(i-1) e_(k-i) p_i
    let mut e = vec![field.one()];
    for k in 1..=n {
        let mut acc = field.zero();
        for i in 1..=k {
            let term = &e[k - i] * &sums[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(&acc * &field.from_i64(k as i64).inv());
    }
    let mut coeffs = vec![field.zero(); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Ok(coeffs)
}

/// Predicates for a trace-zero space `m`:
/// 1) `chr K ∉ {1..n}`; 2) `chr K ∉ {1..n-1}` and `I ∉ m`;
/// 3) the radical is nilpotent; 4) `m` is two-sided Mathieu.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrelmReport {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub p4: bool,
    /// Largest `n·N` over the radical, where `a^m ∈ m` for all `m >= N`.
    pub nilpotency_bound: usize,
}

pub fn prelm_chain_check(m: &MatrixSubspace) -> Result<PrelmReport> {
    if !m.is_traceless() {
        return Err(Error::PreconditionViolated(
            "the space contains a matrix of nonzero trace".into(),
        ));
    }
    let n = m.n();
    let chr = m.field().characteristic() as usize;
    let p1 = chr == 0 || chr > n;
    let p2 = (chr == 0 || chr >= n) && !m.contains_identity();
    let member = Membership::new(m);
    let mut p3 = true;
    let mut bound = 0;
    for a in radical(m)? {
        let t = power_trajectory(&a)?;
        // smallest N with a^m ∈ m for every m >= N
        let entry = t.tail.iter().rposition(|x| !member.contains(x)).map_or(1, |i| i + 2);
        bound = bound.max(n * entry);
        let nilpotent = a.pow(n as u64).is_zero();
        if p2 {
            assert!(
                t.power((n * entry) as u64).is_zero(),
                "a^(nN) is nonzero for a radical element"
            );
        }
        p3 &= nilpotent;
    }
    let p4 = verify_mathieu(m, MathieuType::TwoSided)?.holds;
    assert!(!p1 || p2, "1) holds but 2) fails");
    assert!(!p2 || p3, "2) holds but 3) fails");
    assert!(!p3 || p4, "3) holds but 4) fails");
    Ok(PrelmReport {
        p1,
        p2,
        p3,
        p4,
        nilpotency_bound: bound,
    })
}

/// The largest left ideal inside `m`: `{A : E_ij A ∈ m for all i, j}`.
/// Since `tr(C E_ij A) = sum_a C_ai A_ja`, this is a linear system.
pub fn max_left_ideal(m: &MatrixSubspace) -> MatrixSubspace {
    let field = m.field();
    let n = m.n();
    let mut conditions = Vec::new();
    for c in m.constraint_space().basis_matrices() {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![field.zero(); n * n];
                for a in 0..n {
                    row[j * n + a] = c[(a, i)].clone();
                }
                conditions.push(row);
            }
        }
    }
    MatrixSubspace::from_linear_conditions(field, n, &conditions)
}

pub fn is_left_ideal(i: &MatrixSubspace) -> bool {
    let units = units(i.field(), i.n());
    i.basis_matrices()
        .iter()
        .all(|a| units.iter().all(|e| i.contains(&(e * a))))
}

/// A left ideal `I` in the form `T^-1 I T = {M : M e_(k+1) = ... = M e_n = 0}`,
/// generated by the idempotent `T diag(I_k, 0) T^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadNormalForm {
    pub t: DenseMatrix,
    pub k: usize,
    pub idempotent: DenseMatrix,
}

/// `{M : M e_(k+1) = ... = M e_n = 0}`.
pub fn column_kill_space(field: Field, n: usize, k: usize) -> MatrixSubspace {
    let units: Vec<DenseMatrix> = (0..n)
        .flat_map(|i| (0..k).map(move |j| DenseMatrix::unit(field, n, i, j)))
        .collect();
    MatrixSubspace::span(field, n, &units)
}

/// The last `n - k` columns of `t` are the RREF basis of the common kernel
/// of `i`; the first `k` are the standard vectors completing it, in order.
pub fn rad_normal_form(i: &MatrixSubspace) -> Result<RadNormalForm> {
    if !is_left_ideal(i) {
        return Err(Error::NotLeftIdeal);
    }
    let field = i.field();
    let n = i.n();
    let basis = i.basis_matrices();
    let kernel = if basis.is_empty() {
        VectorSubspace::full(field, n)
    } else {
        let stacked = basis
            .iter()
            .skip(1)
            .fold(basis[0].clone(), |acc, b| acc.stack(b));
        stacked.kernel()
    };
    let k = n - kernel.dim();
    let mut span = kernel.clone();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let e = crate::matspace::unit_vector(field, n, j + 1);
        if !span.contains(&e) {
            span = span.sum(&VectorSubspace::span(field, n, std::slice::from_ref(&e)))?;
            columns.push(e);
        }
    }
    columns.extend(kernel.basis_vectors());
    let t = DenseMatrix::from_columns(field, n, &columns);
    let t_inv = t.invert()?;
    let target = column_kill_space(field, n, k);
    assert_eq!(i.conjugate(&t)?, target, "conjugated ideal is not the column-kill space");
    let mut d = vec![field.zero(); n];
    for x in d.iter_mut().take(k) {
        *x = field.one();
    }
    let idempotent = &(&t * &DenseMatrix::diagonal(field, &d)) * &t_inv;
    let generated: Vec<DenseMatrix> = units(field, n).iter().map(|e| e * &idempotent).collect();
    assert_eq!(
        MatrixSubspace::span(field, n, &generated),
        *i,
        "the idempotent does not generate the ideal"
    );
    Ok(RadNormalForm { t, k, idempotent })
}

/// Conditions checked for equivalence:
/// 1. `m` is left Mathieu;
/// 2. the maximal left ideal `I ⊆ m` holds every idempotent of `m`;
/// 3. the radicals of `m` and `I` agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadReport {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub ideal_dim: usize,
    pub k: usize,
}

pub fn rad_equivalences(m: &MatrixSubspace) -> Result<RadReport> {
    let n = m.n();
    let ideal = max_left_ideal(m);
    let p1 = verify_mathieu(m, MathieuType::Left)?.holds;
    let p2 = idempotents_of(m)?.iter().all(|e| ideal.contains(e));
    let p3 = radical(m)? == radical(&ideal)?;
    assert!(
        p1 == p2 && p2 == p3,
        "equivalence broken: 1) {p1}, 2) {p2}, 3) {p3}"
    );
    assert_eq!(ideal.dim() % n, 0, "ideal dimension is not a multiple of n");
    Ok(RadReport {
        p1,
        p2,
        p3,
        ideal_dim: ideal.dim(),
        k: ideal.dim() / n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cor62Report {
    pub left_mathieu: bool,
    /// Only evaluated when the space is left Mathieu.
    pub two_sided: Option<bool>,
    pub field_exceeds_two: bool,
}

/// For `0 < codim m < n`: left Mathieu implies two-sided Mathieu and
/// `#K > 2`.
pub fn cor62_check(m: &MatrixSubspace) -> Result<Cor62Report> {
    let n = m.n();
    let codim = m.codim();
    if codim == 0 || codim >= n {
        return Err(Error::PreconditionViolated(format!(
            "codimension {codim} is not in 1..{n}"
        )));
    }
    let field_exceeds_two = m.field().has_at_least(3);
    let left_mathieu = verify_mathieu(m, MathieuType::Left)?.holds;
    let two_sided = if left_mathieu {
        let two = verify_mathieu(m, MathieuType::TwoSided)?.holds;
        assert!(two && field_exceeds_two, "left Mathieu space of small codimension is not two-sided over a field with more than two elements");
        Some(two)
    } else {
        None
    };
    Ok(Cor62Report {
        left_mathieu,
        two_sided,
        field_exceeds_two,
    })
}
