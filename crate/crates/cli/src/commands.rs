use mathieu_core::field::Field;
use mathieu_core::idempotent::{full_space_certificate, idempotent_family, IdempotentForm};
use mathieu_core::mathieu::{
    full_power_set, max_left_ideal, rad_equivalences, rad_normal_form, radical, verify_mathieu, MathieuType,
};
use mathieu_core::matspace::MatrixSubspace;
use mathieu_core::normalize::{apply_main2, main2_conclusion_holds, normalize_main3, Move};
use mathieu_core::random::random_matrix;
use mathieu_core::{DenseMatrix, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{digest, matrices_json, matrix_json, MoveRecord};
use crate::spacefile::{field_label, ParseError, SpaceFile};

/// Listing cap for element sets in reports.
pub const LIST_LIMIT: usize = 256;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for bad input, 1 when the computation itself fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => 1,
            _ => 2,
        }
    }
}

pub struct Input {
    pub file: SpaceFile,
    pub field: Field,
    pub space: MatrixSubspace,
    pub digest: String,
}

/// Reads `path`, or draws a space for `random:N:DIM`. An explicit `field`
/// overrides the file header.
pub fn load(path: &str, field: Option<Field>, seed: u64) -> Result<Input, CliError> {
    let file = if let Some(shape) = path.strip_prefix("random:") {
        random_file(shape, field, seed)?
    } else {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        SpaceFile::parse(&text).map_err(|source| CliError::Parse {
            path: path.into(),
            source,
        })?
    };
    let Some(field) = field.or(file.field) else {
        return Err(CliError::Usage(format!("{path}: no `field:` header and no --field given")));
    };
    let file = SpaceFile {
        field: Some(field),
        ..file
    };
    let space = file.space(field);
    Ok(Input {
        digest: digest(&file.write()),
        file,
        field,
        space,
    })
}

fn random_file(shape: &str, field: Option<Field>, seed: u64) -> Result<SpaceFile, CliError> {
    let usage = || CliError::Usage(format!("random:{shape}: expected random:N:DIM"));
    let (n, dim) = shape.split_once(':').ok_or_else(usage)?;
    let n: usize = n.parse().map_err(|_| usage())?;
    let dim: usize = dim.parse().map_err(|_| usage())?;
    let field = field.ok_or_else(|| CliError::Usage("random spaces need --field".into()))?;
    if n == 0 || dim > n * n {
        return Err(CliError::Usage(format!("random:{shape}: need n > 0 and DIM <= n^2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = Vec::new();
    let mut space = MatrixSubspace::zero(field, n);
    while space.dim() < dim {
        let m = random_matrix(field, n, 0.4, &mut rng);
        if space.contains(&m) {
            continue;
        }
        space = space.sum(&MatrixSubspace::span(field, n, std::slice::from_ref(&m)))?;
        basis.push(integer_rows(&m));
    }
    Ok(SpaceFile {
        name: Some(format!("random-{n}-{dim}-{seed}")),
        field: Some(field),
        n,
        basis,
    })
}

/// Entries of a matrix whose entries are residues or integers.
fn integer_rows(m: &DenseMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_string().parse().expect("integer entry"))
                .collect()
        })
        .collect()
}

pub struct Outcome {
    pub ok: bool,
    pub payload: Value,
    pub move_log: Option<Vec<MoveRecord>>,
}

impl Outcome {
    fn of(payload: Value) -> Self {
        Outcome {
            ok: true,
            payload,
            move_log: None,
        }
    }
}

fn log(moves: &[Move]) -> Option<Vec<MoveRecord>> {
    Some(moves.iter().map(MoveRecord::from).collect())
}

fn header(input: &Input) -> Value {
    json!({
        "name": input.file.name,
        "field": field_label(input.field),
        "n": input.file.n,
        "dim": input.space.dim(),
    })
}

pub fn constraints(input: &Input) -> Result<Outcome, CliError> {
    let c = input.space.constraint_space();
    Ok(Outcome::of(json!({
        "space": header(input),
        "constraint_dim": c.dim(),
        "identity_in_constraints": c.contains_identity(),
        "constraint_basis": matrices_json(&c.basis_matrices()),
    })))
}

/// The file's space is read as `C_n` directly.
pub fn profile(input: &Input) -> Result<Outcome, CliError> {
    Ok(Outcome::of(json!({
        "space": header(input),
        "profile": input.space.binary_profile(),
    })))
}

/// The file's space is read as `C_n` directly.
pub fn normalize(input: &Input) -> Result<Outcome, CliError> {
    let res = normalize_main3(&input.space)?;
    Ok(Outcome {
        ok: true,
        payload: json!({
            "space": header(input),
            "branch": res.branch,
            "t": matrix_json(&res.t_total),
            "profile": res.profile,
            "normalized_basis": matrices_json(&res.c_n_final.basis_matrices()),
        }),
        move_log: log(&res.log),
    })
}

pub fn idempotents(input: &Input, r: usize, form: IdempotentForm) -> Result<Outcome, CliError> {
    let n = input.file.n;
    if r == 0 || r >= n {
        return Err(CliError::Usage(format!("--r must lie in 1..{n}")));
    }
    let family = match idempotent_family(&input.space, r, form) {
        Ok(f) => f,
        Err(Error::HypothesisFailed { witness }) => {
            return Ok(Outcome::of(json!({
                "space": header(input),
                "form": form,
                "r": r,
                "hypothesis_holds": false,
                "witness_constraint": matrix_json(&witness),
            })));
        }
        Err(e) => return Err(e.into()),
    };
    let zero = vec![input.field.zero(); family.dim()];
    let directions: Vec<DenseMatrix> = (0..family.dim())
        .map(|i| {
            let mut coeffs = zero.clone();
            coeffs[i] = input.field.one();
            &family.member(&coeffs) - &family.particular
        })
        .collect();
    let members = match family.members() {
        Ok(ms) if ms.len() <= LIST_LIMIT => Some(matrices_json(&ms)),
        _ => None,
    };
    let count = input
        .field
        .cardinality()
        .map(|q| (q as u128).checked_pow(family.dim() as u32).map(|c| c.to_string()));
    Ok(Outcome::of(json!({
        "space": header(input),
        "form": form,
        "r": r,
        "hypothesis_holds": true,
        "rank": family.rank(),
        "dim": family.dim(),
        "particular": matrix_json(&family.particular),
        "directions": matrices_json(&directions),
        "member_count": count.flatten(),
        "members": members,
    })))
}

pub fn verify(input: &Input, kind: MathieuType) -> Result<Outcome, CliError> {
    let verdict = verify_mathieu(&input.space, kind)?;
    let witness = verdict.witness.as_ref().map(|w| {
        json!({
            "a": matrix_json(&w.a),
            "b": w.b.as_ref().map(matrix_json),
            "c": w.c.as_ref().map(matrix_json),
            "exponent": w.exponent,
            "period": w.period,
            "replay_confirms": w.replay(&input.space),
        })
    });
    Ok(Outcome::of(json!({
        "space": header(input),
        "type": kind,
        "holds": verdict.holds,
        "witness": witness,
    })))
}

fn capped(ms: &[DenseMatrix]) -> Value {
    json!({
        "count": ms.len(),
        "truncated": ms.len() > LIST_LIMIT,
        "elements": matrices_json(&ms[..ms.len().min(LIST_LIMIT)]),
    })
}

pub fn radical_cmd(input: &Input) -> Result<Outcome, CliError> {
    let rad = radical(&input.space)?;
    let full = full_power_set(&input.space)?;
    Ok(Outcome::of(json!({
        "space": header(input),
        "radical": capped(&rad),
        "full_power_set": capped(&full),
    })))
}

pub fn maxideal(input: &Input) -> Result<Outcome, CliError> {
    let ideal = max_left_ideal(&input.space);
    let normal_form = rad_normal_form(&ideal)?;
    let equivalences = match rad_equivalences(&input.space) {
        Ok(r) => Some(r),
        Err(Error::RequiresFiniteField | Error::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome::of(json!({
        "space": header(input),
        "ideal_dim": ideal.dim(),
        "ideal_basis": matrices_json(&ideal.basis_matrices()),
        "k": normal_form.k,
        "t": matrix_json(&normal_form.t),
        "idempotent": matrix_json(&normal_form.idempotent),
        "equivalences": equivalences,
    })))
}

pub fn main2(input: &Input) -> Result<Outcome, CliError> {
    let cert = apply_main2(&input.space)?;
    let c = input.space.constraint_space();
    let conjugated_c = c.conjugate(&cert.t)?;
    let holds = main2_conclusion_holds(&conjugated_c, cert.r)?;
    let conjugated_m = input.space.conjugate(&cert.t)?;
    let full = match full_space_certificate(&conjugated_m, cert.r) {
        Ok(f) => json!({
            "e": matrix_json(&f.e),
            "e_prime": matrix_json(&f.e_prime),
            "unipotent": f.is_unipotent(),
        }),
        Err(e @ (Error::HypothesisFailed { .. } | Error::PreconditionViolated(_))) => json!({ "error": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        ok: true,
        payload: json!({
            "space": header(input),
            "r": cert.r,
            "t": matrix_json(&cert.t),
            "branch": cert.normalization.branch,
            "profile": cert.normalization.profile,
            "conclusion_holds": holds,
            "full_space_certificate": full,
        }),
        move_log: log(&cert.normalization.log),
    })
}
