use clap::ValueEnum;
use mathieu_core::field::Field;
use mathieu_core::mathieu::{idempotents_of, proposition_family, verify_mathieu, MathieuType};
use mathieu_core::matspace::{enumerate_subspaces, MatrixSubspace};
use mathieu_core::normalize::{exhaustive_main2_search, general_linear_group};
use mathieu_core::par::Exec;
use mathieu_core::DenseMatrix;
use serde_json::json;

use crate::commands::{CliError, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReproName {
    Counterexample,
    Proposition,
    #[value(name = "codim1-zhao")]
    Codim1Zhao,
    #[value(name = "cor62-f2")]
    Cor62F2,
}

pub fn run(name: ReproName) -> Result<Outcome, CliError> {
    match name {
        ReproName::Counterexample => counterexample(),
        ReproName::Proposition => proposition(),
        ReproName::Codim1Zhao => codim1_zhao(),
        ReproName::Cor62F2 => cor62_f2(),
    }
}

fn outcome(ok: bool, expected: &str, observed: String, details: serde_json::Value) -> Outcome {
    Outcome {
        ok,
        payload: json!({ "expected": expected, "observed": observed, "details": details }),
        move_log: None,
    }
}

/// `E12 + E22`, `E22 + E23` in `Mat_3(F_2)`.
pub fn counterexample_space() -> MatrixSubspace {
    let field = Field::Prime(2);
    let e = |i: usize, j: usize| DenseMatrix::unit(field, 3, i - 1, j - 1);
    MatrixSubspace::span(field, 3, &[&e(1, 2) + &e(2, 2), &e(2, 2) + &e(2, 3)])
}

fn counterexample() -> Result<Outcome, CliError> {
    let c = counterexample_space();
    let group = general_linear_group(Field::Prime(2), 3)?;
    let hits = exhaustive_main2_search(&c, Exec::default())?;
    Ok(outcome(
        group.len() == 168 && hits.is_empty(),
        "all 168 conjugators fail for r ∈ {1,2}",
        if hits.is_empty() {
            format!("all {} conjugators fail for r ∈ {{1,2}}", group.len())
        } else {
            format!("{} of {} (T, r) pairs succeed", hits.len(), group.len())
        },
        json!({ "group_order": group.len(), "successes": hits.len() }),
    ))
}

fn proposition() -> Result<Outcome, CliError> {
    let field = Field::Prime(5);
    let m = proposition_family(field, 2, &field.one())?;
    let two_sided = verify_mathieu(&m, MathieuType::TwoSided)?.holds;
    let nonzero_idempotents = idempotents_of(&m)?.iter().filter(|e| !e.is_zero()).count();
    Ok(outcome(
        two_sided && nonzero_idempotents == 0,
        "two-sided Mathieu: true",
        format!("two-sided Mathieu: {two_sided}"),
        json!({ "field": 5, "n": 2, "a": 1, "dim": m.dim(), "nonzero_idempotents": nonzero_idempotents }),
    ))
}

/// Trace-zero `2 x 2` matrices over `F_p`.
fn trace_zero(p: u32) -> MatrixSubspace {
    MatrixSubspace::trace_zero(Field::Prime(p), 2)
}

fn codim1_zhao() -> Result<Outcome, CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for p in [2u32, 3, 5] {
        let h = trace_zero(p);
        let expected = p != 2;
        for kind in MathieuType::ALL {
            let v = verify_mathieu(&h, kind)?;
            let replayed = v.witness.as_ref().map(|w| w.replay(&h));
            ok &= v.holds == expected && replayed.unwrap_or(true);
            rows.push(json!({ "p": p, "type": kind, "holds": v.holds, "witness_replays": replayed }));
        }
    }
    let observed = if ok {
        "H ⊂ Mat_2(F_p) is Mathieu for p = 3, 5 and fails for p = 2".to_string()
    } else {
        "verdicts differ from chr K ∉ {1, 2}".to_string()
    };
    Ok(outcome(
        ok,
        "H ⊂ Mat_2(F_p) is Mathieu for p = 3, 5 and fails for p = 2",
        observed,
        json!(rows),
    ))
}

fn cor62_f2() -> Result<Outcome, CliError> {
    let spaces = enumerate_subspaces(Field::Prime(2), 2, 3)?;
    let mut left = 0;
    for m in &spaces {
        if verify_mathieu(m, MathieuType::Left)?.holds {
            left += 1;
        }
    }
    Ok(outcome(
        spaces.len() == 15 && left == 0,
        "0 of 15 codim-1 subspaces of Mat_2(F_2) are left Mathieu",
        format!("{left} of {} codim-1 subspaces of Mat_2(F_2) are left Mathieu", spaces.len()),
        json!({ "subspaces": spaces.len(), "left_mathieu": left }),
    ))
}
