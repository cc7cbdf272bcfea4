//! Plain-text matrix-space files.
//!
//! ```text
//! # comments run to the end of the line
//! name: H
//! field: 5
//! n: 2
//! basis:
//! 1 0
//! 0 -1
//!
//! 0 1
//! 0 0
//! ```
//!
//! `field` is `Q` or a prime and may be left out when the caller supplies
//! one. Entries are integers, reduced mod `p` only when the space is built.

use std::fmt::Write as _;

use mathieu_core::field::Field;
use mathieu_core::matspace::MatrixSubspace;
use mathieu_core::DenseMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFile {
    pub name: Option<String>,
    pub field: Option<Field>,
    pub n: usize,
    pub basis: Vec<Vec<Vec<i64>>>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_field(text: &str) -> Result<Field, String> {
    let text = text.trim();
    if text == "Q" {
        return Ok(Field::Rationals);
    }
    let p: u64 = text
        .parse()
        .map_err(|_| format!("expected Q or a prime, found {text:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

pub fn field_label(field: Field) -> String {
    match field {
        Field::Prime(p) => p.to_string(),
        Field::Rationals => "Q".into(),
    }
}

impl SpaceFile {
    pub fn parse(text: &str) -> Result<SpaceFile, ParseError> {
        let mut name = None;
        let mut field = None;
        let mut n: Option<usize> = None;
        let mut in_basis = false;
        let mut basis = Vec::new();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut block_start = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if in_basis {
                let n = n.expect("checked on entering the basis");
                if line.is_empty() {
                    if !rows.is_empty() {
                        return Err(err(
                            line_no,
                            format!("matrix starting on line {block_start} has {} of {n} rows", rows.len()),
                        ));
                    }
                    continue;
                }
                let row = line
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<i64>()
                            .map_err(|_| err(line_no, format!("expected an integer, found {tok:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if row.len() != n {
                    return Err(err(line_no, format!("row has {} entries, expected {n}", row.len())));
                }
                if rows.is_empty() {
                    block_start = line_no;
                }
                rows.push(row);
                if rows.len() == n {
                    basis.push(std::mem::take(&mut rows));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(err(line_no, format!("expected `key: value`, found {line:?}")));
            };
            let value = value.trim();
            match key.trim() {
                "name" if name.is_none() => {
                    if value.is_empty() {
                        return Err(err(line_no, "empty name"));
                    }
                    name = Some(value.to_string());
                }
                "field" if field.is_none() => field = Some(parse_field(value).map_err(|m| err(line_no, m))?),
                "n" if n.is_none() => {
                    let v: usize = value
                        .parse()
                        .map_err(|_| err(line_no, format!("expected a positive integer, found {value:?}")))?;
                    if v == 0 {
                        return Err(err(line_no, "n must be positive"));
                    }
                    n = Some(v);
                }
                "basis" => {
                    if !value.is_empty() {
                        return Err(err(line_no, "matrices start on the line after `basis:`"));
                    }
                    if n.is_none() {
                        return Err(err(line_no, "`n:` must come before `basis:`"));
                    }
                    in_basis = true;
                }
                k @ ("name" | "field" | "n") => return Err(err(line_no, format!("duplicate key `{k}`"))),
                k => return Err(err(line_no, format!("unknown key `{k}`"))),
            }
        }
        let last = text.lines().count();
        if !rows.is_empty() {
            return Err(err(
                last,
                format!("matrix starting on line {block_start} is incomplete at end of file"),
            ));
        }
        let Some(n) = n else {
            return Err(err(last, "missing `n:`"));
        };
        if !in_basis {
            return Err(err(last, "missing `basis:`"));
        }
        Ok(SpaceFile { name, field, n, basis })
    }

    /// Canonical text; `parse(write(f)) == f`.
    pub fn write(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            writeln!(out, "name: {name}").unwrap();
        }
        if let Some(field) = self.field {
            writeln!(out, "field: {}", field_label(field)).unwrap();
        }
        writeln!(out, "n: {}", self.n).unwrap();
        out.push_str("basis:\n");
        for (i, m) in self.basis.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for row in m {
                let row: Vec<String> = row.iter().map(i64::to_string).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
        out
    }

    pub fn matrices(&self, field: Field) -> Vec<DenseMatrix> {
        self.basis
            .iter()
            .map(|m| {
                let entries = m.iter().flatten().map(|&x| field.from_i64(x)).collect();
                DenseMatrix::from_entries(field, self.n, self.n, entries)
            })
            .collect()
    }

    /// The span of the basis over `field`; dependent matrices are allowed.
    pub fn space(&self, field: Field) -> MatrixSubspace {
        MatrixSubspace::span(field, self.n, &self.matrices(field))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const H: &str = "name: H\nfield: 5\nn: 2\nbasis:\n1 0\n0 -1\n\n0 1\n0 0\n\n0 0\n1 0\n";

    #[test]
    fn canonical_text_roundtrips_bytewise() {
        let f = SpaceFile::parse(H).unwrap();
        assert_eq!(f.write(), H);
        assert_eq!(f.space(Field::Prime(5)).dim(), 3);
        assert!(f.space(Field::Prime(5)).is_traceless());
    }

    #[test]
    fn comments_and_loose_spacing() {
        let text = "# header\nn:2   # size\nfield: Q\n\nbasis:\n 1   2\n3 4 # first\n";
        let f = SpaceFile::parse(text).unwrap();
        assert_eq!(f.basis, vec![vec![vec![1, 2], vec![3, 4]]]);
        assert_eq!(f.field, Some(Field::Rationals));
        assert_eq!(f.name, None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("n: 2\nbasis:\n1 0\n0 x\n", 4, "integer"),
            ("n: 2\nbasis:\n1 0 0\n", 3, "3 entries"),
            ("n: 2\nbasis:\n1 0\n\n0 1\n", 4, "1 of 2 rows"),
            ("field: 4\n", 1, "not a prime"),
            ("n: 2\nsize: 3\n", 2, "unknown key"),
            ("n: 2\nn: 3\n", 2, "duplicate"),
            ("basis:\n", 1, "before"),
            ("n: 2\nbasis:\n1 0\n", 3, "incomplete"),
            ("n: 2\n", 1, "missing `basis:`"),
        ];
        for (text, line, needle) in cases {
            let e = SpaceFile::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
            assert!(e.message.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn entries_reduce_mod_p() {
        let f = SpaceFile::parse("n: 1\nbasis:\n7\n").unwrap();
        assert!(f.space(Field::Prime(7)).dim() == 0);
        assert!(f.space(Field::Prime(5)).dim() == 1);
    }

    fn space_file() -> impl Strategy<Value = SpaceFile> {
        (
            prop::option::of("[A-Za-z][A-Za-z0-9_.-]{0,12}"),
            prop::option::of(prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(101))]),
            1..=4usize,
        )
            .prop_flat_map(|(name, field, n)| {
                prop::collection::vec(prop::collection::vec(prop::collection::vec(any::<i64>(), n), n), 0..4)
                    .prop_map(move |basis| SpaceFile {
                        name: name.clone(),
                        field,
                        n,
                        basis,
                    })
            })
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(f in space_file()) {
            let text = f.write();
            let back = SpaceFile::parse(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.write(), text);
        }
    }
}
