use mathieu_core::normalize::{Move, MoveKind};
use mathieu_core::DenseMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub level: usize,
    pub t: Vec<Vec<String>>,
}

impl From<&Move> for MoveRecord {
    fn from(m: &Move) -> Self {
        MoveRecord {
            kind: m.kind,
            level: m.level,
            t: matrix_json(&m.t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// sha256 of the canonical input file, absent for canned reproductions.
    pub input_digest: Option<String>,
    /// False when a reproduction disagrees with its expected outcome.
    pub ok: bool,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_log: Option<Vec<MoveRecord>>,
    pub wall_time_us: u64,
}

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn matrix_json(m: &DenseMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect()
}

pub fn matrices_json(ms: &[DenseMatrix]) -> Vec<Vec<Vec<String>>> {
    ms.iter().map(matrix_json).collect()
}

fn as_matrix(v: &Value) -> Option<Vec<Vec<String>>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    rows.iter()
        .map(|r| {
            let r = r.as_array()?;
            r.iter()
                .map(|x| match x {
                    Value::String(s) => Some(s.clone()),
                    Value::Number(k) => Some(k.to_string()),
                    _ => None,
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, indent: usize, key: &str, v: &Value) {
    let pad = " ".repeat(indent);
    if let Some(m) = as_matrix(v) {
        let width = m.iter().flatten().map(String::len).max().unwrap_or(1);
        out.push_str(&format!("{pad}{key}:\n"));
        for row in m {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            out.push_str(&format!("{pad}  [{}]\n", cells.join(" ")));
        }
        return;
    }
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in map {
                render_value(out, indent + 2, k, x);
            }
        }
        Value::Array(items) if items.iter().any(|x| as_matrix(x).is_some() || x.is_object()) => {
            out.push_str(&format!("{pad}{key}: {} item(s)\n", items.len()));
            for (i, x) in items.iter().enumerate() {
                render_value(out, indent + 2, &format!("[{i}]"), x);
            }
        }
        Value::Array(items) => {
            let items: Vec<String> = items.iter().map(scalar).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", items.join(", ")));
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(d) = &self.input_digest {
            out.push_str(&format!("input sha256: {d}\n"));
        }
        out.push_str(&format!("ok: {}\n", self.ok));
        if let Value::Object(map) = &self.payload {
            for (k, v) in map {
                render_value(&mut out, 0, k, v);
            }
        } else {
            render_value(&mut out, 0, "result", &self.payload);
        }
        if let Some(log) = &self.move_log {
            out.push_str(&format!("moves: {}\n", log.len()));
            for m in log {
                let kind = serde_json::to_value(m.kind).expect("move kind serializes");
                let label = format!("{} at level {}", scalar(&kind), m.level);
                render_value(&mut out, 2, &label, &serde_json::json!(m.t));
            }
        }
        out.push_str(&format!("wall time: {:.3} ms\n", self.wall_time_us as f64 / 1000.0));
        out
    }
}
