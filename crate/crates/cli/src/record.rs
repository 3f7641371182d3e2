//! Text record of a channel: both systems and the Kraus operators.
//!
//! ```text
//! input:
//!   label: "S"
//!   beta: 1
//!   hamiltonian: [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
//! output:
//!   ...
//! kraus: [<matrix>, <matrix>]
//! ```
//!
//! Every complex entry is written as `[re, im]` with 12 significant digits.

use std::collections::BTreeMap;

use coherence_cost::certify::format_sig;
use coherence_cost::f64::{Channel, Matrix, System};
use coherence_cost::C;
use serde_json::Value;

use crate::error::{CliError, Result};

fn num(x: f64) -> String {
    format_sig(x, 12)
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let entries: Vec<String> =
                (0..m.cols()).map(|j| format!("[{}, {}]", num(m[(i, j)].re), num(m[(i, j)].im))).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn system_text(key: &str, s: &System) -> String {
    format!(
        "{key}:\n  label: {}\n  beta: {}\n  hamiltonian: {}\n",
        Value::String(s.label().to_string()),
        num(s.beta()),
        matrix_text(s.hamiltonian())
    )
}

pub fn write_channel(ch: &Channel) -> String {
    let kraus: Vec<String> = ch.kraus().iter().map(matrix_text).collect();
    format!(
        "{}{}kraus: [{}]\n",
        system_text("input", ch.input()),
        system_text("output", ch.output()),
        kraus.join(", ")
    )
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn parse_matrix(v: &Value) -> Result<Matrix> {
    let entry = |e: &Value| -> Option<C<f64>> {
        let pair = e.as_array().filter(|p| p.len() == 2)?;
        Some(C::new(pair[0].as_f64()?, pair[1].as_f64()?))
    };
    let rows = v
        .as_array()
        .and_then(|rows| rows.iter().map(|r| r.as_array()?.iter().map(entry).collect()).collect::<Option<Vec<Vec<_>>>>())
        .ok_or_else(|| invalid("matrix must be rows of [re, im] entries"))?;
    Ok(Matrix::from_rows(&rows)?)
}

fn parse_system(block: &BTreeMap<String, Value>) -> Result<System> {
    let get = |k: &str| block.get(k).ok_or_else(|| invalid(format!("system record lacks '{k}'")));
    let label = get("label")?.as_str().ok_or_else(|| invalid("label must be a string"))?;
    let beta = get("beta")?.as_f64().ok_or_else(|| invalid("beta must be a number"))?;
    Ok(System::new(label, parse_matrix(get("hamiltonian")?)?, beta)?)
}

/// Inverse of [`write_channel`].
pub fn read_channel(text: &str) -> Result<Channel> {
    let mut blocks: BTreeMap<String, BTreeMap<String, Value>> = BTreeMap::new();
    let mut kraus = None;
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (k, v) = trimmed
            .split_once(':')
            .ok_or_else(|| CliError::Parse { line, message: format!("expected 'key: value', got '{trimmed}'") })?;
        let (k, v) = (k.trim().to_string(), v.trim());
        if raw.starts_with(' ') {
            let block = current.as_ref().ok_or_else(|| CliError::Parse { line, message: "entry outside a block".into() })?;
            let value = serde_json::from_str(v).map_err(|e| CliError::Parse { line, message: e.to_string() })?;
            blocks.get_mut(block).expect("opened").insert(k, value);
        } else if k == "kraus" {
            kraus = Some(serde_json::from_str::<Value>(v).map_err(|e| CliError::Parse { line, message: e.to_string() })?);
            current = None;
        } else if (k == "input" || k == "output") && v.is_empty() {
            blocks.insert(k.clone(), BTreeMap::new());
            current = Some(k);
        } else {
            return Err(CliError::Parse { line, message: format!("unknown key '{k}'") });
        }
    }
    let input = parse_system(blocks.get("input").ok_or_else(|| invalid("record lacks 'input'"))?)?;
    let output = parse_system(blocks.get("output").ok_or_else(|| invalid("record lacks 'output'"))?)?;
    let kraus = kraus.ok_or_else(|| invalid("record lacks 'kraus'"))?;
    let ops = kraus
        .as_array()
        .ok_or_else(|| invalid("kraus must be a list of matrices"))?
        .iter()
        .map(parse_matrix)
        .collect::<Result<Vec<_>>>()?;
    Ok(Channel::new(ops, &input, &output)?)
}
