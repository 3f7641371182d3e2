//! Line-oriented scenario files.
//!
//! ```text
//! # comment
//! name: coherent-measurement-qubit
//! seed: 7
//! construction:
//!   id: coherent_measurement_channel
//!   beta: 1.0
//! epsilon_grid:
//!   min: 1e-3
//!   max: 1
//!   points_per_decade: 25
//! checks: [validate, gibbs, recovery, C, delta, bounds]
//! ```
//!
//! Values are JSON when they parse as JSON and bare strings otherwise.
//! Complex numbers are `[re, im]` pairs; matrices are row-major arrays of rows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{CliError, Result};
use crate::registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Validate,
    Gibbs,
    Recovery,
    C,
    Delta,
    Bounds,
    Tightness,
    Dilation,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Validate,
        Check::Gibbs,
        Check::Recovery,
        Check::C,
        Check::Delta,
        Check::Bounds,
        Check::Tightness,
        Check::Dilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Validate => "validate",
            Check::Gibbs => "gibbs",
            Check::Recovery => "recovery",
            Check::C => "C",
            Check::Delta => "delta",
            Check::Bounds => "bounds",
            Check::Tightness => "tightness",
            Check::Dilation => "dilation",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s)).ok_or_else(|| {
            let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check '{s}'; available: {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub id: String,
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points_per_decade: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { min: 1e-3, max: 1.0, points_per_decade: 25 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub construction: Construction,
    pub epsilon_grid: GridSpec,
    pub checks: Vec<Check>,
    pub seed: u64,
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

struct Entry {
    line: usize,
    key: String,
    value: Option<Value>,
    children: Vec<(usize, String, Value)>,
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

fn split_key(line: usize, text: &str) -> Result<(String, String)> {
    let (k, v) = text.split_once(':').ok_or_else(|| err(line, format!("expected 'key: value', got '{text}'")))?;
    let k = k.trim();
    if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(err(line, format!("invalid key '{k}'")));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

fn entries(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indented = raw.starts_with(' ') || raw.starts_with('\t');
        let (key, value) = split_key(line, trimmed)?;
        if indented {
            let parent = out.last_mut().filter(|e| e.value.is_none()).ok_or_else(|| {
                err(line, format!("indented entry '{key}' is not inside a block"))
            })?;
            if value.is_empty() {
                return Err(err(line, format!("nested entry '{key}' needs a value")));
            }
            if parent.children.iter().any(|(_, k, _)| *k == key) {
                return Err(err(line, format!("duplicate key '{key}'")));
            }
            parent.children.push((line, key, parse_value(&value)));
        } else {
            if out.iter().any(|e| e.key == key) {
                return Err(err(line, format!("duplicate key '{key}'")));
            }
            let value = if value.is_empty() { None } else { Some(parse_value(&value)) };
            out.push(Entry { line, key, value, children: Vec::new() });
        }
    }
    Ok(out)
}

fn scalar_f64(line: usize, key: &str, v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| err(line, format!("'{key}' must be a number")))
}

fn scalar_usize(line: usize, key: &str, v: &Value) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| err(line, format!("'{key}' must be a non-negative integer")))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut construction = None;
        let mut grid = GridSpec::default();
        let mut checks = None;
        let mut seed = 0u64;
        for e in entries(text)? {
            let needs_value = |e: &Entry| e.value.clone().ok_or_else(|| err(e.line, format!("'{}' needs a value", e.key)));
            match e.key.as_str() {
                "name" => {
                    let v = needs_value(&e)?;
                    let s = match v {
                        Value::String(s) => s,
                        other => other.to_string(),
                    };
                    if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                        return Err(err(e.line, format!("name '{s}' must use letters, digits, '-', '_' or '.'")));
                    }
                    name = Some(s);
                }
                "seed" => seed = needs_value(&e)?.as_u64().ok_or_else(|| err(e.line, "'seed' must be a non-negative integer"))?,
                "checks" => {
                    let v = needs_value(&e)?;
                    let items: Vec<String> = match v {
                        Value::Array(items) => items
                            .iter()
                            .map(|i| i.as_str().map(str::to_string).ok_or_else(|| err(e.line, "checks must be names")))
                            .collect::<Result<_>>()?,
                        Value::String(s) => {
                            s.trim_matches(|c| c == '[' || c == ']').split(',').map(|x| x.trim().to_string()).collect()
                        }
                        _ => return Err(err(e.line, "checks must be a list of names")),
                    };
                    let mut parsed = Vec::new();
                    for item in items.iter().filter(|s| !s.is_empty()) {
                        let c: Check = item.parse().map_err(|m: String| err(e.line, m))?;
                        if !parsed.contains(&c) {
                            parsed.push(c);
                        }
                    }
                    checks = Some(parsed);
                }
                "construction" => {
                    if e.value.is_some() {
                        return Err(err(e.line, "'construction' is a block: put 'id' and parameters on indented lines"));
                    }
                    let mut id = None;
                    let mut params = BTreeMap::new();
                    for (line, k, v) in e.children {
                        if k == "id" {
                            id = Some((line, v.as_str().map(str::to_string).ok_or_else(|| err(line, "'id' must be a name"))?));
                        } else {
                            params.insert(k, v);
                        }
                    }
                    let (line, id) = id.ok_or_else(|| err(e.line, "construction block needs an 'id'"))?;
                    registry::spec(&id).map_err(|x| err(line, x.to_string()))?;
                    construction = Some(Construction { id, params });
                }
                "epsilon_grid" => {
                    if e.value.is_some() {
                        return Err(err(e.line, "'epsilon_grid' is a block of min, max, points_per_decade"));
                    }
                    for (line, k, v) in e.children {
                        match k.as_str() {
                            "min" => grid.min = scalar_f64(line, &k, &v)?,
                            "max" => grid.max = scalar_f64(line, &k, &v)?,
                            "points_per_decade" => grid.points_per_decade = scalar_usize(line, &k, &v)?,
                            _ => return Err(err(line, format!("unknown epsilon_grid key '{k}'"))),
                        }
                    }
                    coherence_cost::certify::EpsilonGrid::new(grid.min, grid.max, grid.points_per_decade)
                        .map_err(|x| err(e.line, x.to_string()))?;
                }
                other => return Err(err(e.line, format!("unknown key '{other}'"))),
            }
        }
        let construction = construction.ok_or_else(|| err(0, "missing 'construction' block"))?;
        registry::check_params(&construction).map_err(|x| CliError::Invalid(x.to_string()))?;
        Ok(Scenario {
            name: name.ok_or_else(|| err(0, "missing 'name'"))?,
            construction,
            epsilon_grid: grid,
            checks: checks.unwrap_or_else(|| vec![Check::Validate, Check::Gibbs]),
            seed,
        })
    }

    pub fn grid(&self) -> coherence_cost::certify::EpsilonGrid {
        let g = self.epsilon_grid;
        coherence_cost::certify::EpsilonGrid::new(g.min, g.max, g.points_per_decade).expect("validated at parse time")
    }
}
