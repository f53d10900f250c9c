//! File formats.
//!
//! * items: JSON Lines, `{"id": <int>, "props": [[<p>, <v>], ...]}` per line;
//! * constraint spec: `{"caps": [k_1, ..., k_d]}`;
//! * distribution: `{"kind": "<name>", "d": <int>, ...}`;
//! * policy: `{"t": [<number or "ABOVE">, ...]}`;
//! * greedy trace: CSV `step,item_id,retained,running_value`.
//!
//! Values are written with 17 significant digits so they read back bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::greedy::TraceStep;
use crate::model::{Instance, Item, Property};
use crate::thresholds::{Threshold, ThresholdsPolicy};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemLine {
    id: u64,
    props: Vec<(Property, f64)>,
}

/// A value with 17 significant digits in exponent form, e.g. `3.0000000000000004e-1`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Parses item lines; blank lines are skipped.
pub fn parse_items(text: &str, path: &Path) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: ItemLine = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        items.push(Item::new(raw.id, raw.props));
    }
    Ok(items)
}

/// Reads an item file without requiring ids to be arrival positions.
pub fn read_items(path: &Path) -> Result<Vec<Item>> {
    parse_items(&read_text(path)?, path)
}

/// Reads an instance: the item on line `i` must have id `i - 1`.
pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = read_text(path)?;
    let items = parse_items(&text, path)?;
    if let Some(pos) = items.iter().enumerate().position(|(i, c)| c.id() != i as u64) {
        let line = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .nth(pos)
            .map_or(pos + 1, |(i, _)| i + 1);
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: format!("id {} out of sequence, expected {pos}", items[pos].id()),
        });
    }
    Instance::new(items)
}

pub fn items_to_jsonl(items: &[Item]) -> String {
    let mut out = String::new();
    for item in items {
        let _ = write!(out, "{{\"id\":{},\"props\":[", item.id());
        for (j, &(p, v)) in item.props().iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "[{p},{}]", format_value(v));
        }
        out.push_str("]}\n");
    }
    out
}

pub fn policy_to_json(policy: &ThresholdsPolicy) -> String {
    let parts: Vec<String> = policy
        .t
        .iter()
        .map(|t| match t {
            Threshold::Value(v) => format_value(*v),
            Threshold::Above => "\"ABOVE\"".to_string(),
        })
        .collect();
    format!("{{\"t\":[{}]}}", parts.join(","))
}

/// Reads a whole-file JSON document such as a spec, distribution or policy.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })
}

pub fn trace_to_csv(steps: &[TraceStep]) -> String {
    let mut out = String::from("step,item_id,retained,running_value\n");
    for s in steps {
        let _ = writeln!(out, "{},{},{},{}", s.step, s.item_id, s.retained, s.running_value);
    }
    out
}
