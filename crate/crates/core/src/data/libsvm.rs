//! Reader and writer for the libsvm / svmlight sparse text format.
//!
//! ```text
//! +1 1:0.5 3:2.0   # optional trailing comment
//! -1
//! ```
//!
//! Each non-blank line is a label followed by `index:value` pairs with 1-based,
//! strictly ascending indices. Absent indices are zero, and the dimension is the
//! largest index seen in the file.
//!
//! Binary label normalization: if every raw label is already `-1` or `+1` the
//! labels are kept. Otherwise the file must contain exactly two distinct raw
//! labels; the numerically smaller one becomes `-1` and the larger `+1`
//! (so `{0, 1}` and `{1, 2}` both map to `{-1, +1}`).

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Dataset, Instance, Task};
use crate::error::{Error, Result};

/// How raw labels in a libsvm file are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Binary,
    Regression,
    /// Integral labels `0..classes`; `classes` is `max label + 1`.
    Multiclass,
}

struct Row {
    label: f64,
    entries: Vec<(usize, f64)>,
}

/// Parses a binary-classification libsvm file.
pub fn parse_libsvm(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_libsvm_as(path, LabelKind::Binary)
}

pub fn parse_libsvm_as(path: impl AsRef<Path>, kind: LabelKind) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_libsvm_str(&text, kind)
}

pub fn parse_libsvm_str(text: &str, kind: LabelKind) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut dim = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = parse_line(line).map_err(|message| Error::Parse {
            line: lineno + 1,
            message,
        })?;
        if let Some(&(last, _)) = row.entries.last() {
            dim = dim.max(last);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data("libsvm input contains no instances".into()));
    }
    if dim == 0 {
        return Err(Error::Data("libsvm input has no feature indices".into()));
    }

    let (labels, task) = normalize_labels(&rows, kind)?;
    let instances = rows
        .into_iter()
        .zip(labels)
        .map(|(row, label)| {
            let mut x = vec![0.0; dim];
            for (idx, val) in row.entries {
                x[idx - 1] = val;
            }
            Instance::new(x, label)
        })
        .collect();
    Dataset::new(instances, task)
}

fn parse_line(line: &str) -> std::result::Result<Row, String> {
    let mut tokens = line.split_whitespace();
    let label_tok = tokens.next().ok_or("missing label")?;
    let label: f64 = label_tok
        .parse()
        .map_err(|_| format!("label `{label_tok}` is not a number"))?;
    if !label.is_finite() {
        return Err(format!("label `{label_tok}` is not finite"));
    }
    let mut entries: Vec<(usize, f64)> = Vec::new();
    for tok in tokens {
        let (idx_s, val_s) = tok
            .split_once(':')
            .ok_or_else(|| format!("token `{tok}` is not of the form index:value"))?;
        let idx: usize = idx_s
            .parse()
            .map_err(|_| format!("feature index `{idx_s}` is not a positive integer"))?;
        if idx == 0 {
            return Err("feature indices are 1-based; found index 0".into());
        }
        let val: f64 = val_s
            .parse()
            .map_err(|_| format!("feature value `{val_s}` is not a number"))?;
        if !val.is_finite() {
            return Err(format!("feature value `{val_s}` is not finite"));
        }
        if let Some(&(prev, _)) = entries.last() {
            if idx <= prev {
                return Err(format!(
                    "feature indices must be strictly ascending ({idx} after {prev})"
                ));
            }
        }
        entries.push((idx, val));
    }
    Ok(Row { label, entries })
}

fn normalize_labels(rows: &[Row], kind: LabelKind) -> Result<(Vec<f64>, Task)> {
    let raw: Vec<f64> = rows.iter().map(|r| r.label).collect();
    match kind {
        LabelKind::Regression => Ok((raw, Task::Regression)),
        LabelKind::Multiclass => {
            let mut max = 0usize;
            for &y in &raw {
                if y < 0.0 || y.fract() != 0.0 {
                    return Err(Error::Data(format!("multiclass label {y} is not a class index")));
                }
                max = max.max(y as usize);
            }
            Ok((raw, Task::Multiclass { classes: (max + 1).max(2) }))
        }
        LabelKind::Binary => {
            if raw.iter().all(|&y| y == 1.0 || y == -1.0) {
                return Ok((raw, Task::Binary));
            }
            let mut distinct: Vec<f64> = raw.clone();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            if distinct.len() != 2 {
                return Err(Error::Data(format!(
                    "binary mode needs exactly two distinct labels, found {}",
                    distinct.len()
                )));
            }
            let low = distinct[0];
            let mapped = raw
                .into_iter()
                .map(|y| if y == low { -1.0 } else { 1.0 })
                .collect();
            Ok((mapped, Task::Binary))
        }
    }
}

/// Serializes `dataset` in libsvm format, omitting zero features. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_libsvm<W: Write>(dataset: &Dataset, mut out: W) -> std::io::Result<()> {
    for z in dataset.instances() {
        write!(out, "{}", z.label)?;
        for (i, v) in z.features.iter().enumerate() {
            if *v != 0.0 {
                write!(out, " {}:{}", i + 1, v)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn to_libsvm_string(dataset: &Dataset) -> String {
    let mut buf = Vec::new();
    write_libsvm(dataset, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("libsvm output is ASCII")
}
