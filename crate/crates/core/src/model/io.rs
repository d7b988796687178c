//! Plain-text parameter checkpoints.
//!
//! ```text
//! rerm-params 1
//! arch linear dim=20 bias=false
//! len 20
//! 0.125
//! -3.5e-7
//! ...
//! ```
//!
//! The MLP header reads `arch mlp dim=<d> hidden=100 classes=10`. Values are
//! written one per line in shortest round-trip form, so a read after a write
//! reproduces the vector bit for bit.

use std::io::{BufRead, Write};

use super::{LinearModel, MlpModel, Model, MLP_CLASSES, MLP_HIDDEN};
use crate::error::{Error, Result};
use crate::ParameterVector;

const MAGIC: &str = "rerm-params 1";

pub fn write_params<W: Write>(model: &Model, w: &ParameterVector, mut out: W) -> Result<()> {
    crate::error::check_dim(model.num_params(), w.len())?;
    let wrap = |e| Error::io("<params>", e);
    writeln!(out, "{MAGIC}").map_err(wrap)?;
    match model {
        Model::Linear(m) => writeln!(out, "arch linear dim={} bias={}", m.dim, m.bias),
        Model::Mlp(m) => writeln!(
            out,
            "arch mlp dim={} hidden={MLP_HIDDEN} classes={MLP_CLASSES}",
            m.dim
        ),
    }
    .map_err(wrap)?;
    writeln!(out, "len {}", w.len()).map_err(wrap)?;
    for v in w.iter() {
        writeln!(out, "{v:?}").map_err(wrap)?;
    }
    Ok(())
}

pub fn read_params<R: BufRead>(input: R) -> Result<(Model, ParameterVector)> {
    let mut lines = input.lines().enumerate();
    let mut next = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((i, Ok(l))) => Ok((i + 1, l)),
            Some((i, Err(e))) => Err(Error::Parse {
                line: i + 1,
                message: e.to_string(),
            }),
            None => Err(Error::Parse {
                line: 0,
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    };
    let bad = |line: usize, message: String| Error::Parse { line, message };

    let (ln, magic) = next("header")?;
    if magic.trim() != MAGIC {
        return Err(bad(ln, format!("expected `{MAGIC}`, found `{magic}`")));
    }
    let (ln, arch) = next("architecture line")?;
    let model = parse_arch(&arch).map_err(|m| bad(ln, m))?;
    let (ln, len_line) = next("length line")?;
    let len: usize = len_line
        .strip_prefix("len ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad(ln, format!("malformed length line `{len_line}`")))?;
    if len != model.num_params() {
        return Err(bad(
            ln,
            format!("length {len} does not match architecture ({})", model.num_params()),
        ));
    }
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        let (ln, l) = next("parameter value")?;
        let v: f64 = l
            .trim()
            .parse()
            .map_err(|_| bad(ln, format!("`{l}` is not a number")))?;
        values.push(v);
    }
    Ok((model, ParameterVector::from_vec(values)))
}

fn parse_arch(line: &str) -> std::result::Result<Model, String> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some("arch") {
        return Err(format!("expected `arch ...`, found `{line}`"));
    }
    let kind = toks.next().ok_or("missing architecture kind")?;
    let mut dim = None;
    let mut bias = false;
    for tok in toks {
        let (k, v) = tok.split_once('=').ok_or_else(|| format!("bad field `{tok}`"))?;
        match k {
            "dim" => dim = Some(v.parse::<usize>().map_err(|_| format!("bad dim `{v}`"))?),
            "bias" => bias = v.parse::<bool>().map_err(|_| format!("bad bias `{v}`"))?,
            "hidden" if v == MLP_HIDDEN.to_string() => {}
            "classes" if v == MLP_CLASSES.to_string() => {}
            _ => return Err(format!("unsupported field `{tok}`")),
        }
    }
    let dim = dim.ok_or("missing dim")?;
    match kind {
        "linear" => Ok(Model::Linear(LinearModel { dim, bias })),
        "mlp" => Ok(Model::Mlp(MlpModel::new(dim))),
        other => Err(format!("unknown architecture `{other}`")),
    }
}
