//! Plain-text landscape dump.
//!
//! ```text
//! # landscape v1
//! # model=alpha-hoc alpha=0.3
//! # n=3 seed=7
//! 0.3
//! 0.52...
//! absent
//! ...
//! ```
//!
//! Values follow in node-index order, one per line, printed in shortest
//! round-trip form; removed vertices are written as `absent`.

use std::io::{BufRead, Write};

use super::{is_absent, Landscape, ModelSpec, ABSENT};
use crate::error::{Error, Result};

const MAGIC: &str = "# landscape v1";

pub fn write_text<W: Write>(land: &Landscape, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{MAGIC}")?;
    let params = land.spec().params();
    if params.is_empty() {
        writeln!(out, "# model={}", land.spec().name())?;
    } else {
        writeln!(out, "# model={} {}", land.spec().name(), params)?;
    }
    writeln!(out, "# n={} seed={}", land.n(), land.seed())?;
    for &f in land.fitness() {
        if is_absent(f) {
            writeln!(out, "absent")?;
        } else {
            writeln!(out, "{f}")?;
        }
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(format!("landscape dump: {}", msg.into()))
}

fn header_fields(line: &str) -> Result<Vec<(&str, &str)>> {
    line.strip_prefix('#')
        .ok_or_else(|| bad("missing header"))?
        .split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| bad(format!("malformed field {kv:?}"))))
        .collect()
}

pub fn read_text<R: BufRead>(input: R) -> Result<Landscape> {
    let mut lines = input.lines().map(|l| l.map_err(|e| bad(e.to_string())));
    let mut next = || lines.next().transpose().and_then(|l| l.ok_or_else(|| bad("truncated")));
    if next()?.trim() != MAGIC {
        return Err(bad("unrecognised format"));
    }
    let model_line = next()?;
    let mut fields = header_fields(&model_line)?.into_iter();
    let (key, name) = fields.next().ok_or_else(|| bad("missing model"))?;
    if key != "model" {
        return Err(bad("missing model"));
    }
    let spec = ModelSpec::from_parts(name, fields)?;

    let dims_line = next()?;
    let (mut n, mut seed) = (None, None);
    for (k, v) in header_fields(&dims_line)? {
        match k {
            "n" => n = v.parse::<u32>().ok(),
            "seed" => seed = v.parse::<u64>().ok(),
            _ => return Err(bad(format!("unknown field {k:?}"))),
        }
    }
    let n = n.ok_or_else(|| bad("missing n"))?;
    let seed = seed.ok_or_else(|| bad("missing seed"))?;

    let mut fitness = Vec::new();
    while let Some(line) = lines.next().transpose()? {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value = if line == "absent" {
            ABSENT
        } else {
            line.parse::<f64>().map_err(|_| bad(format!("bad value {line:?}")))?
        };
        fitness.push(value);
    }
    Landscape::from_fitness(n, fitness, spec, seed)
}
