//! Raw sample files.
//!
//! ```text
//! # sixv-raw v1
//! q=0.5 u=1.5 v=0.6 N=3 M=2 seed=7
//! sample 0
//! N=3
//! 2
//! 4 1
//! 5 3 1
//! sample 1
//! ...
//! ```

use std::fmt::Write as _;

use sixv_core::{ModelParams, PathCollection};

use crate::{CliError, Result};

pub const RAW_HEADER: &str = "# sixv-raw v1";

/// Parameters recorded in a raw file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawMeta {
    pub q: f64,
    pub u: f64,
    pub v: f64,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl RawMeta {
    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::homogeneous(self.q, self.u, self.v, self.n, self.m)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawFile {
    pub meta: RawMeta,
    pub samples: Vec<(u64, PathCollection)>,
}

pub fn write_raw(meta: &RawMeta, samples: &[(u64, PathCollection)]) -> String {
    let mut out = String::new();
    out.push_str(RAW_HEADER);
    out.push('\n');
    let RawMeta { q, u, v, n, m, seed } = meta;
    writeln!(out, "q={q} u={u} v={v} N={n} M={m} seed={seed}").expect("string write");
    for (idx, w) in samples {
        writeln!(out, "sample {idx}").expect("string write");
        out.push_str(&w.to_text());
    }
    out
}

fn parse_meta(line: &str) -> Result<RawMeta> {
    let mut meta = RawMeta { q: 0.0, u: 0.0, v: 0.0, n: 0, m: 0, seed: 0 };
    let mut seen = 0u8;
    for field in line.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| CliError::Parse(format!("bad field {field:?}")))?;
        let bad = || CliError::Parse(format!("bad value in {field:?}"));
        match k {
            "q" => meta.q = v.parse().map_err(|_| bad())?,
            "u" => meta.u = v.parse().map_err(|_| bad())?,
            "v" => meta.v = v.parse().map_err(|_| bad())?,
            "N" => meta.n = v.parse().map_err(|_| bad())?,
            "M" => meta.m = v.parse().map_err(|_| bad())?,
            "seed" => meta.seed = v.parse().map_err(|_| bad())?,
            _ => return Err(CliError::Parse(format!("unknown field {k:?}"))),
        }
        seen += 1;
    }
    if seen != 6 {
        return Err(CliError::Parse("parameter line needs q, u, v, N, M, seed".into()));
    }
    Ok(meta)
}

pub fn read_raw(text: &str) -> Result<RawFile> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(RAW_HEADER) {
        return Err(CliError::Parse(format!("missing {RAW_HEADER:?} header")));
    }
    let meta = parse_meta(lines.next().ok_or_else(|| CliError::Parse("missing parameter line".into()))?)?;
    let mut samples = Vec::new();
    while let Some(line) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let idx: u64 = line
            .trim()
            .strip_prefix("sample ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| CliError::Parse(format!("expected `sample <index>`, got {line:?}")))?;
        let w = PathCollection::parse_lines(&mut lines).map_err(|e| CliError::Parse(format!("sample {idx}: {e}")))?;
        if w.n() != meta.n {
            return Err(CliError::Parse(format!("sample {idx} has {} rows, expected {}", w.n(), meta.n)));
        }
        samples.push((idx, w));
    }
    Ok(RawFile { meta, samples })
}
