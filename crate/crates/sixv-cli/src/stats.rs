//! Statistics computed from sampled path collections, written as CSV with a
//! versioned header comment.

use std::fmt::Write as _;

use statrs::distribution::{ContinuousCDF, Normal};

use sixv_core::asymptotics::limit_constants;
use sixv_core::{extract_holes, height_function, Hole, PathCollection};

use crate::raw::RawMeta;
use crate::{CliError, Result};

pub const EDGE_HEADER: &str = "# sixv-edge v1";
pub const HOLES_HEADER: &str = "# sixv-holes v1";
pub const HEIGHT_HEADER: &str = "# sixv-height-variance v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsMode {
    Edge,
    Holes,
    HeightVariance,
}

/// Rescaled top hole `(Y¹₁ − aM)/(c√M)` of every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStats {
    pub a: f64,
    pub c: f64,
    pub m: usize,
    /// `(sample, Y¹₁, z)`; `z = +∞` when the hole is infinite.
    pub rows: Vec<(u64, Hole, f64)>,
    pub ks: f64,
}

/// Kolmogorov–Smirnov distance between the empirical law of `zs` and `Φ`.
pub fn ks_normal(zs: &[f64]) -> f64 {
    let mut z = zs.to_vec();
    z.sort_by(f64::total_cmp);
    let nd = Normal::new(0.0, 1.0).expect("standard normal");
    let n = z.len() as f64;
    z.iter().enumerate().fold(0.0, |acc: f64, (i, &x)| {
        let f = nd.cdf(x);
        acc.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs())
    })
}

pub fn edge_stats(meta: &RawMeta, samples: &[(u64, PathCollection)]) -> Result<EdgeStats> {
    if samples.is_empty() {
        return Err(CliError::Usage("no samples".into()));
    }
    let lc = limit_constants(meta.q, meta.u, meta.v)?;
    let m = meta.m as f64;
    let mut rows = Vec::with_capacity(samples.len());
    for (idx, w) in samples {
        let h = extract_holes(w, 1)?.get(1, 1);
        let z = match h {
            Hole::At(y) => (y as f64 - lc.a * m) / (lc.c * m.sqrt()),
            Hole::Infinite => f64::INFINITY,
        };
        rows.push((*idx, h, z));
    }
    let zs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(EdgeStats { a: lc.a, c: lc.c, m: meta.m, ks: ks_normal(&zs), rows })
}

pub fn edge_csv(e: &EdgeStats) -> String {
    let nd = Normal::new(0.0, 1.0).expect("standard normal");
    let mut sorted: Vec<f64> = e.rows.iter().map(|r| r.2).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out = format!("{EDGE_HEADER}\n# a={} c={} M={} ks={}\nsample,y11,z,ecdf,phi\n", e.a, e.c, e.m, e.ks);
    for (idx, h, z) in &e.rows {
        let ecdf = sorted.partition_point(|x| x <= z) as f64 / n;
        writeln!(out, "{idx},{h},{z},{ecdf},{}", nd.cdf(*z)).expect("string write");
    }
    out
}

pub fn holes_csv(samples: &[(u64, PathCollection)], k: usize) -> Result<String> {
    let mut out = format!("{HOLES_HEADER}\n# k={k}\nsample,j,i,y\n");
    for (idx, w) in samples {
        let h = extract_holes(w, k)?;
        if !h.interlaces() {
            return Err(CliError::Invariant { sample: *idx, msg: "hole array does not interlace".into() });
        }
        for j in 1..=k {
            for i in 1..=j {
                writeln!(out, "{idx},{j},{i},{}", h.get(j, i)).expect("string write");
            }
        }
    }
    Ok(out)
}

/// Per-cell mean and sample variance of the height function over columns
/// `1..=W` (the widest sample) and rows `1..=N`.
pub fn height_variance(samples: &[(u64, PathCollection)]) -> Result<Vec<(i64, usize, f64, f64)>> {
    let Some((_, first)) = samples.first() else {
        return Err(CliError::Usage("no samples".into()));
    };
    let n = first.n();
    let width = samples.iter().map(|(_, w)| w.width()).max().unwrap_or(0);
    let count = samples.len() as f64;
    let mut out = Vec::with_capacity(n * width.max(0) as usize);
    for y in 1..=n {
        for x in 1..=width {
            let mut s = 0.0;
            let mut s2 = 0.0;
            for (_, w) in samples {
                let h = height_function(w, x, y)? as f64;
                s += h;
                s2 += h * h;
            }
            let mean = s / count;
            let var = if samples.len() > 1 { ((s2 - count * mean * mean) / (count - 1.0)).max(0.0) } else { 0.0 };
            out.push((x, y, mean, var));
        }
    }
    Ok(out)
}

pub fn height_csv(cells: &[(i64, usize, f64, f64)]) -> String {
    let mut out = format!("{HEIGHT_HEADER}\nx,y,mean,variance\n");
    for (x, y, mean, var) in cells {
        writeln!(out, "{x},{y},{mean},{var}").expect("string write");
    }
    out
}

/// Data rows of a CSV written by this module: header comments and the
/// column line are checked and dropped.
pub fn parse_csv(text: &str, header: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = text.lines();
    if lines.next() != Some(header) {
        return Err(CliError::Parse(format!("missing {header:?} header")));
    }
    let mut comments = Vec::new();
    let mut columns = None;
    let mut rows = Vec::new();
    for line in lines {
        if let Some(c) = line.strip_prefix("# ") {
            comments.push(c.to_string());
        } else if columns.is_none() {
            columns = Some(line.split(',').count());
        } else {
            let r: Vec<String> = line.split(',').map(str::to_string).collect();
            if Some(r.len()) != columns {
                return Err(CliError::Parse(format!("row {line:?} has the wrong number of fields")));
            }
            rows.push(r);
        }
    }
    Ok((comments, rows))
}
