use std::fmt;

use crate::error::{Error, Result};
use crate::weights::ArrowConfig;

/// Weakly decreasing integer tuple `λ_1 ≥ … ≥ λ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature {
    parts: Vec<i64>,
}

impl Signature {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Inconsistent(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Signature { parts })
    }

    pub fn empty() -> Self {
        Signature { parts: Vec::new() }
    }

    /// Reads an increasing tuple (the Gelfand-Tsetlin convention) and stores it decreasing.
    pub fn from_increasing(parts: &[i64]) -> Result<Self> {
        Self::new(parts.iter().rev().copied().collect())
    }

    pub fn to_increasing(&self) -> Vec<i64> {
        self.parts.iter().rev().copied().collect()
    }

    /// `(k-1, …, 1, 0)`.
    pub fn staircase(k: usize) -> Self {
        Signature { parts: (0..k as i64).rev().collect() }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }
    pub fn len(&self) -> usize {
        self.parts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }
    pub fn is_nonneg(&self) -> bool {
        self.parts.last().map_or(true, |&x| x >= 0)
    }
    pub fn contains(&self, x: i64) -> bool {
        self.parts.contains(&x)
    }
    /// Number of parts equal to `x`.
    pub fn multiplicity(&self, x: i64) -> usize {
        self.parts.iter().filter(|&&p| p == x).count()
    }

    /// Adds `k` to every part.
    pub fn shifted(&self, k: i64) -> Self {
        Signature { parts: self.parts.iter().map(|p| p + k).collect() }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(" "))
    }
}

/// `λ^{k+1}_1 ≥ λ^k_1 ≥ λ^{k+1}_2 ≥ … ≥ λ^k_k ≥ λ^{k+1}_{k+1}`.
pub fn interlaces(lower: &Signature, upper: &Signature) -> bool {
    let (a, b) = (lower.parts(), upper.parts());
    if b.len() != a.len() + 1 {
        return false;
    }
    (0..a.len()).all(|i| b[i] >= a[i] && a[i] >= b[i + 1])
}

/// Rows `λ^1, …, λ^N` of a path collection; row `k` records the columns where
/// paths leave row `k` upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCollection {
    rows: Vec<Signature>,
}

impl PathCollection {
    pub fn new(rows: Vec<Signature>) -> Result<Self> {
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k + 1 {
                return Err(Error::Inconsistent(format!("row {} has {} parts", k + 1, row.len())));
            }
            if !row.is_strict() || !row.is_nonneg() {
                return Err(Error::Inconsistent(format!("row {} = ({row}) not strict nonnegative", k + 1)));
            }
            if k > 0 && !interlaces(&rows[k - 1], row) {
                return Err(Error::Inconsistent(format!("rows {} and {} do not interlace", k, k + 1)));
            }
        }
        Ok(PathCollection { rows })
    }

    #[allow(dead_code)]
    pub(crate) fn from_rows_unchecked(rows: Vec<Signature>) -> Self {
        PathCollection { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Signature] {
        &self.rows
    }
    /// `λ^k`, 1-based.
    pub fn row(&self, k: usize) -> &Signature {
        &self.rows[k - 1]
    }
    pub fn into_rows(self) -> Vec<Signature> {
        self.rows
    }

    /// Largest occupied column, or 0 for an empty collection.
    pub fn width(&self) -> i64 {
        self.rows.last().map_or(0, |r| r.parts()[0])
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("N={}\n", self.n());
        for r in &self.rows {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the text written by [`PathCollection::to_text`]; returns the
    /// collection and the number of lines consumed.
    pub fn parse_lines<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Self> {
        let header = lines.next().ok_or_else(|| Error::Parse("missing N= header".into()))?;
        let n: usize = header
            .trim()
            .strip_prefix("N=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for k in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {}", k + 1)))?;
            let parts: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(str::parse).collect();
            let parts = parts.map_err(|e| Error::Parse(format!("row {}: {e}", k + 1)))?;
            rows.push(Signature::new(parts)?);
        }
        PathCollection::new(rows)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::parse_lines(&mut text.lines())
    }
}

/// Arrow configurations on the bounding box `[0, λ^N_1] × [1, N]`; vertices
/// outside are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    width: usize,
    n: usize,
    cells: Vec<ArrowConfig>,
}

impl Grid {
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Vertex at column `x`, row `y` (1-based).
    pub fn at(&self, x: usize, y: usize) -> ArrowConfig {
        if x >= self.width {
            return ArrowConfig::EMPTY;
        }
        self.cells[(y - 1) * self.width + x]
    }

    pub fn from_cells(width: usize, n: usize, cells: Vec<ArrowConfig>) -> Result<Self> {
        if cells.len() != width * n {
            return Err(Error::Inconsistent("grid size mismatch".into()));
        }
        Ok(Grid { width, n, cells })
    }
}

pub fn grid_from_rows(w: &PathCollection) -> Grid {
    let n = w.n();
    let width = if n == 0 { 0 } else { w.width() as usize + 1 };
    let mut cells = Vec::with_capacity(width * n);
    for y in 1..=n {
        let below = if y == 1 { None } else { Some(w.row(y - 1)) };
        let here = w.row(y);
        let mut j = 1u8;
        for x in 0..width as i64 {
            let i1 = below.map_or(0, |b| b.contains(x) as u32);
            let i2 = here.contains(x) as u32;
            let j2 = (i1 + j as u32 - i2) as u8;
            cells.push(ArrowConfig { i1, j1: j, i2, j2 });
            j = j2;
        }
    }
    Grid { width, n, cells }
}

pub fn rows_from_grid(g: &Grid) -> Result<PathCollection> {
    let mut rows = Vec::with_capacity(g.n);
    for y in 1..=g.n {
        let mut parts = Vec::new();
        let mut j = 1u8;
        for x in 0..g.width {
            let c = g.at(x, y);
            if c.j1 != j || c.i1 + c.j1 as u32 != c.i2 + c.j2 as u32 || c.j2 > 1 {
                return Err(Error::Inconsistent(format!("arrow conservation fails at ({x},{y})")));
            }
            let below = if y == 1 { 0 } else { g.at(x, y - 1).i2 };
            if c.i1 != below {
                return Err(Error::Inconsistent(format!("vertical mismatch at ({x},{y})")));
            }
            if c.i2 > 1 {
                return Err(Error::Inconsistent(format!("shared vertical edge at ({x},{y})")));
            }
            if c.i2 == 1 {
                parts.push(x as i64);
            }
            j = c.j2;
        }
        if j != 0 {
            return Err(Error::Inconsistent(format!("row {y} leaves the bounding box")));
        }
        parts.reverse();
        rows.push(Signature::new(parts)?);
    }
    PathCollection::new(rows)
}

/// A hole position; `Infinite` sorts after every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hole {
    At(usize),
    Infinite,
}

impl fmt::Display for Hole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hole::At(y) => write!(f, "{y}"),
            Hole::Infinite => write!(f, "inf"),
        }
    }
}

/// Triangular array `Y^j_i`, `1 ≤ i ≤ j ≤ k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleArray {
    cols: Vec<Vec<Hole>>,
}

impl HoleArray {
    pub fn k(&self) -> usize {
        self.cols.len()
    }
    /// `Y^j_i`, both 1-based.
    pub fn get(&self, j: usize, i: usize) -> Hole {
        self.cols[j - 1][i - 1]
    }
    pub fn column(&self, j: usize) -> &[Hole] {
        &self.cols[j - 1]
    }

    /// `Y^{j+1}_i ≤ Y^j_i ≤ Y^{j+1}_{i+1}` among finite entries.
    pub fn interlaces(&self) -> bool {
        for j in 1..self.k() {
            let (a, b) = (&self.cols[j - 1], &self.cols[j]);
            for i in 0..j {
                if let (Hole::At(x), Hole::At(y)) = (b[i], a[i]) {
                    if x > y {
                        return false;
                    }
                }
                if let (Hole::At(x), Hole::At(y)) = (a[i], b[i + 1]) {
                    if x > y {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Rows (from the bottom) of the vertices in column `x ≥ 1` that emit no
/// horizontal arrow to the right.
fn column_holes(w: &PathCollection, x: i64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut below: Option<&Signature> = None;
    for y in 1..=w.n() {
        let here = w.row(y);
        // horizontal occupancy right of x in row y: 1 + #{λ^{y-1} ≤ x} − #{λ^y ≤ x}
        let c_below = below.map_or(0, |b| b.parts().iter().filter(|&&p| p <= x).count());
        let c_here = here.parts().iter().filter(|&&p| p <= x).count();
        if 1 + c_below == c_here {
            out.push(y);
        }
        below = Some(here);
    }
    out
}

pub fn extract_holes(w: &PathCollection, k: usize) -> Result<HoleArray> {
    if k == 0 || k > w.n() {
        return Err(Error::Range(format!("k = {k} not in 1..={}", w.n())));
    }
    let cols = (1..=k)
        .map(|j| {
            let ys = column_holes(w, j as i64);
            (0..j).map(|i| ys.get(i).map_or(Hole::Infinite, |&y| Hole::At(y))).collect()
        })
        .collect();
    Ok(HoleArray { cols })
}

/// Number of paths crossing the line above row `y` at a column `≥ x`,
/// i.e. `#{i : λ^y_i ≥ x}`.
pub fn height_function(w: &PathCollection, x: i64, y: usize) -> Result<usize> {
    if x < 0 || y == 0 || y > w.n() {
        return Err(Error::Range(format!("({x},{y}) outside the strip of height {}", w.n())));
    }
    Ok(w.row(y).parts().iter().filter(|&&p| p >= x).count())
}
