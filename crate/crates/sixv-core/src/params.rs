use std::fmt;

use crate::error::{Error, Result};

/// The pair `(q, s)` entering the vertex weights.
///
/// The six-vertex specialization always has `s = q^{-1/2}`; a general `s` is
/// kept available for the higher-spin identities used by the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin {
    pub q: f64,
    pub s: f64,
}

impl Spin {
    pub fn six_vertex(q: f64) -> Self {
        Spin { q, s: q.powf(-0.5) }
    }

    pub fn general(q: f64, s: f64) -> Self {
        Spin { q, s }
    }
}

/// Parameter tuple `(q, s, u, v)`. `s` is derived from `q` and never set directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    q: f64,
    s: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    strict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    QOutOfRange(f64),
    UBelowS { index: usize },
    VNonPositive { index: usize },
    ProductTooLarge { i: usize, j: usize },
    UAboveStrictBound { index: usize },
    NoRows,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::QOutOfRange(q) => write!(f, "q = {q} not in (0,1)"),
            Violation::UBelowS { index } => write!(f, "u_{} ≤ s", index + 1),
            Violation::VNonPositive { index } => write!(f, "v_{} ≤ 0", index + 1),
            Violation::ProductTooLarge { i, j } => write!(f, "u_{} v_{} ≥ 1", i + 1, j + 1),
            Violation::UAboveStrictBound { index } => {
                write!(f, "u_{} ≥ (s + s^3)/2", index + 1)
            }
            Violation::NoRows => write!(f, "u is empty"),
        }
    }
}

impl ModelParams {
    /// Builds and validates. Use [`ModelParams::unchecked`] for oracle work at
    /// points outside the probabilistic range.
    pub fn new(q: f64, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let p = Self::unchecked(q, u, v);
        validate_params(&p).map_err(|e| Error::Params(e.to_string()))?;
        Ok(p)
    }

    pub fn unchecked(q: f64, u: Vec<f64>, v: Vec<f64>) -> Self {
        ModelParams { q, s: q.powf(-0.5), u, v, strict: false }
    }

    pub fn homogeneous(q: f64, u: f64, v: f64, n: usize, m: usize) -> Result<Self> {
        Self::new(q, vec![u; n], vec![v; m])
    }

    /// Also require `u_i < (s + s^3)/2`, the hypothesis of the edge limit theorems.
    pub fn with_strict(mut self, strict: bool) -> Result<Self> {
        self.strict = strict;
        validate_params(&self).map_err(|e| Error::Params(e.to_string()))?;
        Ok(self)
    }

    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn u(&self) -> &[f64] {
        &self.u
    }
    pub fn v(&self) -> &[f64] {
        &self.v
    }
    pub fn n(&self) -> usize {
        self.u.len()
    }
    pub fn m(&self) -> usize {
        self.v.len()
    }
    pub fn strict(&self) -> bool {
        self.strict
    }
    pub fn spin(&self) -> Spin {
        Spin { q: self.q, s: self.s }
    }

    /// Same `q` and `u`, `v` replaced.
    pub fn with_v(&self, v: Vec<f64>) -> Self {
        ModelParams { v, ..self.clone() }
    }

    /// First `n` rows only.
    pub fn truncate_rows(&self, n: usize) -> Self {
        ModelParams { u: self.u[..n].to_vec(), ..self.clone() }
    }
}

/// Returns the first violated invariant, or `Ok(())`.
pub fn validate_params(p: &ModelParams) -> std::result::Result<(), Violation> {
    if !(p.q > 0.0 && p.q < 1.0) {
        return Err(Violation::QOutOfRange(p.q));
    }
    if p.u.is_empty() {
        return Err(Violation::NoRows);
    }
    for (i, &u) in p.u.iter().enumerate() {
        if !(u > p.s) {
            return Err(Violation::UBelowS { index: i });
        }
    }
    for (j, &v) in p.v.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Violation::VNonPositive { index: j });
        }
    }
    for (i, &u) in p.u.iter().enumerate() {
        for (j, &v) in p.v.iter().enumerate() {
            if !(u * v < 1.0) {
                return Err(Violation::ProductTooLarge { i, j });
            }
        }
    }
    if p.strict {
        let bound = (p.s + p.s.powi(3)) / 2.0;
        for (i, &u) in p.u.iter().enumerate() {
            if !(u < bound) {
                return Err(Violation::UAboveStrictBound { index: i });
            }
        }
    }
    Ok(())
}

/// `Δ = (s + 1/s)/2`; always above 1.
pub fn delta_parameter(p: &ModelParams) -> f64 {
    (p.s + 1.0 / p.s) / 2.0
}
