use crate::error::{Error, Result};
use crate::params::Spin;

/// Vertex `(i1, j1; i2, j2)`: arrows in from below and from the left, out
/// through the top and to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArrowConfig {
    pub i1: u32,
    pub j1: u8,
    pub i2: u32,
    pub j2: u8,
}

impl ArrowConfig {
    pub const EMPTY: ArrowConfig = ArrowConfig { i1: 0, j1: 0, i2: 0, j2: 0 };

    pub fn new(i1: u32, j1: u8, i2: u32, j2: u8) -> Result<Self> {
        if j1 > 1 || j2 > 1 || i1 + j1 as u32 != i2 + j2 as u32 {
            return Err(Error::Inconsistent(format!("({i1},{j1};{i2},{j2}) violates arrow conservation")));
        }
        Ok(ArrowConfig { i1, j1, i2, j2 })
    }

    /// The six configurations with all multiplicities in `{0, 1}`.
    pub const SIX: [ArrowConfig; 6] = [
        ArrowConfig { i1: 0, j1: 0, i2: 0, j2: 0 },
        ArrowConfig { i1: 1, j1: 0, i2: 1, j2: 0 },
        ArrowConfig { i1: 1, j1: 0, i2: 0, j2: 1 },
        ArrowConfig { i1: 0, j1: 1, i2: 1, j2: 0 },
        ArrowConfig { i1: 0, j1: 1, i2: 0, j2: 1 },
        ArrowConfig { i1: 1, j1: 1, i2: 1, j2: 1 },
    ];
}

/// Shorthand used by tables: `a(i1, j1, i2, j2)`.
pub const fn a(i1: u32, j1: u8, i2: u32, j2: u8) -> ArrowConfig {
    ArrowConfig { i1, j1, i2, j2 }
}

/// `w_u(i1, j1; i2, j2)`; zero for configurations outside the four families.
pub fn vertex_weight(c: ArrowConfig, u: f64, sp: Spin) -> f64 {
    let Spin { q, s } = sp;
    let d = 1.0 - s * u;
    match (c.j1, c.j2) {
        (0, 0) if c.i1 == c.i2 => (1.0 - s * q.powi(c.i1 as i32) * u) / d,
        (0, 1) if c.i1 == c.i2 + 1 => (1.0 - s * s * q.powi(c.i2 as i32)) * u / d,
        (1, 1) if c.i1 == c.i2 => (u - s * q.powi(c.i1 as i32)) / d,
        (1, 0) if c.i2 == c.i1 + 1 => (1.0 - q.powi(c.i2 as i32)) / d,
        _ => 0.0,
    }
}

/// Conjugated weight `w^c_u(i1, j1; i2, j2)`.
pub fn conj_vertex_weight(c: ArrowConfig, u: f64, sp: Spin) -> f64 {
    let Spin { q, s } = sp;
    let d = 1.0 - s * u;
    match (c.j1, c.j2) {
        (0, 0) if c.i1 == c.i2 => (1.0 - s * q.powi(c.i1 as i32) * u) / d,
        (0, 1) if c.i1 == c.i2 + 1 => (1.0 - q.powi(c.i1 as i32)) * u / d,
        (1, 1) if c.i1 == c.i2 => (u - s * q.powi(c.i1 as i32)) / d,
        (1, 0) if c.i2 == c.i1 + 1 => (1.0 - s * s * q.powi(c.i1 as i32)) / d,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 5e-6;

    #[test]
    fn examples() {
        let sp = Spin::six_vertex(0.5);
        assert_eq!(vertex_weight(ArrowConfig::EMPTY, 2.0, sp), 1.0);
        assert!((vertex_weight(a(0, 1, 1, 0), 2.0, sp) + 0.273459).abs() < TOL);
        assert!((conj_vertex_weight(a(1, 0, 0, 1), 0.25, sp) - 0.193365).abs() < TOL);
        assert_eq!(vertex_weight(a(2, 0, 1, 0), 2.0, sp), 0.0);
    }

    #[test]
    fn stacked_vertical_edges_vanish_at_six_vertex_point() {
        // 1 - s^2 q = 0: w cannot split a double edge, w^c cannot create one
        let sp = Spin::six_vertex(0.3);
        assert!(vertex_weight(a(2, 0, 1, 1), 2.0, sp).abs() < 1e-15);
        assert!(conj_vertex_weight(a(1, 1, 2, 0), 0.2, sp).abs() < 1e-15);
    }

    #[test]
    fn delta_from_weight_table() {
        // Δ = (w1 w2 + w3 w4 − w5 w6)/(2 sqrt(w1 w2 w3 w4)) with the positive six-vertex weights
        for &(q, u) in &[(0.5, 2.0), (0.3, 2.5), (0.8, 1.3)] {
            let sp = Spin::six_vertex(q);
            let w = |c| vertex_weight(c, u, sp).abs();
            let (w1, w2) = (w(a(0, 0, 0, 0)), w(a(1, 1, 1, 1)));
            let (w3, w4) = (w(a(1, 0, 1, 0)), w(a(0, 1, 0, 1)));
            let (w5, w6) = (w(a(1, 0, 0, 1)), w(a(0, 1, 1, 0)));
            let delta = (w1 * w2 + w3 * w4 - w5 * w6) / (2.0 * (w1 * w2 * w3 * w4).sqrt());
            let s = sp.s;
            assert!((delta - (s + 1.0 / s) / 2.0).abs() < 1e-12, "q={q}: {delta}");
        }
    }
}
