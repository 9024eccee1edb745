//! Circle contours and k-fold trapezoidal quadrature of `(2πi)^{-k} ∮⋯∮`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A positively oriented circle discretized with `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

/// Budget on the number of node tuples per quadrature pass.
const MAX_TUPLES: usize = 1 << 27;
const MAX_NODES: usize = 1 << 15;

impl ContourSpec {
    pub fn new(center: f64, radius: f64) -> Self {
        ContourSpec { center: Complex64::new(center, 0.0), radius, nodes: 64 }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    /// Checks that the circle encloses every point of `inside`, keeps every
    /// point of `outside` strictly outside, and is disjoint from its image
    /// under `z ↦ qz`.
    pub fn check(&self, inside: &[f64], outside: &[f64], q: f64) -> Result<()> {
        if !(self.radius > 0.0) || self.nodes < 64 || !self.nodes.is_power_of_two() {
            return Err(Error::Contour(format!("bad circle r={} nodes={}", self.radius, self.nodes)));
        }
        for &x in inside {
            if (Complex64::new(x, 0.0) - self.center).norm() >= self.radius {
                return Err(Error::Contour(format!("{x} is not enclosed")));
            }
        }
        for &x in outside {
            if (Complex64::new(x, 0.0) - self.center).norm() <= self.radius {
                return Err(Error::Contour(format!("{x} must lie outside")));
            }
        }
        if self.center.norm() * (1.0 - q) <= self.radius * (1.0 + q) {
            return Err(Error::Contour("circle meets its q-dilate".into()));
        }
        Ok(())
    }

    /// Nodes `z_l` and weights `w_l` with `(2πi)^{-1} ∮ g dz ≈ Σ w_l g(z_l)`.
    pub fn nodes_weights(&self, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut zs = Vec::with_capacity(n);
        let mut ws = Vec::with_capacity(n);
        for l in 0..n {
            let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * l as f64 / n as f64);
            zs.push(self.center + self.radius * e);
            ws.push(self.radius * e / n as f64);
        }
        (zs, ws)
    }
}

/// Result of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub nodes: usize,
    pub change: f64,
}

/// One pass of `Σ_{l_1..l_k} ∏_r single(r, z_{l_r}) w_{l_r} · joint(z_{l_1}, …, z_{l_k})`,
/// together with the sum of the absolute values of the terms.
fn pass<S, J>(spec: &ContourSpec, n: usize, k: usize, single: &S, joint: &J) -> (Complex64, f64)
where
    S: Fn(usize, Complex64) -> Complex64,
    J: Fn(&[Complex64]) -> Complex64,
{
    let (zs, ws) = spec.nodes_weights(n);
    let h: Vec<Vec<Complex64>> =
        (0..k).map(|r| zs.iter().zip(&ws).map(|(&z, &w)| single(r, z) * w).collect()).collect();
    let mut idx = vec![0usize; k];
    let mut tuple = vec![zs[0]; k];
    let mut total = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    if k == 0 {
        let v = joint(&[]);
        return (v, v.norm());
    }
    loop {
        let mut t = Complex64::new(1.0, 0.0);
        for r in 0..k {
            t *= h[r][idx[r]];
            tuple[r] = zs[idx[r]];
        }
        let term = t * joint(&tuple);
        total += term;
        mass += term.norm();
        let mut r = k;
        loop {
            if r == 0 {
                return (total, mass);
            }
            r -= 1;
            idx[r] += 1;
            if idx[r] < n {
                break;
            }
            idx[r] = 0;
        }
    }
}

/// k-fold circle quadrature, doubling nodes from `spec.nodes` until two
/// successive values differ by less than `tol` (absolute, scaled by `1 + |value|`)
/// or by less than the rounding floor set by the absolute mass of the terms.
pub fn integrate_k<S, J>(spec: &ContourSpec, k: usize, tol: f64, single: S, joint: J) -> Result<Quadrature>
where
    S: Fn(usize, Complex64) -> Complex64,
    J: Fn(&[Complex64]) -> Complex64,
{
    let cap = if k == 0 {
        MAX_NODES
    } else {
        let per = (MAX_TUPLES as f64).powf(1.0 / k as f64).floor() as usize;
        let pow2 = 1usize << (usize::BITS - 1 - per.leading_zeros());
        MAX_NODES.min(pow2).max(spec.nodes)
    };
    let mut n = spec.nodes;
    let (mut prev, _) = pass(spec, n, k, &single, &joint);
    loop {
        if 2 * n > cap {
            return Err(Error::Contour(format!("no convergence by {n} nodes per dimension")));
        }
        n *= 2;
        let (cur, mass) = pass(spec, n, k, &single, &joint);
        let change = (cur - prev).norm();
        if change <= (tol * (1.0 + cur.norm())).max(64.0 * f64::EPSILON * mass) {
            return Ok(Quadrature { value: cur, nodes: n, change });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_of_simple_pole() {
        let spec = ContourSpec::new(2.0, 0.3);
        let q = integrate_k(&spec, 1, 1e-13, |_, z| 1.0 / (z - 2.1), |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((q.value - 1.0).norm() < 1e-12);
        let q2 = integrate_k(&spec, 2, 1e-13, |_, z| z * z / (z - 2.1), |t| 1.0 / (t[0] - 3.0 * t[1])).unwrap();
        // residues at z_1 = z_2 = 2.1 of z_1^2 z_2^2/(z_1 − 3 z_2)
        let x = 2.1f64;
        assert!((q2.value.re - x.powi(4) / (x - 3.0 * x)).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_circles() {
        let c = ContourSpec::new(2.01, 0.05);
        assert!(c.check(&[2.0, 2.02], &[1.4], 0.5).is_ok());
        assert!(c.check(&[2.1], &[], 0.5).is_err());
        assert!(ContourSpec::new(2.0, 0.9).check(&[2.0], &[], 0.5).is_err());
    }
}
