//! Edge asymptotics: the limit constants, the contour formula for the joint
//! distribution of the extreme holes, the GUE-corners edge distribution and
//! the functions used in the steepest-descent analysis.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::contour::{integrate_k, ContourSpec};
use crate::error::{Error, Result};
use crate::numerics::integrate;
use crate::ops::real_part;
use crate::params::ModelParams;
use crate::sampler::RngStream;

const QUAD_TOL: f64 = 1e-11;

/// Centering `a`, second-order coefficient `a2` of `G` at `s`, first-order
/// coefficient `b1` of `g` at `s`, and the fluctuation scale `c = √(2 a2)/b1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstants {
    pub a: f64,
    pub a2: f64,
    pub b1: f64,
    pub c: f64,
}

pub fn limit_constants(q: f64, u: f64, v: f64) -> Result<LimitConstants> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Params(format!("q = {q} not in (0,1)")));
    }
    let s = q.powf(-0.5);
    if !(u > s && u < (s + s * s * s) / 2.0) {
        return Err(Error::Params(format!("u = {u} not in (s, (s+s³)/2) with s = {s}")));
    }
    if !(v > 0.0 && v < 1.0 / u) {
        return Err(Error::Params(format!("v = {v} not in (0, 1/u)")));
    }
    let w = 1.0 / v;
    let sq = s * q;
    let a = w * (u - sq) * (u - s) / (u * (w - sq) * (w - s));
    let g2 = (1.0 - q) * w / ((w - s) * (w - sq))
        * (((1.0 + q) * u - 2.0 * sq) / ((u - s) * (u - sq)) - ((1.0 + q) * w - 2.0 * sq) / ((w - s) * (w - sq)));
    let a2 = g2 / 2.0;
    let b1 = 1.0 / (u - s) - 1.0 / (u / q - s);
    let c = (2.0 * a2).sqrt() / b1;
    if !(a > 0.0 && a2 > 0.0 && b1 > 0.0 && c > 0.0) {
        return Err(Error::Inconsistent(format!("constants a={a} a2={a2} b1={b1} not all positive")));
    }
    Ok(LimitConstants { a, a2, b1, c })
}

/// Circle around `u` for [`cdf_contour`]: radius
/// `min(0.2 (u − s), 0.2 ((qv)^{-1} − u), 0.4 u (1 − q)/(1 + q))`.
pub fn default_contour(p: &ModelParams) -> ContourSpec {
    let (q, s) = (p.q(), p.s());
    let u = p.u().iter().sum::<f64>() / p.n() as f64;
    let vmax = p.v().iter().copied().fold(0.0, f64::max);
    let mut r = (0.2 * (u - s)).min(0.4 * u * (1.0 - q) / (1.0 + q));
    if vmax > 0.0 {
        r = r.min(0.2 * (1.0 / (q * vmax) - u));
    }
    ContourSpec::new(u, r)
}

/// `ℙ(Y¹₁ ≤ m_1, …, Y^k_k ≤ m_k)` as a k-fold contour integral around the `u_i`.
pub fn cdf_contour(ms: &[usize], p: &ModelParams, gamma: &ContourSpec) -> Result<f64> {
    let k = ms.len();
    if k == 0 || ms[0] < k || ms.windows(2).any(|w| w[0] > w[1]) || ms[k - 1] > p.n() {
        return Err(Error::Range(format!("need 1 ≤ k ≤ m_1 ≤ … ≤ m_k ≤ N, got {ms:?}")));
    }
    let (q, s) = (p.q(), p.s());
    let (u, v) = (p.u(), p.v());
    let mut outside = vec![s, 0.0, 1.0 / s];
    outside.extend(v.iter().map(|&x| 1.0 / (q * x)));
    gamma.check(&u[..ms[k - 1]], &outside, q)?;
    let single = |r: usize, z: Complex64| {
        let mut t = ((z - s * q) / (z - s)).powi((k - r) as i32) / (z * (1.0 - s * z));
        for &x in &u[..ms[r]] {
            t *= (q * z - x) / (z - x);
        }
        for &y in v {
            t *= (1.0 - z * y) / (1.0 - q * z * y);
        }
        t
    };
    let joint = |z: &[Complex64]| {
        let mut t = Complex64::new(1.0, 0.0);
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                t *= (z[i] - z[j]) / (z[i] - q * z[j]);
            }
        }
        t
    };
    let quad = integrate_k(gamma, k, QUAD_TOL, single, joint)?;
    let mut pre = q.powi(-(k as i32));
    for &y in v {
        pre *= ((1.0 - q * s * y) / (1.0 - s * y)).powi(k as i32);
    }
    for &m in ms {
        for &x in &u[..m] {
            pre *= (x - s) / (x - s * q);
        }
    }
    real_part(quad.value * pre)
}

/// Largest `|m|` accepted by [`psi`].
pub const PSI_RANGE: i32 = 6;

/// Standard normal density.
pub fn phi(y: f64) -> f64 {
    (-0.5 * y * y).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `Ψ^m(y) = (2πi)^{-1} ∫_{1+iℝ} x^m e^{x²/2 + yx} dx`: the m-th derivative of
/// the Gaussian density for `m ≥ 0`, its |m|-fold iterated integral from `−∞`
/// for `m < 0`.
pub fn psi(m: i32, y: f64) -> Result<f64> {
    if m.abs() > PSI_RANGE || !y.is_finite() {
        return Err(Error::Range(format!("Ψ^{m}({y}) outside the supported range")));
    }
    if m >= 0 {
        // φ^{(m)} = (−1)^m He_m φ
        let (mut h0, mut h1) = (1.0, y);
        if m == 0 {
            return Ok(phi(y));
        }
        for n in 1..m {
            let h2 = y * h1 - n as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * h1 * phi(y));
    }
    let n = -m;
    let fact: f64 = (1..n).map(|x| x as f64).product();
    let lo = y.min(0.0) - 12.0;
    let f = |t: f64| (y - t).powi(n - 1) / fact * phi(t);
    Ok(integrate(f, lo, y, 1e-14))
}

/// `det[Ψ^{j−i−1}(x_j)]_{i,j ≤ k}`: the GUE-corners probability
/// `ℙ(λ¹₁ ≤ x_1, …, λ^k_k ≤ x_k)`. Since `λ¹₁ ≤ λ²₂ ≤ …`, each `x_r` is first
/// replaced by `min_{j ≥ r} x_j`, which makes the arguments nondecreasing.
pub fn gue_edge_cdf(xs: &[f64]) -> Result<f64> {
    let k = xs.len();
    if k == 0 || k > 5 {
        return Err(Error::Range(format!("k = {k} not in 1..=5")));
    }
    let mut x = xs.to_vec();
    for r in (0..k - 1).rev() {
        x[r] = x[r].min(x[r + 1]);
    }
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = psi(j as i32 - i as i32 - 1, x[j])?;
        }
    }
    Ok(m.determinant())
}

/// Eigenvalues, increasing, of the top-left `r × r` corners (`r = 1..k`) of
/// one GUE matrix with density `∝ exp(−Tr X²/2)`.
pub fn gue_corners(k: usize, rng: &mut RngStream) -> Vec<Vec<f64>> {
    let mut x = DMatrix::<Complex64>::zeros(k, k);
    let half = 0.5f64.sqrt();
    for i in 0..k {
        let d: f64 = StandardNormal.sample(rng);
        x[(i, i)] = Complex64::new(d, 0.0);
        for j in i + 1..k {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            let z = Complex64::new(half * re, half * im);
            x[(i, j)] = z;
            x[(j, i)] = z.conj();
        }
    }
    (1..=k)
        .map(|r| {
            let minor = x.view((0, 0), (r, r)).into_owned();
            let mut ev: Vec<f64> = SymmetricEigen::new(minor).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        })
        .collect()
}

/// Monte Carlo samples of `(λ¹₁, …, λ^k_k)`, the largest eigenvalue of each corner.
#[derive(Debug, Clone)]
pub struct GueEdgeSamples {
    pub edges: Vec<Vec<f64>>,
}

impl GueEdgeSamples {
    /// Empirical `ℙ(λ^r_r ≤ x_r for all r)` and its standard error.
    pub fn cdf(&self, xs: &[f64]) -> (f64, f64) {
        let n = self.edges.len() as f64;
        let hits = self.edges.iter().filter(|e| e.iter().zip(xs).all(|(a, b)| a <= b)).count() as f64;
        let p = hits / n;
        (p, (p * (1.0 - p) / n).sqrt())
    }
}

pub fn gue_mc_oracle(k: usize, n_samples: usize, rng: &mut RngStream) -> Result<GueEdgeSamples> {
    if k == 0 || k > 5 {
        return Err(Error::Range(format!("k = {k} not in 1..=5")));
    }
    let edges = (0..n_samples)
        .map(|_| gue_corners(k, rng).iter().map(|ev| *ev.last().expect("nonempty")).collect())
        .collect();
    Ok(GueEdgeSamples { edges })
}

/// `(G(z), g(z))` with `g(z) = log((qz − u)/(z − u) · (u − s)/(u − sq))` and
/// `G(z) = a g(z) + log((w − z)/(w − qz) · (w − sq)/(w − s))`, `w = 1/v`.
pub fn steepest_g(z: Complex64, c: &LimitConstants, q: f64, u: f64, v: f64) -> Result<(Complex64, Complex64)> {
    let s = q.powf(-0.5);
    let w = 1.0 / v;
    let den = (z - u) * (w - q * z);
    if den.norm() < 1e-300 || z.norm() < 1e-300 {
        return Err(Error::Singular(format!("G at {z}")));
    }
    let g = ((q * z - u) / (z - u) * ((u - s) / (u - s * q))).ln();
    let big = c.a * g + ((w - z) / (w - q * z) * ((w - s * q) / (w - s))).ln();
    Ok((big, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::symm::measure_prob;

    #[test]
    fn constants_at_reference_point() {
        let c = limit_constants(0.5, 2.0, 0.25).unwrap();
        assert!((c.a - 0.177897).abs() < 1e-5, "{}", c.a);
        assert!((c.b1 - 1.32037).abs() < 1e-5, "{}", c.b1);
        assert!((c.c - (2.0 * c.a2).sqrt() / c.b1).abs() < 1e-15);
    }

    #[test]
    fn constants_positive_on_grid() {
        let mut count = 0;
        for qi in 1..=5 {
            let q = 0.15 * qi as f64;
            let s = q.powf(-0.5);
            let hi = (s + s * s * s) / 2.0;
            for ui in 1..=5 {
                let u = s + (hi - s) * ui as f64 / 6.0;
                for vi in 1..=4 {
                    let v = vi as f64 / 5.0 / u;
                    let c = limit_constants(q, u, v).unwrap();
                    assert!(c.a2 > 0.0 && c.c > 0.0);
                    count += 1;
                }
            }
        }
        assert_eq!(count, 100);
    }

    #[test]
    fn contour_single_row() {
        let p = ModelParams::homogeneous(0.5, 2.0, 0.25, 1, 0).unwrap();
        let v = cdf_contour(&[1], &p, &default_contour(&p)).unwrap();
        assert!((v - 0.546918).abs() < 1e-6, "{v}");
        let exact = measure_prob(&[(1, Signature::new(vec![1]).unwrap())], &p).unwrap();
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn contour_is_monotone() {
        let p = ModelParams::homogeneous(0.5, 2.0, 0.25, 4, 2).unwrap();
        let g = default_contour(&p);
        let mut prev = 0.0;
        for m in 1..=4 {
            let v = cdf_contour(&[m], &p, &g).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        assert!(cdf_contour(&[2, 2], &p, &g).unwrap() <= cdf_contour(&[2, 3], &p, &g).unwrap() + 1e-12);
    }

    #[test]
    fn psi_values_and_derivatives() {
        assert!((psi(0, 0.0).unwrap() - 0.398942).abs() < 1e-6);
        assert!((psi(-1, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((psi(-2, 0.0).unwrap() - phi(0.0)).abs() < 1e-12);
        let h = 1e-4;
        for m in -6..6 {
            for yi in -6..=6 {
                let y = 0.5 * yi as f64;
                let fd = (psi(m, y + h).unwrap() - psi(m, y - h).unwrap()) / (2.0 * h);
                assert!((fd - psi(m + 1, y).unwrap()).abs() < 1e-6, "m={m} y={y}");
            }
        }
        assert!(psi(7, 0.0).is_err());
    }

    #[test]
    fn edge_cdf_examples() {
        assert!((gue_edge_cdf(&[0.0]).unwrap() - 0.5).abs() < 1e-12);
        let v = gue_edge_cdf(&[0.0, 0.0]).unwrap();
        assert!((v - 0.090845).abs() < 1e-6, "{v}");
        assert!(gue_edge_cdf(&[-9.0, 0.5, 1.0]).unwrap().abs() < 1e-10);
        assert!((gue_edge_cdf(&[9.0, 9.5, 10.0]).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn corners_interlace() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..200 {
            let ev = gue_corners(4, &mut rng);
            for r in 0..3 {
                for i in 0..=r {
                    assert!(ev[r + 1][i] <= ev[r][i] + 1e-12 && ev[r][i] <= ev[r + 1][i + 1] + 1e-12);
                }
            }
        }
    }

    #[test]
    fn steepest_descent_diagnostics() {
        let (q, u, v) = (0.5, 2.0, 0.25);
        let c = limit_constants(q, u, v).unwrap();
        let s = q.powf(-0.5);
        let at = |x: f64| steepest_g(Complex64::new(x, 0.0), &c, q, u, v).unwrap().0.re;
        assert!(at(s).abs() < 1e-14);
        let h = 1e-4;
        assert!(((at(s + h) - at(s - h)) / (2.0 * h)).abs() < 1e-8);
        let second = (at(s + h) - 2.0 * at(s) + at(s - h)) / (h * h);
        assert!((second - 2.0 * c.a2).abs() < 1e-5, "{second} vs {}", 2.0 * c.a2);
        let w = 1.0 / v;
        let g0 = c.a * ((u - s) / (u - s * q)).ln() + ((w - s * q) / (w - s)).ln();
        let g0_num = steepest_g(Complex64::new(0.0, 1e-12), &c, q, u, v).unwrap().0.re;
        assert!((g0_num - g0).abs() < 1e-10);
        assert!(g0 > 0.0);
    }
}
