//! The difference operators `D^k_m`: subset sums, composed chains, contour
//! integral actions on product functions, and the observable recurrence.

use std::collections::HashMap;

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::contour::{integrate_k, ContourSpec};
use crate::error::{Error, Result};
use crate::numerics::{permutations, subsets, symmetrize};
use crate::params::Spin;
use crate::signature::Signature;
use crate::symm::{check_distinct, f_sym, ratio, skew_f_row};

/// Tolerance on successive contour values and on discarded imaginary parts.
const QUAD_TOL: f64 = 1e-11;
const IMAG_TOL: f64 = 1e-9;

/// `F_k(u_1, …, u_k) = F_{(k−1, …, 0)}(u)`. Evaluated in double-double
/// arithmetic, since the operator subset sums cancel heavily when the `u_i`
/// cluster and need `F_k` to better than double precision.
pub fn fk_eval(k: usize, u: &[f64], sp: Spin) -> Result<f64> {
    if u.len() != k {
        return Err(Error::Range(format!("F_k needs {k} variables, got {}", u.len())));
    }
    if u.iter().any(|&x| x == sp.s) {
        return f_eval(&Signature::staircase(k), u, sp);
    }
    check_distinct(u)?;
    let Spin { q, s } = sp;
    let one = TwoFloat::from(1.0);
    let x: Vec<TwoFloat> = u.iter().map(|&v| TwoFloat::from(v)).collect();
    let mut pre = (one - q).powi(k as i32);
    let mut r = Vec::with_capacity(k);
    for &xi in &x {
        let d = one - xi * s;
        pre /= d;
        r.push((xi - s) / d);
    }
    // subset dynamic programme as in `symmetrize`, in double-double
    let full = (1usize << k) - 1;
    let mut dp = vec![TwoFloat::from(0.0); 1 << k];
    dp[0] = one;
    for mask in 0..full {
        let cur = dp[mask];
        let pos = mask.count_ones() as i32;
        for a in (0..k).filter(|a| mask & (1 << a) == 0) {
            let mut f = cur * r[a].powi(k as i32 - 1 - pos);
            for b in (0..k).filter(|&b| b != a && mask & (1 << b) == 0) {
                f *= (x[a] - x[b] * q) / (x[a] - x[b]);
            }
            dp[mask | (1 << a)] += f;
        }
    }
    Ok(f64::from(pre * dp[full]))
}

/// `F_k(s, …, s) = s^{k(k−1)/2} ((1−q)/(1−s²))^{k(k+1)/2}`.
pub fn fk_s(k: usize, sp: Spin) -> f64 {
    let Spin { q, s } = sp;
    let k = k as i32;
    s.powi(k * (k - 1) / 2) * ((1.0 - q) / (1.0 - s * s)).powi(k * (k + 1) / 2)
}

/// `F_λ(u_1, …, u_{m−k}, s, …, s)` for strict `λ ∈ Sign⁺_m` with `k` trailing
/// variables equal to `s`; zero unless `λ_{m−i} = i` for `i < k`.
pub fn f_sub(lambda: &Signature, u_rest: &[f64], k: usize, sp: Spin) -> Result<f64> {
    let m = lambda.len();
    if u_rest.len() + k != m {
        return Err(Error::Range(format!("F_λ needs {m} variables, got {} + {k}", u_rest.len())));
    }
    if !lambda.is_strict() || !lambda.is_nonneg() {
        return Err(Error::Range("substitution needs strict nonnegative λ".into()));
    }
    let parts = lambda.parts();
    if (0..k).any(|i| parts[m - 1 - i] != i as i64) {
        return Ok(0.0);
    }
    check_distinct(u_rest)?;
    let Spin { q, s } = sp;
    let ki = k as i32;
    let mut pre = (1.0 - q).powi(m as i32) / (1.0 - s * s).powi(ki);
    pre *= (s * (1.0 - q) / (1.0 - s * s)).powi(ki * (ki - 1) / 2);
    for &x in u_rest {
        pre /= 1.0 - s * x;
        pre *= ((x - q * s) / (1.0 - s * x)).powi(ki);
    }
    let r: Vec<f64> = u_rest.iter().map(|&x| ratio(x, s)).collect();
    let sum = symmetrize(
        m - k,
        false,
        |a, b| (u_rest[a] - q * u_rest[b]) / (u_rest[a] - u_rest[b]),
        |x, i| r[x].powi((parts[i] - k as i64) as i32),
    );
    Ok(pre * sum)
}

/// `F_λ(u)` where some entries may equal `s` exactly; those are moved to the
/// end (`F_λ` is symmetric) and handled by [`f_sub`].
pub fn f_eval(lambda: &Signature, u: &[f64], sp: Spin) -> Result<f64> {
    let rest: Vec<f64> = u.iter().copied().filter(|&x| x != sp.s).collect();
    let k = u.len() - rest.len();
    if k == 0 {
        f_sym(lambda, u, sp)
    } else {
        f_sub(lambda, &rest, k, sp)
    }
}

/// A function of `m` variables handed to the operators.
pub type Func<'a> = &'a dyn Fn(&[f64]) -> Result<f64>;

/// `(D^k_m fn)(u)`: the subset sum over `|I| = k` in `{1, …, m}`. Only the
/// first `m` coordinates of `u` are acted upon. A coordinate outside `I`
/// that already equals `s` carries the factor `(u_j − s)^k` and kills the
/// term; this is the convention under which composed operators are defined.
pub fn apply_d(k: usize, m: usize, fun: Func, u: &[f64], sp: Spin) -> Result<f64> {
    if k == 0 || k > m || m > u.len() {
        return Err(Error::Range(format!("need 1 ≤ k ≤ m ≤ |u|, got k={k} m={m} |u|={}", u.len())));
    }
    let Spin { q, s } = sp;
    let fks = fk_s(k, sp);
    let mut total = 0.0;
    let mut x = u.to_vec();
    'subsets: for set in subsets(m, k) {
        let mut coef = 1.0;
        let mut inside = vec![false; m];
        for &i in &set {
            inside[i] = true;
        }
        for j in (0..m).filter(|&j| !inside[j]) {
            if u[j] == s {
                continue 'subsets;
            }
            if u[j] == s * q {
                return Err(Error::Singular(format!("u_{} = sq", j + 1)));
            }
            coef *= ((u[j] - s) / (u[j] - s * q)).powi(k as i32);
            for &i in &set {
                if u[j] == u[i] {
                    return Err(Error::Coincident { i: i.min(j), j: i.max(j) });
                }
                coef *= (u[j] - q * u[i]) / (u[j] - u[i]);
            }
        }
        let ui: Vec<f64> = set.iter().map(|&i| u[i]).collect();
        coef *= fk_eval(k, &ui, sp)? / fks;
        for &i in &set {
            x[i] = s;
        }
        total += coef * fun(&x)?;
        for &i in &set {
            x[i] = u[i];
        }
    }
    Ok(total)
}

/// `(D^1_{m_1} D^2_{m_2} ⋯ D^k_{m_k} fn)(u)` by the nested index sum over
/// distinct `i_r ∈ {1, …, m_r}`.
pub fn apply_d_chain(ms: &[usize], fun: Func, u: &[f64], sp: Spin) -> Result<f64> {
    let k = ms.len();
    if k == 0 {
        return fun(u);
    }
    if ms[0] < k || ms.windows(2).any(|w| w[0] > w[1]) || ms[k - 1] > u.len() {
        return Err(Error::Range(format!("need k ≤ m_1 ≤ … ≤ m_k ≤ |u|, got {ms:?}")));
    }
    check_distinct(u)?;
    let Spin { q, s } = sp;
    let fks = fk_s(k, sp);
    struct Ctx<'a> {
        ms: &'a [usize],
        u: &'a [f64],
        q: f64,
        s: f64,
        fun: Func<'a>,
    }
    fn rec(c: &Ctx, r: usize, chosen: &mut Vec<usize>, coef: f64, x: &mut Vec<f64>) -> Result<f64> {
        let k = c.ms.len();
        if r == k {
            return Ok(coef * (c.fun)(x)?);
        }
        let (q, s, u) = (c.q, c.s, c.u);
        let mut total = 0.0;
        for i in 0..c.ms[r] {
            if chosen.contains(&i) {
                continue;
            }
            chosen.push(i);
            let ui = u[i];
            let mut t = coef * (1.0 - q) / (1.0 - s * ui) * ((ui - s * q) / (1.0 - s * ui)).powi(r as i32);
            for j in (0..c.ms[r]).filter(|j| !chosen.contains(j)) {
                t *= (u[j] - q * ui) / (u[j] - ui) * (u[j] - s) / (u[j] - s * q);
            }
            x[i] = s;
            total += rec(c, r + 1, chosen, t, x)?;
            x[i] = ui;
            chosen.pop();
        }
        Ok(total)
    }
    let ctx = Ctx { ms, u, q, s, fun };
    let mut x = u.to_vec();
    Ok(rec(&ctx, 0, &mut Vec::new(), 1.0 / fks, &mut x)?)
}

/// `F(z_1, …, z_m) = ∏ g(z_i)` with `g` holomorphic and nonvanishing near the
/// contour; `poles` lists real singularities of `g` and `1/g` the contour must avoid.
pub struct ProductFunction<'a> {
    pub factor: Box<dyn Fn(Complex64) -> Complex64 + 'a>,
    pub poles: Vec<f64>,
}

impl<'a> ProductFunction<'a> {
    pub fn new(factor: impl Fn(Complex64) -> Complex64 + 'a, poles: Vec<f64>) -> Self {
        ProductFunction { factor: Box::new(factor), poles }
    }

    pub fn at(&self, x: f64) -> f64 {
        (self.factor)(Complex64::new(x, 0.0)).re
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        u.iter().map(|&x| self.at(x)).product()
    }
}

pub(crate) fn real_part(v: Complex64) -> Result<f64> {
    if v.im.abs() > IMAG_TOL * (1.0 + v.re.abs()) {
        return Err(Error::Contour(format!("imaginary residue {:e}", v.im)));
    }
    Ok(v.re)
}

fn excluded(pf: &ProductFunction, s: f64) -> Vec<f64> {
    let mut out = vec![s, 0.0, 1.0 / s];
    out.extend(&pf.poles);
    out
}

/// `(D^k_m F)(u)` for a product function, as a k-fold contour integral.
pub fn contour_d(k: usize, pf: &ProductFunction, u: &[f64], gamma: &ContourSpec, sp: Spin) -> Result<f64> {
    let m = u.len();
    if k == 0 || k > m {
        return Err(Error::Range(format!("need 1 ≤ k ≤ m, got k={k} m={m}")));
    }
    let Spin { q, s } = sp;
    gamma.check(u, &excluded(pf, s), q)?;
    let kk = k as i32;
    let single = |_: usize, z: Complex64| {
        let mut t = (1.0 - q) / (1.0 - s * z) * ((z - s * q) / (z - s)).powi(kk) / (pf.factor)(z);
        for &x in u {
            t *= (q * z - x) / (z - x);
        }
        t
    };
    let perms = permutations(k);
    let sign = if (k * (k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let joint = |z: &[Complex64]| {
        // det[1/(q z_i − z_j)] · F_{(k−1, …, 0)}(z) with the Vandermonde poles cancelled
        let mut num = Complex64::new(sign * q.powi(kk * (kk - 1) / 2), 0.0);
        for i in 0..k {
            for j in 0..k {
                num /= q * z[i] - z[j];
                if i < j {
                    num *= z[i] - z[j];
                }
            }
        }
        let rs: Vec<Complex64> = z.iter().map(|&w| (w - s) / (1.0 - s * w)).collect();
        let mut sum = Complex64::new(0.0, 0.0);
        for (p, sg) in &perms {
            let mut t = Complex64::new(*sg as f64, 0.0);
            for a in 0..k {
                t *= rs[p[a]].powi((k - 1 - a) as i32);
                for b in a + 1..k {
                    t *= z[p[a]] - q * z[p[b]];
                }
            }
            sum += t;
        }
        num * sum
    };
    let quad = integrate_k(gamma, k, QUAD_TOL, single, joint)?;
    let mut pre = pf.eval(u) * q.powi(-kk * (kk - 1) / 2) * pf.at(s).powi(kk) / fk_s(k, sp);
    for &x in u {
        pre *= ((x - s) / (x - s * q)).powi(kk);
    }
    pre /= (1..=k).map(|x| x as f64).product::<f64>();
    real_part(quad.value * pre)
}

/// `(D^1_{m_1} ⋯ D^k_{m_k} F)(u)` for a product function, as a k-fold contour integral.
pub fn contour_d_chain(ms: &[usize], pf: &ProductFunction, u: &[f64], gamma: &ContourSpec, sp: Spin) -> Result<f64> {
    let k = ms.len();
    if k == 0 || ms[0] < k || ms.windows(2).any(|w| w[0] > w[1]) || ms[k - 1] > u.len() {
        return Err(Error::Range(format!("need k ≤ m_1 ≤ … ≤ m_k ≤ |u|, got {ms:?}")));
    }
    let Spin { q, s } = sp;
    gamma.check(u, &excluded(pf, s), q)?;
    let single = |r: usize, z: Complex64| {
        let mut t = (1.0 - q) / (1.0 - s * z) * ((z - s * q) / (1.0 - s * z)).powi(r as i32);
        t *= ((z - s * q) / (z - s)).powi((k - r) as i32);
        t /= (pf.factor)(z) * z * (q - 1.0);
        for &x in &u[..ms[r]] {
            t *= (q * z - x) / (z - x);
        }
        t
    };
    let joint = |z: &[Complex64]| {
        let mut t = Complex64::new(1.0, 0.0);
        for i in 0..k {
            for j in i + 1..k {
                t *= (z[i] - z[j]) / (z[i] - q * z[j]);
            }
        }
        t
    };
    let quad = integrate_k(gamma, k, QUAD_TOL, single, joint)?;
    let mut pre = pf.eval(u) * pf.at(s).powi(k as i32) / fk_s(k, sp);
    for &m in ms {
        for &x in &u[..m] {
            pre *= (x - s) / (x - s * q);
        }
    }
    real_part(quad.value * pre)
}

/// Strict `κ ∈ Sign⁺_{L+1}` interlacing over `μ ∈ Sign⁺_L` with `κ_1 ≤ cap`.
fn strict_successors(mu: &Signature, cap: i64) -> Vec<Signature> {
    let m = mu.parts();
    let len = m.len() + 1;
    let mut out = Vec::new();
    fn rec(i: usize, m: &[i64], cap: i64, len: usize, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == len {
            out.push(Signature::new(cur.clone()).expect("decreasing"));
            return;
        }
        let mut hi = if i == 0 { cap } else { m[i - 1] };
        if let Some(&p) = cur.last() {
            hi = hi.min(p - 1);
        }
        let lo = if i < m.len() { m[i] } else { 0 };
        for x in lo..=hi {
            cur.push(x);
            rec(i + 1, m, cap, len, cur, out);
            cur.pop();
        }
    }
    rec(0, m, cap, len, &mut Vec::new(), &mut out);
    out
}

/// `λ ∈ Sign*_{m,r}`: strict with `λ_m = 0, …, λ_{m−r+1} = r − 1`.
pub fn in_sign_star(lambda: &Signature, r: usize) -> bool {
    let p = lambda.parts();
    let m = p.len();
    lambda.is_strict() && r <= m && (0..r).all(|t| p[m - 1 - t] == t as i64)
}

/// `𝒲^f(m; z) = Σ_{ω ∈ A(m)} 𝒲^f(ω; z)` for a boundary function `f` with
/// finite support on strict signatures; `N = |z|`. Exact (no truncation).
pub fn observable_weight(ms: &[usize], z: &[f64], table: &[(Signature, f64)], sp: Spin) -> f64 {
    let n = z.len();
    let cap = table.iter().filter_map(|(l, _)| l.parts().first().copied()).max().unwrap_or(0);
    let mut states: HashMap<Signature, f64> = HashMap::from([(Signature::empty(), 1.0)]);
    for (row, &zr) in z.iter().enumerate() {
        let level = row + 1;
        let mut next: HashMap<Signature, f64> = HashMap::new();
        for (mu, w) in &states {
            for kappa in strict_successors(mu, cap) {
                let x = skew_f_row(&kappa, mu, zr, sp);
                if x != 0.0 {
                    *next.entry(kappa).or_insert(0.0) += w * x;
                }
            }
        }
        let r = ms.iter().enumerate().filter(|(_, &m)| m == level).map(|(i, _)| i + 1).max();
        if let Some(r) = r {
            next.retain(|sig, _| in_sign_star(sig, r));
        }
        states = next;
    }
    let _ = n;
    table.iter().map(|(l, f)| f * states.get(l).copied().unwrap_or(0.0)).sum()
}

/// Both sides of the first-operator recurrence expressing `𝒲^f(m; z)`
/// through `𝒲^g(m̂; z ∖ z_i)` with `g(μ) = f(μ + 1^{N−1})`; returns `(lhs, rhs, |lhs − rhs|)`.
pub fn recurrence_check(ms: &[usize], z: &[f64], table: &[(Signature, f64)], sp: Spin) -> Result<(f64, f64, f64)> {
    let n = z.len();
    if ms.is_empty() || ms[0] == 0 || ms.windows(2).any(|w| w[0] > w[1]) || ms[ms.len() - 1] > n {
        return Err(Error::Range(format!("need 1 ≤ m_1 ≤ … ≤ m_k ≤ N, got {ms:?}")));
    }
    if ms.iter().enumerate().any(|(i, &m)| m < i + 1) {
        return Err(Error::Range(format!("need m_i ≥ i, got {ms:?}")));
    }
    check_distinct(z)?;
    let Spin { q, s } = sp;
    let lhs = observable_weight(ms, z, table, sp);
    let g_table: Vec<(Signature, f64)> = table
        .iter()
        .filter(|(l, _)| l.parts().last() == Some(&0))
        .map(|(l, f)| {
            let p = l.parts();
            let mu = Signature::new(p[..p.len() - 1].iter().map(|x| x - 1).collect()).expect("decreasing");
            (mu, *f)
        })
        .collect();
    let m_hat: Vec<usize> = ms[1..].iter().map(|m| m - 1).collect();
    let m1 = ms[0];
    let mut outer = 1.0;
    for &x in &z[m1..] {
        outer *= (x - s * q) / (1.0 - s * x);
    }
    let mut sum = 0.0;
    for i in 0..m1 {
        let mut t = (1.0 - q) / (1.0 - s * z[i]);
        for j in (0..m1).filter(|&j| j != i) {
            t *= (z[j] - q * z[i]) / (z[j] - z[i]) * (z[j] - s) / (1.0 - s * z[j]);
        }
        let rest: Vec<f64> = z.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        sum += t * observable_weight(&m_hat, &rest, &g_table, sp);
    }
    let rhs = outer * sum;
    Ok((lhs, rhs, (lhs - rhs).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::brute_force_f;

    const SP: Spin = Spin { q: 0.5, s: std::f64::consts::SQRT_2 };

    fn sig(p: &[i64]) -> Signature {
        Signature::new(p.to_vec()).unwrap()
    }

    #[test]
    fn fk_examples() {
        assert!((fk_s(1, SP) + 0.5).abs() < 1e-12);
        assert!((fk_s(2, SP) + 0.176777).abs() < 1e-6);
        let a = fk_eval(1, &[2.0], SP).unwrap();
        assert!((a - f_sym(&sig(&[0]), &[2.0], SP).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn substitution_matches_path_sums() {
        let s = SP.s;
        for (lam, rest) in [(vec![2, 1, 0], vec![2.0]), (vec![3, 1, 0], vec![1.7, 2.4]), (vec![2, 0], vec![2.0])] {
            let lam = sig(&lam);
            let k = lam.len() - rest.len();
            let mut all = rest.clone();
            all.extend(std::iter::repeat(s).take(k));
            let a = f_sub(&lam, &rest, k, SP).unwrap();
            let b = brute_force_f(&lam, &Signature::empty(), &all, SP, 4).unwrap();
            assert!((a - b).abs() < 1e-10, "{lam}: {a} vs {b}");
        }
        assert_eq!(f_sub(&sig(&[2, 1]), &[2.0], 1, SP).unwrap(), 0.0);
    }

    #[test]
    fn operator_examples() {
        let f0 = |x: &[f64]| f_eval(&sig(&[0]), x, SP);
        let v = apply_d(1, 1, &f0, &[2.0], SP).unwrap();
        assert!((v + 0.273459).abs() < 1e-6);
        let f2 = |x: &[f64]| f_eval(&sig(&[2]), x, SP);
        assert!(apply_d(1, 1, &f2, &[2.0], SP).unwrap().abs() < 1e-15);
        let lam = sig(&[2, 1, 0]);
        let u = [1.7, 2.0, 2.4];
        let fl = |x: &[f64]| f_eval(&lam, x, SP);
        let d = apply_d(2, 3, &fl, &u, SP).unwrap();
        assert!((d - f_sym(&lam, &u, SP).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn chain_matches_composition() {
        let u = [1.7, 2.0, 2.4, 2.9];
        let h = |x: &[f64]| -> Result<f64> {
            Ok(x.iter().enumerate().map(|(i, &y)| (1.0 + 0.3 * y) / (1.0 + 0.1 * i as f64 * y)).product())
        };
        for ms in [vec![1], vec![2, 3], vec![2, 4], vec![3, 3, 4], vec![3, 4, 4]] {
            let chain = apply_d_chain(&ms, &h, &u, SP).unwrap();
            let mut composed: Box<dyn Fn(&[f64]) -> Result<f64>> = Box::new(h);
            for (idx, &m) in ms.iter().enumerate().rev() {
                let inner = composed;
                composed = Box::new(move |x: &[f64]| apply_d(idx + 1, m, &*inner, x, SP));
            }
            let direct = composed(&u).unwrap();
            assert!((chain - direct).abs() < 1e-9 * (1.0 + direct.abs()), "{ms:?}: {chain} vs {direct}");
        }
    }

    #[test]
    fn contour_single_residue() {
        let one = ProductFunction::new(|_| Complex64::new(1.0, 0.0), vec![]);
        let gamma = ContourSpec::new(2.0, 0.1);
        let v = contour_d(1, &one, &[2.0], &gamma, SP).unwrap();
        assert!((v - 0.546918).abs() < 1e-6);
        let w = contour_d_chain(&[1], &one, &[2.0], &gamma, SP).unwrap();
        assert!((w - 0.546918).abs() < 1e-6);
    }

    #[test]
    fn recurrence_small() {
        let sp = Spin::six_vertex(0.5);
        let dw = [(Signature::staircase(2), 1.0)];
        let (_, _, d) = recurrence_check(&[1], &[2.0, 2.3], &dw, sp).unwrap();
        assert!(d < 1e-9);
        let z_f = observable_weight(&[], &[2.0, 2.3], &dw, sp);
        let direct = f_sym(&Signature::staircase(2), &[2.0, 2.3], sp).unwrap();
        assert!((z_f - direct).abs() < 1e-12);
    }

    #[test]
    fn contour_matches_subset_sum_on_clustered_grid() {
        let (q, v) = (0.5, 0.25);
        let g = move |z: Complex64| (1.0 - q * z * v) / (1.0 - z * v);
        let pf = ProductFunction::new(g, vec![1.0 / v, 1.0 / (q * v)]);
        let h = |x: &[f64]| -> Result<f64> { Ok(pf.eval(x)) };
        let u = [2.0, 2.007, 2.013, 2.02];
        let gamma = ContourSpec::new(2.01, 0.05);
        for k in 1..=3 {
            let c = contour_d(k, &pf, &u, &gamma, SP).unwrap();
            let d = apply_d(k, 4, &h, &u, SP).unwrap();
            assert!((c - d).abs() < 1e-8, "k={k}: {c} vs {d}");
        }
        for ms in [vec![2], vec![2, 4], vec![3, 3, 4]] {
            let c = contour_d_chain(&ms, &pf, &u, &gamma, SP).unwrap();
            let d = apply_d_chain(&ms, &h, &u, SP).unwrap();
            assert!((c - d).abs() < 1e-8, "{ms:?}: {c} vs {d}");
        }
    }
}
