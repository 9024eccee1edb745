//! The symmetric rational functions `F_λ`, `G^c_ν`, their one-row skew
//! versions and specializations, and the measure built from them.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numerics::{qpoch, symmetrize};
use crate::params::{ModelParams, Spin};
use crate::signature::Signature;
use crate::weights::{conj_vertex_weight, vertex_weight, ArrowConfig};

const COINCIDENCE: f64 = 1e-9;

pub(crate) fn check_distinct(u: &[f64]) -> Result<()> {
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let scale = u[i].abs().max(u[j].abs()).max(1.0);
            if (u[i] - u[j]).abs() <= COINCIDENCE * scale {
                return Err(Error::Coincident { i, j });
            }
        }
    }
    Ok(())
}

/// `(u − s)/(1 − su)`.
#[inline]
pub fn ratio(u: f64, s: f64) -> f64 {
    (u - s) / (1.0 - s * u)
}

/// `F_λ(u_1, …, u_N)` by the symmetrization formula.
pub fn f_sym(lambda: &Signature, u: &[f64], sp: Spin) -> Result<f64> {
    let n = lambda.len();
    if u.len() != n {
        return Err(Error::Range(format!("F_λ needs {n} variables, got {}", u.len())));
    }
    if !lambda.is_nonneg() {
        return Err(Error::Range("λ must be nonnegative".into()));
    }
    check_distinct(u)?;
    let Spin { q, s } = sp;
    let mut pre = (1.0 - q).powi(n as i32);
    for &x in u {
        pre /= 1.0 - s * x;
    }
    let r: Vec<f64> = u.iter().map(|&x| ratio(x, s)).collect();
    let parts = lambda.parts();
    let sum = symmetrize(
        n,
        false,
        |a, b| (u[a] - q * u[b]) / (u[a] - u[b]),
        |x, i| r[x].powi(parts[i] as i32),
    );
    Ok(pre * sum)
}

/// `G^c_ν(u_1, …, u_N)` by the symmetrization formula; zero when `N < n − n_0`.
pub fn g_sym(nu: &Signature, u: &[f64], sp: Spin) -> Result<f64> {
    if !nu.is_nonneg() {
        return Err(Error::Range("ν must be nonnegative".into()));
    }
    let n = nu.len();
    let n0 = nu.multiplicity(0);
    let big_n = u.len();
    if big_n + n0 < n {
        return Ok(0.0);
    }
    check_distinct(u)?;
    let Spin { q, s } = sp;
    let mut pre = (1.0 - q).powi(big_n as i32) * qpoch(q, q, n)
        / (qpoch(q, q, big_n + n0 - n) * qpoch(q, q, n0));
    for &x in u {
        pre /= 1.0 - s * x;
    }
    let mut seen = nu.parts().to_vec();
    seen.dedup();
    for &k in seen.iter().filter(|&&k| k > 0) {
        let nk = nu.multiplicity(k);
        pre *= qpoch(s * s, q, nk) / qpoch(q, q, nk);
    }
    if pre == 0.0 {
        return Ok(0.0);
    }
    let r: Vec<f64> = u.iter().map(|&x| ratio(x, s)).collect();
    let parts = nu.parts();
    let positive = n - n0;
    let sq0 = s * q.powi(n0 as i32);
    let sum = symmetrize(
        big_n,
        false,
        |a, b| (u[a] - q * u[b]) / (u[a] - u[b]),
        |x, i| {
            let e = parts.get(i).copied().unwrap_or(0);
            let tail = if i < positive { u[x] / (u[x] - s) } else { 1.0 - sq0 * u[x] };
            r[x].powi(e as i32) * tail
        },
    );
    Ok(pre * sum)
}

/// Positions and running horizontal occupancy of a single row; `None` when
/// the occupancy leaves `{0, 1}`.
fn row_configs(lambda: &Signature, mu: &Signature, entering: u8) -> Option<Vec<ArrowConfig>> {
    let top = lambda.parts().first().copied().unwrap_or(-1).max(mu.parts().first().copied().unwrap_or(-1));
    let mut h = entering as i64;
    let mut out = Vec::with_capacity((top + 1).max(0) as usize);
    for x in 0..=top {
        let i1 = mu.multiplicity(x) as i64;
        let i2 = lambda.multiplicity(x) as i64;
        let j2 = h + i1 - i2;
        if !(0..=1).contains(&j2) {
            return None;
        }
        out.push(ArrowConfig { i1: i1 as u32, j1: h as u8, i2: i2 as u32, j2: j2 as u8 });
        h = j2;
    }
    if h != 0 {
        return None;
    }
    Some(out)
}

/// One-row `F_{λ/μ}(u)`: product of vertex weights of the unique row
/// configuration, or 0 if none exists.
pub fn skew_f_row(lambda: &Signature, mu: &Signature, u: f64, sp: Spin) -> f64 {
    if lambda.len() != mu.len() + 1 || !lambda.is_nonneg() || !mu.is_nonneg() {
        return 0.0;
    }
    match row_configs(lambda, mu, 1) {
        Some(cs) => cs.iter().map(|&c| vertex_weight(c, u, sp)).product(),
        None => 0.0,
    }
}

/// One-row `G^c_{λ/μ}(v)`.
pub fn skew_g_row(lambda: &Signature, mu: &Signature, v: f64, sp: Spin) -> f64 {
    if lambda.len() != mu.len() || !lambda.is_nonneg() || !mu.is_nonneg() {
        return 0.0;
    }
    match row_configs(lambda, mu, 0) {
        Some(cs) => cs.iter().map(|&c| conj_vertex_weight(c, v, sp)).product(),
        None => 0.0,
    }
}

/// Strict signatures `κ` with `κ_1 ≥ μ_1 ≥ κ_2 ≥ … ≥ μ_L ≥ κ_{L+1} ≥ 0` and `κ_1 ≤ cap`.
fn f_successors(mu: &Signature, cap: i64) -> Vec<Signature> {
    let m = mu.parts();
    let len = m.len() + 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(i: usize, m: &[i64], cap: i64, len: usize, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == len {
            out.push(Signature::new(cur.clone()).expect("decreasing"));
            return;
        }
        let hi = if i == 0 { cap } else { m[i - 1] };
        let hi = match cur.last() {
            Some(&prev) => hi.min(prev - 1),
            None => hi,
        };
        let lo = if i < m.len() { m[i] } else { 0 };
        for x in lo..=hi {
            cur.push(x);
            rec(i + 1, m, cap, len, cur, out);
            cur.pop();
        }
    }
    rec(0, m, cap, len, &mut cur, &mut out);
    out
}

/// Strict `κ` with `μ_i ≤ κ_i ≤ μ_{i−1}` and `κ ≤ cap` componentwise.
fn g_successors(mu: &Signature, cap: &Signature) -> Vec<Signature> {
    let m = mu.parts();
    let c = cap.parts();
    let mut out = Vec::new();
    fn rec(i: usize, m: &[i64], c: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == m.len() {
            out.push(Signature::new(cur.clone()).expect("decreasing"));
            return;
        }
        let mut hi = c[i];
        if i > 0 {
            hi = hi.min(m[i - 1]).min(cur[i - 1] - 1);
        }
        for x in m[i]..=hi {
            cur.push(x);
            rec(i + 1, m, c, cur, out);
            cur.pop();
        }
    }
    rec(0, m, c, &mut Vec::new(), &mut out);
    out
}

/// Multi-variable skew `F_{λ/μ}(u_1, …, u_n)` for strict `λ`, by composing
/// one-row steps over strict intermediate signatures.
pub fn skew_f(lambda: &Signature, mu: &Signature, u: &[f64], sp: Spin) -> f64 {
    if lambda.len() != mu.len() + u.len() {
        return 0.0;
    }
    if u.is_empty() {
        return if lambda == mu { 1.0 } else { 0.0 };
    }
    let cap = lambda.parts()[0];
    let mut states: HashMap<Signature, f64> = HashMap::from([(mu.clone(), 1.0)]);
    for (j, &uj) in u.iter().enumerate() {
        let last = j + 1 == u.len();
        let mut next: HashMap<Signature, f64> = HashMap::new();
        for (k, w) in &states {
            let targets = if last { vec![lambda.clone()] } else { f_successors(k, cap) };
            for t in targets {
                let x = skew_f_row(&t, k, uj, sp);
                if x != 0.0 {
                    *next.entry(t).or_insert(0.0) += w * x;
                }
            }
        }
        states = next;
    }
    states.get(lambda).copied().unwrap_or(0.0)
}

/// Multi-variable skew `G^c_{λ/ν}(v_1, …, v_M)` for strict `ν`.
pub fn skew_g(lambda: &Signature, nu: &Signature, v: &[f64], sp: Spin) -> f64 {
    let mut start = HashMap::new();
    start.insert(nu.clone(), 1.0);
    let end = g_transfer(start, lambda, v, sp);
    end.get(lambda).copied().unwrap_or(0.0)
}

/// Both sides of the one-variable skew Cauchy identity
/// `Σ_κ G^c_{κ/λ}(v) F_{κ/ν}(u) = (1 − quv)/(1 − uv) · Σ_μ F_{λ/μ}(u) G^c_{ν/μ}(v)`
/// for `|λ| = |ν| + 1`; the left sum is cut at `κ_1 ≤ cap`.
pub fn skew_cauchy_sides(lambda: &Signature, nu: &Signature, u: f64, v: f64, cap: i64, sp: Spin) -> Result<(f64, f64)> {
    if lambda.len() != nu.len() + 1 {
        return Err(Error::Range(format!("need |λ| = |ν| + 1, got {} and {}", lambda.len(), nu.len())));
    }
    let lhs = f_successors(nu, cap)
        .iter()
        .map(|kappa| skew_g_row(kappa, lambda, v, sp) * skew_f_row(kappa, nu, u, sp))
        .sum::<f64>();
    let top = lambda.parts()[0].max(nu.parts().first().copied().unwrap_or(0));
    let rhs = signatures_bounded(nu.len(), top)
        .iter()
        .filter(|mu| mu.is_strict())
        .map(|mu| skew_f_row(lambda, mu, u, sp) * skew_g_row(nu, mu, v, sp))
        .sum::<f64>();
    Ok((lhs, rhs * (1.0 - sp.q * u * v) / (1.0 - u * v)))
}

/// Both sides of the branching rule `F_λ(u_1, …, u_n) = Σ_κ F_{λ/κ}(u_n) F_κ(u_1, …, u_{n−1})`,
/// the left side by path enumeration.
pub fn branching_sides(lambda: &Signature, u: &[f64], sp: Spin) -> Result<(f64, f64)> {
    let n = lambda.len();
    if u.len() != n || n == 0 {
        return Err(Error::Range(format!("need {n} ≥ 1 variables, got {}", u.len())));
    }
    let lhs = crate::brute::brute_force_f(lambda, &Signature::empty(), u, sp, lambda.parts()[0] + 1)?;
    let mut rhs = 0.0;
    for kappa in signatures_bounded(n - 1, lambda.parts()[0]) {
        let x = skew_f_row(lambda, &kappa, u[n - 1], sp);
        if x != 0.0 {
            rhs += x * if n == 1 { 1.0 } else { f_sym(&kappa, &u[..n - 1], sp)? };
        }
    }
    Ok((lhs, rhs))
}

/// Pushes a weighted family of strict signatures through the G-rows `v`,
/// keeping only signatures bounded by `cap`.
fn g_transfer(
    mut states: HashMap<Signature, f64>,
    cap: &Signature,
    v: &[f64],
    sp: Spin,
) -> HashMap<Signature, f64> {
    for &vj in v {
        let mut next: HashMap<Signature, f64> = HashMap::new();
        for (k, w) in &states {
            for t in g_successors(k, cap) {
                let x = skew_g_row(&t, k, vj, sp);
                if x != 0.0 {
                    *next.entry(t).or_insert(0.0) += w * x;
                }
            }
        }
        states = next;
    }
    states
}

/// `F_μ(u, qu, …, q^{N−1}u)` in closed form.
pub fn f_geom(mu: &Signature, u: f64, sp: Spin) -> Result<f64> {
    let Spin { q, s } = sp;
    let n = mu.len();
    let mut out = qpoch(q, q, n);
    for (i, &m) in mu.parts().iter().enumerate() {
        let x = u * q.powi(i as i32);
        let d = 1.0 - s * x;
        if d == 0.0 {
            return Err(Error::Singular(format!("1 − s q^{i} u = 0")));
        }
        out *= ((x - s) / d).powi(m as i32) / d;
    }
    Ok(out)
}

/// `G^c_ν(u, qu, …, q^{N−1}u)` in closed form.
pub fn g_geom(nu: &Signature, u: f64, big_n: usize, sp: Spin) -> Result<f64> {
    let Spin { q, s } = sp;
    let n = nu.len();
    let n0 = nu.multiplicity(0);
    if big_n + n0 < n {
        return Ok(0.0);
    }
    let mut seen = nu.parts().to_vec();
    seen.dedup();
    let mut out = 1.0;
    for &k in seen.iter().filter(|&&k| k > 0) {
        let nk = nu.multiplicity(k);
        out *= qpoch(s * s, q, nk) / qpoch(q, q, nk);
    }
    out *= qpoch(q, q, big_n) * qpoch(s * u, q, big_n + n0) * qpoch(q, q, n);
    for i in 0..big_n {
        let x = u * q.powi(i as i32);
        let d = 1.0 - s * x;
        if d == 0.0 {
            return Err(Error::Singular(format!("1 − s q^{i} u = 0")));
        }
        let e = nu.parts().get(i).copied().unwrap_or(0);
        out *= ((x - s) / d).powi(e as i32) / d;
    }
    out /= qpoch(q, q, big_n + n0 - n) * qpoch(s * u, q, n) * qpoch(q, q, n0) * qpoch(s / u, 1.0 / q, n - n0);
    Ok(out)
}

/// `G^c_ν(v, qv, …, q^{J−1}v)` at `s = q^{-1/2}` for `ν ∈ Sign⁺_N`, `J ≥ N`.
pub fn g_principal(nu: &Signature, v: f64, j: usize, q: f64) -> Result<f64> {
    let n = nu.len();
    if j < n {
        return Err(Error::Range(format!("J = {j} < N = {n}")));
    }
    let parts = nu.parts();
    if parts.windows(2).any(|w| w[0] == w[1] && w[0] > 0) {
        return Ok(0.0);
    }
    let s = q.powf(-0.5);
    let n0 = nu.multiplicity(0);
    let p = n - n0;
    let mut out = qpoch(q, q, n) * (-q).powi(n0 as i32 - n as i32) / qpoch(q, q, n0);
    out *= qpoch(s * v, q, p) / qpoch(s * v, q, n);
    out /= qpoch(s / v, 1.0 / q, p);
    out *= qpoch(q.powi((j - n + n0 + 1) as i32), q, p);
    out *= qpoch(s * v * q.powi(j as i32), q, n0);
    for (i, &e) in parts.iter().take(p).enumerate() {
        let x = v * q.powi(i as i32);
        let d = 1.0 - s * x;
        out *= ((x - s) / d).powi(e as i32) / d;
    }
    Ok(out)
}

/// Strict positive signatures of length `n` bounded componentwise by `cap`.
fn strict_positive_below(cap: &Signature) -> Vec<Signature> {
    let c = cap.parts();
    let n = c.len();
    let mut out = Vec::new();
    fn rec(i: usize, c: &[i64], n: usize, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == n {
            out.push(Signature::new(cur.clone()).expect("decreasing"));
            return;
        }
        let mut hi = c[i];
        if let Some(&prev) = cur.last() {
            hi = hi.min(prev - 1);
        }
        let lo = (n - i) as i64;
        for x in lo..=hi {
            cur.push(x);
            rec(i + 1, c, n, cur, out);
            cur.pop();
        }
    }
    rec(0, c, n, &mut Vec::new(), &mut out);
    out
}

/// Boundary function `f(λ; v, ρ) = (−1)^N (q;q)_N Σ_ν ∏(−s)^{ν_j} G^c_{λ/ν}(v)`,
/// the sum over strict positive `ν`. Finite, since `G^c_{λ/ν} = 0` unless `ν ≤ λ`.
pub fn boundary_f(lambda: &Signature, q: f64, v: &[f64]) -> f64 {
    let n = lambda.len();
    if !lambda.is_strict() || lambda.parts().last().is_some_and(|&x| x <= 0) {
        return 0.0;
    }
    let sp = Spin::six_vertex(q);
    let s = sp.s;
    let start: HashMap<Signature, f64> = strict_positive_below(lambda)
        .into_iter()
        .map(|nu| {
            let total: i64 = nu.parts().iter().sum();
            let w = (-s).powi(total as i32);
            (nu, w)
        })
        .collect();
    let end = g_transfer(start, lambda, v, sp);
    let sum = end.get(lambda).copied().unwrap_or(0.0);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * qpoch(q, q, n) * sum
}

/// `Z^f` restricted to the first `m` rows.
pub fn partition_z_rows(p: &ModelParams, m: usize) -> f64 {
    let (q, s) = (p.q(), p.s());
    let mut out = qpoch(q, q, m);
    for &ui in &p.u()[..m] {
        out *= (1.0 - ui / s) / (1.0 - s * ui);
        for &vj in p.v() {
            out *= (1.0 - q * ui * vj) / (1.0 - ui * vj);
        }
    }
    out
}

/// Partition function `Z^f(u, v) = (q;q)_N ∏_i [(1 − u_i/s)/(1 − s u_i) ∏_j (1 − q u_i v_j)/(1 − u_i v_j)]`.
pub fn partition_z(p: &ModelParams) -> f64 {
    partition_z_rows(p, p.n())
}

/// `Z^g(u, v) = ∏_{i,j} (1 − q u_i v_j)/(1 − u_i v_j)`.
pub fn partition_zg(q: f64, u: &[f64], v: &[f64]) -> f64 {
    let mut out = 1.0;
    for &ui in u {
        for &vj in v {
            out *= (1.0 - q * ui * vj) / (1.0 - ui * vj);
        }
    }
    out
}

/// `ℙ_{u,v}(λ^{m_i} = μ^{m_i} for all i)`.
pub fn measure_prob(mus: &[(usize, Signature)], p: &ModelParams) -> Result<f64> {
    if mus.is_empty() {
        return Ok(1.0);
    }
    let mut prev_level = 0;
    for (m, mu) in mus {
        if *m <= prev_level || *m > p.n() || mu.len() != *m {
            return Err(Error::Range(format!("bad level {m} or signature length {}", mu.len())));
        }
        prev_level = *m;
    }
    if mus.iter().any(|(_, mu)| !mu.is_strict() || !mu.is_nonneg()) {
        return Ok(0.0);
    }
    let sp = p.spin();
    let mut prob = 1.0;
    let mut below = Signature::empty();
    let mut start = 0;
    for (m, mu) in mus {
        prob *= skew_f(mu, &below, &p.u()[start..*m], sp);
        if prob == 0.0 {
            return Ok(0.0);
        }
        below = mu.clone();
        start = *m;
    }
    let top = prev_level;
    Ok(prob * boundary_f(&below, p.q(), p.v()) / partition_z_rows(p, top))
}

/// Truncated Cauchy sum `Σ_{ν_1 ≤ L} F_ν(u) G^c_ν(v)` over `ν ∈ Sign⁺_N`, with
/// an analytic bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    pub value: f64,
    pub tail_bound: f64,
}

/// Cap on parts and the admissibility ratio governing the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_part: i64,
    pub tail_ratio: f64,
}

impl TruncationPolicy {
    /// `max |(u−s)/(1−su) · (v−s)/(1−sv)|` over the given variables.
    pub fn for_params(max_part: i64, u: &[f64], v: &[f64], s: f64) -> Result<Self> {
        let mut r: f64 = 0.0;
        for &x in u {
            for &y in v {
                r = r.max((ratio(x, s) * ratio(y, s)).abs());
            }
        }
        if r >= 1.0 {
            return Err(Error::Params(format!("not admissible: ratio {r} ≥ 1")));
        }
        Ok(TruncationPolicy { max_part, tail_ratio: r })
    }
}

fn signatures_bounded(n: usize, max_part: i64) -> Vec<Signature> {
    let mut out = Vec::new();
    fn rec(i: usize, n: usize, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if i == n {
            out.push(Signature::new(cur.clone()).expect("decreasing"));
            return;
        }
        for x in 0..=hi {
            cur.push(x);
            rec(i + 1, n, x, cur, out);
            cur.pop();
        }
    }
    rec(0, n, max_part, &mut Vec::new(), &mut out);
    out
}

pub fn cauchy_lhs(u: &[f64], v: &[f64], sp: Spin, policy: TruncationPolicy) -> Result<TruncatedSum> {
    let n = u.len();
    let r = policy.tail_ratio;
    let mut value = 0.0;
    // largest |term| / r^{ν_1} seen, used as the constant of the geometric tail
    let mut c: f64 = 0.0;
    for nu in signatures_bounded(n, policy.max_part) {
        let t = f_sym(&nu, u, sp)? * g_sym(&nu, v, sp)?;
        value += t;
        let top = nu.parts().first().copied().unwrap_or(0);
        if top > 0 {
            c = c.max(t.abs() / r.powi(top as i32));
        }
    }
    // number of ν with ν_1 = m is at most (m+1)^{N−1}
    let mut tail = 0.0;
    let mut m = policy.max_part + 1;
    loop {
        let term = c * ((m + 1) as f64).powi(n as i32 - 1) * r.powi(m as i32);
        tail += term;
        if term < 1e-3 * tail * (1.0 - r) || term < 1e-300 {
            tail /= 1.0 - r;
            break;
        }
        m += 1;
    }
    Ok(TruncatedSum { value, tail_bound: tail })
}

/// `(q;q)_N ∏_i 1/(1 − s u_i) ∏_{i,j} (1 − q u_i v_j)/(1 − u_i v_j)`.
pub fn cauchy_rhs(u: &[f64], v: &[f64], sp: Spin) -> f64 {
    let mut out = qpoch(sp.q, sp.q, u.len());
    for &x in u {
        out /= 1.0 - sp.s * x;
    }
    out * partition_zg(sp.q, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_force_f, brute_force_g};

    fn sig(p: &[i64]) -> Signature {
        Signature::new(p.to_vec()).unwrap()
    }
    const SP: Spin = Spin { q: 0.5, s: std::f64::consts::SQRT_2 };

    #[test]
    fn f_examples() {
        let v = f_sym(&sig(&[0]), &[2.0], SP).unwrap();
        assert!((v + 0.273459).abs() < 5e-6);
        let a = f_sym(&sig(&[1, 0]), &[2.0, 2.5], SP).unwrap();
        let b = f_sym(&sig(&[1, 0]), &[2.5, 2.0], SP).unwrap();
        let c = brute_force_f(&sig(&[1, 0]), &Signature::empty(), &[2.0, 2.5], SP, 4).unwrap();
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-10);
        assert!(f_sym(&sig(&[1, 0]), &[2.0, 2.0], SP).is_err());
    }

    #[test]
    fn g_examples() {
        let v = g_sym(&sig(&[1]), &[0.25], SP).unwrap();
        assert!((v + 0.29913).abs() < 5e-5);
        assert!(g_sym(&sig(&[2, 2]), &[0.2, 0.3], SP).unwrap().abs() < 1e-14);
        assert_eq!(g_sym(&sig(&[3, 2, 1]), &[0.2, 0.3], SP).unwrap(), 0.0);
        let row = skew_g_row(&sig(&[1]), &sig(&[0]), 0.25, SP);
        assert!((row + 0.29913).abs() < 5e-5);
    }

    #[test]
    fn g_sym_matches_brute_force_with_zeros() {
        let u = [0.2, 0.3, 0.15];
        for nu in [vec![2, 0], vec![3, 1, 0], vec![1, 0, 0], vec![2, 1], vec![0, 0]] {
            let nu = sig(&nu);
            for k in 1..=3 {
                let us = &u[..k];
                let a = g_sym(&nu, us, SP).unwrap();
                let b = brute_force_g(&nu, &Signature::empty(), us, SP, 4).unwrap();
                assert!((a - b).abs() < 1e-10, "ν={nu:?} N={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn geometric_specializations() {
        let v = f_geom(&sig(&[1, 0]), 2.0, SP).unwrap();
        assert!((v - (-0.158635)).abs() < 5e-6);
        let eps: f64 = 1e-4;
        let u = [2.0, 2.0 * 0.5 * (1.0 + eps)];
        let lim = f_sym(&sig(&[1, 0]), &u, SP).unwrap();
        assert!((lim - v).abs() < 1e-4);
        // general s, where repeated parts survive
        let sp = Spin::general(0.4, 1.7);
        for nu in [vec![2, 2], vec![1, 0], vec![3, 1, 1], vec![0, 0]] {
            let nu = sig(&nu);
            for big_n in 1..=3usize {
                let us: Vec<f64> = (0..big_n).map(|i| 0.3 * 0.4f64.powi(i as i32)).collect();
                let a = g_geom(&nu, 0.3, big_n, sp).unwrap();
                let b = brute_force_g(&nu, &Signature::empty(), &us, sp, 4).unwrap();
                assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "ν={nu:?} N={big_n}: {a} vs {b}");
            }
            let us: Vec<f64> = (0..nu.len()).map(|i| 2.1 * 0.4f64.powi(i as i32)).collect();
            let a = f_geom(&nu, 2.1, sp).unwrap();
            let b = brute_force_f(&nu, &Signature::empty(), &us, sp, 4).unwrap();
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "F ν={nu:?}: {a} vs {b}");
        }
    }

    #[test]
    fn principal_specialization() {
        let q: f64 = 0.5;
        for (nu, j) in [(vec![1], 2), (vec![2, 1], 3), (vec![3, 1, 0], 3), (vec![0], 1), (vec![2, 0, 0], 4)] {
            let nu = sig(&nu);
            let v = 0.25;
            let vs: Vec<f64> = (0..j).map(|i| v * q.powi(i as i32)).collect();
            let a = g_principal(&nu, v, j, q).unwrap();
            let b = brute_force_g(&nu, &Signature::empty(), &vs, SP, 4).unwrap();
            assert!((a - b).abs() < 1e-10, "ν={nu:?} J={j}: {a} vs {b}");
        }
        assert_eq!(g_principal(&sig(&[2, 2]), 0.25, 3, q).unwrap(), 0.0);
    }

    #[test]
    fn boundary_examples() {
        let v = boundary_f(&sig(&[1]), 0.5, &[]);
        assert!((v - 0.70711).abs() < 5e-6);
        assert_eq!(boundary_f(&sig(&[0]), 0.5, &[]), 0.0);
        assert_eq!(boundary_f(&sig(&[2, 2]), 0.5, &[0.3]), 0.0);
    }

    #[test]
    fn partition_examples() {
        let p = ModelParams::new(0.5, vec![2.0], vec![]).unwrap();
        assert!((partition_z(&p) - 0.113270).abs() < 5e-6);
        let p = ModelParams::new(0.5, vec![2.0], vec![0.25]).unwrap();
        assert!((partition_z(&p) - 0.169905).abs() < 5e-6);
    }

    #[test]
    fn single_level_law_is_geometric() {
        let p = ModelParams::new(0.5, vec![2.0], vec![]).unwrap();
        let r: f64 = 0.453082;
        let mut total = 0.0;
        for m in 1..60 {
            let pr = measure_prob(&[(1, sig(&[m]))], &p).unwrap();
            assert!((pr - (1.0 - r) * r.powi(m as i32 - 1)).abs() < 1e-6);
            total += pr;
        }
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(measure_prob(&[(1, sig(&[0]))], &p).unwrap(), 0.0);
    }
}
