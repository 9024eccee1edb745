//! Verification suites: each check compares two independently computed
//! quantities and reports `name, lhs, rhs, |diff|, bound, pass`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use sixv_core::asymptotics::{cdf_contour, default_contour, gue_edge_cdf, limit_constants, psi, steepest_g};
use sixv_core::contour::ContourSpec;
use sixv_core::num_complex::Complex64;
use sixv_core::ops::{apply_d, apply_d_chain, contour_d, contour_d_chain, f_eval, ProductFunction};
use sixv_core::sampler::{exact_row_oracle, row_sampler, step_probs, zero_sampler, ColumnModel, RngStream, SampleKey};
use sixv_core::symm::{
    branching_sides, cauchy_lhs, cauchy_rhs, f_sym, measure_prob, ratio, skew_cauchy_sides, skew_f_row,
    TruncationPolicy,
};
use sixv_core::{ModelParams, Signature, Spin};

use crate::{CliError, Result};

pub const VERIFY_HEADER: &str = "# sixv-verify v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Operators,
    SamplerExact,
    Asymptotics,
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "operators" => Ok(Suite::Operators),
            "sampler-exact" => Ok(Suite::SamplerExact),
            "asymptotics" => Ok(Suite::Asymptotics),
            _ => Err(CliError::Usage(format!(
                "unknown suite {s:?}; expected one of identities, operators, sampler-exact, asymptotics"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn close(name: impl Into<String>, lhs: f64, rhs: f64, bound: f64) -> Self {
        let diff = (lhs - rhs).abs();
        Check { name: name.into(), lhs, rhs, diff, bound, pass: diff <= bound }
    }
}

fn sig(p: &[i64]) -> Signature {
    Signature::new(p.to_vec()).expect("valid signature")
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Identities => identities(),
        Suite::Operators => operators(),
        Suite::SamplerExact => sampler_exact(),
        Suite::Asymptotics => asymptotics(),
    }
}

fn identities() -> Result<Vec<Check>> {
    let sp = Spin::six_vertex(0.5);
    let mut out = Vec::new();
    for (u, v) in [(vec![2.0], vec![0.25]), (vec![2.0, 2.3], vec![0.25, 0.3])] {
        let policy = TruncationPolicy::for_params(60, &u, &v, sp.s)?;
        let t = cauchy_lhs(&u, &v, sp, policy)?;
        out.push(Check::close(format!("cauchy N={} K={}", u.len(), v.len()), t.value, cauchy_rhs(&u, &v, sp), t.tail_bound + 1e-12));
    }
    for (lam, u) in [(vec![2, 0], vec![1.7, 2.4]), (vec![3, 1], vec![2.0, 2.6]), (vec![4, 2, 1], vec![1.6, 2.0, 2.7])] {
        let (l, r) = branching_sides(&sig(&lam), &u, sp)?;
        out.push(Check::close(format!("branching {lam:?}"), l, r, 1e-10));
    }
    for (lam, mu, u) in [(vec![2, 0], vec![1], 2.0), (vec![3, 1], vec![2], 1.7), (vec![4, 2, 0], vec![3, 1], 2.4)] {
        let shifted = |p: &[i64]| sig(&p.iter().map(|x| x + 1).collect::<Vec<_>>());
        let l = skew_f_row(&shifted(&lam), &shifted(&mu), u, sp);
        let r = ratio(u, sp.s) * skew_f_row(&sig(&lam), &sig(&mu), u, sp);
        out.push(Check::close(format!("shift {lam:?}/{mu:?}"), l, r, 1e-12));
    }
    for (lam, nu) in [(vec![1], vec![]), (vec![3, 1], vec![2]), (vec![2, 0], vec![1]), (vec![4, 2, 1], vec![3, 1])] {
        let (l, r) = skew_cauchy_sides(&sig(&lam), &sig(&nu), 2.0, 0.25, 80, sp)?;
        out.push(Check::close(format!("skew cauchy {lam:?}/{nu:?}"), l, r, 1e-10));
    }
    Ok(out)
}

fn operators() -> Result<Vec<Check>> {
    let sp = Spin::six_vertex(0.5);
    let mut out = Vec::new();
    let u = [1.7, 2.0, 2.4];
    for lam in [vec![0], vec![2], vec![1, 0], vec![2, 1, 0], vec![3, 1, 0], vec![4, 2, 1]] {
        let lam = sig(&lam);
        let m = lam.len();
        let f = |x: &[f64]| f_eval(&lam, x, sp);
        let base = f_sym(&lam, &u[..m], sp)?;
        for k in 1..=m {
            let p = lam.parts();
            let ind = (0..k).all(|t| p[m - 1 - t] == t as i64);
            let d = apply_d(k, m, &f, &u[..m], sp)?;
            out.push(Check::close(format!("eigenrelation k={k} {lam}"), d, if ind { base } else { 0.0 }, 1e-9));
        }
    }
    let (q, v) = (sp.q, 0.25);
    let g = move |z: Complex64| (1.0 - q * z * v) / (1.0 - z * v);
    let pf = ProductFunction::new(g, vec![1.0 / v, 1.0 / (q * v)]);
    let h = |x: &[f64]| -> sixv_core::Result<f64> { Ok(pf.eval(x)) };
    let grid = [2.0, 2.007, 2.013, 2.02];
    let gamma = ContourSpec::new(2.01, 0.05);
    for k in 1..=3 {
        let c = contour_d(k, &pf, &grid, &gamma, sp)?;
        let d = apply_d(k, 4, &h, &grid, sp)?;
        out.push(Check::close(format!("contour k={k}"), c, d, 1e-8));
    }
    for ms in [vec![2, 4], vec![3, 3, 4]] {
        let c = contour_d_chain(&ms, &pf, &grid, &gamma, sp)?;
        let d = apply_d_chain(&ms, &h, &grid, sp)?;
        out.push(Check::close(format!("contour chain {ms:?}"), c, d, 1e-8));
    }
    Ok(out)
}

/// Chi-square statistic against `probs` with cells of expected count below 5
/// pooled; returns `(statistic, degrees of freedom)`.
fn chi_square<K: std::hash::Hash + Eq>(counts: &HashMap<K, usize>, probs: &[(K, f64)], n: usize) -> (f64, usize) {
    let nf = n as f64;
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut rest_obs, mut rest_exp) = (nf, nf);
    for (key, p) in probs {
        let e = p * nf;
        if e < 5.0 {
            continue;
        }
        let o = *counts.get(key).unwrap_or(&0) as f64;
        stat += (o - e) * (o - e) / e;
        rest_obs -= o;
        rest_exp -= e;
        cells += 1;
    }
    if rest_exp >= 5.0 {
        stat += (rest_obs - rest_exp).powi(2) / rest_exp;
        cells += 1;
    }
    (stat, cells.saturating_sub(1).max(1))
}

fn chi_check(name: String, stat: f64, df: usize) -> Check {
    let crit = ChiSquared::new(df as f64).expect("positive df").inverse_cdf(0.999);
    let dff = df as f64;
    Check { name, lhs: stat, rhs: dff, diff: (stat - dff).abs(), bound: crit - dff, pass: stat <= crit }
}

fn sampler_exact() -> Result<Vec<Check>> {
    let (q, u, v) = (0.5, 2.0, 0.25);
    let sp = Spin::six_vertex(q);
    let cm = ColumnModel::new(u, v, sp);
    let n = 20_000;
    let mut out = Vec::new();
    let rows = [(vec![2], vec![]), (vec![3, 1], vec![2]), (vec![4, 2, 1], vec![4, 2]), (vec![6, 4, 2, 0], vec![5, 4, 2])];
    for (i, (lam, mu)) in rows.iter().enumerate() {
        let (lam, mu) = (sig(lam), sig(mu));
        let law = exact_row_oracle(u, v, &lam, &mu, 80, sp)?;
        let mut rng = RngStream::new(1000 + i as u64, 0);
        let mut counts: HashMap<Signature, usize> = HashMap::new();
        for _ in 0..n {
            *counts.entry(row_sampler(&cm, &lam, &mu, &mut rng)?).or_default() += 1;
        }
        let (stat, df) = chi_square(&counts, &law.probs, n);
        out.push(chi_check(format!("row law {lam}/{mu}"), stat, df));
    }
    let (_, b2) = step_probs(u, q)?;
    let p1 = ModelParams::homogeneous(q, u, v, 1, 0)?;
    let mut hist: HashMap<i64, usize> = HashMap::new();
    for i in 0..n as u64 {
        *hist.entry(zero_sampler(&p1, SampleKey { seed: 2000, sample: i })?.row(1).parts()[0]).or_default() += 1;
    }
    let probs: Vec<(i64, f64)> = (1..=80).map(|x| (x, (1.0 - b2) * b2.powi(x as i32 - 1))).collect();
    let (stat, df) = chi_square(&hist, &probs, n);
    out.push(chi_check("first row geometric".into(), stat, df));
    let exact = measure_prob(&[(1, sig(&[1]))], &p1)?;
    out.push(Check::close("first row P(1)", exact, 1.0 - b2, 1e-12));
    Ok(out)
}

fn asymptotics() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let phi0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    out.push(Check::close("edge cdf (0,0)", gue_edge_cdf(&[0.0, 0.0])?, 0.25 - phi0 * phi0, 1e-9));
    out.push(Check::close("edge cdf (0)", gue_edge_cdf(&[0.0])?, 0.5, 1e-12));
    let p = ModelParams::homogeneous(0.5, 2.0, 0.25, 1, 0)?;
    let c = cdf_contour(&[1], &p, &default_contour(&p))?;
    let m = measure_prob(&[(1, sig(&[1]))], &p)?;
    out.push(Check::close("contour cdf single row", c, m, 1e-10));
    let (q, u, v) = (0.5, 2.0, 0.25);
    let lc = limit_constants(q, u, v)?;
    let s = q.powf(-0.5);
    let at = |x: f64| steepest_g(Complex64::new(x, 0.0), &lc, q, u, v).map(|r| r.0.re);
    let h = 1e-4;
    out.push(Check::close("G(s)", at(s)?, 0.0, 1e-14));
    out.push(Check::close("G'(s)", (at(s + h)? - at(s - h)?) / (2.0 * h), 0.0, 1e-8));
    out.push(Check::close("G''(s)", (at(s + h)? - 2.0 * at(s)? + at(s - h)?) / (h * h), 2.0 * lc.a2, 1e-5));
    for m in [-3, -1, 0, 2] {
        let y = 0.7;
        let fd = (psi(m, y + h)? - psi(m, y - h)?) / (2.0 * h);
        out.push(Check::close(format!("psi derivative m={m}"), fd, psi(m + 1, y)?, 1e-6));
    }
    Ok(out)
}

pub fn verify_csv(suite_name: &str, checks: &[Check]) -> String {
    let mut out = format!("{VERIFY_HEADER}\n# suite={suite_name}\nname,lhs,rhs,diff,bound,pass\n");
    for c in checks {
        writeln!(out, "{},{},{},{},{},{}", c.name.replace(',', ";"), c.lhs, c.rhs, c.diff, c.bound, c.pass).expect("string write");
    }
    out
}
