//! Exact sampling of path collections.
//!
//! A sample is built by first drawing the `v = ∅` collection from the
//! stochastic six-vertex dynamics and then absorbing each `v_m` by a sweep of
//! row updates `λ^k ↦ ν` drawn with weight `F_{ν/μ}(u_k) G^c_{ν/λ}(v_m)`, where
//! `μ` is the already-updated row `k−1`.
//!
//! A row update is a walk over columns with state `(h, g) ∈ {0,1}²`: `h` is the
//! horizontal occupancy of the `F` row, `g` that of the `G^c` row. Two exact
//! samplers are provided: [`row_sampler`] filters backwards over the columns
//! holding parts of `λ` or `μ` and then samples forwards, handling the empty
//! columns in between in closed form; [`row_sampler_recursive`] splits the
//! parts at the middle and conditions on the middle part, using
//! [`interval_weight`] for the two halves.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::{ModelParams, Spin};
use crate::signature::{PathCollection, Signature};
use crate::symm::{skew_f_row, skew_g_row};
use crate::weights::{conj_vertex_weight, vertex_weight, ArrowConfig};

/// Slack allowed on normalized probabilities before they are clamped.
const PROB_SLACK: f64 = 1e-12;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// ChaCha8 stream keyed by the seed, with the stream id derived from
/// `(sample, sweep, row)`, so every row update owns an independent stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { rng }
    }

    pub fn for_row(seed: u64, sample: u64, sweep: u64, row: u64) -> Self {
        let id = splitmix(splitmix(splitmix(sample) ^ sweep.wrapping_mul(0x6a09_e667)) ^ row);
        Self::new(seed, id)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Number of failures before the first success, `ℙ(j) = (1 − r) r^j`.
    pub fn geometric(&mut self, r: f64) -> i64 {
        if r <= 0.0 {
            return 0;
        }
        let u = 1.0 - self.uniform();
        (u.ln() / r.ln()).floor() as i64
    }

    /// `ℙ(j) ∝ r^j` on `0 ≤ j < n`.
    pub fn truncated_geometric(&mut self, r: f64, n: i64) -> i64 {
        debug_assert!(n >= 1);
        if r <= 0.0 || n == 1 {
            return 0;
        }
        let u = self.uniform();
        let j = ((1.0 - u * (1.0 - r.powi(n as i32))).ln() / r.ln()).floor() as i64;
        j.clamp(0, n - 1)
    }

    /// Index drawn with probability proportional to `w`, after checking that
    /// the normalized weights are probabilities up to [`PROB_SLACK`].
    pub fn choose(&mut self, w: &[f64]) -> Result<usize> {
        let total: f64 = w.iter().sum();
        if !(total.is_finite() && total != 0.0) {
            return Err(Error::Inconsistent(format!("weights {w:?} have no mass")));
        }
        let mut acc = 0.0;
        let u = self.uniform();
        let mut last = None;
        for (i, &x) in w.iter().enumerate() {
            let p = x / total;
            if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) {
                return Err(Error::Inconsistent(format!("probability {p} from weights {w:?}")));
            }
            let p = p.clamp(0.0, 1.0);
            if p > 0.0 {
                last = Some(i);
            }
            acc += p;
            if u < acc {
                return Ok(i);
            }
        }
        last.ok_or_else(|| Error::Inconsistent("all probabilities vanish".into()))
    }

    /// Two-way [`RngStream::choose`]; `true` selects `w1`.
    pub fn choose2(&mut self, w0: f64, w1: f64) -> Result<bool> {
        let total = w0 + w1;
        let (a0, a1, t) = if total > 0.0 { (w0, w1, total) } else { (-w0, -w1, -total) };
        if !(t > 0.0 && t < f64::INFINITY && a0 >= -PROB_SLACK * t && a1 >= -PROB_SLACK * t) {
            return Err(Error::Inconsistent(format!("weights [{w0}, {w1}] are not a distribution")));
        }
        Ok(self.uniform() * t < a1)
    }

    pub fn inner(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Identifies one sample: streams for its rows are derived from this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleKey {
    pub seed: u64,
    pub sample: u64,
}

impl SampleKey {
    pub fn stream(&self, sweep: u64, row: u64) -> RngStream {
        RngStream::for_row(self.seed, self.sample, sweep, row)
    }
}

/// Stochastic six-vertex probabilities `(b1, b2)` at spectral parameter `u`:
/// `b1 = (1 − u√q)/(1 − u/√q)` to continue upwards, `b2 = (q^{-1} − u/√q)/(1 − u/√q)`
/// to continue to the right.
pub fn step_probs(u: f64, q: f64) -> Result<(f64, f64)> {
    let r = q.sqrt();
    let d = 1.0 - u / r;
    let b1 = (1.0 - u * r) / d;
    let b2 = (1.0 / q - u / r) / d;
    for b in [b1, b2] {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::Params(format!("step probability {b} at u = {u}, q = {q}")));
        }
    }
    Ok((b1, b2))
}

/// One row of the stochastic six-vertex dynamics: a path enters at column 1
/// from the left and `below` (increasing, positive) lists the paths entering
/// from below. Returns the increasing list of columns where paths exit upwards.
fn zero_row(below: &[i64], b1: f64, b2: f64, rng: &mut RngStream) -> Vec<i64> {
    let mut out = Vec::with_capacity(below.len() + 1);
    let mut x = 1;
    let mut carrying = true;
    let mut idx = 0;
    loop {
        if carrying {
            let next = below.get(idx).copied();
            let steps = rng.geometric(b2);
            match next {
                Some(b) if x + steps >= b => {
                    out.push(b);
                    idx += 1;
                    x = b + 1;
                }
                _ => {
                    out.push(x + steps);
                    x += steps + 1;
                    carrying = false;
                }
            }
        } else {
            let Some(&b) = below.get(idx) else { break };
            idx += 1;
            x = b + 1;
            if rng.bernoulli(b1) {
                out.push(b);
            } else {
                carrying = true;
            }
        }
    }
    out
}

/// The `v = ∅` path collection: stochastic six-vertex dynamics row by row,
/// one path entering each row at the left boundary.
///
/// Rows are processed bottom to top and each row left to right; every vertex
/// choice depends only on its incoming arrows, so this has the same law as
/// the diagonal-by-diagonal order.
pub fn zero_sampler(p: &ModelParams, key: SampleKey) -> Result<PathCollection> {
    let mut rows = Vec::with_capacity(p.n());
    let mut below: Vec<i64> = Vec::new();
    for (y, &u) in p.u().iter().enumerate() {
        let (b1, b2) = step_probs(u, p.q())?;
        let mut rng = key.stream(0, y as u64 + 1);
        let cur = zero_row(&below, b1, b2, &mut rng);
        rows.push(Signature::from_increasing(&cur)?);
        below = cur;
    }
    let w = PathCollection::new(rows)?;
    Ok(w)
}

/// States of the column walk, indexed `2h + g`.
const S00: usize = 0;
const S01: usize = 1;
const S10: usize = 2;
const S11: usize = 3;

fn state(h: i64, g: i64) -> Option<usize> {
    ((0..=1).contains(&h) && (0..=1).contains(&g)).then_some((2 * h + g) as usize)
}

/// Column weights of one row update at fixed `(u, v)`.
#[derive(Debug, Clone)]
pub struct ColumnModel {
    /// `step[iF][iG][state][i2]`: weight and next state of a column holding
    /// `iF` parts of `μ`, `iG` parts of `λ` and `i2` parts of `ν`.
    step: [[[[Option<(f64, usize)>; 2]; 4]; 2]; 2],
    /// Empty column in state `(1,1)` staying there.
    pub p: f64,
    /// Empty column in state `(1,1)` emitting a part of `ν`.
    pub e: f64,
    /// Empty column in state `(1,0)`.
    pub a: f64,
    /// Empty column in state `(0,1)`.
    pub b: f64,
    /// `[p^n, a^n, b^n, Σ_{j<n} p^j]` for small `n`.
    powers: Vec<[f64; 4]>,
    /// `transfer[iF][iG][state][next]`: column weight summed over `ν`.
    transfer: [[[[f64; 4]; 4]; 2]; 2],
}

const POWER_CACHE: usize = 2048;

impl ColumnModel {
    pub fn new(u: f64, v: f64, sp: Spin) -> Self {
        let mut step = [[[[None; 2]; 4]; 2]; 2];
        for (i_f, by_g) in step.iter_mut().enumerate() {
            for (i_g, by_s) in by_g.iter_mut().enumerate() {
                for (st, by_i2) in by_s.iter_mut().enumerate() {
                    let (h, g) = ((st / 2) as i64, (st % 2) as i64);
                    for (i2, slot) in by_i2.iter_mut().enumerate() {
                        let (h2, g2) = (h + i_f as i64 - i2 as i64, g + i_g as i64 - i2 as i64);
                        if let Some(next) = state(h2, g2) {
                            let wf = vertex_weight(
                                ArrowConfig { i1: i_f as u32, j1: h as u8, i2: i2 as u32, j2: h2 as u8 },
                                u,
                                sp,
                            );
                            let wg = conj_vertex_weight(
                                ArrowConfig { i1: i_g as u32, j1: g as u8, i2: i2 as u32, j2: g2 as u8 },
                                v,
                                sp,
                            );
                            *slot = Some((wf * wg, next));
                        }
                    }
                }
            }
        }
        let w = |st: usize, i2: usize| step[0][0][st][i2].map_or(0.0, |x| x.0);
        let (p, e, a, b) = (w(S11, 0), w(S11, 1), w(S10, 0), w(S01, 0));
        let mut powers = Vec::with_capacity(POWER_CACHE);
        let mut cur = [1.0, 1.0, 1.0, 0.0];
        for _ in 0..POWER_CACHE {
            powers.push(cur);
            cur = [cur[0] * p, cur[1] * a, cur[2] * b, cur[3] + cur[0]];
        }
        let mut transfer = [[[[0.0; 4]; 4]; 2]; 2];
        for (i_f, t) in transfer.iter_mut().enumerate() {
            for (i_g, t) in t.iter_mut().enumerate() {
                for (st, row) in t.iter_mut().enumerate() {
                    for i2 in 0..2 {
                        if let Some((w, s2)) = step[i_f][i_g][st][i2] {
                            row[s2] += w;
                        }
                    }
                }
            }
        }
        ColumnModel { step, p, e, a, b, powers, transfer }
    }

    /// `[p^n, a^n, b^n, Σ_{j<n} p^j]`.
    fn pow(&self, n: i64) -> [f64; 4] {
        match self.powers.get(n as usize) {
            Some(x) => *x,
            None => {
                let n32 = n as i32;
                [self.p.powi(n32), self.a.powi(n32), self.b.powi(n32), geometric_sum(self.p, n)]
            }
        }
    }

    /// Weight and next state of one column.
    pub fn column(&self, i_f: bool, i_g: bool, st: usize, i2: bool) -> Option<(f64, usize)> {
        self.step[i_f as usize][i_g as usize][st][i2 as usize]
    }

    /// Column holding a part of both `μ` and `λ` crossed without a part of `ν`.
    pub fn shared_crossing(&self) -> f64 {
        self.column(true, true, S00, false).expect("admissible").0
    }

    /// Weight of `n` empty columns holding no part of `ν`.
    pub fn empty_run(&self, st: usize, n: i64) -> f64 {
        let pw = self.pow(n);
        match st {
            S00 => 1.0,
            S01 => pw[2],
            S10 => pw[1],
            _ => pw[0],
        }
    }

    /// Backward value of `n` empty columns: `β_before = T^n β_after`.
    fn gap_back(&self, after: &[f64; 4], n: i64) -> [f64; 4] {
        if n == 0 {
            return *after;
        }
        let [pn, an, bn, sum] = self.pow(n);
        [after[S00], bn * after[S01], an * after[S10], pn * after[S11] + self.e * sum * after[S00]]
    }

    /// Value of the infinite run of empty columns past the last event: the
    /// walk must end in `(0,0)`.
    fn tail(&self) -> [f64; 4] {
        [1.0, 0.0, 0.0, self.e / (1.0 - self.p)]
    }
}

/// `Σ_{j<n} r^j`.
fn geometric_sum(r: f64, n: i64) -> f64 {
    if n <= 0 {
        0.0
    } else if (1.0 - r).abs() < 1e-15 {
        n as f64
    } else {
        (1.0 - r.powi(n as i32)) / (1.0 - r)
    }
}

/// Rescales `b` when its entries drift towards overflow or underflow.
fn normalize(b: [f64; 4]) -> Result<[f64; 4]> {
    let m = b[0].abs().max(b[1].abs()).max(b[2].abs()).max(b[3].abs());
    if (1e-100..=1e100).contains(&m) {
        return Ok(b);
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Inconsistent(format!("row has no admissible completion ({b:?})")));
    }
    let r = 1.0 / m;
    Ok(b.map(|x| x * r))
}

/// Columns holding a part of `μ` or `λ`, increasing, with membership flags.
fn events(lambda: &[i64], mu: &[i64]) -> Vec<(i64, bool, bool)> {
    let mut out = Vec::with_capacity(lambda.len() + mu.len());
    let (mut i, mut j) = (lambda.len(), mu.len());
    while i > 0 || j > 0 {
        let l = if i > 0 { lambda[i - 1] } else { i64::MAX };
        let m = if j > 0 { mu[j - 1] } else { i64::MAX };
        let x = l.min(m);
        let (in_mu, in_lambda) = (m == x, l == x);
        if in_mu {
            j -= 1;
        }
        if in_lambda {
            i -= 1;
        }
        out.push((x, in_mu, in_lambda));
    }
    out
}

fn check_row_inputs(lambda: &Signature, mu: &Signature) -> Result<()> {
    if mu.len() + 1 != lambda.len() {
        return Err(Error::Inconsistent(format!("|μ| = {} but |λ| = {}", mu.len(), lambda.len())));
    }
    if !lambda.is_strict() || !mu.is_strict() || !lambda.is_nonneg() || !mu.is_nonneg() {
        return Err(Error::Inconsistent("row inputs must be strict and nonnegative".into()));
    }
    Ok(())
}

/// Draws `ν` with probability `∝ F_{ν/μ}(u) G^c_{ν/λ}(v)`, where `λ` has `k`
/// parts and `μ` has `k − 1`. Runs in time linear in `k`.
pub fn row_sampler(cm: &ColumnModel, lambda: &Signature, mu: &Signature, rng: &mut RngStream) -> Result<Signature> {
    check_row_inputs(lambda, mu)?;
    let ev = events(lambda.parts(), mu.parts());
    let r = ev.len();
    // Backward values after each event, filled from the last event; entry
    // `r − 1 − i` belongs to event `i`. Rescaled every few events.
    let mut vals: Vec<[f64; 4]> = Vec::with_capacity(r);
    let mut a = cm.tail();
    for i in (0..r).rev() {
        let (col, i_f, i_g) = ev[i];
        vals.push(a);
        let m = &cm.transfer[i_f as usize][i_g as usize];
        let mut b = [0.0; 4];
        for st in 0..4 {
            b[st] = m[st][0] * a[0] + m[st][1] * a[1] + m[st][2] * a[2] + m[st][3] * a[3];
        }
        let gap = if i == 0 { col } else { col - ev[i - 1].0 - 1 };
        a = cm.gap_back(&b, gap);
        if i % 8 == 0 || gap > 32 {
            a = normalize(a)?;
        }
    }
    if a[S10] == 0.0 {
        return Err(Error::Inconsistent("row has no admissible configuration".into()));
    }

    let mut parts = Vec::with_capacity(lambda.len());
    let mut st = S10;
    let mut x = 0;
    for (i, &(col, i_f, i_g)) in ev.iter().enumerate() {
        let after = &vals[r - 1 - i];
        let gap = col - x;
        if st == S11 && gap > 0 {
            let m = &cm.transfer[i_f as usize][i_g as usize];
            let before = |s: usize| m[s][0] * after[0] + m[s][1] * after[1] + m[s][2] * after[2] + m[s][3] * after[3];
            let pw = cm.pow(gap);
            let stay = pw[0] * before(S11);
            let switch = cm.e * pw[3] * before(S00);
            if pick(stay, switch, rng)? {
                parts.push(x + rng.truncated_geometric(cm.p, gap));
                st = S00;
            }
        }
        let (w0, s0) = cm.column(i_f, i_g, st, false).map_or((0.0, 0), |(w, s)| (w * after[s], s));
        let (w1, s1) = cm.column(i_f, i_g, st, true).map_or((0.0, 0), |(w, s)| (w * after[s], s));
        if pick(w0, w1, rng)? {
            parts.push(col);
            st = s1;
        } else {
            st = s0;
        }
        x = col + 1;
    }
    match st {
        S11 => parts.push(x + rng.geometric(cm.p)),
        S00 => {}
        _ => return Err(Error::Inconsistent("row walk ended with an unfinished path".into())),
    }
    parts.reverse();
    let nu = Signature::new(parts)?;
    debug_assert!(nu.len() == lambda.len() && nu.is_strict());
    Ok(nu)
}

/// Two-way draw, `true` with probability `w1/(w0 + w1)`; a forced choice
/// consumes no randomness.
#[inline]
fn pick(w0: f64, w1: f64, rng: &mut RngStream) -> Result<bool> {
    if w0 == 0.0 && w1 != 0.0 {
        return Ok(true);
    }
    if w1 == 0.0 && w0 != 0.0 {
        return Ok(false);
    }
    rng.choose2(w0, w1)
}

/// Exact law of one row update, by enumerating every `ν` with `ν_1 ≤ cap`.
#[derive(Debug, Clone)]
pub struct RowLaw {
    pub probs: Vec<(Signature, f64)>,
    /// Bound on the relative mass with `ν_1 > cap`.
    pub tail_bound: f64,
}

/// Interval `[a_i, b_i]` available to part `i` of `ν` (1-based), with
/// `a_i = max(μ_i, λ_i, 0)` and `b_i = min(μ_{i−1}, λ_{i−1})`; `b_1 = None` is `∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBounds {
    pub c: Vec<i64>,
    pub d: Vec<Option<i64>>,
}

pub fn interval_bounds(lambda: &Signature, mu: &Signature) -> Result<IntervalBounds> {
    check_row_inputs(lambda, mu)?;
    let (l, m) = (lambda.parts(), mu.parts());
    let k = l.len();
    let c = (0..k).map(|i| l[i].max(m.get(i).copied().unwrap_or(0)).max(0)).collect();
    let d = (0..k).map(|i| if i == 0 { None } else { Some(l[i - 1].min(m[i - 1])) }).collect();
    Ok(IntervalBounds { c, d })
}

pub fn exact_row_oracle(
    u: f64,
    v: f64,
    lambda: &Signature,
    mu: &Signature,
    cap: i64,
    sp: Spin,
) -> Result<RowLaw> {
    let bounds = interval_bounds(lambda, mu)?;
    let k = lambda.len();
    let mut weights = Vec::new();
    let mut cur = vec![0i64; k];
    fn rec(
        i: usize,
        b: &IntervalBounds,
        cap: i64,
        cur: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]),
    ) {
        if i == cur.len() {
            f(cur);
            return;
        }
        let lo = b.c[i];
        let mut hi = b.d[i].unwrap_or(cap).min(cap);
        if i > 0 {
            hi = hi.min(cur[i - 1] - 1);
        }
        for x in lo..=hi {
            cur[i] = x;
            rec(i + 1, b, cap, cur, f);
        }
    }
    let mut top_mass = 0.0;
    rec(0, &bounds, cap, &mut cur, &mut |nu: &[i64]| {
        let nu = Signature::new(nu.to_vec()).expect("decreasing");
        let w = skew_f_row(&nu, mu, u, sp) * skew_g_row(&nu, lambda, v, sp);
        if w != 0.0 {
            if nu.parts()[0] == cap {
                top_mass += w.abs();
            }
            weights.push((nu, w));
        }
    });
    let total: f64 = weights.iter().map(|x| x.1).sum();
    if total == 0.0 {
        return Err(Error::Inconsistent("no admissible ν within the cap".into()));
    }
    let cm = ColumnModel::new(u, v, sp);
    let r = cm.p.abs();
    let tail_bound = top_mass * r / (1.0 - r) / total.abs();
    let probs = weights.into_iter().map(|(nu, w)| (nu, w / total)).collect();
    Ok(RowLaw { probs, tail_bound })
}

/// Which interval ends coincide with parts of `λ` and `μ`:
/// `ll: c = λ_l`, `rl: d = λ_{l−1}`, `lm: c = μ_l`, `rm: d = μ_{l−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EndFlags {
    pub ll: bool,
    pub rl: bool,
    pub lm: bool,
    pub rm: bool,
}

/// Weight of the columns owned by one part of `ν` placed at `t ∈ [c, d]`.
///
/// The walk enters column `c` in state `(¬lm, ¬ll)`. A column shared with the
/// neighbouring part (both flags set at that end) is always counted by the
/// lower part as an empty crossing: for `t > c` with `ll ∧ lm` the walk starts
/// at `c + 1` in state `(1,1)`, and for `t = c` the crossing counted below is
/// divided out. For an infinite interval, columns past `t` must be empty.
pub fn local_weight(cm: &ColumnModel, c: i64, d: Option<i64>, f: EndFlags, t: i64) -> f64 {
    if t < c || d.is_some_and(|d| t > d) {
        return 0.0;
    }
    let (start, mut st) = if f.ll && f.lm && t > c {
        (c + 1, S11)
    } else {
        (c, 2 * (!f.lm as usize) + (!f.ll as usize))
    };
    let end = d.unwrap_or(t);
    let mut w = 1.0;
    let mut x = start;
    // Columns of interest: start, t, end; runs in between are empty.
    let mut marks = vec![start, t, end];
    marks.sort_unstable();
    marks.dedup();
    for &m in &marks {
        if m < x {
            continue;
        }
        w *= cm.empty_run(st, m - x);
        let i_f = (m == c && f.lm) || (Some(m) == d && f.rm);
        let i_g = (m == c && f.ll) || (Some(m) == d && f.rl);
        match cm.column(i_f, i_g, st, m == t) {
            Some((wt, s2)) => {
                w *= wt;
                st = s2;
            }
            None => return 0.0,
        }
        x = m + 1;
    }
    if d.is_none() && st != S00 {
        return 0.0;
    }
    if f.ll && f.lm && t == c {
        w /= cm.shared_crossing();
    }
    w
}

/// `local_weight` as a function of `t`: values at `c`, `c+1` and `d`, and the
/// ratio `p` between consecutive interior positions.
#[derive(Debug, Clone, Copy)]
struct PartLaw {
    c: i64,
    d: Option<i64>,
    at_c: f64,
    first_interior: f64,
    at_d: f64,
    p: f64,
}

impl PartLaw {
    fn new(cm: &ColumnModel, c: i64, d: Option<i64>, f: EndFlags) -> Self {
        let interior = d.is_none_or(|d| d > c + 1);
        let at_d = match d {
            Some(d) if d > c => local_weight(cm, c, Some(d), f, d),
            _ => 0.0,
        };
        PartLaw {
            c,
            d,
            at_c: local_weight(cm, c, d, f, c),
            first_interior: if interior { local_weight(cm, c, d, f, c + 1) } else { 0.0 },
            at_d,
            p: cm.p,
        }
    }

    /// `Σ_{c<t<d} local(t)`.
    fn interior_sum(&self) -> f64 {
        match self.d {
            None => self.first_interior / (1.0 - self.p),
            Some(d) => self.first_interior * geometric_sum(self.p, d - self.c - 1),
        }
    }
}

fn end_flags(lambda: &[i64], mu: &[i64], l: usize, c: i64, d: Option<i64>) -> EndFlags {
    let at = |v: &[i64], i: usize| v.get(i).copied();
    EndFlags {
        ll: at(lambda, l) == Some(c),
        lm: at(mu, l) == Some(c),
        rl: l > 0 && d.is_some() && at(lambda, l - 1) == d,
        rm: l > 0 && d.is_some() && at(mu, l - 1) == d,
    }
}

/// Weights of the neighbouring blocks: `wl2` applies when the part sits at
/// `c`, `wr2` when it sits at `d`, the `1` variants otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbours {
    pub wl1: f64,
    pub wl2: f64,
    pub wr1: f64,
    pub wr2: f64,
}

impl Neighbours {
    pub const NONE: Neighbours = Neighbours { wl1: 1.0, wl2: 1.0, wr1: 1.0, wr2: 1.0 };
}

/// Total weight `Σ_t local(t) · wL(t) · wR(t)` of one part over `[c, d]`.
pub fn part_sum(cm: &ColumnModel, c: i64, d: Option<i64>, f: EndFlags, nb: Neighbours) -> f64 {
    let law = PartLaw::new(cm, c, d, f);
    let at_c = law.at_c * nb.wl2 * if d == Some(c) { nb.wr2 } else { nb.wr1 };
    let at_d = match d {
        Some(d) if d > c => law.at_d * nb.wl1 * nb.wr2,
        _ => 0.0,
    };
    at_c + at_d + law.interior_sum() * nb.wl1 * nb.wr1
}

/// Closed form of [`part_sum`] when `c = λ_l`, `d = μ_{l−1}` and no other end
/// coincidence occurs, written out term by term.
#[allow(clippy::too_many_arguments)]
pub fn base_weight(u: f64, v: f64, c: i64, d: i64, wl1: f64, wl2: f64, wr1: f64, wr2: f64, sp: Spin) -> f64 {
    let w = |i1, j1, i2, j2| vertex_weight(ArrowConfig { i1, j1, i2, j2 }, u, sp);
    let wc = |i1, j1, i2, j2| conj_vertex_weight(ArrowConfig { i1, j1, i2, j2 }, v, sp);
    let n = d - c;
    if n == 0 {
        return w(1, 1, 1, 1) * wc(1, 0, 1, 0) * wl2 * wr2;
    }
    let p = w(0, 1, 0, 1) * wc(0, 1, 0, 1);
    let first = w(0, 1, 1, 0) * w(1, 0, 0, 1) * wc(1, 0, 1, 0) * wl2 * wr1;
    let last = w(0, 1, 0, 1) * w(1, 1, 1, 1) * wc(1, 0, 0, 1) * wc(0, 1, 1, 0) * p.powi(n as i32 - 1) * wl1 * wr2;
    if n == 1 {
        return first + last;
    }
    let middle = w(0, 1, 1, 0) * w(1, 0, 0, 1) * w(0, 1, 0, 1) * wc(1, 0, 0, 1) * wc(0, 1, 1, 0)
        * geometric_sum(p, n - 1)
        * wl1
        * wr1;
    first + last + middle
}

/// Draws the position of one part in `[c, d]` with probability
/// `∝ local(t) · wL(t) · wR(t)`.
pub fn arrow_sampler(
    cm: &ColumnModel,
    c: i64,
    d: Option<i64>,
    f: EndFlags,
    nb: Neighbours,
    rng: &mut RngStream,
) -> Result<i64> {
    let law = PartLaw::new(cm, c, d, f);
    if d == Some(c) {
        return Ok(c);
    }
    let at_c = law.at_c * nb.wl2 * nb.wr1;
    let at_d = d.map_or(0.0, |_| law.at_d * nb.wl1 * nb.wr2);
    let interior = law.interior_sum() * nb.wl1 * nb.wr1;
    match rng.choose(&[at_c, interior, at_d])? {
        0 => Ok(c),
        2 => Ok(d.expect("finite")),
        _ => Ok(c + 1
            + match d {
                None => rng.geometric(cm.p),
                Some(d) => rng.truncated_geometric(cm.p, d - c - 1),
            }),
    }
}

/// Weight `Σ ∏_{l∈[x,y]} local_l(ν_l)` of parts `x..=y` (0-based) placed in
/// the intervals `[c_l, d_l]`, computed by conditioning on the middle part.
/// A part sitting on a column shared with a neighbour removes that column
/// from the neighbour's interval.
pub fn interval_weight(
    cm: &ColumnModel,
    b: &IntervalBounds,
    x: usize,
    y: usize,
    lambda: &Signature,
    mu: &Signature,
) -> f64 {
    if x > y {
        return 1.0;
    }
    let (l, m) = (lambda.parts(), mu.parts());
    let s = (x + y) / 2;
    let (c, d) = (b.c[s], b.d[s]);
    let right = |adjust: bool| {
        if s == x {
            return 1.0;
        }
        let mut b2 = b.clone();
        if adjust {
            b2.c[s - 1] += 1;
        }
        interval_weight(cm, &b2, x, s - 1, lambda, mu)
    };
    let left = |adjust: bool| {
        if s == y {
            return 1.0;
        }
        let mut b2 = b.clone();
        if adjust {
            b2.d[s + 1] = b2.d[s + 1].map(|v| v - 1);
        }
        interval_weight(cm, &b2, s + 1, y, lambda, mu)
    };
    let shared_right = s > x && d == Some(b.c[s - 1]);
    let shared_left = s < y && b.d[s + 1] == Some(c);
    let wr1 = right(false);
    let wl1 = left(false);
    let nb = Neighbours {
        wl1,
        wl2: if shared_left { cm.shared_crossing() * left(true) } else { wl1 },
        wr1,
        wr2: if shared_right { right(true) } else { wr1 },
    };
    part_sum(cm, c, d, end_flags(l, m, s, c, d), nb)
}

/// Recursive counterpart of [`row_sampler`]: draws the middle part with
/// [`arrow_sampler`], then each half given it.
pub fn row_sampler_recursive(
    cm: &ColumnModel,
    lambda: &Signature,
    mu: &Signature,
    rng: &mut RngStream,
) -> Result<Signature> {
    let b = interval_bounds(lambda, mu)?;
    let mut nu = vec![0i64; lambda.len()];
    sample_block(cm, &b, 0, lambda.len() - 1, lambda, mu, rng, &mut nu)?;
    Signature::new(nu)
}

#[allow(clippy::too_many_arguments)]
fn sample_block(
    cm: &ColumnModel,
    b: &IntervalBounds,
    x: usize,
    y: usize,
    lambda: &Signature,
    mu: &Signature,
    rng: &mut RngStream,
    nu: &mut [i64],
) -> Result<()> {
    let s = (x + y) / 2;
    let (c, d) = (b.c[s], b.d[s]);
    let right_b = |adjust: bool| {
        let mut b2 = b.clone();
        if adjust {
            b2.c[s - 1] += 1;
        }
        b2
    };
    let left_b = |adjust: bool| {
        let mut b2 = b.clone();
        if adjust {
            b2.d[s + 1] = b2.d[s + 1].map(|v| v - 1);
        }
        b2
    };
    let shared_right = s > x && d == Some(b.c[s - 1]);
    let shared_left = s < y && b.d[s + 1] == Some(c);
    let wr = |adj| if s == x { 1.0 } else { interval_weight(cm, &right_b(adj), x, s - 1, lambda, mu) };
    let wl = |adj| if s == y { 1.0 } else { interval_weight(cm, &left_b(adj), s + 1, y, lambda, mu) };
    let (wr1, wl1) = (wr(false), wl(false));
    let nb = Neighbours {
        wl1,
        wl2: if shared_left { cm.shared_crossing() * wl(true) } else { wl1 },
        wr1,
        wr2: if shared_right { wr(true) } else { wr1 },
    };
    let t = arrow_sampler(cm, c, d, end_flags(lambda.parts(), mu.parts(), s, c, d), nb, rng)?;
    nu[s] = t;
    if s > x {
        sample_block(cm, &right_b(shared_right && Some(t) == d), x, s - 1, lambda, mu, rng, nu)?;
    }
    if s < y {
        sample_block(cm, &left_b(shared_left && t == c), s + 1, y, lambda, mu, rng, nu)?;
    }
    Ok(())
}

/// Weight of the columns outside every interval, which does not depend on `ν`.
pub fn gap_weight(cm: &ColumnModel, lambda: &Signature, mu: &Signature) -> f64 {
    let (l, m) = (lambda.parts(), mu.parts());
    let k = l.len();
    let mut w = cm.a.powi(l[k - 1].max(0) as i32);
    for i in 0..k - 1 {
        let gap = (l[i] - m[i]).abs() - 1;
        if gap > 0 {
            w *= if m[i] < l[i] { cm.a } else { cm.b }.powi(gap as i32);
        }
    }
    w
}

/// Draws full path collections: a `v = ∅` sample followed by one sweep of
/// row updates per `v_m`. Column tables are built once per distinct `(u, v)`.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    params: ModelParams,
    u_index: Vec<usize>,
    v_index: Vec<usize>,
    tables: Vec<Vec<ColumnModel>>,
}

fn dedupe(xs: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut vals = Vec::new();
    let idx = xs
        .iter()
        .map(|&x| {
            *seen.entry(x.to_bits()).or_insert_with(|| {
                vals.push(x);
                vals.len() - 1
            })
        })
        .collect();
    (vals, idx)
}

impl ChainSampler {
    pub fn new(params: &ModelParams) -> Result<Self> {
        crate::params::validate_params(params).map_err(|e| Error::Params(e.to_string()))?;
        let sp = params.spin();
        let (us, u_index) = dedupe(params.u());
        let (vs, v_index) = dedupe(params.v());
        let tables = vs.iter().map(|&v| us.iter().map(|&u| ColumnModel::new(u, v, sp)).collect()).collect();
        Ok(ChainSampler { params: params.clone(), u_index, v_index, tables })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn sample(&self, key: SampleKey) -> Result<PathCollection> {
        let w = zero_sampler(&self.params, key)?;
        let mut rows = w.into_rows();
        for (sweep, &vi) in self.v_index.iter().enumerate() {
            let mut below = Signature::empty();
            for (k, row) in rows.iter_mut().enumerate() {
                let cm = &self.tables[vi][self.u_index[k]];
                let mut rng = key.stream(sweep as u64 + 1, k as u64 + 1);
                let nu = row_sampler(cm, row, &below, &mut rng)?;
                *row = nu;
                below = row.clone();
            }
        }
        let out = PathCollection::new(rows)?;
        Ok(out)
    }
}

/// One sample of the path collection under `p`.
pub fn chain_sampler(p: &ModelParams, key: SampleKey) -> Result<PathCollection> {
    ChainSampler::new(p)?.sample(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symm::measure_prob;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn step_probabilities() {
        let (b1, b2) = step_probs(2.0, 0.5).unwrap();
        assert!((b1 - 0.226540).abs() < 1e-6);
        assert!((b2 - 0.453082).abs() < 1e-6);
    }

    #[test]
    fn single_row_law_matches_measure() {
        let p = ModelParams::homogeneous(0.5, 2.0, 0.25, 1, 0).unwrap();
        let exact = measure_prob(&[(1, sig(&[1]))], &p).unwrap();
        assert!((exact - 0.546918).abs() < 1e-6, "{exact}");
    }

    #[test]
    fn streams_are_reproducible() {
        let mut a = RngStream::for_row(7, 1, 2, 3);
        let mut b = RngStream::for_row(7, 1, 2, 3);
        let mut c = RngStream::for_row(7, 1, 2, 4);
        let (x, y, z) = (a.uniform(), b.uniform(), c.uniform());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn base_weight_example() {
        let sp = Spin::six_vertex(0.5);
        let w = base_weight(2.0, 0.25, 3, 3, 1.0, 1.0, 1.0, 1.0, sp);
        assert!((w + 0.900466).abs() < 1e-5, "{w}");
    }

    #[test]
    fn base_weight_is_part_sum_with_matching_ends() {
        let sp = Spin::six_vertex(0.5);
        let cm = ColumnModel::new(2.0, 0.25, sp);
        let f = EndFlags { ll: true, rm: true, ..Default::default() };
        let nb = Neighbours { wl1: 0.7, wl2: 1.3, wr1: -0.4, wr2: 2.1 };
        for n in 0..6 {
            let a = base_weight(2.0, 0.25, 4, 4 + n, nb.wl1, nb.wl2, nb.wr1, nb.wr2, sp);
            let b = part_sum(&cm, 4, Some(4 + n), f, nb);
            assert!((a - b).abs() < 1e-13, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn local_weight_all_clear_ends() {
        let sp = Spin::six_vertex(0.5);
        let cm = ColumnModel::new(2.0, 0.25, sp);
        let f = EndFlags::default();
        for t in 3..=8 {
            let w = local_weight(&cm, 3, Some(8), f, t);
            let expect = cm.e * cm.p.powi((t - 3) as i32);
            assert!((w - expect).abs() < 1e-14);
        }
    }

    fn small_rows() -> Vec<(Signature, Signature)> {
        vec![
            (sig(&[2]), Signature::empty()),
            (sig(&[3, 1]), sig(&[2])),
            (sig(&[3, 1]), sig(&[1])),
            (sig(&[3, 1]), sig(&[3])),
            (sig(&[4, 2, 1]), sig(&[4, 2])),
            (sig(&[5, 3, 1]), sig(&[3, 1])),
            (sig(&[6, 4, 2, 0]), sig(&[5, 4, 2])),
            (sig(&[7, 5, 4, 1]), sig(&[6, 5, 2])),
            (sig(&[3, 2, 1]), sig(&[2, 1])),
        ]
    }

    #[test]
    fn interval_weight_matches_row_sums() {
        let sp = Spin::six_vertex(0.5);
        for (u, v) in [(2.0, 0.25), (1.6, 0.5)] {
            let cm = ColumnModel::new(u, v, sp);
            for (lambda, mu) in small_rows() {
                let law = exact_row_oracle(u, v, &lambda, &mu, 60, sp).unwrap();
                let mut total = 0.0;
                let b = interval_bounds(&lambda, &mu).unwrap();
                let mut rec = vec![0i64; lambda.len()];
                fn all(i: usize, b: &IntervalBounds, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
                    if i == cur.len() {
                        out.push(cur.clone());
                        return;
                    }
                    let mut hi = b.d[i].unwrap_or(60);
                    if i > 0 {
                        hi = hi.min(cur[i - 1] - 1);
                    }
                    for x in b.c[i]..=hi {
                        cur[i] = x;
                        all(i + 1, b, cur, out);
                    }
                }
                let mut nus = Vec::new();
                all(0, &b, &mut rec, &mut nus);
                for nu in nus {
                    let nu = Signature::new(nu).unwrap();
                    total += skew_f_row(&nu, &mu, u, sp) * skew_g_row(&nu, &lambda, v, sp);
                }
                let w = gap_weight(&cm, &lambda, &mu) * interval_weight(&cm, &b, 0, lambda.len() - 1, &lambda, &mu);
                assert!((w - total).abs() < 1e-12 * (1.0 + total.abs()), "{lambda} {mu}: {w} vs {total}");
                assert!(law.tail_bound < 1e-12);
            }
        }
    }

    fn empirical_matches(sample: impl Fn(&mut RngStream) -> Signature, law: &RowLaw, n: usize, seed: u64) {
        let mut counts: HashMap<Signature, usize> = HashMap::new();
        let mut rng = RngStream::new(seed, 0);
        for _ in 0..n {
            *counts.entry(sample(&mut rng)).or_default() += 1;
        }
        for (nu, p) in &law.probs {
            let f = *counts.get(nu).unwrap_or(&0) as f64 / n as f64;
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((f - p).abs() < 5.0 * sd + 1e-4, "{nu}: {f} vs {p}");
        }
    }

    #[test]
    fn row_samplers_match_exact_law() {
        let sp = Spin::six_vertex(0.5);
        let cm = ColumnModel::new(2.0, 0.25, sp);
        for (i, (lambda, mu)) in small_rows().into_iter().enumerate() {
            let law = exact_row_oracle(2.0, 0.25, &lambda, &mu, 60, sp).unwrap();
            empirical_matches(|r| row_sampler(&cm, &lambda, &mu, r).unwrap(), &law, 40_000, i as u64);
            empirical_matches(|r| row_sampler_recursive(&cm, &lambda, &mu, r).unwrap(), &law, 40_000, 100 + i as u64);
        }
    }

    #[test]
    fn zero_sampler_first_row_is_geometric() {
        let p = ModelParams::homogeneous(0.5, 2.0, 0.25, 1, 0).unwrap();
        let n = 100_000;
        let ones = (0..n)
            .filter(|&i| zero_sampler(&p, SampleKey { seed: 3, sample: i }).unwrap().row(1).parts()[0] == 1)
            .count();
        let f = ones as f64 / n as f64;
        assert!((f - 0.546918).abs() < 0.006, "{f}");
    }

    #[test]
    fn chain_samples_are_valid_and_reproducible() {
        let p = ModelParams::homogeneous(0.5, 2.0, 0.25, 12, 9).unwrap();
        let cs = ChainSampler::new(&p).unwrap();
        let key = SampleKey { seed: 11, sample: 5 };
        let a = cs.sample(key).unwrap();
        let b = cs.sample(key).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 12);
    }
}
