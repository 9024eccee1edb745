//! Path-enumeration oracles for `F_{λ/μ}` and `G^c_{λ/μ}` with arbitrary
//! vertical multiplicities.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::params::Spin;
use crate::signature::Signature;
use crate::weights::{conj_vertex_weight, vertex_weight, ArrowConfig};

#[derive(Clone, Copy)]
enum Kind {
    F,
    G,
}

fn counts(sig: &Signature, width: usize) -> Vec<u32> {
    let mut c = vec![0; width + 1];
    for &p in sig.parts() {
        c[p as usize] += 1;
    }
    c
}

/// All single-row transitions from `below`, accumulated into `out` with weight `scale · row weight`.
fn row_step(
    below: &[u32],
    entering: u8,
    u: f64,
    sp: Spin,
    kind: Kind,
    scale: f64,
    out: &mut HashMap<Vec<u32>, f64>,
) {
    let width = below.len();
    let mut above = vec![0u32; width];
    fn rec(
        x: usize,
        h: u8,
        w: f64,
        below: &[u32],
        above: &mut Vec<u32>,
        u: f64,
        sp: Spin,
        kind: Kind,
        out: &mut HashMap<Vec<u32>, f64>,
    ) {
        if x == below.len() {
            if h == 0 {
                *out.entry(above.clone()).or_insert(0.0) += w;
            }
            return;
        }
        let total = below[x] + h as u32;
        for j2 in 0..=1u8 {
            if (j2 as u32) > total {
                continue;
            }
            let c = ArrowConfig { i1: below[x], j1: h, i2: total - j2 as u32, j2 };
            let vw = match kind {
                Kind::F => vertex_weight(c, u, sp),
                Kind::G => conj_vertex_weight(c, u, sp),
            };
            if vw == 0.0 {
                continue;
            }
            above[x] = c.i2;
            rec(x + 1, j2, w * vw, below, above, u, sp, kind, out);
        }
        above[x] = 0;
    }
    rec(0, entering, scale, below, &mut above, u, sp, kind, out);
}

fn brute(lambda: &Signature, mu: &Signature, u: &[f64], sp: Spin, box_max: i64, kind: Kind) -> Result<f64> {
    let top = lambda.parts().first().copied().unwrap_or(0).max(mu.parts().first().copied().unwrap_or(0));
    if box_max < top {
        return Err(Error::Truncation(format!("box {box_max} smaller than largest part {top}")));
    }
    if !lambda.is_nonneg() || !mu.is_nonneg() {
        return Err(Error::Range("signatures must be nonnegative".into()));
    }
    let expected = match kind {
        Kind::F => mu.len() + u.len(),
        Kind::G => mu.len(),
    };
    if lambda.len() != expected {
        return Ok(0.0);
    }
    let width = box_max as usize;
    let mut states: HashMap<Vec<u32>, f64> = HashMap::new();
    states.insert(counts(mu, width), 1.0);
    let entering = match kind {
        Kind::F => 1,
        Kind::G => 0,
    };
    for &ui in u {
        let mut next = HashMap::new();
        for (st, w) in &states {
            row_step(st, entering, ui, sp, kind, *w, &mut next);
        }
        states = next;
    }
    Ok(states.get(&counts(lambda, width)).copied().unwrap_or(0.0))
}

/// `F_{λ/μ}(u_1, …, u_n)` by summing over all path collections in `[0, box_max]`.
/// Row `i` (from the bottom) carries `u_i` and one path entering from the left.
pub fn brute_force_f(lambda: &Signature, mu: &Signature, u: &[f64], sp: Spin, box_max: i64) -> Result<f64> {
    brute(lambda, mu, u, sp, box_max, Kind::F)
}

/// `G^c_{λ/μ}(u_1, …, u_n)`; `μ` defaults to `0^{|λ|}` when empty.
pub fn brute_force_g(lambda: &Signature, mu: &Signature, u: &[f64], sp: Spin, box_max: i64) -> Result<f64> {
    let zero;
    let mu = if mu.is_empty() && !lambda.is_empty() {
        zero = Signature::new(vec![0; lambda.len()])?;
        &zero
    } else {
        mu
    };
    brute(lambda, mu, u, sp, box_max, Kind::G)
}
