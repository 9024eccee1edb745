//! Gelfand-Tsetlin pattern counts and volumes. Inputs are in the increasing
//! convention `λ_1 ≤ … ≤ λ_n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// Number of GT patterns with top row `lambda`. With `strict`, rows are
/// strictly increasing and consecutive rows interlace strictly.
pub fn gt_count(lambda: &[i64], strict: bool) -> BigUint {
    let n = lambda.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (j - i) as i64;
            let f = if strict { lambda[j] - lambda[i] - gap } else { lambda[j] - lambda[i] + gap };
            if f <= 0 {
                // non-increasing input, or a strict row too tight to fit any pattern
                return BigUint::zero();
            }
            num *= BigInt::from(f);
            den *= BigInt::from(gap);
        }
    }
    debug_assert!((&num % &den).is_zero());
    (num / den).abs().to_biguint().expect("nonnegative")
}

/// `d_n(λ) = ∏_{i<j, λ_i ≠ λ_j} (λ_j − λ_i)/(j − i)`.
pub fn gt_volume(lambda: &[f64]) -> f64 {
    let n = lambda.len();
    let mut out = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            if lambda[i] != lambda[j] {
                out *= (lambda[j] - lambda[i]) / (j - i) as f64;
            }
        }
    }
    out
}

/// Pattern count by explicit enumeration; the test oracle for [`gt_count`].
pub fn gt_count_brute(lambda: &[i64], strict: bool) -> u64 {
    fn below(top: &[i64], strict: bool, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = cur.len();
        if i + 1 == top.len() {
            out.push(cur.clone());
            return;
        }
        let (lo, hi) = if strict { (top[i] + 1, top[i + 1] - 1) } else { (top[i], top[i + 1]) };
        for x in lo..=hi {
            if strict && cur.last().is_some_and(|&p| p >= x) {
                continue;
            }
            cur.push(x);
            below(top, strict, cur, out);
            cur.pop();
        }
    }
    fn count(top: &[i64], strict: bool) -> u64 {
        if top.len() <= 1 {
            return 1;
        }
        let mut rows = Vec::new();
        below(top, strict, &mut Vec::new(), &mut rows);
        rows.iter().map(|r| count(r, strict)).sum()
    }
    if lambda.windows(2).any(|w| if strict { w[0] >= w[1] } else { w[0] > w[1] }) {
        return 0;
    }
    count(lambda, strict)
}
