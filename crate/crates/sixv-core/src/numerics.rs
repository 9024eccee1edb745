//! Small numerical helpers shared across modules.

/// `(a; q)_n = (1 − a)(1 − aq)⋯(1 − aq^{n−1})`.
pub fn qpoch(a: f64, q: f64, n: usize) -> f64 {
    let mut out = 1.0;
    let mut x = a;
    for _ in 0..n {
        out *= 1.0 - x;
        x *= q;
    }
    out
}

/// `Σ_{σ ∈ S_n} sign(σ)^{signed} ∏_{i<j} pair(σ_i, σ_j) ∏_i single(σ_i, i)`,
/// evaluated by dynamic programming over the set of already placed variables
/// in `O(2^n n^2)` instead of `O(n! n^2)`.
pub fn symmetrize<P, S>(n: usize, signed: bool, pair: P, single: S) -> f64
where
    P: Fn(usize, usize) -> f64,
    S: Fn(usize, usize) -> f64,
{
    assert!(n <= 20, "symmetrization over more than 20 variables");
    if n == 0 {
        return 1.0;
    }
    let full = (1usize << n) - 1;
    let mut dp = vec![0.0; 1 << n];
    dp[0] = 1.0;
    for mask in 0..full {
        let cur = dp[mask];
        if cur == 0.0 {
            continue;
        }
        let pos = mask.count_ones() as usize;
        for x in 0..n {
            if mask & (1 << x) != 0 {
                continue;
            }
            let mut f = cur * single(x, pos);
            let mut smaller = 0;
            for y in 0..n {
                if y != x && mask & (1 << y) == 0 {
                    f *= pair(x, y);
                    if y < x {
                        smaller += 1;
                    }
                }
            }
            if signed && smaller % 2 == 1 {
                f = -f;
            }
            dp[mask | (1 << x)] += f;
        }
    }
    dp[full]
}

/// All permutations of `0..n` with their signs (Heap's algorithm). Used by
/// oracles that want the literal sum over `S_n`.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![(p.clone(), 1)];
    let mut c = vec![0usize; n];
    let mut sign = 1;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            sign = -sign;
            out.push((p.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

const GK_X: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for i in 0..7 {
        let x = h * GK_X[i];
        let s = f(c - x) + f(c + x);
        k += GK_WK[i] * s;
        if i % 2 == 1 {
            g += GK_WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) quadrature on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth - 1) + rec(f, m, b, tol / 2.0, depth - 1)
    }
    rec(&f, a, b, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrize_matches_permutation_sum() {
        let n = 5;
        let pair = |x: usize, y: usize| 1.0 + 0.1 * x as f64 - 0.37 * y as f64 + 0.01 * (x * y) as f64;
        let single = |x: usize, i: usize| (0.3 + x as f64).powi(i as i32 + 1);
        for signed in [false, true] {
            let mut brute = 0.0;
            for (p, sg) in permutations(n) {
                let mut t = if signed { sg as f64 } else { 1.0 };
                for i in 0..n {
                    t *= single(p[i], i);
                    for j in i + 1..n {
                        t *= pair(p[i], p[j]);
                    }
                }
                brute += t;
            }
            let dp = symmetrize(n, signed, pair, single);
            assert!((dp - brute).abs() < 1e-9 * brute.abs().max(1.0), "{dp} vs {brute}");
        }
    }

    #[test]
    fn permutation_count_and_signs() {
        let ps = permutations(4);
        assert_eq!(ps.len(), 24);
        assert_eq!(ps.iter().map(|p| p.1).sum::<i32>(), 0);
    }

    #[test]
    fn quadrature_gaussian() {
        let v = integrate(|x| (-x * x / 2.0).exp(), -12.0, 12.0, 1e-13);
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qpoch_small() {
        assert!((qpoch(0.5, 0.5, 2) - 0.375).abs() < 1e-15);
        assert_eq!(qpoch(0.3, 0.2, 0), 1.0);
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
