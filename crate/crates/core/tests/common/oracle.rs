//! Brute-force references that share no code with the library.

use std::collections::HashSet;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lattice points of kΔ(λ) in lexicographic order: x ≥ 0 with
/// Σ x_i·(L/λ_i) ≤ k·L.
pub fn points(lambda: &[u64], k: u64) -> Vec<Vec<u64>> {
    let l = lambda
        .iter()
        .fold(1u128, |a, &b| a / gcd(a as u64, b) as u128 * b as u128);
    let w: Vec<u128> = lambda.iter().map(|&x| l / x as u128).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; lambda.len()];
    fn rec(i: usize, rem: u128, w: &[u128], cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == w.len() {
            out.push(cur.clone());
            return;
        }
        let mut x = 0u64;
        while x as u128 * w[i] <= rem {
            cur[i] = x;
            rec(i + 1, rem - x as u128 * w[i], w, cur, out);
            x += 1;
        }
        cur[i] = 0;
    }
    rec(0, k as u128 * l, &w, &mut cur, &mut out);
    out
}

/// First point (lowest height, then lexicographic) of kΔ, 2 ≤ k ≤ max_height,
/// that is not a sum of k lattice points of Δ.
pub fn non_decomposable(lambda: &[u64], max_height: u64) -> Option<(Vec<u64>, u64)> {
    let base = points(lambda, 1);
    let radix = max_height * lambda.iter().max().copied().unwrap_or(1) + 1;
    let key = |p: &[u64]| p.iter().fold(0u128, |a, &x| a * radix as u128 + x as u128);
    let mut prev: HashSet<u128> = base.iter().map(|p| key(p)).collect();
    for k in 2..=max_height {
        let mut cur = HashSet::new();
        for p in points(lambda, k) {
            let ok = base.iter().any(|x| {
                x.iter().zip(&p).all(|(a, b)| a <= b) && {
                    let d: Vec<u64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
                    prev.contains(&key(&d))
                }
            });
            if !ok {
                return Some((p, k));
            }
            cur.insert(key(&p));
        }
        prev = cur;
    }
    None
}

/// Normality by brute force; heights up to n − 1 suffice for an n-simplex.
pub fn is_normal(lambda: &[u64]) -> bool {
    let n = lambda.len() as u64;
    n < 3 || non_decomposable(lambda, n - 1).is_none()
}

pub fn mu_norm(lambda: &[u64]) -> u64 {
    let n = lambda.len() as u64;
    (1..n.saturating_sub(1))
        .rev()
        .find(|&k| !is_normal(&lambda.iter().map(|x| x * k).collect::<Vec<_>>()))
        .map_or(1, |k| k + 1)
}

/// Non-decreasing tuples of length `n` with entries in 1..=max.
pub fn sorted_tuples(n: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u64>| {
                let lo = t.last().copied().unwrap_or(1);
                (lo..=max).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Largest integer that is not a non-negative combination of `gens`
/// (gcd 1), by reachability below a_min·a_max.
pub fn frobenius_brute(gens: &[u64]) -> i64 {
    let a1 = *gens.iter().min().unwrap();
    if a1 == 1 {
        return -1;
    }
    let amax = *gens.iter().max().unwrap();
    // classical bound: F < a_1·a_max
    let limit = (a1 * amax) as usize + 1;
    let mut reach = vec![false; limit + 1];
    reach[0] = true;
    for m in 1..=limit {
        reach[m] = gens.iter().any(|&g| g as usize <= m && reach[m - g as usize]);
    }
    (0..=limit).rev().find(|&m| !reach[m]).map_or(-1, |m| m as i64)
}

/// Whether `p` is a sum of k lattice points of Δ(λ).
pub fn is_sum_of(lambda: &[u64], p: &[u64], k: u64) -> bool {
    if k == 1 {
        return points(lambda, 1).iter().any(|x| x == p);
    }
    let below: HashSet<Vec<u64>> = points(lambda, k - 1).into_iter().collect();
    let decomposable_below = |q: &Vec<u64>| k == 2 || is_sum_of(lambda, q, k - 1);
    points(lambda, 1).iter().any(|x| {
        x.iter().zip(p).all(|(a, b)| a <= b) && {
            let d: Vec<u64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
            below.contains(&d) && decomposable_below(&d)
        }
    })
}
