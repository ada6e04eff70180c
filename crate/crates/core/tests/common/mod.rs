//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use netcast::Graph;

/// Dense transition matrix of the degree-biased walk `p_ij ∝ k_j^alpha`.
pub fn biased_transition_matrix(g: &Graph, alpha: f64) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let k = g.total_degrees();
    let mut p = vec![vec![0.0; n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        let nb = g.neighbors(i);
        let total: f64 = nb.iter().map(|&j| (k[j] as f64).powf(alpha)).sum();
        for &j in nb {
            row[j] = (k[j] as f64).powf(alpha) / total;
        }
    }
    p
}

/// Left eigenvector for eigenvalue 1 by power iteration on the lazy chain
/// `(I + P) / 2`, which has the same stationary vector and is aperiodic.
pub fn power_iteration(p: &[Vec<f64>]) -> Vec<f64> {
    let n = p.len();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..200_000 {
        let mut next: Vec<f64> = pi.iter().map(|x| 0.5 * x).collect();
        for (i, row) in p.iter().enumerate() {
            let w = 0.5 * pi[i];
            for (j, &pij) in row.iter().enumerate() {
                if pij != 0.0 {
                    next[j] += w * pij;
                }
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        let diff = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if diff < 1e-17 {
            break;
        }
    }
    pi
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Minimum expected length of any binary prefix code for `probs`, by
/// exhaustive search over non-decreasing length sequences that satisfy the
/// Kraft inequality. The shortest lengths go to the largest probabilities.
pub fn brute_force_optimal_length(probs: &[f64]) -> f64 {
    let n = probs.len();
    if n == 1 {
        return 1.0;
    }
    let mut sorted = probs.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut best = f64::INFINITY;
    let mut lens = Vec::with_capacity(n);
    search(&sorted, &mut lens, 1, 0.0, &mut best);
    best
}

fn search(probs: &[f64], lens: &mut Vec<u32>, min_len: u32, kraft: f64, best: &mut f64) {
    let n = probs.len();
    if lens.len() == n {
        let cost: f64 = probs
            .iter()
            .zip(lens.iter())
            .map(|(p, &l)| p * l as f64)
            .sum();
        if cost < *best {
            *best = cost;
        }
        return;
    }
    let max_len = n as u32 - 1;
    for l in min_len..=max_len {
        // Room must remain for the other symbols at the longest useful length.
        let rest = (n - lens.len() - 1) as f64 * 0.5f64.powi(max_len as i32);
        if kraft + 0.5f64.powi(l as i32) + rest > 1.0 + 1e-12 {
            continue;
        }
        lens.push(l);
        search(probs, lens, l, kraft + 0.5f64.powi(l as i32), best);
        lens.pop();
    }
}

/// Symbol counts of a sequence over `n` symbols.
pub fn visit_counts(seq: &[usize], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    for &s in seq {
        c[s] += 1.0;
    }
    c
}

/// Stationary vector of a sparse chain given as per-node `(target, prob)`
/// rows, by power iteration on the lazy chain.
pub fn sparse_stationary(rows: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let n = rows.len();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..1_000_000 {
        let mut next: Vec<f64> = pi.iter().map(|x| 0.5 * x).collect();
        for (i, row) in rows.iter().enumerate() {
            for &(j, p) in row {
                next[j] += 0.5 * pi[i] * p;
            }
        }
        let diff = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if diff < 1e-15 {
            break;
        }
    }
    pi
}

/// Time at which a degree-biased walk on a directed graph is expected to
/// have traversed `ceil(0.9 E)` distinct arcs, treating each arc as an
/// independent Poisson clock with its stationary traversal rate.
pub fn coupon_collector_t90(g: &Graph, alpha: f64) -> f64 {
    let k = g.total_degrees();
    let rows: Vec<Vec<(usize, f64)>> = (0..g.node_count())
        .map(|i| {
            let nb = g.neighbors(i);
            let total: f64 = nb.iter().map(|&j| (k[j] as f64).powf(alpha)).sum();
            nb.iter()
                .map(|&j| (j, (k[j] as f64).powf(alpha) / total))
                .collect()
        })
        .collect();
    let pi = sparse_stationary(&rows);
    let rates: Vec<f64> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().map(|&(_, p)| pi[i] * p).collect::<Vec<_>>())
        .collect();
    let need = (9 * g.edge_count()).div_ceil(10) as f64;
    let covered = |t: f64| rates.iter().map(|r| 1.0 - (-r * t).exp()).sum::<f64>();
    let (mut lo, mut hi) = (0.0, 1.0);
    while covered(hi) < need {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if covered(mid) < need {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
