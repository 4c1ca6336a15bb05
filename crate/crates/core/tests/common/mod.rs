//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the solver or the estimators it is used to check.

#![allow(dead_code)]

use rand::Rng;
use sideobs::graph::{BinaryDigraph, ObservationGraph};

/// Independence number by listing every independent set (no bounding);
/// a set is independent when no arc joins two of its nodes in either
/// direction.
pub fn brute_independence_number(n: usize, arcs: &[(usize, usize)]) -> usize {
    assert!(n <= 64);
    let mut adj = vec![0u64; n];
    for &(u, v) in arcs {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    fn extend(adj: &[u64], next: usize, chosen: u64, best: &mut usize) {
        *best = (*best).max(chosen.count_ones() as usize);
        for v in next..adj.len() {
            if adj[v] & chosen == 0 {
                extend(adj, v + 1, chosen | 1 << v, best);
            }
        }
    }
    let mut best = 0;
    extend(&adj, 0, 0, &mut best);
    best
}

pub fn random_arcs<R: Rng>(n: usize, density: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random::<f64>() < density {
                arcs.push((u, v));
            }
        }
    }
    arcs
}

pub fn digraph(n: usize, arcs: &[(usize, usize)]) -> BinaryDigraph {
    BinaryDigraph::from_arcs(n, arcs.iter().copied()).unwrap()
}

/// Arcs `(i, j)`, `i != j`, with weight at least `eps`.
pub fn arcs_at(g: &ObservationGraph, eps: f64) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && g.weight(i, j) >= eps {
                arcs.push((i, j));
            }
        }
    }
    arcs
}

/// `min_eps alpha(G(eps)) / eps^2` by brute force. The ratio only changes
/// at weight values, so it is evaluated at every distinct weight in
/// `(0, diag]`, and on a fine grid as a cross-check of that argument.
pub fn brute_alpha_star(g: &ObservationGraph) -> (f64, f64) {
    let n = g.n();
    let diag = g.weight(0, 0);
    let mut eps: Vec<f64> = g
        .weights()
        .iter()
        .copied()
        .filter(|&w| w > 0.0 && w <= diag)
        .collect();
    eps.extend((1..=200).map(|k| diag * k as f64 / 200.0));
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let mut best = (f64::INFINITY, 0.0);
    for &e in &eps {
        let r = brute_independence_number(n, &arcs_at(g, e)) as f64 / (e * e);
        if r <= best.0 {
            best = (r, e);
        }
    }
    best
}

/// Random probability vector; `floor > 0` keeps every entry positive.
pub fn random_simplex<R: Rng>(n: usize, floor: f64, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + floor).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `sum_j p_j * f(j)` elementwise, i.e. the exact expectation over the
/// played arm of a vector-valued quantity.
pub fn expectation(p: &[f64], mut f: impl FnMut(usize) -> Vec<f64>) -> Vec<f64> {
    let mut acc = vec![0.0; p.len()];
    for (j, &pj) in p.iter().enumerate() {
        for (a, v) in acc.iter_mut().zip(f(j)) {
            *a += pj * v;
        }
    }
    acc
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
