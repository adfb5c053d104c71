//! Brute-force oracles, independent of the search engine.
//!
//! The lattice norm oracle enumerates every homomorphism with values on the
//! grid `{-1, -7/8, ..., 1}` and every tuple of at most three of them.

#![allow(dead_code)]

use std::sync::Arc;

use fbl::{Expr, FiniteLattice};

pub const ORACLE_STEPS: usize = 8;

/// Homomorphism check straight from the tables, with no tolerance.
pub fn exact_hom(l: &FiniteLattice, v: &[f64]) -> bool {
    (0..l.len()).all(|a| {
        (0..l.len()).all(|b| v[l.meet(a, b)] == v[a].min(v[b]) && v[l.join(a, b)] == v[a].max(v[b]))
    })
}

/// All homomorphisms with values in `{k / steps : -steps <= k <= steps}`.
pub fn grid_homs(l: &FiniteLattice, steps: usize) -> Vec<Vec<f64>> {
    let n = l.len();
    let g = 2 * steps + 1;
    let grid: Vec<f64> = (0..g).map(|k| k as f64 / steps as f64 - 1.0).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let v: Vec<f64> = idx.iter().map(|&k| grid[k]).collect();
        if exact_hom(l, &v) {
            out.push(v);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < g {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `max |f|` over grid homomorphisms with `max(|x(m)|, |x(M)|) = 1`.
pub fn oracle_sup(e: &Expr, steps: usize) -> f64 {
    let l = e.lattice();
    grid_homs(l, steps)
        .iter()
        .filter(|v| v[l.min()].abs().max(v[l.max()].abs()) == 1.0)
        .map(|v| e.root().eval(v).abs())
        .fold(0.0, f64::max)
}

/// `sup Σ|f(x_i)| / sup_x Σ|x_i(x)|` over tuples of at most three grid homomorphisms.
pub fn oracle_norm(e: &Expr, steps: usize) -> f64 {
    let l: &Arc<FiniteLattice> = e.lattice();
    let homs: Vec<(f64, Vec<f64>)> = grid_homs(l, steps)
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0.0))
        .map(|v| (e.root().eval(&v).abs(), v.iter().map(|x| x.abs()).collect()))
        .collect();
    // drop points dominated by another with no smaller |f| and pointwise no larger |x|
    let dominated = |i: usize| {
        homs.iter().enumerate().any(|(j, (fj, aj))| {
            j != i
                && *fj >= homs[i].0
                && aj.iter().zip(&homs[i].1).all(|(a, b)| a <= b)
                && (*fj > homs[i].0 || aj != &homs[i].1 || j < i)
        })
    };
    let front: Vec<&(f64, Vec<f64>)> = (0..homs.len()).filter(|&i| !dominated(i)).map(|i| &homs[i]).collect();
    let n = l.len();
    let mut best: f64 = 0.0;
    for i in 0..front.len() {
        let (fi, ai) = front[i];
        best = best.max(fi / ai.iter().copied().fold(0.0, f64::max));
        for j in i..front.len() {
            let (fj, aj) = front[j];
            let sij: Vec<f64> = (0..n).map(|x| ai[x] + aj[x]).collect();
            best = best.max((fi + fj) / sij.iter().copied().fold(0.0, f64::max));
            for (fk, ak) in &front[j..] {
                let c = (0..n).map(|x| sij[x] + ak[x]).fold(0.0, f64::max);
                best = best.max((fi + fj + fk) / c);
            }
        }
    }
    best
}
