//! Certified estimates for the free Banach lattice norm
//!
//! ```text
//! ‖f‖ = sup { Σ|f(x_i*)| : x_1*, ..., x_n* ∈ L*, sup_x Σ|x_i*(x)| <= 1 }
//! ```
//!
//! and for the sup-norm of `f` over `K_L`.
//!
//! Both sides of the sup are positively homogeneous in each point, so the
//! search maximizes `Σ|f(x_i*)| / sup_x Σ|x_i*(x)|` over unconstrained tuples;
//! dividing the winning tuple by its constraint value gives a feasible witness.
//! Lower bounds are always backed by such a witness. Upper bounds come from
//! `‖f‖ <= 2‖f‖_∞` (with a Lipschitz-certified grid error) and from the
//! structural ceiling of the expression.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dual::{is_hom, random_layered, sample_dual, stream_rng, DualPoint};
use crate::expr::{Expr, Node};
use crate::lattice::FiniteLattice;

/// Comparison tolerance for reported inequalities.
pub const CMP_TOL: f64 = 1e-9;
pub const DEFAULT_MESH: f64 = 1.0 / 64.0;

const POOL_TUPLE_CAP: usize = 60_000;
const SWEEPS: usize = 5;
const GOLDEN_ITERS: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("points belong to different lattices")]
    LatticeMismatch,
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error("supports {0} and {1} overlap")]
    OverlappingSupports(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub budget: usize,
    pub seed: u64,
    pub max_n: usize,
    pub mesh: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { budget: 64, seed: 0, max_n: 4, mesh: DEFAULT_MESH }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<(), NormError> {
        if self.budget == 0 {
            return Err(NormError::BadConfig("budget must be at least 1".into()));
        }
        if !(1..=8).contains(&self.max_n) {
            return Err(NormError::BadConfig("max_n must lie in 1..=8".into()));
        }
        if !(self.mesh > 0.0) {
            return Err(NormError::BadConfig("mesh must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Points are lattice homomorphisms.
    Lattice,
    /// Points are arbitrary vectors in `[-1, 1]^L`.
    Set,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TupleCertificate {
    pub domain: Domain,
    pub points: Vec<Vec<f64>>,
    pub constraint_value: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub constraint_value: f64,
    pub objective: f64,
    pub ratio: f64,
    pub feasible: bool,
    pub points_valid: bool,
}

impl TupleCertificate {
    fn from_tuple(domain: Domain, node: &Node, points: Vec<Vec<f64>>) -> Self {
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        let constraint_value = constraint_raw(&refs);
        let objective = points.iter().map(|p| node.eval(p).abs()).sum();
        Self { domain, points, constraint_value, objective }
    }

    /// Recomputes everything from the raw points.
    pub fn verify(&self, e: &Expr) -> CertificateCheck {
        let refs: Vec<&[f64]> = self.points.iter().map(Vec::as_slice).collect();
        let constraint_value = constraint_raw(&refs);
        let objective: f64 = self.points.iter().map(|p| e.root().eval(p).abs()).sum();
        let lattice = e.lattice();
        let points_valid = self.points.iter().all(|p| match self.domain {
            Domain::Lattice => matches!(is_hom(lattice, p), Ok(None)),
            Domain::Set => p.len() == lattice.len() && p.iter().all(|v| v.abs() <= 1.0),
        });
        CertificateCheck {
            constraint_value,
            objective,
            ratio: ratio(objective, constraint_value),
            feasible: constraint_value <= 1.0 + 1e-12,
            points_valid,
        }
    }
}

fn ratio(objective: f64, constraint: f64) -> f64 {
    if constraint > 0.0 {
        objective / constraint
    } else {
        0.0
    }
}

fn constraint_raw(points: &[&[f64]]) -> f64 {
    let Some(first) = points.first() else { return 0.0 };
    (0..first.len())
        .map(|x| points.iter().map(|p| p[x].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `sup_x Σ_i |x_i*(x)|`; zero for the empty tuple.
pub fn constraint_value(points: &[DualPoint]) -> Result<f64, NormError> {
    if let Some(first) = points.first() {
        if points.iter().any(|p| !p.same_lattice(first.lattice())) {
            return Err(NormError::LatticeMismatch);
        }
    }
    let refs: Vec<&[f64]> = points.iter().map(DualPoint::values).collect();
    Ok(constraint_raw(&refs))
}

/// Tuple with value `height` on each support and zero elsewhere. Pairwise
/// disjoint supports make the constraint equal to `height`.
pub fn disjoint_support_certificate(
    e: &Expr,
    supports: &[Vec<usize>],
    height: f64,
) -> Result<TupleCertificate, NormError> {
    let n = e.lattice().len();
    for i in 0..supports.len() {
        for j in (i + 1)..supports.len() {
            if supports[i].iter().any(|x| supports[j].contains(x)) {
                return Err(NormError::OverlappingSupports(i, j));
            }
        }
    }
    let points = supports
        .iter()
        .map(|s| (0..n).map(|x| if s.contains(&x) { height } else { 0.0 }).collect())
        .collect();
    Ok(TupleCertificate::from_tuple(Domain::Set, e.root(), points))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNorm {
    /// Largest `|f|` found on `K_L`; the true sup lies in `[value, value + error_bound]`.
    pub value: f64,
    pub error_bound: f64,
    pub lipschitz: f64,
    pub mesh: f64,
    pub grid_points: u64,
    pub argmax: Vec<f64>,
}

impl SupNorm {
    pub fn certified_upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// A chain of join-irreducibles reduced to the level positions `f` can see.
struct Pattern {
    chain: usize,
    /// Level indices that matter: always `0` and `k`, plus the level of each referenced element.
    positions: Vec<usize>,
    node: Node,
}

fn level_table(lattice: &FiniteLattice, chain: &[usize]) -> Vec<usize> {
    (0..lattice.len()).map(|x| chain.iter().filter(|&&p| lattice.leq(p, x)).count()).collect()
}

fn patterns(e: &Expr, chains: &[Vec<usize>], levels: &[Vec<usize>]) -> Vec<Pattern> {
    let refs = e.referenced_elements();
    let mut seen: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut out = Vec::new();
    for (c, chain) in chains.iter().enumerate() {
        let lv = &levels[c];
        let mut positions = vec![0, chain.len()];
        positions.extend(refs.iter().map(|&x| lv[x]));
        positions.sort_unstable();
        positions.dedup();
        let slot = |x: usize| positions.binary_search(&lv[x]).unwrap();
        let key = (positions.len(), refs.iter().map(|&x| slot(x)).collect::<Vec<_>>());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let node = e.root().map_deltas(&slot);
        out.push(Pattern { chain: c, positions, node });
    }
    out
}

/// Advances the non-decreasing entries `idx[free]` (each at most `g`) to the
/// next tuple in lexicographic order; returns false when exhausted.
fn next_monotone(idx: &mut [usize], free: std::ops::Range<usize>, g: usize) -> bool {
    let (start, end) = (free.start, free.end);
    if start >= end {
        return false;
    }
    let mut i = end;
    while i > start {
        i -= 1;
        if idx[i] < g {
            idx[i] += 1;
            for j in (i + 1)..end {
                idx[j] = idx[i];
            }
            return true;
        }
    }
    false
}

fn grid_value(i: usize, g: usize) -> f64 {
    if i == g {
        1.0
    } else {
        -1.0 + 2.0 * i as f64 / g as f64
    }
}

fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Candidate coordinate values for a one-dimensional move on `[lo, hi]`:
/// both ends, zero, and a golden-section interior maximizer.
fn best_on_interval(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, current: f64) -> (f64, f64) {
    let mut best = (current, f(current));
    let mut consider = |v: f64, fv: f64| {
        if fv > best.1 {
            best = (v, fv);
        }
    };
    for v in [lo, hi, 0.0] {
        if (lo..=hi).contains(&v) {
            consider(v, f(v));
        }
    }
    if hi > lo {
        let (v, fv) = golden_max(&mut f, lo, hi);
        consider(v, fv);
    }
    best
}

/// Maximizes `|f|` over the two faces `x*(m) = -1` and `x*(M) = 1` of `K_L`
/// on a grid of step at most `mesh`, then refines the best grid point by
/// coordinate ascent. Deterministic.
pub fn sup_norm_kl(e: &Expr, mesh: f64) -> SupNorm {
    let lattice = e.lattice();
    let chains = lattice.maximal_jchains();
    let levels: Vec<Vec<usize>> = chains.iter().map(|c| level_table(lattice, c)).collect();
    let pats = patterns(e, &chains, &levels);
    let g = ((2.0 / mesh).ceil() as usize).max(1);
    let step = 2.0 / g as f64;

    // one task per (pattern, face, first free index) for the worker pool
    let mut tasks = Vec::new();
    for (pi, p) in pats.iter().enumerate() {
        let q = p.positions.len();
        for face in 0..2 {
            if q <= 2 {
                tasks.push((pi, face, None));
            } else {
                for first in 0..=g {
                    tasks.push((pi, face, Some(first)));
                }
            }
        }
    }
    let results: Vec<(f64, u64, usize, usize, Vec<usize>)> = tasks
        .par_iter()
        .map(|&(pi, face, first)| {
            let p = &pats[pi];
            let q = p.positions.len();
            let mut idx = vec![0usize; q];
            let mut vals = vec![0.0; q];
            // face 0: idx[0] = 0 fixed; face 1: idx[q-1] = g fixed
            let free = if face == 0 { 1..q } else { 0..q - 1 };
            if face == 1 {
                idx[q - 1] = g;
            }
            let mut sub = free.clone();
            let mut count = 0u64;
            if let Some(f0) = first {
                if face == 0 {
                    idx[1] = f0;
                    sub = 2..q;
                } else {
                    idx[0] = f0;
                    sub = 1..q - 1;
                }
                for j in sub.clone() {
                    idx[j] = f0;
                }
            }
            let mut best = (-1.0f64, idx.clone());
            loop {
                for (v, &i) in vals.iter_mut().zip(&idx) {
                    *v = grid_value(i, g);
                }
                let r = p.node.eval(&vals).abs();
                count += 1;
                if r > best.0 {
                    best = (r, idx.clone());
                }
                if !next_monotone(&mut idx, sub.clone(), g) {
                    break;
                }
            }
            (best.0, count, pi, face, best.1)
        })
        .collect();

    let grid_points = results.iter().map(|r| r.1).sum();
    let (_, _, pi, face, idx) = results
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one pattern");

    let p = &pats[pi];
    let q = p.positions.len();
    let mut vals: Vec<f64> = idx.iter().map(|&i| grid_value(i, g)).collect();
    let mut value = p.node.eval(&vals).abs();
    let free: Vec<usize> = if face == 0 { (1..q).collect() } else { (0..q - 1).collect() };
    for _ in 0..8 {
        let before = value;
        for &j in &free {
            let lo = if j == 0 { -1.0 } else { vals[j - 1] };
            let hi = if j + 1 == q { 1.0 } else { vals[j + 1] };
            let mut trial = vals.clone();
            let (v, fv) = best_on_interval(
                |t| {
                    trial[j] = t;
                    p.node.eval(&trial).abs()
                },
                lo,
                hi,
                vals[j],
            );
            if fv > value {
                vals[j] = v;
                value = fv;
            }
        }
        if value <= before {
            break;
        }
    }

    // materialize: every level takes the value of the nearest position at or below it
    let lv = &levels[p.chain];
    let argmax = (0..lattice.len())
        .map(|x| {
            let pos = p.positions.partition_point(|&l| l <= lv[x]) - 1;
            vals[pos]
        })
        .collect();
    let lipschitz = e.lipschitz_bound();
    SupNorm { value, error_bound: lipschitz * step, lipschitz, mesh: step, grid_points, argmax }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub witness: TupleCertificate,
    pub sup: Option<SupNorm>,
    pub ceiling: f64,
    pub config: SearchConfig,
    pub candidates: u64,
}

/// A tuple being improved by local moves, with cached objective terms.
#[derive(Clone)]
struct Tuple {
    params: Vec<Vec<f64>>,
    chains: Vec<usize>,
    values: Vec<Vec<f64>>,
    fvals: Vec<f64>,
}

trait Space: Sync {
    fn node(&self) -> &Node;
    fn materialize(&self, chain: usize, params: &[f64]) -> Vec<f64>;
    fn random_point<R: Rng>(&self, rng: &mut R) -> (usize, Vec<f64>);
    /// Admissible interval for coordinate `j` with the others fixed.
    fn interval(&self, params: &[f64], j: usize) -> (f64, f64);

    fn score(&self, t: &Tuple) -> f64 {
        let refs: Vec<&[f64]> = t.values.iter().map(Vec::as_slice).collect();
        ratio(t.fvals.iter().map(|f| f.abs()).sum(), constraint_raw(&refs))
    }

    fn set_point(&self, t: &mut Tuple, i: usize, chain: usize, params: Vec<f64>) {
        let v = self.materialize(chain, &params);
        t.fvals[i] = self.node().eval(&v);
        t.values[i] = v;
        t.params[i] = params;
        t.chains[i] = chain;
    }

    fn push_point(&self, t: &mut Tuple, chain: usize, params: Vec<f64>) {
        let v = self.materialize(chain, &params);
        t.fvals.push(self.node().eval(&v));
        t.values.push(v);
        t.params.push(params);
        t.chains.push(chain);
    }

    fn remove_point(&self, t: &mut Tuple, i: usize) {
        t.params.remove(i);
        t.chains.remove(i);
        t.values.remove(i);
        t.fvals.remove(i);
    }

    fn local_search<R: Rng>(&self, mut t: Tuple, max_n: usize, rng: &mut R) -> (f64, Tuple) {
        let mut score = self.score(&t);
        for _ in 0..SWEEPS {
            let before = score;
            let mut i = 0;
            while i < t.params.len() {
                // (a) resample the point
                let (c, p) = self.random_point(rng);
                let mut cand = t.clone();
                self.set_point(&mut cand, i, c, p);
                let s = self.score(&cand);
                if s > score {
                    t = cand;
                    score = s;
                }
                // (b) coordinate ascent
                for j in 0..t.params[i].len() {
                    let (lo, hi) = self.interval(&t.params[i], j);
                    let chain = t.chains[i];
                    let base = t.params[i].clone();
                    let mut scratch = t.clone();
                    let (v, s) = best_on_interval(
                        |x| {
                            let mut p = base.clone();
                            p[j] = x;
                            self.set_point(&mut scratch, i, chain, p);
                            self.score(&scratch)
                        },
                        lo,
                        hi,
                        base[j],
                    );
                    if s > score {
                        let mut p = base;
                        p[j] = v;
                        self.set_point(&mut t, i, chain, p);
                        score = s;
                    }
                }
                i += 1;
            }
            // (c) grow or shrink the tuple
            if t.params.len() < max_n {
                let (c, p) = self.random_point(rng);
                let mut cand = t.clone();
                self.push_point(&mut cand, c, p);
                let s = self.score(&cand);
                if s > score {
                    t = cand;
                    score = s;
                }
            }
            let mut i = 0;
            while t.params.len() > 1 && i < t.params.len() {
                let mut cand = t.clone();
                self.remove_point(&mut cand, i);
                let s = self.score(&cand);
                if s > score {
                    t = cand;
                    score = s;
                } else {
                    i += 1;
                }
            }
            if score <= before {
                break;
            }
        }
        (score, t)
    }
}

struct LatticeSpace<'a> {
    node: &'a Node,
    chains: Vec<Vec<usize>>,
    levels: Vec<Vec<usize>>,
}

impl<'a> LatticeSpace<'a> {
    fn new(e: &'a Expr) -> Self {
        let lattice = e.lattice().as_ref();
        let chains = lattice.maximal_jchains();
        let levels = chains.iter().map(|c| level_table(lattice, c)).collect();
        Self { node: e.root(), chains, levels }
    }

    /// Homomorphisms with every level in `{-1, 0, 1}`, deduplicated, no zero.
    fn extreme_pool(&self) -> Vec<(usize, Vec<f64>)> {
        let mut out: Vec<(usize, Vec<f64>)> = Vec::new();
        let mut seen: Vec<Vec<f64>> = Vec::new();
        for (c, chain) in self.chains.iter().enumerate() {
            let k = chain.len();
            let mut idx = vec![0usize; k + 1];
            loop {
                let params: Vec<f64> = idx.iter().map(|&i| i as f64 - 1.0).collect();
                let v = self.materialize(c, &params);
                if v.iter().any(|&x| x != 0.0) && !seen.contains(&v) {
                    seen.push(v);
                    out.push((c, params));
                }
                if !next_monotone(&mut idx, 0..k + 1, 2) {
                    break;
                }
            }
        }
        out
    }
}

impl Space for LatticeSpace<'_> {
    fn node(&self) -> &Node {
        self.node
    }

    fn materialize(&self, chain: usize, params: &[f64]) -> Vec<f64> {
        self.levels[chain].iter().map(|&l| params[l]).collect()
    }

    fn random_point<R: Rng>(&self, rng: &mut R) -> (usize, Vec<f64>) {
        let c = rng.random_range(0..self.chains.len());
        let on_kl = rng.random_bool(0.5);
        let h = random_layered(std::slice::from_ref(&self.chains[c]), on_kl, rng);
        // re-express the sampled sub-chain as levels of the full maximal chain
        let full = &self.chains[c];
        let mut params = Vec::with_capacity(full.len() + 1);
        let mut acc = h.base;
        params.push(acc);
        for p in full {
            if let Some(pos) = h.chain.iter().position(|q| q == p) {
                acc = (acc + h.increments[pos]).min(1.0);
            }
            params.push(acc);
        }
        (c, params)
    }

    fn interval(&self, params: &[f64], j: usize) -> (f64, f64) {
        let lo = if j == 0 { -1.0 } else { params[j - 1] };
        let hi = if j + 1 == params.len() { 1.0 } else { params[j + 1] };
        (lo, hi)
    }
}

struct SetSpace<'a> {
    n: usize,
    node: &'a Node,
}

impl Space for SetSpace<'_> {
    fn node(&self) -> &Node {
        self.node
    }

    fn materialize(&self, _chain: usize, params: &[f64]) -> Vec<f64> {
        params.to_vec()
    }

    fn random_point<R: Rng>(&self, rng: &mut R) -> (usize, Vec<f64>) {
        let p = (0..self.n)
            .map(|_| if rng.random_bool(0.5) { 0.0 } else { rng.random_range(-1.0..=1.0) })
            .collect();
        (0, p)
    }

    fn interval(&self, _params: &[f64], _j: usize) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

/// Candidate ordering key: higher score wins, then lower serial.
type Candidate = (f64, (u8, u64), Vec<Vec<f64>>);

fn pick(cands: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    cands.into_iter().reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
}

fn tuple_from<S: Space>(space: &S, points: &[(usize, Vec<f64>)]) -> Tuple {
    let mut t = Tuple { params: vec![], chains: vec![], values: vec![], fvals: vec![] };
    for (c, p) in points {
        space.push_point(&mut t, *c, p.clone());
    }
    t
}

/// Scores every multiset of up to `max_size` pool members, as long as the
/// number of multisets of the next size stays under the cap.
fn pool_tuples<S: Space>(space: &S, pool: &[(usize, Vec<f64>)], max_size: usize, phase: u8) -> (Vec<Candidate>, u64) {
    let mut out = Vec::new();
    let mut count = 0u64;
    let p = pool.len();
    if p == 0 {
        return (out, 0);
    }
    let mut serial = 0u64;
    for size in 1..=max_size.min(3) {
        let multisets = binomial(p + size - 1, size);
        if size > 1 && multisets > POOL_TUPLE_CAP as u128 {
            break;
        }
        let mut idx = vec![0usize; size];
        let mut best: Option<Candidate> = None;
        loop {
            let pts: Vec<(usize, Vec<f64>)> = idx.iter().map(|&i| pool[i].clone()).collect();
            let t = tuple_from(space, &pts);
            let s = space.score(&t);
            count += 1;
            if best.as_ref().is_none_or(|b| s > b.0) {
                best = Some((s, (phase, serial), t.values));
            }
            serial += 1;
            if !next_monotone(&mut idx, 0..size, p - 1) {
                break;
            }
        }
        out.extend(best);
    }
    (out, count)
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn restarts<S: Space>(space: &S, cfg: &SearchConfig, stream: u64, phase: u8, seeds: &[Tuple]) -> Vec<Candidate> {
    (0..cfg.budget)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(cfg.seed, stream, r as u64);
            let start = match seeds.get(r) {
                Some(t) => t.clone(),
                None => {
                    let n = rng.random_range(1..=cfg.max_n);
                    let pts: Vec<_> = (0..n).map(|_| space.random_point(&mut rng)).collect();
                    tuple_from(space, &pts)
                }
            };
            let (s, t) = space.local_search(start, cfg.max_n, &mut rng);
            (s, (phase, r as u64), t.values)
        })
        .collect()
}

fn finish(e: &Expr, domain: Domain, best: Candidate, upper: f64, sup: Option<SupNorm>, cfg: &SearchConfig, candidates: u64) -> NormEstimate {
    let (lower, _, points) = best;
    debug_assert!(lower <= upper + CMP_TOL, "lower {lower} above upper {upper}");
    // upper is a proven bound; any excess is rounding in the ratio
    let lower = lower.min(upper);
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    let c = constraint_raw(&refs);
    let normalized: Vec<Vec<f64>> = if c > 0.0 {
        points.iter().map(|p| p.iter().map(|v| v / c).collect()).collect()
    } else {
        points
    };
    let witness = TupleCertificate::from_tuple(domain, e.root(), normalized);
    NormEstimate { lower, upper, witness, sup, ceiling: e.norm_ceiling(), config: *cfg, candidates }
}

/// Lower bound for the free Banach lattice norm over the lattice, with the
/// certified upper bound `min(2 (‖f‖_∞ + err), ceiling)`.
pub fn fbl_lattice_norm_lb(e: &Expr, cfg: &SearchConfig) -> Result<NormEstimate, NormError> {
    cfg.validate()?;
    let sup = sup_norm_kl(e, cfg.mesh);
    let (best, count) = lattice_search(e, cfg, &sup);
    let upper = (2.0 * sup.certified_upper()).min(e.norm_ceiling());
    Ok(finish(e, Domain::Lattice, best, upper, Some(sup), cfg, count))
}

fn lattice_search(e: &Expr, cfg: &SearchConfig, sup: &SupNorm) -> (Candidate, u64) {
    let space = LatticeSpace::new(e);
    let lattice = e.lattice();
    let mut cands = Vec::new();
    let mut count = 0;
    if e.is_trivially_zero() {
        let zero = vec![vec![0.0; lattice.len()]];
        return ((0.0, (0, 0), zero), 0);
    }

    let pool = space.extreme_pool();
    let (pc, n) = pool_tuples(&space, &pool, cfg.max_n, 0);
    cands.extend(pc);
    count += n;

    cands.push((single_score(e.root(), &sup.argmax), (1, 0), vec![sup.argmax.clone()]));
    let samples = sample_dual(lattice, cfg.budget, cfg.seed, true).expect("non-empty lattice");
    cands.extend(samples.into_iter().enumerate().map(|(i, p)| {
        let v = p.into_values();
        (single_score(e.root(), &v), (2, i as u64), vec![v])
    }));
    count += 1 + cfg.budget as u64;

    let rs = restarts(&space, cfg, 3, 3, &[]);
    count += rs.len() as u64;
    cands.extend(rs);
    (pick(cands).expect("candidates"), count)
}

fn single_score(node: &Node, v: &[f64]) -> f64 {
    ratio(node.eval(v).abs(), constraint_raw(&[v]))
}

/// Lower bound for the free Banach lattice norm over the lattice's elements
/// taken as a bare set. Includes the lattice search as a seed, so the result
/// never falls below [`fbl_lattice_norm_lb`] for the same configuration.
pub fn fbl_set_norm_lb(e: &Expr, cfg: &SearchConfig) -> Result<NormEstimate, NormError> {
    cfg.validate()?;
    let lat = fbl_lattice_norm_lb(e, cfg)?;
    let n = e.lattice().len();
    if e.is_trivially_zero() {
        let witness = TupleCertificate { domain: Domain::Set, ..lat.witness };
        return Ok(NormEstimate { witness, sup: None, upper: 0.0, ..lat });
    }
    let space = SetSpace { n, node: e.root() };
    let mut cands: Vec<Candidate> = vec![(lat.lower, (0, 0), lat.witness.points.clone())];
    let mut count = lat.candidates;

    let lspace = LatticeSpace::new(e);
    let mut pool: Vec<(usize, Vec<f64>)> = Vec::new();
    for x in 0..n {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; n];
            v[x] = s;
            pool.push((0, v));
        }
    }
    for (c, p) in lspace.extreme_pool() {
        let v = lspace.materialize(c, &p);
        if !pool.iter().any(|(_, q)| *q == v) {
            pool.push((0, v));
        }
    }
    let (pc, k) = pool_tuples(&space, &pool, cfg.max_n, 1);
    cands.extend(pc);
    count += k;

    let seed_tuple = tuple_from(&space, &lat.witness.points.iter().map(|p| (0, p.clone())).collect::<Vec<_>>());
    let rs = restarts(&space, cfg, 4, 2, &[seed_tuple]);
    count += rs.len() as u64;
    cands.extend(rs);

    let best = pick(cands).expect("candidates");
    Ok(finish(e, Domain::Set, best, e.norm_ceiling(), None, cfg, count))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub sup_norm: f64,
    pub lower: f64,
    pub twice_sup: f64,
    pub tol: f64,
    pub pass: bool,
    pub estimate: NormEstimate,
}

/// Checks `‖f‖_∞ - tol <= lower <= 2 ‖f‖_∞ + tol` with `tol = Lipschitz * mesh + 1e-9`.
pub fn sandwich_check(e: &Expr, cfg: &SearchConfig) -> Result<SandwichReport, NormError> {
    let est = fbl_lattice_norm_lb(e, cfg)?;
    let sup = est.sup.clone().expect("lattice estimate carries the sup-norm");
    let tol = sup.error_bound + CMP_TOL;
    let s = sup.value;
    let pass = s - tol <= est.lower && est.lower <= 2.0 * s + tol;
    Ok(SandwichReport { sup_norm: s, lower: est.lower, twice_sup: 2.0 * s, tol, pass, estimate: est })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderUnitReport {
    pub sup_norm: f64,
    pub tol: f64,
    pub samples: usize,
    pub violations: usize,
    /// Smallest `(s + tol) max(|x*(m)|, |x*(M)|) - |f(x*)|` seen.
    pub min_slack: f64,
    pub pass: bool,
}

/// Checks `|f(x*)| <= (‖f‖_∞ + tol) max(|x*(m)|, |x*(M)|)` on sampled homomorphisms.
pub fn order_unit_check(e: &Expr, samples: usize, seed: u64) -> OrderUnitReport {
    let sup = sup_norm_kl(e, DEFAULT_MESH);
    order_unit_check_against(e, &sup, samples, seed)
}

pub fn order_unit_check_against(e: &Expr, sup: &SupNorm, samples: usize, seed: u64) -> OrderUnitReport {
    let tol = sup.error_bound + CMP_TOL;
    let bound = sup.value + tol;
    let points = sample_dual(e.lattice(), samples, seed, false).expect("non-empty lattice");
    let slacks: Vec<f64> = points
        .par_iter()
        .map(|p| bound * p.endpoint_modulus() - e.root().eval(p.values()).abs())
        .collect();
    let violations = slacks.iter().filter(|&&s| s < 0.0).count();
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    OrderUnitReport { sup_norm: sup.value, tol, samples, violations, min_slack, pass: violations == 0 }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::expr::delta;

    fn chain(n: usize) -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::chain(n).unwrap())
    }

    fn pts(l: &Arc<FiniteLattice>, vs: &[&[f64]]) -> Vec<DualPoint> {
        vs.iter().map(|v| DualPoint::new(l.clone(), v.to_vec()).unwrap()).collect()
    }

    #[test]
    fn constraint_examples() {
        let c2 = chain(2);
        assert_eq!(constraint_value(&pts(&c2, &[&[-1.0, 0.0], &[0.0, 1.0]])).unwrap(), 1.0);
        assert_eq!(constraint_value(&[DualPoint::constant(c2.clone(), 1.0)]).unwrap(), 1.0);
        assert_eq!(constraint_value(&[]).unwrap(), 0.0);
        let c3 = chain(3);
        assert_eq!(constraint_value(&pts(&c3, &[&[-1.0, -1.0, -1.0], &[0.0, 1.0, 1.0]])).unwrap(), 2.0);
        let mixed = vec![DualPoint::constant(c2, 1.0), DualPoint::constant(c3, 1.0)];
        assert_eq!(constraint_value(&mixed), Err(NormError::LatticeMismatch));
    }

    #[test]
    fn sup_norm_examples() {
        let c2 = chain(2);
        let u = Expr::order_unit(c2.clone());
        assert_eq!(sup_norm_kl(&u, DEFAULT_MESH).value, 1.0);
        let top = Expr::new(c2.clone(), delta(1)).unwrap();
        assert_eq!(sup_norm_kl(&top, DEFAULT_MESH).value, 1.0);
        let diff = Expr::new(c2.clone(), delta(1).minus(delta(0))).unwrap();
        let s = sup_norm_kl(&diff, DEFAULT_MESH);
        assert_eq!(s.value, 2.0);
        assert_eq!(s.argmax, vec![-1.0, 1.0]);
        assert_eq!(s.error_bound, 2.0 * DEFAULT_MESH);
    }

    #[test]
    fn sandwich_examples() {
        let c2 = chain(2);
        let cfg = SearchConfig::default();
        let r = sandwich_check(&Expr::order_unit(c2.clone()), &cfg).unwrap();
        assert!(r.pass && r.sup_norm == 1.0 && (r.lower - 2.0).abs() <= 1e-9);
        let r = sandwich_check(&Expr::new(c2.clone(), delta(1)).unwrap(), &cfg).unwrap();
        assert!(r.pass && r.sup_norm == 1.0 && (r.lower - 1.0).abs() <= 1e-9);
        let r = sandwich_check(&Expr::new(c2, delta(1).scale(0.0)).unwrap(), &cfg).unwrap();
        assert!(r.pass && r.sup_norm == 0.0 && r.lower == 0.0);
    }

    #[test]
    fn order_unit_examples() {
        let c3 = chain(3);
        let r = order_unit_check(&Expr::order_unit(c3), 10_000, 0);
        assert_eq!((r.samples, r.violations), (10_000, 0));
        let c2 = chain(2);
        let top = Expr::new(c2.clone(), delta(1)).unwrap();
        let x = DualPoint::new(c2, vec![-0.25, 0.5]).unwrap();
        assert_eq!(top.eval(&x).unwrap().abs(), 1.0 * x.endpoint_modulus());
    }

    #[test]
    fn config_validation() {
        let e = Expr::order_unit(chain(2));
        for bad in [
            SearchConfig { budget: 0, ..SearchConfig::default() },
            SearchConfig { max_n: 0, ..SearchConfig::default() },
            SearchConfig { max_n: 9, ..SearchConfig::default() },
            SearchConfig { mesh: 0.0, ..SearchConfig::default() },
        ] {
            assert!(matches!(fbl_lattice_norm_lb(&e, &bad), Err(NormError::BadConfig(_))));
        }
    }
}
