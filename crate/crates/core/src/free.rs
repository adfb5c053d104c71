//! The free bounded distributive lattice on `N` generators, realized as the
//! monotone Boolean functions `{0,1}^N -> {0,1}`, and the embedding of a
//! bounded chain into it together with its retraction.
//!
//! Tables are indexed by assignment bitmask, generator `n` (1-based) on bit `n - 1`.

use std::collections::BTreeSet;
use std::ops::{BitAnd, BitOr};

use serde::Serialize;
use thiserror::Error;

use crate::dual::sample_dual;
use crate::expr::{precompose_hat, Expr, ExprError, LatticeMap};
use crate::lattice::FiniteLattice;

pub const MAX_GENERATORS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeError {
    #[error("{0} generators exceeds the limit of {MAX_GENERATORS}")]
    NTooLarge(usize),
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("table is not monotone")]
    NotMonotone,
    #[error("assignment has {got} entries for {expected} generators")]
    AssignmentLength { expected: usize, got: usize },
    #[error("invalid chain description: {0}")]
    BadOrder(String),
    #[error(transparent)]
    Map(#[from] ExprError),
    #[error("retraction composed with inclusion is not the identity at {0}")]
    NotARetraction(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneFn {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl MonotoneFn {
    fn filled(n: usize, bit: bool) -> Self {
        let mut words = vec![if bit { u64::MAX } else { 0 }; word_count(n)];
        if n < 6 {
            words[0] &= (1u64 << (1 << n)) - 1;
        }
        Self { n, words }
    }

    pub fn bottom(n: usize) -> Self {
        Self::filled(n, false)
    }

    pub fn top(n: usize) -> Self {
        Self::filled(n, true)
    }

    /// The projection `e_k`, 1-based.
    pub fn projection(n: usize, k: usize) -> Self {
        let mut f = Self::bottom(n);
        for a in 0..(1usize << n) {
            if a & (1 << (k - 1)) != 0 {
                f.set(a, true);
            }
        }
        f
    }

    /// Builds from a raw table; fails if the table is not monotone.
    pub fn from_table(n: usize, bits: &[bool]) -> Result<Self, FreeError> {
        let mut f = Self::bottom(n);
        for (a, &b) in bits.iter().enumerate().take(1 << n) {
            f.set(a, b);
        }
        if f.is_monotone() { Ok(f) } else { Err(FreeError::NotMonotone) }
    }

    /// `⋁_{S ∈ points} ⋀_{k ∈ S} e_k`, points given as bitmasks.
    pub fn from_minimal_points(n: usize, points: &[u32]) -> Self {
        let mut f = Self::bottom(n);
        for a in 0..(1u32 << n) {
            if points.iter().any(|&s| s & !a == 0) {
                f.set(a as usize, true);
            }
        }
        f
    }

    pub fn generator_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize) -> bool {
        self.words[a / 64] >> (a % 64) & 1 == 1
    }

    fn set(&mut self, a: usize, b: bool) {
        if b {
            self.words[a / 64] |= 1 << (a % 64);
        } else {
            self.words[a / 64] &= !(1 << (a % 64));
        }
    }

    pub fn is_monotone(&self) -> bool {
        (0..(1usize << self.n)).all(|a| !self.get(a) || (0..self.n).all(|k| self.get(a | (1 << k))))
    }

    /// Pointwise order: every true point of `self` is a true point of `other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count_true(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn table(&self) -> Vec<bool> {
        (0..(1usize << self.n)).map(|a| self.get(a)).collect()
    }
}

impl BitAnd for &MonotoneFn {
    type Output = MonotoneFn;

    fn bitand(self, rhs: Self) -> MonotoneFn {
        MonotoneFn { n: self.n, words: self.words.iter().zip(&rhs.words).map(|(a, b)| a & b).collect() }
    }
}

impl BitOr for &MonotoneFn {
    type Output = MonotoneFn;

    fn bitor(self, rhs: Self) -> MonotoneFn {
        MonotoneFn { n: self.n, words: self.words.iter().zip(&rhs.words).map(|(a, b)| a | b).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfreeGenerators {
    pub projections: Vec<MonotoneFn>,
    pub bottom: MonotoneFn,
    pub top: MonotoneFn,
}

pub fn bfree_generators(n: usize) -> Result<BfreeGenerators, FreeError> {
    if n == 0 {
        return Err(FreeError::NoGenerators);
    }
    if n > MAX_GENERATORS {
        return Err(FreeError::NTooLarge(n));
    }
    Ok(BfreeGenerators {
        projections: (1..=n).map(|k| MonotoneFn::projection(n, k)).collect(),
        bottom: MonotoneFn::bottom(n),
        top: MonotoneFn::top(n),
    })
}

/// Closure of the generators and both constants under AND and OR.
pub fn generated_sublattice(g: &BfreeGenerators) -> BTreeSet<MonotoneFn> {
    let mut all: BTreeSet<MonotoneFn> = g.projections.iter().cloned().collect();
    all.insert(g.bottom.clone());
    all.insert(g.top.clone());
    let mut frontier: Vec<MonotoneFn> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<MonotoneFn> = all.iter().cloned().collect();
        let mut next = Vec::new();
        for f in &frontier {
            for h in &snapshot {
                for c in [f & h, f | h] {
                    if !all.contains(&c) {
                        all.insert(c.clone());
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    all
}

/// Minimal true assignments as bitmasks, sorted. Empty for the constant 0,
/// `[0]` for the constant 1.
pub fn minimal_true_points(f: &MonotoneFn) -> Result<Vec<u32>, FreeError> {
    if !f.is_monotone() {
        return Err(FreeError::NotMonotone);
    }
    let n = f.n;
    Ok((0..(1u32 << n))
        .filter(|&a| f.get(a as usize) && (0..n).all(|k| a & (1 << k) == 0 || !f.get((a & !(1 << k)) as usize)))
        .collect())
}

/// 1-based generator numbers of a bitmask.
pub fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask & (1 << k) != 0).map(|k| k + 1).collect()
}

/// The unique bound-preserving lattice homomorphism extending
/// `e_k ↦ assignment[k - 1]`: join over minimal true points of the meet of
/// the assigned elements. Empty meet is `M`, empty join is `m`.
pub fn eval_in_lattice(f: &MonotoneFn, lattice: &FiniteLattice, assignment: &[usize]) -> Result<usize, FreeError> {
    if assignment.len() != f.n {
        return Err(FreeError::AssignmentLength { expected: f.n, got: assignment.len() });
    }
    let points = minimal_true_points(f)?;
    Ok(points.iter().fold(lattice.min(), |acc, &s| {
        let term = (0..f.n)
            .filter(|k| s & (1 << k) != 0)
            .fold(lattice.max(), |m, k| lattice.meet(m, assignment[k]));
        lattice.join(acc, term)
    }))
}

/// A bounded chain `m < ... < M` whose interior elements `a_1..a_N` are
/// listed in insertion order, with their position in the total order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedChainSpec {
    pub labels: Vec<String>,
    /// `rank[k]` is the position of `a_{k+1}` among the interior elements, from the bottom.
    pub rank: Vec<usize>,
}

impl BoundedChainSpec {
    pub fn new(labels: Vec<String>, rank: Vec<usize>) -> Result<Self, FreeError> {
        if labels.len() != rank.len() {
            return Err(FreeError::BadOrder("labels and ranks differ in length".into()));
        }
        let mut sorted = rank.clone();
        sorted.sort_unstable();
        if sorted != (0..rank.len()).collect::<Vec<_>>() {
            return Err(FreeError::BadOrder("ranks are not a permutation".into()));
        }
        if labels.len() > MAX_GENERATORS {
            return Err(FreeError::NTooLarge(labels.len()));
        }
        Ok(Self { labels, rank })
    }

    /// Parses `"m,a3,a1,a2,M"`: the list gives the total order, the subscripts
    /// give the insertion order.
    pub fn parse(order: &str) -> Result<Self, FreeError> {
        let items: Vec<&str> = order.split(',').map(str::trim).collect();
        if items.len() < 2 || items[0] != "m" || items[items.len() - 1] != "M" {
            return Err(FreeError::BadOrder("list must start with m and end with M".into()));
        }
        let interior = &items[1..items.len() - 1];
        let mut rank = vec![usize::MAX; interior.len()];
        let mut labels = vec![String::new(); interior.len()];
        for (pos, item) in interior.iter().enumerate() {
            let k: usize = item
                .strip_prefix('a')
                .and_then(|s| s.parse().ok())
                .filter(|&k| (1..=interior.len()).contains(&k))
                .ok_or_else(|| FreeError::BadOrder(format!("bad label `{item}`")))?;
            if rank[k - 1] != usize::MAX {
                return Err(FreeError::BadOrder(format!("duplicate label `{item}`")));
            }
            rank[k - 1] = pos;
            labels[k - 1] = item.to_string();
        }
        Self::new(labels, rank)
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// The chain as a lattice; `a_k` sits at index `rank[k-1] + 1`.
    pub fn lattice(&self) -> FiniteLattice {
        FiniteLattice::chain(self.len() + 2).expect("chains are lattices")
    }
}

/// `i(a_n) = (⋀{ i(a_j) : j < n, a_j > a_n }) ∧ (⋁{ i(a_j) : j < n, a_j < a_n } ∨ e_n)`.
pub fn embed_linear_order(spec: &BoundedChainSpec) -> Result<Vec<MonotoneFn>, FreeError> {
    let n = spec.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let g = bfree_generators(n)?;
    let mut images: Vec<MonotoneFn> = Vec::with_capacity(n);
    for k in 0..n {
        let above = (0..k)
            .filter(|&j| spec.rank[j] > spec.rank[k])
            .fold(g.top.clone(), |acc, j| &acc & &images[j]);
        let below = (0..k)
            .filter(|&j| spec.rank[j] < spec.rank[k])
            .fold(g.bottom.clone(), |acc, j| &acc | &images[j]);
        images.push(&above & &(&below | &g.projections[k]));
    }
    Ok(images)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetractionReport {
    pub generators: usize,
    /// `R(i(a_k)) == a_k` for each `k`.
    pub identities: Vec<bool>,
    pub strictly_increasing: bool,
    pub injective: bool,
    pub pass: bool,
}

pub fn verify_retraction_identity(spec: &BoundedChainSpec) -> Result<RetractionReport, FreeError> {
    let n = spec.len();
    let images = embed_linear_order(spec)?;
    let chain = spec.lattice();
    let assignment: Vec<usize> = spec.rank.iter().map(|r| r + 1).collect();
    let identities = images
        .iter()
        .zip(&assignment)
        .map(|(f, &a)| eval_in_lattice(f, &chain, &assignment).map(|r| r == a))
        .collect::<Result<Vec<_>, _>>()?;

    // the whole chain in total order, bounds included
    let mut by_rank: Vec<MonotoneFn> = Vec::with_capacity(n + 2);
    if n > 0 {
        by_rank.push(MonotoneFn::bottom(n));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| spec.rank[k]);
        by_rank.extend(order.into_iter().map(|k| images[k].clone()));
        by_rank.push(MonotoneFn::top(n));
    }
    let strictly_increasing = by_rank.windows(2).all(|w| w[0].leq(&w[1]) && w[0] != w[1]);
    let distinct: BTreeSet<&MonotoneFn> = by_rank.iter().collect();
    let injective = distinct.len() == by_rank.len();
    let pass = identities.iter().all(|&b| b) && strictly_increasing && injective;
    Ok(RetractionReport { generators: n, identities, strictly_increasing, injective, pass })
}

/// All monotone tables on `n <= 4` inputs by exhaustive filtering.
pub fn all_monotone_tables(n: usize) -> Vec<MonotoneFn> {
    assert!(n <= 4, "exhaustive enumeration is limited to n <= 4");
    let size = 1usize << n;
    (0..(1u64 << size))
        .filter_map(|t| {
            let f = MonotoneFn { n, words: vec![t] };
            f.is_monotone().then_some(f)
        })
        .collect()
}

/// A sublattice `L ⊂ M` with a retraction `R: M -> L`, `R ∘ i = id_L`.
#[derive(Debug, Clone)]
pub struct ComplementedPair {
    inclusion: LatticeMap,
    retraction: LatticeMap,
}

pub fn complemented_pair(inclusion: LatticeMap, retraction: LatticeMap) -> Result<ComplementedPair, FreeError> {
    if *inclusion.target() != *retraction.source() || *inclusion.source() != *retraction.target() {
        return Err(FreeError::Map(ExprError::LatticeMismatch));
    }
    if let Some(x) = (0..inclusion.source().len()).find(|&x| retraction.apply(inclusion.apply(x)) != x) {
        return Err(FreeError::NotARetraction(x));
    }
    Ok(ComplementedPair { inclusion, retraction })
}

impl ComplementedPair {
    pub fn inclusion(&self) -> &LatticeMap {
        &self.inclusion
    }

    pub fn retraction(&self) -> &LatticeMap {
        &self.retraction
    }

    /// Expression over the small lattice pushed to the large one.
    pub fn lift(&self, e: &Expr) -> Result<Expr, FreeError> {
        Ok(precompose_hat(e, &self.inclusion)?)
    }

    /// Expression over the large lattice pushed back to the small one.
    pub fn project(&self, e: &Expr) -> Result<Expr, FreeError> {
        Ok(precompose_hat(e, &self.retraction)?)
    }

    /// Largest `|project(lift(e))(x*) - e(x*)|` over `samples` sampled points,
    /// maximized over `exprs`.
    pub fn identity_defect(&self, exprs: &[Expr], samples: usize, seed: u64) -> Result<f64, FreeError> {
        let points = sample_dual(self.inclusion.source(), samples, seed, false).expect("non-empty lattice");
        let mut worst: f64 = 0.0;
        for e in exprs {
            let back = self.project(&self.lift(e)?)?;
            for p in &points {
                worst = worst.max((back.eval(p)? - e.eval(p)?).abs());
            }
        }
        Ok(worst)
    }
}
