//! Real-valued lattice homomorphisms `L -> [-1, 1]` and the compact subset
//! where one endpoint value has modulus one.
//!
//! Every homomorphism of a finite distributive lattice into the reals is a base
//! value plus non-negative increments over a nested chain of prime filters.
//! [`LayeredHom`] is that parametrization; [`DualPoint`] is the materialized
//! value vector.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::FiniteLattice;

/// Absolute tolerance for homomorphism equations.
pub const HOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DualError {
    #[error("value vector has length {got}, lattice has {expected} elements")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a lattice homomorphism: {0:?}")]
    NotAHom(HomViolation),
    #[error("invalid layering: {0}")]
    InvalidLayering(String),
    #[error("K_L is empty")]
    EmptyKL,
    #[error("point does not lie on K_L")]
    NotOnKL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomViolation {
    OutOfRange { element: usize },
    Meet { a: usize, b: usize },
    Join { a: usize, b: usize },
}

/// Checks the meet and join equations on every pair, meets first, pairs in
/// lexicographic order with `a <= b`.
pub fn is_hom(lattice: &FiniteLattice, values: &[f64]) -> Result<Option<HomViolation>, DualError> {
    let n = lattice.len();
    if values.len() != n {
        return Err(DualError::DimensionMismatch { expected: n, got: values.len() });
    }
    if let Some(element) = values.iter().position(|v| !(v.abs() <= 1.0 + HOM_TOL)) {
        return Ok(Some(HomViolation::OutOfRange { element }));
    }
    for a in 0..n {
        for b in a..n {
            if (values[lattice.meet(a, b)] - values[a].min(values[b])).abs() > HOM_TOL {
                return Ok(Some(HomViolation::Meet { a, b }));
            }
            if (values[lattice.join(a, b)] - values[a].max(values[b])).abs() > HOM_TOL {
                return Ok(Some(HomViolation::Join { a, b }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    lattice: Arc<FiniteLattice>,
    values: Vec<f64>,
}

impl DualPoint {
    pub fn new(lattice: Arc<FiniteLattice>, values: Vec<f64>) -> Result<Self, DualError> {
        match is_hom(&lattice, &values)? {
            None => Ok(Self { lattice, values }),
            Some(v) => Err(DualError::NotAHom(v)),
        }
    }

    /// Skips validation; callers guarantee the homomorphism equations.
    pub(crate) fn new_unchecked(lattice: Arc<FiniteLattice>, values: Vec<f64>) -> Self {
        Self { lattice, values }
    }

    pub fn constant(lattice: Arc<FiniteLattice>, c: f64) -> Self {
        let values = vec![c; lattice.len()];
        Self { lattice, values }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn bottom_value(&self) -> f64 {
        self.values[self.lattice.min()]
    }

    pub fn top_value(&self) -> f64 {
        self.values[self.lattice.max()]
    }

    /// `max(|x*(m)|, |x*(M)|)`, which equals the sup of `|x*|` over the lattice.
    pub fn endpoint_modulus(&self) -> f64 {
        self.bottom_value().abs().max(self.top_value().abs())
    }

    /// `t * x*` for `t` in `[0, 1]`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    pub fn is_on_kl(&self) -> bool {
        (self.endpoint_modulus() - 1.0).abs() <= HOM_TOL
    }

    pub fn same_lattice(&self, other: &FiniteLattice) -> bool {
        std::ptr::eq(Arc::as_ptr(&self.lattice), other) || *self.lattice == *other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPointJson {
    pub values: Vec<f64>,
}

impl From<&DualPoint> for DualPointJson {
    fn from(p: &DualPoint) -> Self {
        Self { values: p.values.clone() }
    }
}

/// A point of `K_L`: `max(|x*(m)|, |x*(M)|) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KLPoint(DualPoint);

impl KLPoint {
    pub fn point(&self) -> &DualPoint {
        &self.0
    }
}

impl TryFrom<DualPoint> for KLPoint {
    type Error = DualError;

    fn try_from(p: DualPoint) -> Result<Self, DualError> {
        if p.is_on_kl() {
            Ok(Self(p))
        } else {
            Err(DualError::NotOnKL)
        }
    }
}

/// `x*(x) = base + sum{ increments[j] : chain[j] <= x }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredHom {
    pub base: f64,
    pub chain: Vec<usize>,
    pub increments: Vec<f64>,
}

impl LayeredHom {
    pub fn constant(c: f64) -> Self {
        Self { base: c, chain: Vec::new(), increments: Vec::new() }
    }

    pub fn top(&self) -> f64 {
        self.base + self.increments.iter().sum::<f64>()
    }

    /// Distinct level values `base, base + c1, ...` skipping zero increments.
    pub fn distinct_values(&self) -> usize {
        1 + self.increments.iter().filter(|&&c| c > 0.0).count()
    }
}

pub fn layered_to_point(lattice: &Arc<FiniteLattice>, h: &LayeredHom) -> Result<DualPoint, DualError> {
    if h.chain.len() != h.increments.len() {
        return Err(DualError::InvalidLayering("chain and increments differ in length".into()));
    }
    let ji = lattice.join_irreducibles();
    if let Some(p) = h.chain.iter().find(|p| !ji.contains(p)) {
        return Err(DualError::InvalidLayering(format!("{} is not join-irreducible", lattice.label(*p))));
    }
    if h.chain.windows(2).any(|w| w[0] == w[1] || !lattice.leq(w[0], w[1])) {
        return Err(DualError::InvalidLayering("chain is not strictly increasing".into()));
    }
    if h.increments.iter().any(|&c| !(c >= 0.0)) {
        return Err(DualError::InvalidLayering("negative increment".into()));
    }
    if !(h.base >= -1.0 - HOM_TOL) || !(h.top() <= 1.0 + HOM_TOL) {
        return Err(DualError::InvalidLayering("values leave [-1, 1]".into()));
    }
    let values = (0..lattice.len())
        .map(|x| {
            h.chain
                .iter()
                .zip(&h.increments)
                .filter(|(&p, _)| lattice.leq(p, x))
                .fold(h.base, |acc, (_, c)| acc + c)
        })
        .collect();
    Ok(DualPoint::new_unchecked(lattice.clone(), values))
}

/// Inverse of [`layered_to_point`]: recovers the base and the nested filters
/// from the level sets of a homomorphism. Returns `None` if some level set is
/// not the up-set of a single join-irreducible.
pub fn recover_layering(lattice: &FiniteLattice, values: &[f64]) -> Option<LayeredHom> {
    let base = values[lattice.min()];
    let mut levels: Vec<f64> = values.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut chain = Vec::new();
    let mut increments = Vec::new();
    let mut prev = base;
    for &t in levels.iter().filter(|&&t| t > base) {
        let set: Vec<usize> = (0..lattice.len()).filter(|&x| values[x] >= t).collect();
        let gen = *lattice.join_irreducibles().iter().find(|&&p| lattice.up_set(p) == set)?;
        chain.push(gen);
        increments.push(t - prev);
        prev = t;
    }
    Some(LayeredHom { base, chain, increments })
}

/// Constant 0, constant 1, and the indicator of every prime filter.
pub fn enumerate_01_homs(lattice: &Arc<FiniteLattice>) -> Vec<DualPoint> {
    let mut out = vec![DualPoint::constant(lattice.clone(), 0.0), DualPoint::constant(lattice.clone(), 1.0)];
    for &p in lattice.join_irreducibles() {
        let values = (0..lattice.len()).map(|x| if lattice.leq(p, x) { 1.0 } else { 0.0 }).collect();
        out.push(DualPoint::new_unchecked(lattice.clone(), values));
    }
    out
}

/// Independent stream per `(seed, index)` so sample prefixes are stable.
pub(crate) fn stream_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) << 20);
    rng
}

/// Random layered homomorphism: a random maximal chain of join-irreducibles,
/// a random sub-chain of it, and sorted uniform level values.
pub fn random_layered<R: Rng>(chains: &[Vec<usize>], on_kl: bool, rng: &mut R) -> LayeredHom {
    let full = &chains[rng.random_range(0..chains.len())];
    let chain: Vec<usize> = full.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    let mut levels: Vec<f64> = (0..=chain.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    levels.sort_by(f64::total_cmp);
    if on_kl {
        if rng.random_bool(0.5) {
            levels[0] = -1.0;
        } else {
            *levels.last_mut().unwrap() = 1.0;
        }
    }
    let increments = levels.windows(2).map(|w| w[1] - w[0]).collect();
    LayeredHom { base: levels[0], chain, increments }
}

/// Deterministic sample of dual points; sample `i` depends only on `(seed, i)`.
pub fn sample_dual(lattice: &Arc<FiniteLattice>, count: usize, seed: u64, on_kl: bool) -> Result<Vec<DualPoint>, DualError> {
    if lattice.is_empty() {
        return Err(DualError::EmptyKL);
    }
    let chains = lattice.maximal_jchains();
    Ok((0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, 1, i as u64);
            let h = random_layered(&chains, on_kl, &mut rng);
            let mut p = layered_to_point(lattice, &h).expect("sampled layering is valid");
            if on_kl && h.base != -1.0 {
                // the summed top level can miss 1 by rounding; pin it
                let top = p.values[lattice.max()];
                for v in p.values.iter_mut().filter(|v| **v == top) {
                    *v = 1.0;
                }
            }
            p
        })
        .collect())
}

/// Two-valued points of `U`: `x*(m) < 0 < x*(M)`, supported on one prime filter.
pub fn sample_u_boolean(lattice: &Arc<FiniteLattice>, count: usize, seed: u64) -> Vec<DualPoint> {
    let ji = lattice.join_irreducibles().to_vec();
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, 2, i as u64);
            let p = ji[rng.random_range(0..ji.len())];
            let lo = -rng.random_range(f64::MIN_POSITIVE..=1.0);
            let hi = rng.random_range(f64::MIN_POSITIVE..=1.0);
            let values = (0..lattice.len()).map(|x| if lattice.leq(p, x) { hi } else { lo }).collect();
            DualPoint::new_unchecked(lattice.clone(), values)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    #[test]
    fn is_hom_examples() {
        let c2 = FiniteLattice::chain(2).unwrap();
        assert_eq!(is_hom(&c2, &[-1.0, 0.0]).unwrap(), None);
        let b2 = FiniteLattice::boolean_algebra(2).unwrap();
        assert_eq!(is_hom(&b2, &[0.0, 1.0, 1.0, 1.0]).unwrap(), Some(HomViolation::Meet { a: 1, b: 2 }));
        assert_eq!(is_hom(&b2, &[0.0, 1.0, 0.0, 1.0]).unwrap(), None);
        assert!(matches!(is_hom(&b2, &[0.0]), Err(DualError::DimensionMismatch { .. })));
        assert_eq!(is_hom(&c2, &[-1.5, 0.0]).unwrap(), Some(HomViolation::OutOfRange { element: 0 }));
    }

    #[test]
    fn layered_examples() {
        let c2 = arc(FiniteLattice::chain(2).unwrap());
        let p = layered_to_point(&c2, &LayeredHom { base: -1.0, chain: vec![1], increments: vec![2.0] }).unwrap();
        assert_eq!(p.values(), &[-1.0, 1.0]);

        let b2 = arc(FiniteLattice::boolean_algebra(2).unwrap());
        let p = layered_to_point(&b2, &LayeredHom { base: -0.5, chain: vec![1], increments: vec![1.3] }).unwrap();
        let expect = [-0.5, 0.8, -0.5, 0.8];
        for (got, want) in p.values().iter().zip(expect) {
            assert!((got - want).abs() < 1e-15);
        }
        assert_eq!(is_hom(&b2, p.values()).unwrap(), None);

        let p = layered_to_point(&b2, &LayeredHom::constant(0.25)).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.25));
    }

    #[test]
    fn layered_rejects_bad_input() {
        let c3 = arc(FiniteLattice::chain(3).unwrap());
        let bad = |h: LayeredHom| matches!(layered_to_point(&c3, &h), Err(DualError::InvalidLayering(_)));
        assert!(bad(LayeredHom { base: 0.0, chain: vec![2, 1], increments: vec![0.1, 0.1] }));
        assert!(bad(LayeredHom { base: 0.0, chain: vec![1], increments: vec![-0.1] }));
        assert!(bad(LayeredHom { base: 0.5, chain: vec![1], increments: vec![0.6] }));
        assert!(bad(LayeredHom { base: 0.0, chain: vec![0], increments: vec![0.1] }));
    }

    #[test]
    fn zero_one_homs() {
        let b2 = arc(FiniteLattice::boolean_algebra(2).unwrap());
        let h = enumerate_01_homs(&b2);
        assert_eq!(h.len(), 4);
        assert_eq!(h[2].values(), &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(h[3].values(), &[0.0, 0.0, 1.0, 1.0]);
        let c3 = arc(FiniteLattice::chain(3).unwrap());
        assert_eq!(enumerate_01_homs(&c3).len(), 4);
        let c2 = arc(FiniteLattice::chain(2).unwrap());
        assert_eq!(enumerate_01_homs(&c2).len(), 3);
    }

    #[test]
    fn kl_samples_on_chain2() {
        let c2 = arc(FiniteLattice::chain(2).unwrap());
        for p in sample_dual(&c2, 500, 3, true).unwrap() {
            let (s, t) = (p.at(0), p.at(1));
            assert!(s <= t);
            assert!(s == -1.0 || t == 1.0);
            assert!(KLPoint::try_from(p).is_ok());
        }
    }

    #[test]
    fn samples_are_homs_and_deterministic() {
        let b2 = arc(FiniteLattice::boolean_algebra(2).unwrap());
        let a = sample_dual(&b2, 1000, 11, false).unwrap();
        for p in &a {
            assert_eq!(is_hom(&b2, p.values()).unwrap(), None);
        }
        let b = sample_dual(&b2, 1000, 11, false).unwrap();
        assert_eq!(a, b);
        // prefix stability
        assert_eq!(&sample_dual(&b2, 10, 11, false).unwrap()[..], &a[..10]);
    }

    #[test]
    fn recover_roundtrip() {
        let l = arc(FiniteLattice::build(&"chain:2*chain:3".parse().unwrap()).unwrap());
        for p in sample_dual(&l, 200, 5, false).unwrap() {
            let h = recover_layering(&l, p.values()).unwrap();
            let q = layered_to_point(&l, &h).unwrap();
            for (a, b) in p.values().iter().zip(q.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn u_samples_are_in_u() {
        let b3 = arc(FiniteLattice::boolean_algebra(3).unwrap());
        for p in sample_u_boolean(&b3, 100, 1) {
            assert!(p.bottom_value() < 0.0 && p.top_value() > 0.0);
            assert_eq!(is_hom(&b3, p.values()).unwrap(), None);
        }
    }
}
