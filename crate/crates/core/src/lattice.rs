//! Finite bounded distributive lattices.
//!
//! Elements are dense indices `0..len()`. Labels are carried for display and
//! for resolving names in expressions; every operation works on indices and
//! table lookups.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("elements {a} and {b} have no {kind}")]
    NotALattice { a: String, b: String, kind: &'static str },
    #[error("distributive law fails at ({a}, {b}, {c})")]
    NotDistributive { a: String, b: String, c: String },
    #[error("order has no global {0}")]
    NotBounded(&'static str),
    #[error("order relation has a cycle through {a} and {b}")]
    CycleInOrder { a: String, b: String },
    #[error("leq pair ({0}, {1}) refers to a missing element")]
    IndexOutOfRange(usize, usize),
    #[error("invalid lattice description: {0}")]
    BadSpec(String),
}

/// Raw meet/join tables of a finite lattice, not yet known to be distributive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTables {
    labels: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    min: usize,
    max: usize,
}

impl LatticeTables {
    /// Builds tables from an order given by `(i, j)` pairs meaning `i <= j`.
    /// The relation is closed reflexively and transitively first.
    pub fn from_order(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(LatticeError::IndexOutOfRange(i, j));
            }
            leq[i * n + j] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::CycleInOrder {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                    });
                }
            }
        }
        let min = (0..n)
            .find(|&a| (0..n).all(|b| leq[a * n + b]))
            .ok_or(LatticeError::NotBounded("minimum"))?;
        let max = (0..n)
            .find(|&a| (0..n).all(|b| leq[b * n + a]))
            .ok_or(LatticeError::NotBounded("maximum"))?;

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c * n + a] && leq[c * n + b]).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&d| leq[d * n + c]))
                    .ok_or_else(|| LatticeError::NotALattice {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        kind: "meet",
                    })?;
                let upper: Vec<usize> = (0..n).filter(|&c| leq[a * n + c] && leq[b * n + c]).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&c| upper.iter().all(|&d| leq[c * n + d]))
                    .ok_or_else(|| LatticeError::NotALattice {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        kind: "join",
                    })?;
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }
        Ok(Self { labels, leq, meet, join, min, max })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// First triple (in lexicographic order) violating `a∧(b∨c) = (a∧b)∨(a∧c)`.
    pub fn distributivity_violation(&self) -> Option<[usize; 3]> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_violation().is_none()
    }
}

/// A validated finite bounded distributive lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    tables: LatticeTables,
    join_irreducibles: Vec<usize>,
}

impl FiniteLattice {
    pub fn from_tables(tables: LatticeTables) -> Result<Self, LatticeError> {
        if let Some([a, b, c]) = tables.distributivity_violation() {
            let l = &tables.labels;
            return Err(LatticeError::NotDistributive {
                a: l[a].clone(),
                b: l[b].clone(),
                c: l[c].clone(),
            });
        }
        let n = tables.len();
        let join_irreducibles = (0..n)
            .filter(|&x| {
                x != tables.min
                    && !(0..n).any(|a| {
                        (a..n).any(|b| {
                            a != x && b != x && tables.leq(a, x) && tables.leq(b, x) && tables.join(a, b) == x
                        })
                    })
            })
            .collect();
        Ok(Self { tables, join_irreducibles })
    }

    pub fn from_order(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        Self::from_tables(LatticeTables::from_order(labels, pairs)?)
    }

    /// `m = a0 < a1 < ... < M` with `n` elements, `n >= 1`.
    pub fn chain(n: usize) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::NotBounded("minimum"));
        }
        let labels = (0..n)
            .map(|i| match i {
                0 => "m".to_string(),
                i if i == n - 1 => "M".to_string(),
                i => format!("a{i}"),
            })
            .collect();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_order(labels, &pairs)
    }

    /// The Boolean algebra of subsets of `{1..n}`; element index is the subset bitmask.
    pub fn boolean_algebra(n: usize) -> Result<Self, LatticeError> {
        if n > 6 {
            return Err(LatticeError::BadSpec(format!("ba:{n} exceeds 64 elements")));
        }
        let size = 1usize << n;
        let labels = (0..size)
            .map(|mask| match mask {
                0 => "m".to_string(),
                m if m == size - 1 => "M".to_string(),
                m => subset_label(m),
            })
            .collect();
        let mut pairs = Vec::new();
        for a in 0..size {
            for b in 0..size {
                if a & b == a {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_order(labels, &pairs)
    }

    /// Product order; index of `(a, b)` is `a * right.len() + b`.
    pub fn product(left: &Self, right: &Self) -> Result<Self, LatticeError> {
        let (p, q) = (left.len(), right.len());
        let mut labels = Vec::with_capacity(p * q);
        for a in 0..p {
            for b in 0..q {
                labels.push(format!("{}.{}", left.label(a), right.label(b)));
            }
        }
        let mut pairs = Vec::new();
        for a1 in 0..p {
            for b1 in 0..q {
                for a2 in 0..p {
                    for b2 in 0..q {
                        if left.leq(a1, a2) && right.leq(b1, b2) {
                            pairs.push((a1 * q + b1, a2 * q + b2));
                        }
                    }
                }
            }
        }
        Self::from_order(labels, &pairs)
    }

    /// Lattice of down-sets of a finite poset, ordered by inclusion.
    /// Down-sets are listed in increasing bitmask order.
    pub fn downsets(poset_labels: &[String], pairs: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let k = poset_labels.len();
        if k > 20 {
            return Err(LatticeError::BadSpec("poset too large for down-set enumeration".into()));
        }
        // transitive closure of the poset itself
        let mut below = vec![0u32; k];
        for (i, b) in below.iter_mut().enumerate() {
            *b |= 1 << i;
        }
        for &(i, j) in pairs {
            if i >= k || j >= k {
                return Err(LatticeError::IndexOutOfRange(i, j));
            }
            below[j] |= 1 << i;
        }
        loop {
            let mut changed = false;
            for j in 0..k {
                let mut acc = below[j];
                for i in 0..k {
                    if below[j] & (1 << i) != 0 {
                        acc |= below[i];
                    }
                }
                if acc != below[j] {
                    below[j] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                if below[j] & (1 << i) != 0 && below[i] & (1 << j) != 0 {
                    return Err(LatticeError::CycleInOrder {
                        a: poset_labels[i].clone(),
                        b: poset_labels[j].clone(),
                    });
                }
            }
        }
        let sets: Vec<u32> = (0..(1u32 << k))
            .filter(|&s| (0..k).all(|j| s & (1 << j) == 0 || below[j] & !s == 0))
            .collect();
        let labels = sets
            .iter()
            .map(|&s| {
                let names: Vec<&str> = (0..k).filter(|j| s & (1 << j) != 0).map(|j| poset_labels[j].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let mut rel = Vec::new();
        for (a, &sa) in sets.iter().enumerate() {
            for (b, &sb) in sets.iter().enumerate() {
                if sa & sb == sa {
                    rel.push((a, b));
                }
            }
        }
        Self::from_order(labels, &rel)
    }

    pub fn build(spec: &LatticeSpec) -> Result<Self, LatticeError> {
        match spec {
            LatticeSpec::Chain(n) => {
                if *n < 2 {
                    return Err(LatticeError::BadSpec(format!("chain:{n} needs n >= 2")));
                }
                Self::chain(*n)
            }
            LatticeSpec::Boolean(n) => Self::boolean_algebra(*n),
            LatticeSpec::Product(a, b) => Self::product(&Self::build(a)?, &Self::build(b)?),
            LatticeSpec::Downsets { elements, leq } => {
                let pairs: Vec<_> = leq.iter().map(|p| (p[0], p[1])).collect();
                Self::downsets(elements, &pairs)
            }
            LatticeSpec::Explicit { elements, leq } => {
                let pairs: Vec<_> = leq.iter().map(|p| (p[0], p[1])).collect();
                Self::from_order(elements.clone(), &pairs)
            }
        }
    }

    pub fn tables(&self) -> &LatticeTables {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.tables.meet(a, b)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.tables.join(a, b)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.tables.leq(a, b)
    }

    pub fn min(&self) -> usize {
        self.tables.min
    }

    pub fn max(&self) -> usize {
        self.tables.max
    }

    pub fn label(&self, i: usize) -> &str {
        &self.tables.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.tables.labels
    }

    /// Resolves an element name. `m` and `M` always denote the bounds.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        match name {
            "m" => Some(self.min()),
            "M" => Some(self.max()),
            _ => self.tables.labels.iter().position(|l| l == name),
        }
    }

    pub fn join_irreducibles(&self) -> &[usize] {
        &self.join_irreducibles
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq(x, y)).collect()
    }

    /// True iff the join-irreducibles form an antichain.
    pub fn is_boolean(&self) -> bool {
        let j = &self.join_irreducibles;
        j.iter().all(|&p| j.iter().all(|&q| p == q || !self.leq(p, q)))
    }

    /// Maximal chains of the join-irreducible poset, each listed bottom-up.
    /// A lattice without join-irreducibles has the single empty chain.
    pub fn maximal_jchains(&self) -> Vec<Vec<usize>> {
        let j = &self.join_irreducibles;
        let covers = |p: usize| -> Vec<usize> {
            j.iter()
                .copied()
                .filter(|&q| {
                    q != p && self.leq(p, q) && !j.iter().any(|&r| r != p && r != q && self.leq(p, r) && self.leq(r, q))
                })
                .collect()
        };
        let minimal: Vec<usize> = j.iter().copied().filter(|&p| !j.iter().any(|&q| q != p && self.leq(q, p))).collect();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = minimal.into_iter().rev().map(|p| vec![p]).collect();
        while let Some(chain) = stack.pop() {
            let up = covers(*chain.last().unwrap());
            if up.is_empty() {
                out.push(chain);
            } else {
                for &q in up.iter().rev() {
                    let mut next = chain.clone();
                    next.push(q);
                    stack.push(next);
                }
            }
        }
        if out.is_empty() {
            out.push(Vec::new());
        }
        out
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Graphviz rendering of the Hasse diagram.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n");
        for i in 0..self.len() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", self.label(i).replace('"', "\\\""));
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }
}

fn subset_label(mask: usize) -> String {
    let items: Vec<String> = (0..usize::BITS as usize)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// The up-set of a join-irreducible element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFilter {
    pub generator: usize,
    pub members: Vec<usize>,
}

impl PrimeFilter {
    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn includes(&self, other: &PrimeFilter) -> bool {
        other.members.iter().all(|&x| self.contains(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeFilters {
    pub filters: Vec<PrimeFilter>,
    /// `containment[i][j]` iff filter `i` includes filter `j`.
    pub containment: Vec<Vec<bool>>,
}

impl PrimeFilters {
    pub fn is_antichain(&self) -> bool {
        let k = self.filters.len();
        (0..k).all(|i| (0..k).all(|j| i == j || !self.containment[i][j]))
    }

    pub fn is_chain(&self) -> bool {
        let k = self.filters.len();
        (0..k).all(|i| (0..k).all(|j| self.containment[i][j] || self.containment[j][i]))
    }
}

pub fn prime_filters(lattice: &FiniteLattice) -> PrimeFilters {
    let filters: Vec<PrimeFilter> = lattice
        .join_irreducibles()
        .iter()
        .map(|&p| PrimeFilter { generator: p, members: lattice.up_set(p) })
        .collect();
    let containment = filters.iter().map(|a| filters.iter().map(|b| a.includes(b)).collect()).collect();
    PrimeFilters { filters, containment }
}

/// Textual or JSON description of a lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeSpec {
    Chain(usize),
    Boolean(usize),
    Product(Box<LatticeSpec>, Box<LatticeSpec>),
    Downsets { elements: Vec<String>, leq: Vec<[usize; 2]> },
    Explicit { elements: Vec<String>, leq: Vec<[usize; 2]> },
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum FamilyJson {
    Chain { n: usize },
    Ba { n: usize },
    Product { left: Box<SpecJson>, right: Box<SpecJson> },
    Downsets { elements: Vec<String>, leq: Vec<[usize; 2]> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SpecJson {
    Family(FamilyJson),
    Explicit { elements: Vec<String>, leq: Vec<[usize; 2]> },
    Named(String),
}

impl From<SpecJson> for Result<LatticeSpec, LatticeError> {
    fn from(j: SpecJson) -> Self {
        Ok(match j {
            SpecJson::Family(FamilyJson::Chain { n }) => LatticeSpec::Chain(n),
            SpecJson::Family(FamilyJson::Ba { n }) => LatticeSpec::Boolean(n),
            SpecJson::Family(FamilyJson::Product { left, right }) => {
                let l: Result<LatticeSpec, LatticeError> = (*left).into();
                let r: Result<LatticeSpec, LatticeError> = (*right).into();
                LatticeSpec::Product(Box::new(l?), Box::new(r?))
            }
            SpecJson::Family(FamilyJson::Downsets { elements, leq }) => LatticeSpec::Downsets { elements, leq },
            SpecJson::Explicit { elements, leq } => LatticeSpec::Explicit { elements, leq },
            SpecJson::Named(s) => s.parse()?,
        })
    }
}

impl LatticeSpec {
    /// Parses lattice JSON: `{"elements": [...], "leq": [[i,j],...]}` or
    /// `{"family": "chain"|"ba"|"product"|"downsets", ...}`.
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let j: SpecJson = serde_json::from_str(text).map_err(|e| LatticeError::BadSpec(e.to_string()))?;
        j.into()
    }
}

impl FromStr for LatticeSpec {
    type Err = LatticeError;

    /// `chain:n`, `ba:n`, or a product `A*B` (also `A×B`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('{') {
            return Self::from_json(s);
        }
        if let Some((a, b)) = s.split_once(['*', '×']) {
            return Ok(LatticeSpec::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        let bad = || LatticeError::BadSpec(s.to_string());
        let (family, arg) = s.split_once(':').ok_or_else(bad)?;
        let n: usize = arg.trim().parse().map_err(|_| bad())?;
        match family.trim() {
            "chain" => Ok(LatticeSpec::Chain(n)),
            "ba" => Ok(LatticeSpec::Boolean(n)),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeSpec::Chain(n) => write!(f, "chain:{n}"),
            LatticeSpec::Boolean(n) => write!(f, "ba:{n}"),
            LatticeSpec::Product(a, b) => write!(f, "{a}*{b}"),
            LatticeSpec::Downsets { elements, leq } => {
                write!(f, "downsets({} elements, {} relations)", elements.len(), leq.len())
            }
            LatticeSpec::Explicit { elements, leq } => {
                write!(f, "explicit({} elements, {} relations)", elements.len(), leq.len())
            }
        }
    }
}

/// All lattice isomorphisms are order isomorphisms; this searches bijections
/// by backtracking and is meant for small lattices.
pub fn find_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    fn extend(a: &FiniteLattice, b: &FiniteLattice, map: &mut Vec<usize>, used: &mut BTreeSet<usize>) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for cand in 0..b.len() {
            if used.contains(&cand) {
                continue;
            }
            let ok = (0..i).all(|j| a.leq(j, i) == b.leq(map[j], cand) && a.leq(i, j) == b.leq(cand, map[j]));
            if ok {
                map.push(cand);
                used.insert(cand);
                if extend(a, b, map, used) {
                    return true;
                }
                used.remove(&cand);
                map.pop();
            }
        }
        false
    }
    let mut map = Vec::with_capacity(n);
    extend(a, b, &mut map, &mut BTreeSet::new()).then_some(map)
}
