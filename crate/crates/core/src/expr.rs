//! Vector-lattice expressions over the generators `δ_x`.
//!
//! An [`Expr`] is a function on the dual space: `δ_x(x*) = x*(x)`, sums and
//! scalar multiples are pointwise, `vee`/`wedge` are pointwise max/min and
//! `abs` is the pointwise absolute value.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::dual::DualPoint;
use crate::lattice::FiniteLattice;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("dual point belongs to a different lattice")]
    LatticeMismatch,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element index {0} out of range")]
    BadIndex(usize),
    #[error("map does not preserve {kind} of ({a}, {b})")]
    NotAHomomorphism { a: usize, b: usize, kind: &'static str },
    #[error("map has {got} entries, source lattice has {expected} elements")]
    MapLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Delta(usize),
    Scale(f64, Box<Node>),
    Plus(Box<Node>, Box<Node>),
    Vee(Box<Node>, Box<Node>),
    Wedge(Box<Node>, Box<Node>),
    Abs(Box<Node>),
}

impl Node {
    pub fn scale(self, alpha: f64) -> Self {
        Node::Scale(alpha, Box::new(self))
    }

    pub fn plus(self, other: Node) -> Self {
        Node::Plus(Box::new(self), Box::new(other))
    }

    pub fn minus(self, other: Node) -> Self {
        Node::Plus(Box::new(self), Box::new(other.scale(-1.0)))
    }

    pub fn vee(self, other: Node) -> Self {
        Node::Vee(Box::new(self), Box::new(other))
    }

    pub fn wedge(self, other: Node) -> Self {
        Node::Wedge(Box::new(self), Box::new(other))
    }

    pub fn abs(self) -> Self {
        Node::Abs(Box::new(self))
    }

    /// Evaluates on a raw value vector indexed by `Delta` indices.
    #[inline]
    pub fn eval(&self, values: &[f64]) -> f64 {
        match self {
            Node::Delta(x) => values[*x],
            Node::Scale(a, e) => a * e.eval(values),
            Node::Plus(l, r) => l.eval(values) + r.eval(values),
            Node::Vee(l, r) => l.eval(values).max(r.eval(values)),
            Node::Wedge(l, r) => l.eval(values).min(r.eval(values)),
            Node::Abs(e) => e.eval(values).abs(),
        }
    }

    fn lipschitz(&self) -> f64 {
        match self {
            Node::Delta(_) => 1.0,
            Node::Scale(a, e) => a.abs() * e.lipschitz(),
            Node::Plus(l, r) => l.lipschitz() + r.lipschitz(),
            Node::Vee(l, r) | Node::Wedge(l, r) => l.lipschitz().max(r.lipschitz()),
            Node::Abs(e) => e.lipschitz(),
        }
    }

    fn ceiling(&self) -> f64 {
        match self {
            Node::Delta(_) => 1.0,
            Node::Scale(a, e) => a.abs() * e.ceiling(),
            Node::Plus(l, r) | Node::Vee(l, r) | Node::Wedge(l, r) => l.ceiling() + r.ceiling(),
            Node::Abs(e) => e.ceiling(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Node::Delta(_) => false,
            Node::Scale(a, e) => *a == 0.0 || e.is_zero(),
            Node::Plus(l, r) | Node::Vee(l, r) | Node::Wedge(l, r) => l.is_zero() && r.is_zero(),
            Node::Abs(e) => e.is_zero(),
        }
    }

    /// Replaces every `Delta(x)` with `Delta(f(x))`.
    pub fn map_deltas(&self, f: &impl Fn(usize) -> usize) -> Node {
        match self {
            Node::Delta(x) => Node::Delta(f(*x)),
            Node::Scale(a, e) => Node::Scale(*a, Box::new(e.map_deltas(f))),
            Node::Plus(l, r) => Node::Plus(Box::new(l.map_deltas(f)), Box::new(r.map_deltas(f))),
            Node::Vee(l, r) => Node::Vee(Box::new(l.map_deltas(f)), Box::new(r.map_deltas(f))),
            Node::Wedge(l, r) => Node::Wedge(Box::new(l.map_deltas(f)), Box::new(r.map_deltas(f))),
            Node::Abs(e) => Node::Abs(Box::new(e.map_deltas(f))),
        }
    }

    fn collect_deltas(&self, out: &mut Vec<usize>) {
        match self {
            Node::Delta(x) => out.push(*x),
            Node::Scale(_, e) | Node::Abs(e) => e.collect_deltas(out),
            Node::Plus(l, r) | Node::Vee(l, r) | Node::Wedge(l, r) => {
                l.collect_deltas(out);
                r.collect_deltas(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Delta(_) => 0,
            Node::Scale(_, e) | Node::Abs(e) => 1 + e.depth(),
            Node::Plus(l, r) | Node::Vee(l, r) | Node::Wedge(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

pub fn delta(x: usize) -> Node {
    Node::Delta(x)
}

/// An expression bound to the lattice whose generators it uses.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    lattice: Arc<FiniteLattice>,
    root: Node,
}

impl Expr {
    pub fn new(lattice: Arc<FiniteLattice>, root: Node) -> Result<Self, ExprError> {
        let mut ds = Vec::new();
        root.collect_deltas(&mut ds);
        if let Some(&bad) = ds.iter().find(|&&x| x >= lattice.len()) {
            return Err(ExprError::BadIndex(bad));
        }
        Ok(Self { lattice, root })
    }

    pub fn parse(lattice: Arc<FiniteLattice>, text: &str) -> Result<Self, ExprError> {
        let root = Parser::new(text, &lattice).parse_all()?;
        Ok(Self { lattice, root })
    }

    /// `|δ_m| ∨ |δ_M|`.
    pub fn order_unit(lattice: Arc<FiniteLattice>) -> Self {
        let root = delta(lattice.min()).abs().vee(delta(lattice.max()).abs());
        Self { lattice, root }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn eval(&self, x: &DualPoint) -> Result<f64, ExprError> {
        if !x.same_lattice(&self.lattice) {
            return Err(ExprError::LatticeMismatch);
        }
        Ok(self.root.eval(x.values()))
    }

    /// `|e(x*) - e(y*)| <= K * max_x |x*(x) - y*(x)|`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.root.lipschitz()
    }

    /// Upper bound on the free lattice norm from `‖δ_x‖ <= 1`, the triangle
    /// inequality and `|a ∨ b|, |a ∧ b| <= |a| + |b|`.
    pub fn norm_ceiling(&self) -> f64 {
        if self.root.is_zero() {
            0.0
        } else {
            self.root.ceiling()
        }
    }

    /// True when the expression is identically zero by construction.
    pub fn is_trivially_zero(&self) -> bool {
        self.root.is_zero()
    }

    /// Sorted distinct elements referenced by `Delta` nodes.
    pub fn referenced_elements(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.root.collect_deltas(&mut v);
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `Some(|α|)` when the expression is a scaled generator `α δ_x`.
    pub fn as_scaled_generator(&self) -> Option<f64> {
        let mut node = &self.root;
        let mut alpha = 1.0;
        loop {
            match node {
                Node::Delta(_) => return Some(alpha),
                Node::Scale(a, e) => {
                    alpha *= a.abs();
                    node = e;
                }
                Node::Abs(e) => node = e,
                _ => return None,
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(n: &Node, l: &FiniteLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match n {
                Node::Delta(x) => {
                    let name = if *x == l.min() {
                        "m"
                    } else if *x == l.max() {
                        "M"
                    } else {
                        l.label(*x)
                    };
                    write!(f, "(delta {name})")
                }
                Node::Scale(a, e) => {
                    write!(f, "(scale {a} ")?;
                    go(e, l, f)?;
                    f.write_str(")")
                }
                Node::Plus(a, b) | Node::Vee(a, b) | Node::Wedge(a, b) => {
                    let op = match n {
                        Node::Plus(..) => "plus",
                        Node::Vee(..) => "vee",
                        _ => "wedge",
                    };
                    write!(f, "({op} ")?;
                    go(a, l, f)?;
                    f.write_str(" ")?;
                    go(b, l, f)?;
                    f.write_str(")")
                }
                Node::Abs(e) => {
                    f.write_str("(abs ")?;
                    go(e, l, f)?;
                    f.write_str(")")
                }
            }
        }
        go(&self.root, &self.lattice, f)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    lattice: &'a FiniteLattice,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, lattice: &'a FiniteLattice) -> Self {
        Self { src, pos: 0, lattice }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn atom(&mut self) -> Result<&'a str, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return self.err("expected a symbol");
        }
        Ok(&self.src[start..self.pos])
    }

    fn parse_all(&mut self) -> Result<Node, ExprError> {
        let n = self.expr()?;
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(n)
    }

    fn number(&mut self) -> Result<f64, ExprError> {
        let tok = self.atom()?;
        let parsed = match tok.split_once('/') {
            Some((p, q)) => p.parse::<f64>().ok().zip(q.parse::<f64>().ok()).map(|(p, q)| p / q),
            None => tok.parse::<f64>().ok(),
        };
        match parsed {
            Some(v) if v.is_finite() => Ok(v),
            _ => self.err(format!("bad number `{tok}`")),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        self.expect('(')?;
        let head = self.atom()?;
        let node = match head {
            "delta" => {
                let name = self.atom()?;
                let x = self
                    .lattice
                    .index_of(name)
                    .ok_or_else(|| ExprError::UnknownElement(name.to_string()))?;
                Node::Delta(x)
            }
            "scale" => {
                let a = self.number()?;
                self.expr()?.scale(a)
            }
            "abs" => self.expr()?.abs(),
            "plus" | "minus" | "vee" | "wedge" => {
                let l = self.expr()?;
                let r = self.expr()?;
                match head {
                    "plus" => l.plus(r),
                    "minus" => l.minus(r),
                    "vee" => l.vee(r),
                    _ => l.wedge(r),
                }
            }
            other => return self.err(format!("unknown operator `{other}`")),
        };
        self.expect(')')?;
        Ok(node)
    }
}

/// Lattice homomorphism between two finite lattices.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMap {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    mapping: Vec<usize>,
}

impl LatticeMap {
    pub fn new(source: Arc<FiniteLattice>, target: Arc<FiniteLattice>, mapping: Vec<usize>) -> Result<Self, ExprError> {
        if mapping.len() != source.len() {
            return Err(ExprError::MapLength { expected: source.len(), got: mapping.len() });
        }
        if let Some(&bad) = mapping.iter().find(|&&y| y >= target.len()) {
            return Err(ExprError::BadIndex(bad));
        }
        let n = source.len();
        for a in 0..n {
            for b in a..n {
                if mapping[source.meet(a, b)] != target.meet(mapping[a], mapping[b]) {
                    return Err(ExprError::NotAHomomorphism { a, b, kind: "meet" });
                }
                if mapping[source.join(a, b)] != target.join(mapping[a], mapping[b]) {
                    return Err(ExprError::NotAHomomorphism { a, b, kind: "join" });
                }
            }
        }
        Ok(Self { source, target, mapping })
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Maps bottom to bottom and top to top.
    pub fn is_bounded(&self) -> bool {
        self.mapping[self.source.min()] == self.target.min() && self.mapping[self.source.max()] == self.target.max()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.mapping.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &LatticeMap) -> Result<LatticeMap, ExprError> {
        if *first.target != *self.source {
            return Err(ExprError::LatticeMismatch);
        }
        let mapping = first.mapping.iter().map(|&y| self.mapping[y]).collect();
        Ok(LatticeMap { source: first.source.clone(), target: self.target.clone(), mapping })
    }

    /// Pulls a dual point of the target back to the source: `y* ∘ φ`.
    pub fn pull_back(&self, y: &DualPoint) -> Result<DualPoint, ExprError> {
        if !y.same_lattice(&self.target) {
            return Err(ExprError::LatticeMismatch);
        }
        let values = self.mapping.iter().map(|&t| y.at(t)).collect();
        Ok(DualPoint::new_unchecked(self.source.clone(), values))
    }
}

/// The induced map on expressions: substitutes `δ_x ↦ δ_φ(x)`, so that
/// `eval(precompose_hat(e, φ), y*) = eval(e, y* ∘ φ)`.
pub fn precompose_hat(e: &Expr, phi: &LatticeMap) -> Result<Expr, ExprError> {
    if *e.lattice != *phi.source {
        return Err(ExprError::LatticeMismatch);
    }
    Ok(Expr {
        lattice: phi.target.clone(),
        root: e.root.map_deltas(&|x| phi.apply(x)),
    })
}

/// The fixed list of twenty expressions used by the verification suites.
/// `mid` is the first element strictly between the bounds, or `M` if none.
pub fn canonical_expressions(lattice: &Arc<FiniteLattice>) -> Vec<Expr> {
    let (lo, hi) = (lattice.min(), lattice.max());
    let mid = (0..lattice.len()).find(|&x| x != lo && x != hi).unwrap_or(hi);
    let (m, big_m, a) = (|| delta(lo), || delta(hi), || delta(mid));
    let nodes = vec![
        m(),
        big_m(),
        a(),
        big_m().minus(m()),
        m().abs().vee(big_m().abs()),
        a().abs(),
        m().wedge(big_m()),
        m().vee(big_m()),
        m().plus(big_m()),
        a().minus(m()),
        big_m().minus(a()),
        a().scale(2.0),
        big_m().scale(-1.0),
        big_m().minus(m()).abs(),
        a().vee(a().scale(-1.0)),
        m().abs().wedge(big_m().abs()),
        m().abs().plus(big_m().abs()),
        m().vee(a()).minus(a().wedge(big_m())),
        m().plus(a()).scale(0.5),
        a().minus(m()).plus(a().minus(big_m())).abs(),
    ];
    nodes.into_iter().map(|root| Expr { lattice: lattice.clone(), root }).collect()
}

const SCALES: [f64; 7] = [-2.0, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0];

/// Random expression of depth at most `max_depth`.
pub fn random_expr<R: Rng>(lattice: &Arc<FiniteLattice>, max_depth: usize, rng: &mut R) -> Expr {
    fn go<R: Rng>(n: usize, depth: usize, rng: &mut R) -> Node {
        if depth == 0 || rng.random_bool(0.25) {
            return delta(rng.random_range(0..n));
        }
        match rng.random_range(0..6) {
            0 => go(n, depth - 1, rng).scale(SCALES[rng.random_range(0..SCALES.len())]),
            1 => go(n, depth - 1, rng).plus(go(n, depth - 1, rng)),
            2 => go(n, depth - 1, rng).minus(go(n, depth - 1, rng)),
            3 => go(n, depth - 1, rng).vee(go(n, depth - 1, rng)),
            4 => go(n, depth - 1, rng).wedge(go(n, depth - 1, rng)),
            _ => go(n, depth - 1, rng).abs(),
        }
    }
    let root = go(lattice.len(), max_depth, rng);
    Expr { lattice: lattice.clone(), root }
}
