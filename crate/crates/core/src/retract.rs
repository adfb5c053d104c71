//! Concrete retractions:
//!
//! - `r`: the square `[-1,1]²` onto the L-shape `{x = -1} ∪ {y = 1}`;
//! - `R`: `[-1,1]^Γ` onto `K′ = {x*(m) <= x*(a) <= x*(M), max(|x*(m)|, |x*(M)|) = 1}`;
//! - `P`: two-valued points with `x*(m) < 0 < x*(M)` over a Boolean algebra onto
//!   the `{-1, 1}`-valued ones.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::dual::{is_hom, DualPoint, HOM_TOL};
use crate::lattice::FiniteLattice;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RetractError {
    #[error("point ({0}, {1}) is outside the square")]
    OutOfSquare(f64, f64),
    #[error("coordinate {0} is outside [-1, 1]")]
    OutOfBounds(usize),
    #[error("point is not in U: x*(m) = {bottom}, x*(M) = {top}")]
    NotInU { bottom: f64, top: f64 },
    #[error("lattice is not a Boolean algebra")]
    NotBooleanAlgebra,
    #[error("input is not a lattice homomorphism")]
    NotAHom,
    #[error("mesh sequence must be positive and strictly decreasing")]
    BadMeshes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquarePoint {
    pub x: f64,
    pub y: f64,
}

impl SquarePoint {
    pub fn new(x: f64, y: f64) -> Result<Self, RetractError> {
        let inside = |v: f64| v.abs() <= 1.0 + HOM_TOL;
        if inside(x) && inside(y) {
            Ok(Self { x: x.clamp(-1.0, 1.0), y: y.clamp(-1.0, 1.0) })
        } else {
            Err(RetractError::OutOfSquare(x, y))
        }
    }

    pub fn on_l_shape(&self) -> bool {
        self.x == -1.0 || self.y == 1.0
    }
}

/// Arc-length style parameter `t ∈ [-1, 3]` of the L-shape: `t <= 1` is the
/// left edge `(-1, t)`, `t >= 1` the top edge `(t - 2, 1)`.
fn l_shape_point(t: f64) -> SquarePoint {
    if t <= 1.0 {
        SquarePoint { x: -1.0, y: t }
    } else {
        SquarePoint { x: t - 2.0, y: 1.0 }
    }
}

/// Blends the two edge projections with weight `s = (x+1) / ((x+1) + (1-y))`.
pub fn square_retraction(p: SquarePoint) -> Result<SquarePoint, RetractError> {
    let p = SquarePoint::new(p.x, p.y)?;
    // exact identity on the target
    if p.x == -1.0 || p.y == 1.0 {
        return Ok(p);
    }
    let s = (p.x + 1.0) / ((p.x + 1.0) + (1.0 - p.y));
    let t = (1.0 - s) * p.y + s * (p.x + 2.0);
    Ok(l_shape_point(t))
}

/// A function on `Γ = A ∪ {m, M}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaPoint {
    pub bottom: f64,
    pub top: f64,
    pub generators: Vec<f64>,
}

impl GammaPoint {
    pub fn new(bottom: f64, top: f64, generators: Vec<f64>) -> Self {
        Self { bottom, top, generators }
    }

    fn check_bounds(&self) -> Result<(), RetractError> {
        let coords = std::iter::once(self.bottom).chain(std::iter::once(self.top)).chain(self.generators.iter().copied());
        match coords.enumerate().find(|(_, v)| !(v.abs() <= 1.0)) {
            Some((i, _)) => Err(RetractError::OutOfBounds(i)),
            None => Ok(()),
        }
    }

    pub fn in_kprime(&self, tol: f64) -> bool {
        self.generators.iter().all(|&a| self.bottom <= a + tol && a <= self.top + tol)
            && (self.bottom.abs().max(self.top.abs()) - 1.0).abs() <= tol
            && self.bottom.abs() <= 1.0 + tol
            && self.top.abs() <= 1.0 + tol
    }

    fn distance(&self, other: &GammaPoint) -> f64 {
        self.generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| (a - b).abs())
            .fold((self.bottom - other.bottom).abs().max((self.top - other.top).abs()), f64::max)
    }
}

/// `R(f)(m), R(f)(M) = r(f(m), f(M))`, `R(f)(a) = (f(a) ∧ R(f)(M)) ∨ R(f)(m)`.
pub fn kprime_retraction(f: &GammaPoint) -> Result<GammaPoint, RetractError> {
    f.check_bounds()?;
    let end = square_retraction(SquarePoint { x: f.bottom, y: f.top })?;
    let generators = f.generators.iter().map(|&a| a.min(end.y).max(end.x)).collect();
    Ok(GammaPoint { bottom: end.x, top: end.y, generators })
}

/// `P(x*)(x) = 1` if `x*(x) > 0`, else `-1`.
pub fn boolean_sign_retraction(x: &DualPoint) -> Result<DualPoint, RetractError> {
    let lattice = x.lattice();
    if !lattice.is_boolean() {
        return Err(RetractError::NotBooleanAlgebra);
    }
    if !matches!(is_hom(lattice, x.values()), Ok(None)) {
        return Err(RetractError::NotAHom);
    }
    let (bottom, top) = (x.bottom_value(), x.top_value());
    if !(bottom < 0.0 && top > 0.0) {
        return Err(RetractError::NotInU { bottom, top });
    }
    let values = x.values().iter().map(|&v| if v > 0.0 { 1.0 } else { -1.0 }).collect();
    DualPoint::new(lattice.clone(), values).map_err(|_| RetractError::NotAHom)
}

/// `K₀`: the `{-1, 1}`-valued homomorphisms with `x*(m) = -1` and `x*(M) = 1`,
/// one per prime filter.
pub fn k0_points(lattice: &Arc<FiniteLattice>) -> Vec<DualPoint> {
    lattice
        .join_irreducibles()
        .iter()
        .map(|&p| {
            let values = (0..lattice.len()).map(|x| if lattice.leq(p, x) { 1.0 } else { -1.0 }).collect();
            DualPoint::new(lattice.clone(), values).expect("signed filter indicator is a homomorphism")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RetractionKind {
    Square,
    Kprime,
    Boolean,
}

impl std::str::FromStr for RetractionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "square" => Ok(Self::Square),
            "kprime" => Ok(Self::Kprime),
            "boolean" => Ok(Self::Boolean),
            other => Err(format!("unknown retraction `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub kind: RetractionKind,
    pub meshes: Vec<f64>,
    /// Largest output distance between grid neighbours at input distance `<= h`.
    pub jumps: Vec<f64>,
    pub non_increasing: bool,
}

fn grid(h: f64, lo: f64, hi: f64) -> Vec<f64> {
    let steps = ((hi - lo) / h).round() as usize;
    (0..=steps).map(|i| if i == steps { hi } else { lo + i as f64 * h }).collect()
}

fn square_jump(h: f64) -> f64 {
    let g = grid(h, -1.0, 1.0);
    let k = g.len();
    let img: Vec<SquarePoint> = (0..k * k)
        .map(|ij| square_retraction(SquarePoint { x: g[ij / k], y: g[ij % k] }).expect("grid is inside"))
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let a = img[i * k + j];
            for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
                if i + di < k && j + dj < k {
                    let b = img[(i + di) * k + j + dj];
                    worst = worst.max((a.x - b.x).abs().max((a.y - b.y).abs()));
                }
            }
        }
    }
    worst
}

fn kprime_jump(h: f64) -> f64 {
    let g = grid(h, -1.0, 1.0);
    let k = g.len();
    let at = |i: usize, j: usize, l: usize| {
        kprime_retraction(&GammaPoint::new(g[i], g[j], vec![g[l]])).expect("grid is inside")
    };
    let img: Vec<GammaPoint> = (0..k * k * k).map(|c| at(c / (k * k), (c / k) % k, c % k)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let a = &img[(i * k + j) * k + l];
                for d in 1..8usize {
                    let (di, dj, dl) = (d >> 2 & 1, d >> 1 & 1, d & 1);
                    if i + di < k && j + dj < k && l + dl < k {
                        worst = worst.max(a.distance(&img[((i + di) * k + j + dj) * k + l + dl]));
                    }
                }
            }
        }
    }
    worst
}

/// Two-valued points over `ba:2` on the sub-box `x*(m) ∈ [-1, -1/2]`, `x*(M) ∈ [1/2, 1]`,
/// one sign pattern (prime filter) at a time.
fn boolean_jump(h: f64) -> f64 {
    let lattice = Arc::new(FiniteLattice::boolean_algebra(2).expect("ba:2"));
    let lo = grid(h, -1.0, -0.5);
    let hi = grid(h, 0.5, 1.0);
    let mut worst: f64 = 0.0;
    for &p in lattice.join_irreducibles() {
        let point = |b: f64, t: f64| {
            let values = (0..lattice.len()).map(|x| if lattice.leq(p, x) { t } else { b }).collect();
            let x = DualPoint::new(lattice.clone(), values).expect("two-valued hom");
            boolean_sign_retraction(&x).expect("inside U")
        };
        for i in 0..lo.len() {
            for j in 0..hi.len() {
                let a = point(lo[i], hi[j]);
                for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
                    if i + di < lo.len() && j + dj < hi.len() {
                        let b = point(lo[i + di], hi[j + dj]);
                        let d = a.values().iter().zip(b.values()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
                        worst = worst.max(d);
                    }
                }
            }
        }
    }
    worst
}

pub fn continuity_probe(kind: RetractionKind, meshes: &[f64]) -> Result<ContinuityReport, RetractError> {
    if meshes.is_empty() || meshes.iter().any(|&h| !(h > 0.0)) || meshes.windows(2).any(|w| w[1] >= w[0]) {
        return Err(RetractError::BadMeshes);
    }
    let jumps: Vec<f64> = meshes
        .iter()
        .map(|&h| match kind {
            RetractionKind::Square => square_jump(h),
            RetractionKind::Kprime => kprime_jump(h),
            RetractionKind::Boolean => boolean_jump(h),
        })
        .collect();
    let non_increasing = jumps.windows(2).all(|w| w[1] <= w[0]);
    Ok(ContinuityReport { kind, meshes: meshes.to_vec(), jumps, non_increasing })
}
