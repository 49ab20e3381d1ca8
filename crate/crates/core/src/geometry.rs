//! ℓp geometry: norm evaluation, ball membership, pairwise separations, and
//! the angular-distance lower bound.
//!
//! All predicates take an explicit tolerance so callers (and tests) can
//! tighten or loosen boundary decisions. ℓ1 and ℓ∞ avoid `powf` entirely, so
//! integer-coordinate inputs are evaluated exactly in `f64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for boundary decisions in geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coordinate vector; length must equal the dimension of the ambient space.
pub type Point = Vec<f64>;

/// Which ℓp norm a space carries. `Infinity` is a distinct case rather than a
/// large exponent, so no power evaluation can overflow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Norm {
    /// Finite exponent p ≥ 1.
    P(f64),
    /// The max norm.
    Infinity,
}

/// ℝ^d equipped with an ℓp norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormedSpace {
    dim: usize,
    norm: Norm,
}

impl NormedSpace {
    pub fn new(dim: usize, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        if let Norm::P(p) = norm {
            if !p.is_finite() || p < 1.0 {
                return Err(Error::InvalidInput(format!(
                    "norm exponent must be finite and >= 1, got {p}"
                )));
            }
        }
        Ok(NormedSpace { dim, norm })
    }

    pub fn euclidean(dim: usize) -> Self {
        NormedSpace::new(dim, Norm::P(2.0)).expect("dim >= 1")
    }

    pub fn linf(dim: usize) -> Self {
        NormedSpace::new(dim, Norm::Infinity).expect("dim >= 1")
    }

    pub fn l1(dim: usize) -> Self {
        NormedSpace::new(dim, Norm::P(1.0)).expect("dim >= 1")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub(crate) fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Open or metrically closed ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Open,
    Closed,
}

/// A ball with a chosen center and radius (in ℓp spaces both are unique, but
/// they are stored explicitly either way).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
    pub kind: BallKind,
}

impl Ball {
    pub fn new(center: Point, radius: f64, kind: BallKind) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Ball {
            center,
            radius,
            kind,
        })
    }

    pub fn closed(center: Point, radius: f64) -> Result<Self> {
        Ball::new(center, radius, BallKind::Closed)
    }

    pub fn open(center: Point, radius: f64) -> Result<Self> {
        Ball::new(center, radius, BallKind::Open)
    }
}

/// ‖v‖ in the space's norm: (Σ|v_i|^p)^{1/p} for finite p, max|v_i| for ℓ∞.
pub fn norm_eval(space: &NormedSpace, v: &[f64]) -> Result<f64> {
    space.check_dim(v)?;
    Ok(norm_unchecked(space.norm, v.iter().copied()))
}

/// ‖a − b‖ without materializing the difference vector.
pub fn distance(space: &NormedSpace, a: &[f64], b: &[f64]) -> Result<f64> {
    space.check_dim(a)?;
    space.check_dim(b)?;
    Ok(norm_unchecked(
        space.norm,
        a.iter().zip(b).map(|(x, y)| x - y),
    ))
}

pub(crate) fn norm_unchecked(norm: Norm, coords: impl Iterator<Item = f64>) -> f64 {
    match norm {
        Norm::Infinity => coords.fold(0.0_f64, |m, x| m.max(x.abs())),
        Norm::P(p) if p == 1.0 => coords.map(f64::abs).sum(),
        Norm::P(p) if p == 2.0 => coords.map(|x| x * x).sum::<f64>().sqrt(),
        Norm::P(p) => coords
            .map(|x| x.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

pub(crate) fn distance_unchecked(norm: Norm, a: &[f64], b: &[f64]) -> f64 {
    norm_unchecked(norm, a.iter().zip(b).map(|(x, y)| x - y))
}

/// Membership of `y` in `b`, with a tolerance band:
/// closed balls accept up to `radius + tol`, open balls only below
/// `radius − tol`. Points within `tol` of the boundary therefore count as
/// inside a closed ball and outside an open one.
pub fn ball_contains(space: &NormedSpace, b: &Ball, y: &[f64], tol: f64) -> Result<bool> {
    let d = distance(space, &b.center, y)?;
    Ok(match b.kind {
        BallKind::Closed => d <= b.radius + tol,
        BallKind::Open => d < b.radius - tol,
    })
}

/// The angular-distance lower bound: returns
/// `(‖x/‖x‖ − y/‖y‖‖, (‖x−y‖ − |‖x‖−‖y‖|) / min(‖x‖,‖y‖))`.
/// The first component is always ≥ the second (up to rounding); this is the
/// inequality that turns an intersecting Besicovitch family into a strict
/// spherical code.
pub fn angular_lower_bound(space: &NormedSpace, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let nx = norm_eval(space, x)?;
    let ny = norm_eval(space, y)?;
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::InvalidInput(
            "angular_lower_bound requires nonzero vectors".into(),
        ));
    }
    let ux: Vec<f64> = x.iter().map(|c| c / nx).collect();
    let uy: Vec<f64> = y.iter().map(|c| c / ny).collect();
    let lhs = distance(space, &ux, &uy)?;
    let rhs = (distance(space, x, y)? - (nx - ny).abs()) / nx.min(ny);
    Ok((lhs, rhs))
}

/// Minimum of ‖p_i − p_j‖ over unordered pairs. Errors on fewer than two
/// points.
pub fn min_separation(space: &NormedSpace, pts: &[Point]) -> Result<f64> {
    if pts.len() < 2 {
        return Err(Error::InvalidInput(
            "min_separation requires at least 2 points".into(),
        ));
    }
    for p in pts {
        space.check_dim(p)?;
    }
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = distance_unchecked(space.norm(), &pts[i], &pts[j]);
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}
