//! Spherical codes and strict kissing configurations.
//!
//! A strict code (all pairwise distances > 1) certifies a lower bound on the
//! strict Hadwiger number, and converts to an intersecting Besicovitch family
//! of unit balls and back. The search optimizer only ever certifies lower
//! bounds: a found configuration is a certificate, a failed search proves
//! nothing.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::besicovitch::BallFamily;
use crate::error::{Error, Result};
use crate::geometry::{
    distance_unchecked, min_separation, norm_eval, norm_unchecked, Ball, Norm, NormedSpace, Point,
};
use crate::maxop::SearchBudget;

/// Tolerance for the unit-norm invariant of code vectors.
pub const UNIT_TOL: f64 = 1e-9;

/// Default margin above 1 required to call a code strict in search
/// certificates.
pub const STRICT_MARGIN: f64 = 1e-6;

/// A finite set of unit vectors with its cached minimal pairwise separation.
/// A singleton code has separation +∞ by convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalCode {
    space: NormedSpace,
    vectors: Vec<Point>,
    separation: f64,
}

impl SphericalCode {
    pub fn new(space: NormedSpace, vectors: Vec<Point>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput("code must contain at least one vector".into()));
        }
        for v in &vectors {
            let n = norm_eval(&space, v)?;
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidInput(format!(
                    "code vectors must be unit within {UNIT_TOL}, got norm {n}"
                )));
            }
        }
        let separation = if vectors.len() >= 2 {
            min_separation(&space, &vectors)?
        } else {
            f64::INFINITY
        };
        Ok(SphericalCode {
            space,
            vectors,
            separation,
        })
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn vectors(&self) -> &[Point] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty codes
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Strict codes have every pairwise distance above 1 by at least the
    /// margin.
    pub fn is_strict(&self, margin: f64) -> bool {
        self.separation > 1.0 + margin
    }
}

/// The rigid and extremal configurations used throughout: pentagon and
/// hexagon on the circle, icosahedron on the sphere, sign vectors of the
/// cube, and the two endpoints of the segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalCode {
    Pentagon,
    Hexagon,
    Icosahedron,
    Hypercube(usize),
    Segment,
}

pub fn canonical_code(name: CanonicalCode) -> Result<SphericalCode> {
    match name {
        CanonicalCode::Pentagon => circle_code(5),
        CanonicalCode::Hexagon => circle_code(6),
        CanonicalCode::Icosahedron => icosahedron(),
        CanonicalCode::Hypercube(d) => hypercube(d),
        CanonicalCode::Segment => SphericalCode::new(
            NormedSpace::euclidean(1),
            vec![vec![-1.0], vec![1.0]],
        ),
    }
}

fn circle_code(n: usize) -> Result<SphericalCode> {
    let vectors = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    SphericalCode::new(NormedSpace::euclidean(2), vectors)
}

fn icosahedron() -> Result<SphericalCode> {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let scale = (1.0 + phi * phi).sqrt();
    let mut vectors = Vec::with_capacity(12);
    for &a in &[1.0, -1.0] {
        for &b in &[phi, -phi] {
            vectors.push(vec![0.0, a / scale, b / scale]);
            vectors.push(vec![a / scale, b / scale, 0.0]);
            vectors.push(vec![b / scale, 0.0, a / scale]);
        }
    }
    SphericalCode::new(NormedSpace::euclidean(3), vectors)
}

fn hypercube(d: usize) -> Result<SphericalCode> {
    if d == 0 || d > 20 {
        return Err(Error::InvalidInput(format!(
            "hypercube code dimension must be in 1..=20, got {d}"
        )));
    }
    let vectors = (0..1usize << d)
        .map(|i| {
            (0..d)
                .map(|j| if i >> j & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    SphericalCode::new(NormedSpace::linf(d), vectors)
}

/// Closed unit balls at the code vectors. Requires a strict code; the result
/// is an intersecting Besicovitch family containing the origin.
pub fn code_to_family(code: &SphericalCode) -> Result<BallFamily> {
    if !(code.separation() > 1.0) {
        return Err(Error::NotStrict {
            separation: code.separation(),
        });
    }
    let balls: Result<Vec<Ball>> = code
        .vectors()
        .iter()
        .map(|v| Ball::closed(v.clone(), 1.0))
        .collect();
    BallFamily::new(*code.space(), balls?)
}

/// Normalizes an intersecting Besicovitch family into a spherical code:
/// translate the common point to the origin and radially project the centers
/// onto the unit sphere (the dilation making the smallest center norm 1
/// cancels in the projection). For valid inputs the output separation is
/// strictly above 1; this is the content of the equality between the
/// Besicovitch constant and the strict Hadwiger number.
pub fn normalize_family(fam: &BallFamily, common_point: &[f64]) -> Result<SphericalCode> {
    fam.space().check_dim(common_point)?;
    let norm = fam.space().norm();
    let mut vectors = Vec::with_capacity(fam.len());
    for (i, b) in fam.balls().iter().enumerate() {
        let shifted: Vec<f64> = b
            .center
            .iter()
            .zip(common_point)
            .map(|(c, y)| c - y)
            .collect();
        let n = norm_unchecked(norm, shifted.iter().copied());
        if n == 0.0 {
            return Err(Error::InvalidInput(format!(
                "center of ball {i} coincides with the common point"
            )));
        }
        vectors.push(shifted.into_iter().map(|c| c / n).collect());
    }
    SphericalCode::new(*fam.space(), vectors)
}

/// Outcome of a max–min separation search: the best configuration found, its
/// strictness certificate, and the reproducibility context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSearchResult {
    pub code: SphericalCode,
    /// True when the separation exceeds 1 by more than `strict_margin`.
    pub strict: bool,
    pub strict_margin: f64,
    pub seed: u64,
    pub restarts: usize,
    pub iterations_per_restart: usize,
}

struct SearchState {
    points: Vec<Vec<f64>>,
}

impl SearchState {
    fn min_separation(&self, space: &NormedSpace) -> f64 {
        self.min_pair(space).2
    }

    fn min_pair(&self, space: &NormedSpace) -> (usize, usize, f64) {
        let mut best = (0, 1, f64::INFINITY);
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                let d = distance_unchecked(space.norm(), &self.points[i], &self.points[j]);
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        best
    }
}

fn renormalize(space: &NormedSpace, v: &mut [f64], rng: &mut ChaCha8Rng) {
    loop {
        let n = norm_unchecked(space.norm(), v.iter().copied());
        if n > 1e-9 {
            for c in v.iter_mut() {
                *c /= n;
            }
            return;
        }
        for c in v.iter_mut() {
            *c = rng.random::<f64>() * 2.0 - 1.0;
        }
    }
}

/// A subgradient of u ↦ ‖u‖ at u ≠ 0 for the space's norm. For ℓ∞ the mass
/// is split evenly across tied maximal coordinates.
fn norm_subgradient(norm: Norm, u: &[f64]) -> Vec<f64> {
    match norm {
        Norm::P(p) if p == 2.0 => {
            let n = norm_unchecked(norm, u.iter().copied()).max(1e-300);
            u.iter().map(|c| c / n).collect()
        }
        Norm::P(p) if p == 1.0 => u.iter().map(|c| c.signum()).collect(),
        Norm::P(p) => {
            let n = norm_unchecked(norm, u.iter().copied()).max(1e-300);
            u.iter()
                .map(|c| c.signum() * (c.abs() / n).powf(p - 1.0))
                .collect()
        }
        Norm::Infinity => {
            let m = u.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
            let ties = u.iter().filter(|c| c.abs() == m).count().max(1);
            u.iter()
                .map(|c| {
                    if c.abs() == m {
                        c.signum() / ties as f64
                    } else {
                        0.0
                    }
                })
                .collect()
        }
    }
}

/// Projects a movement direction onto the tangent space of the unit sphere
/// at `v`. Without this, steps along the sphere's normal get cancelled by
/// renormalization and flat-faced spheres (ℓ1, ℓ∞) stall.
fn tangent_project(norm: Norm, v: &[f64], g: &mut [f64]) {
    let n = norm_subgradient(norm, v);
    let nn: f64 = n.iter().map(|c| c * c).sum();
    if nn <= 0.0 {
        return;
    }
    let gn: f64 = g.iter().zip(&n).map(|(a, b)| a * b).sum();
    for (gc, nc) in g.iter_mut().zip(&n) {
        *gc -= gn / nn * nc;
    }
}

fn random_state(space: &NormedSpace, n: usize, rng: &mut ChaCha8Rng) -> SearchState {
    let dim = space.dim();
    let points = (0..n)
        .map(|_| {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            renormalize(space, &mut v, rng);
            v
        })
        .collect();
    SearchState { points }
}

/// Repulsion directions weighted by a soft-min over pairs: at sharpness
/// `beta`, pairs near the current minimum dominate.
fn repulsion(
    space: &NormedSpace,
    state: &SearchState,
    beta: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let n = state.points.len();
    let dim = space.dim();
    let mut dmin = f64::INFINITY;
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance_unchecked(space.norm(), &state.points[i], &state.points[j]);
            dist[i][j] = d;
            dist[j][i] = d;
            if d < dmin {
                dmin = d;
            }
        }
    }
    let mut dirs = vec![vec![0.0; dim]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = dist[i][j];
            let w = (-beta * (d - dmin)).exp();
            if w < 1e-16 {
                continue;
            }
            if d < 1e-12 {
                // coincident points: push in a random direction
                for c in dirs[i].iter_mut() {
                    *c += w * (rng.random::<f64>() * 2.0 - 1.0);
                }
            } else {
                let delta: Vec<f64> = (0..dim)
                    .map(|k| state.points[i][k] - state.points[j][k])
                    .collect();
                let grad = norm_subgradient(space.norm(), &delta);
                for k in 0..dim {
                    dirs[i][k] += w * grad[k];
                }
            }
        }
        tangent_project(space.norm(), &state.points[i], &mut dirs[i]);
        // cap the step direction so renormalization stays well conditioned
        let g = dirs[i].iter().map(|c| c * c).sum::<f64>().sqrt();
        if g > 2.0 {
            for c in dirs[i].iter_mut() {
                *c *= 2.0 / g;
            }
        }
    }
    dirs
}

fn anneal(
    space: &NormedSpace,
    state: &mut SearchState,
    iters: usize,
    rng: &mut ChaCha8Rng,
) {
    let phases = 30usize;
    let steps = iters.div_ceil(phases).max(1);
    let beta0 = 8.0_f64;
    let beta1 = 1e6_f64;
    let eta0 = 0.25_f64;
    let eta1 = 1e-3_f64;
    for phase in 0..phases {
        let t = phase as f64 / (phases - 1) as f64;
        let beta = beta0 * (beta1 / beta0).powf(t);
        let eta = eta0 * (eta1 / eta0).powf(t);
        for _ in 0..steps {
            let dirs = repulsion(space, state, beta, rng);
            for (v, g) in state.points.iter_mut().zip(&dirs) {
                for (c, gc) in v.iter_mut().zip(g) {
                    *c += eta * gc;
                }
                renormalize(space, v, rng);
            }
        }
    }
}

/// Monotone hill climb on the true min separation. Each round first proposes
/// a simultaneous repulsive move of all active pairs (good for converging
/// onto rigid configurations), then single-endpoint moves of the current
/// minimum pair (which escape stalls where a joint move trades one pair's
/// slack for another's). Only strict improvements are accepted; the step
/// halves when no proposal improves.
fn polish(space: &NormedSpace, state: &mut SearchState, max_rounds: usize, rng: &mut ChaCha8Rng) {
    let n = state.points.len();
    let dim = space.dim();
    let mut eta = 0.05_f64;
    let mut sep = state.min_separation(space);
    for _ in 0..max_rounds {
        if eta < 1e-13 {
            break;
        }
        let band = sep + eta * 0.5;
        let mut dirs = vec![vec![0.0; dim]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = distance_unchecked(space.norm(), &state.points[i], &state.points[j]);
                if d <= band && d > 1e-12 {
                    let delta: Vec<f64> = (0..dim)
                        .map(|k| state.points[i][k] - state.points[j][k])
                        .collect();
                    let grad = norm_subgradient(space.norm(), &delta);
                    for k in 0..dim {
                        dirs[i][k] += grad[k];
                    }
                }
            }
            tangent_project(space.norm(), &state.points[i], &mut dirs[i]);
        }
        let gmax = dirs
            .iter()
            .map(|g| g.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0_f64, f64::max);

        let mut accepted = false;
        if gmax > 0.0 {
            let scale = eta / gmax;
            let mut proposal = state.points.clone();
            for (v, g) in proposal.iter_mut().zip(&dirs) {
                for (c, gc) in v.iter_mut().zip(g) {
                    *c += scale * gc;
                }
                renormalize(space, v, rng);
            }
            let cand = SearchState { points: proposal };
            let cand_sep = cand.min_separation(space);
            if cand_sep > sep {
                *state = cand;
                sep = cand_sep;
                accepted = true;
            }
        }
        if !accepted {
            let (a, b, d) = state.min_pair(space);
            for (mover, other) in [(a, b), (b, a)] {
                let mut proposal = state.points.clone();
                if d > 1e-12 {
                    let delta: Vec<f64> = (0..dim)
                        .map(|k| state.points[mover][k] - state.points[other][k])
                        .collect();
                    let mut g = norm_subgradient(space.norm(), &delta);
                    tangent_project(space.norm(), &state.points[mover], &mut g);
                    let gn = g.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-12);
                    for (c, gc) in proposal[mover].iter_mut().zip(&g) {
                        *c += eta * gc / gn;
                    }
                } else {
                    for c in proposal[mover].iter_mut() {
                        *c += eta * (rng.random::<f64>() * 2.0 - 1.0);
                    }
                }
                renormalize(space, &mut proposal[mover], rng);
                let cand = SearchState { points: proposal };
                let cand_sep = cand.min_separation(space);
                if cand_sep > sep {
                    *state = cand;
                    sep = cand_sep;
                    accepted = true;
                    break;
                }
            }
        }
        if accepted {
            // slow crawls (boundary slides under renormalization) need the
            // step to recover, not decay monotonically
            eta = (eta * 1.5).min(0.1);
        } else {
            eta *= 0.5;
        }
    }
}

/// Searches for `n` unit vectors maximizing the minimal pairwise separation:
/// annealed soft-min repulsion with renormalization each step, followed by a
/// monotone polish, over seeded multi-restarts. Deterministic for a fixed
/// (seed, restarts), independent of thread count.
pub fn code_search(space: &NormedSpace, n: usize, budget: &SearchBudget) -> Result<CodeSearchResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "code_search requires n >= 2, got {n}"
        )));
    }
    let iters = budget.max_iterations.max(300);
    let polish_rounds = 4 * iters;
    let results: Vec<(f64, Vec<Vec<f64>>)> = (0..budget.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(0x9E3779B9 * r as u64));
            let mut state = random_state(space, n, &mut rng);
            anneal(space, &mut state, iters, &mut rng);
            polish(space, &mut state, polish_rounds, &mut rng);
            (state.min_separation(space), state.points)
        })
        .collect();

    let mut best = 0usize;
    for (i, r) in results.iter().enumerate() {
        if r.0 > results[best].0 {
            best = i;
        }
    }
    let (_, points) = &results[best];
    // re-normalize exactly once more so the unit invariant holds to 1e-9
    let vectors: Vec<Point> = points
        .iter()
        .map(|v| {
            let nrm = norm_unchecked(space.norm(), v.iter().copied());
            v.iter().map(|c| c / nrm).collect()
        })
        .collect();
    let code = SphericalCode::new(*space, vectors)?;
    let strict = code.is_strict(STRICT_MARGIN);
    Ok(CodeSearchResult {
        strict,
        strict_margin: STRICT_MARGIN,
        seed: budget.seed,
        restarts: budget.restarts.max(1),
        iterations_per_restart: iters,
        code,
    })
}

/// Published reference values for the strict kissing constant of euclidean
/// space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownConstant {
    /// The strict value is known exactly.
    Exact(u64),
    /// The strict value is one of the listed candidates.
    Undetermined(Vec<u64>),
    /// Only the non-strict kissing number is known.
    NonStrictKissing(u64),
}

/// Asymptotic reference bounds for the euclidean constants, with the known
/// exact values in low dimensions. The 1+o(1) factors of the source estimates
/// are dropped, so the lower/upper fields are reference curves, not certified
/// bounds at finite d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticBounds {
    pub dimension: usize,
    pub lower: f64,
    pub upper: f64,
    pub lebesgue_ball_lower: f64,
    pub known: Option<KnownConstant>,
    pub caveat: String,
    pub log_convention: String,
}

pub fn asymptotic_bounds(d: usize) -> Result<AsymptoticBounds> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    let df = d as f64;
    let base = 2.0 / 3.0_f64.sqrt();
    let lower = (3.0 * std::f64::consts::PI / 8.0).sqrt()
        * (3.0 / (2.0 * 2.0_f64.sqrt())).ln()
        * df.powf(1.5)
        * base.powf(df);
    let upper = 2.0_f64.powf(0.401 * df);
    let lebesgue_ball_lower =
        (std::f64::consts::PI * (df + 1.0)).sqrt() / 6.0_f64.sqrt() * base.powf(df);
    let known = match d {
        1 => Some(KnownConstant::Exact(2)),
        2 => Some(KnownConstant::Exact(5)),
        3 => Some(KnownConstant::Exact(12)),
        4 => Some(KnownConstant::Undetermined(vec![22, 23, 24])),
        8 => Some(KnownConstant::NonStrictKissing(240)),
        24 => Some(KnownConstant::NonStrictKissing(196_560)),
        _ => None,
    };
    Ok(AsymptoticBounds {
        dimension: d,
        lower,
        upper,
        lebesgue_ball_lower,
        known,
        caveat: "asymptotic reference, 1+o(1) factors dropped; not certified at finite d".into(),
        log_convention: "natural".into(),
    })
}
