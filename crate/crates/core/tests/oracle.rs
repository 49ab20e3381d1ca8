//! Brute-force oracles checked against the exact engine paths.
//!
//! The oracles here deliberately avoid the prefix-group shortcut: maximal
//! values come from a dense radius grid plus the exact atom distances, depth
//! comes from a grid scan of the plane, and feasibility is cross-checked
//! through the Helly property. Agreement on small instances certifies the
//! engine's algorithmic contracts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use besimax_core::{
    ball_contains, depth, distance, maximal_value, weak_quotient, AtomFunction, Ball, BallFamily,
    BallKind, DiscreteMeasure, Norm, NormedSpace, RadiusWindow, DEFAULT_TOL,
};

const GRID_RADII: usize = 100_000;

/// Supremum of ball averages over a dense radius grid plus every atom
/// distance and every midpoint between consecutive candidate boundaries.
fn oracle_maximal_value(
    mu: &DiscreteMeasure,
    f: &AtomFunction,
    x: &[f64],
    window: &RadiusWindow,
    kind: BallKind,
) -> f64 {
    let dists: Vec<f64> = mu
        .atoms()
        .iter()
        .map(|a| distance(mu.space(), &a.point, x).unwrap())
        .collect();
    let max_dist = dists.iter().cloned().fold(0.0_f64, f64::max);

    let mut candidates: Vec<f64> = dists.clone();
    let mut bounds = dists.clone();
    bounds.push(window.lower());
    if window.upper().is_finite() {
        bounds.push(window.upper());
    }
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for pair in bounds.windows(2) {
        candidates.push(0.5 * (pair[0] + pair[1]));
    }
    candidates.push(window.lower() + 1.0);
    candidates.push(window.lower() + max_dist + 1.0);
    let hi = window.upper().min(window.lower() + max_dist + 2.0);
    if hi > window.lower() {
        let step = (hi - window.lower()) / (GRID_RADII as f64 + 1.0);
        for k in 1..=GRID_RADII {
            candidates.push(window.lower() + step * k as f64);
        }
    }

    let mut best: Option<f64> = None;
    for r in candidates {
        if !(r > window.lower() && r < window.upper()) {
            continue;
        }
        let mut mass = 0.0;
        let mut integral = 0.0;
        for ((atom, &v), &d) in mu.atoms().iter().zip(f.values()).zip(&dists) {
            let inside = match kind {
                BallKind::Closed => d <= r,
                BallKind::Open => d < r,
            };
            if inside {
                mass += atom.weight;
                integral += v * atom.weight;
            }
        }
        if mass > 0.0 {
            let avg = integral / mass;
            if best.map_or(true, |b| avg > b) {
                best = Some(avg);
            }
        }
    }
    best.unwrap_or(0.0)
}

fn random_instance(
    rng: &mut ChaCha8Rng,
    dim: usize,
    norm: Norm,
    max_atoms: usize,
) -> (DiscreteMeasure, AtomFunction) {
    let space = NormedSpace::new(dim, norm).unwrap();
    let n = rng.random_range(1..=max_atoms);
    let atoms: Vec<(Vec<f64>, f64)> = (0..n)
        .map(|_| {
            let p: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
            (p, 10f64.powf(rng.random_range(-1.5..1.5)))
        })
        .collect();
    let mu = DiscreteMeasure::new(space, atoms).unwrap();
    let f = AtomFunction::new((0..mu.len()).map(|_| rng.random_range(0.0..5.0)).collect())
        .unwrap();
    (mu, f)
}

#[test]
fn maximal_value_matches_radius_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let norms = [Norm::P(1.0), Norm::P(2.0), Norm::P(3.0), Norm::Infinity];
    for trial in 0..15 {
        let dim = 1 + trial % 2;
        let (mu, f) = random_instance(&mut rng, dim, norms[trial % 4], 6);
        for window in [
            RadiusWindow::full(),
            RadiusWindow::new(rng.random_range(0.0..2.0), f64::INFINITY).unwrap(),
        ] {
            for kind in [BallKind::Closed, BallKind::Open] {
                let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
                let engine = maximal_value(&mu, &f, &x, &window, kind).unwrap().value;
                let oracle = oracle_maximal_value(&mu, &f, &x, &window, kind);
                assert!(
                    (engine - oracle).abs() <= 1e-12 * engine.max(1.0),
                    "trial {trial}: engine {engine} vs oracle {oracle} (kind {kind:?})"
                );
            }
        }
    }
}

#[test]
fn maximal_value_matches_oracle_on_bounded_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for trial in 0..15 {
        let (mu, f) = random_instance(&mut rng, 1, Norm::P(2.0), 5);
        let lo = rng.random_range(0.0..3.0);
        let hi = lo + rng.random_range(0.05..4.0);
        let window = RadiusWindow::new(lo, hi).unwrap();
        for kind in [BallKind::Closed, BallKind::Open] {
            let x = vec![rng.random_range(-5.0..5.0)];
            let engine = maximal_value(&mu, &f, &x, &window, kind).unwrap().value;
            let oracle = oracle_maximal_value(&mu, &f, &x, &window, kind);
            assert!(
                (engine - oracle).abs() <= 1e-12 * engine.max(1.0),
                "trial {trial}: engine {engine} vs oracle {oracle} (kind {kind:?}, window {window:?})"
            );
        }
    }
}

/// μ{Mf ≥ t} recomputed from oracle maximal values, maximized over oracle
/// thresholds: an independent route to the weak-type quotient.
#[test]
fn weak_quotient_matches_threshold_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for trial in 0..12 {
        let dim = 1 + trial % 2;
        let (mu, f) = random_instance(&mut rng, dim, Norm::P(2.0), 5);
        if besimax_core::l_norm(&mu, &f, 1.0).unwrap() <= 0.0 {
            continue;
        }
        for p in [1.0, 2.0] {
            let oracle_vals: Vec<f64> = mu
                .atoms()
                .iter()
                .map(|a| {
                    oracle_maximal_value(&mu, &f, &a.point, &RadiusWindow::full(), BallKind::Closed)
                })
                .collect();
            let fnorm = besimax_core::l_norm(&mu, &f, p).unwrap();
            let mut oracle_best = 0.0_f64;
            for &t in &oracle_vals {
                if t <= 0.0 {
                    continue;
                }
                let mass: f64 = mu
                    .atoms()
                    .iter()
                    .zip(&oracle_vals)
                    .filter(|(_, &v)| v >= t - 1e-12)
                    .map(|(a, _)| a.weight)
                    .sum();
                oracle_best = oracle_best.max(t * mass.powf(1.0 / p) / fnorm);
            }
            let engine = weak_quotient(&mu, &f, p).unwrap().value;
            assert!(
                (engine - oracle_best).abs() <= 1e-9 * engine.max(1.0),
                "trial {trial} p {p}: engine {engine} vs oracle {oracle_best}"
            );
        }
    }
}

/// Maximum multiplicity over a grid scan of the bounding box: a lower bound
/// on the true depth, equal to it when witness regions are wider than the
/// grid pitch.
fn grid_depth(fam: &BallFamily, resolution: usize) -> usize {
    let dim = fam.space().dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for b in fam.balls() {
        for k in 0..dim {
            lo[k] = lo[k].min(b.center[k] - b.radius);
            hi[k] = hi[k].max(b.center[k] + b.radius);
        }
    }
    let mut best = 0usize;
    let mut point = vec![0.0; dim];
    let total = resolution.pow(dim as u32);
    for idx in 0..total {
        let mut rest = idx;
        for k in 0..dim {
            let i = rest % resolution;
            rest /= resolution;
            point[k] = lo[k] + (hi[k] - lo[k]) * (i as f64 + 0.5) / resolution as f64;
        }
        let count = fam
            .balls()
            .iter()
            .filter(|b| ball_contains(fam.space(), b, &point, DEFAULT_TOL).unwrap())
            .count();
        best = best.max(count);
    }
    best
}

#[test]
fn depth_matches_grid_scan_on_generous_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    for trial in 0..8 {
        let n = rng.random_range(2..=5);
        let balls: Vec<Ball> = (0..n)
            .map(|_| {
                let c = vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
                Ball::closed(c, rng.random_range(1.5..3.0)).unwrap()
            })
            .collect();
        let fam = BallFamily::new(NormedSpace::euclidean(2), balls).unwrap();
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        let grid = grid_depth(&fam, 1000);
        assert!(
            grid <= report.depth,
            "trial {trial}: grid {grid} exceeded solver depth {}",
            report.depth
        );
        assert_eq!(
            grid, report.depth,
            "trial {trial}: generous family should agree exactly"
        );
    }
}

#[test]
fn depth_never_below_grid_scan_on_skinny_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    for _ in 0..8 {
        let n = rng.random_range(2..=5);
        let balls: Vec<Ball> = (0..n)
            .map(|_| {
                let c = vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
                Ball::closed(c, rng.random_range(0.2..1.5)).unwrap()
            })
            .collect();
        let fam = BallFamily::new(NormedSpace::euclidean(2), balls).unwrap();
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        let grid = grid_depth(&fam, 1000);
        assert!(grid <= report.depth);
    }
}

#[test]
fn depth_one_dimensional_grid_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(76);
    for _ in 0..20 {
        let n = rng.random_range(2..=5);
        let balls: Vec<Ball> = (0..n)
            .map(|_| {
                Ball::closed(vec![rng.random_range(-3.0..3.0)], rng.random_range(0.5..2.0))
                    .unwrap()
            })
            .collect();
        let fam = BallFamily::new(NormedSpace::euclidean(1), balls).unwrap();
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        let grid = grid_depth(&fam, 1000);
        assert_eq!(grid, report.depth);
    }
}

/// In the plane, if every 3-subset of a pairwise-intersecting family has a
/// common point, the whole family must: disagreement would expose a broken
/// feasibility solver.
#[test]
fn helly_cross_check_validates_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let space = NormedSpace::euclidean(2);
    let mut whole_checked = 0usize;
    for _ in 0..60 {
        let n = rng.random_range(4..=6);
        let balls: Vec<Ball> = (0..n)
            .map(|_| {
                let c = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                Ball::closed(c, rng.random_range(1.0..2.5)).unwrap()
            })
            .collect();
        // only consider families whose intersection graph is complete
        let complete = (0..n).all(|i| {
            (0..n).all(|j| {
                i == j
                    || distance(&space, &balls[i].center, &balls[j].center).unwrap()
                        <= balls[i].radius + balls[j].radius
            })
        });
        if !complete {
            continue;
        }
        let fam = BallFamily::new(space, balls).unwrap();
        let mut all_triples_feasible = true;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let sub = BallFamily::new(
                        space,
                        vec![
                            fam.balls()[a].clone(),
                            fam.balls()[b].clone(),
                            fam.balls()[c].clone(),
                        ],
                    )
                    .unwrap();
                    if depth(&sub, DEFAULT_TOL).unwrap().depth != 3 {
                        all_triples_feasible = false;
                    }
                }
            }
        }
        if all_triples_feasible {
            let report = depth(&fam, DEFAULT_TOL).unwrap();
            assert_eq!(
                report.depth, n,
                "all triples feasible but whole family reported depth {} < {n}",
                report.depth
            );
            whole_checked += 1;
        }
    }
    assert!(whole_checked >= 10, "too few complete instances generated");
}
