//! The acceptance suite: every headline constant and invariant the artifact
//! must reproduce, runnable both as an integration test and through the CLI
//! `reproduce` subcommand. Each criterion is deterministic (fixed seeds) and
//! carries its own runtime budget.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::besicovitch::{depth, greedy_select, validate_family, BallFamily};
use crate::codes::{canonical_code, code_search, code_to_family, normalize_family, CanonicalCode, SphericalCode};
use crate::geometry::{
    angular_lower_bound, ball_contains, Ball, BallKind, Norm, NormedSpace, DEFAULT_TOL,
};
use crate::maxop::{
    maximal_value, weak_constant_search, RadiusWindow, SearchBudget,
};
use crate::measure::{AtomFunction, DiscreteMeasure};
use crate::witnesses::{attainment_measure, extrapolation_constant, witness_weak11};

/// Result of one acceptance criterion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub case: String,
    pub label: String,
    pub target: String,
    pub measured: String,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {} ({}): {} | target {} | measured {} | {} ms",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.case,
            self.label,
            self.target,
            self.measured,
            self.elapsed_ms
        )
    }
}

pub const CASES: [&str; 8] = [
    "d1",
    "pentagon",
    "icosahedron",
    "cubes",
    "attainment",
    "extrapolation",
    "openclosed",
    "roundtrip",
];

/// Runs one named criterion.
pub fn run_case(case: &str) -> Option<CriterionOutcome> {
    match case {
        "d1" => Some(criterion_d1()),
        "pentagon" => Some(criterion_pentagon()),
        "icosahedron" => Some(criterion_icosahedron()),
        "cubes" => Some(criterion_cubes()),
        "attainment" => Some(criterion_attainment()),
        "extrapolation" => Some(criterion_extrapolation()),
        "openclosed" => Some(criterion_openclosed()),
        "roundtrip" => Some(criterion_roundtrip()),
        _ => None,
    }
}

/// Runs the full suite in criterion order.
pub fn run_all() -> Vec<CriterionOutcome> {
    CASES
        .iter()
        .map(|c| run_case(c).expect("listed cases all exist"))
        .collect()
}

fn outcome(
    id: usize,
    case: &str,
    label: &str,
    target: String,
    measured: String,
    passed: bool,
    started: Instant,
    budget_ms: u128,
) -> CriterionOutcome {
    let elapsed_ms = started.elapsed().as_millis();
    CriterionOutcome {
        id,
        case: case.into(),
        label: label.into(),
        target,
        measured,
        passed: passed && elapsed_ms <= budget_ms,
        elapsed_ms,
        budget_ms,
    }
}

fn random_line_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_atoms);
    let atoms = (0..n)
        .map(|_| {
            let x = rng.random_range(-5.0..5.0);
            let w = 10f64.powf(rng.random_range(-2.0..2.0));
            (vec![x], w)
        })
        .collect();
    DiscreteMeasure::new(NormedSpace::euclidean(1), atoms).expect("positive weights")
}

fn random_measure(rng: &mut ChaCha8Rng, space: NormedSpace, max_atoms: usize) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_atoms);
    let atoms = (0..n)
        .map(|_| {
            let p: Vec<f64> = (0..space.dim()).map(|_| rng.random_range(-5.0..5.0)).collect();
            let w = 10f64.powf(rng.random_range(-2.0..2.0));
            (p, w)
        })
        .collect();
    DiscreteMeasure::new(space, atoms).expect("positive weights")
}

/// Sharp constant in dimension 1: no discrete measure on the line beats 2,
/// and the segment witness gets arbitrarily close.
fn criterion_d1() -> CriterionOutcome {
    let started = Instant::now();
    let budget = SearchBudget {
        restarts: 24,
        max_iterations: 300,
        seed: 1001,
        exhaustive_threshold: 12,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let mu = random_line_measure(&mut rng, 8);
        let est = weak_constant_search(&mu, 1.0, &budget).expect("nonempty measure");
        worst = worst.max(est.value);
    }
    let segment = canonical_code(CanonicalCode::Segment).expect("canonical");
    let w = witness_weak11(&segment, 1e-4).expect("strict code");
    let passed = worst <= 2.0 + 1e-6 && w.computed.value >= 1.9996;
    outcome(
        1,
        "d1",
        "line constant is 2",
        "search <= 2+1e-6 on 200 measures; segment witness >= 1.9996".into(),
        format!("worst search {worst:.9}; witness {:.6}", w.computed.value),
        passed,
        started,
        60_000,
    )
}

/// Sharp constant for discs in the plane: pentagon depth 5, witness near 5,
/// and no strict 6-point code (hexagon rigidity).
fn criterion_pentagon() -> CriterionOutcome {
    let started = Instant::now();
    let pentagon = canonical_code(CanonicalCode::Pentagon).expect("canonical");
    let fam = code_to_family(&pentagon).expect("strict");
    let d = depth(&fam, DEFAULT_TOL).expect("small family");
    let w = witness_weak11(&pentagon, 1e-4).expect("strict code");
    let budget = SearchBudget {
        restarts: 32,
        max_iterations: 2000,
        seed: 1002,
        exhaustive_threshold: 12,
    };
    let search = code_search(&NormedSpace::euclidean(2), 6, &budget).expect("n >= 2");
    let sep = search.code.separation();
    let passed = d.depth == 5 && w.computed.value >= 4.9980 && (sep - 1.0).abs() <= 1e-5;
    outcome(
        2,
        "pentagon",
        "planar euclidean constant is 5",
        "depth 5; witness >= 4.9980; 6-point search separation 1 +- 1e-5".into(),
        format!(
            "depth {}; witness {:.6}; separation {:.9}",
            d.depth, w.computed.value, sep
        ),
        passed,
        started,
        120_000,
    )
}

/// Sharp constant for balls in space: icosahedron depth 12 and a 12-point
/// code essentially matching the icosahedral separation.
fn criterion_icosahedron() -> CriterionOutcome {
    let started = Instant::now();
    let ico = canonical_code(CanonicalCode::Icosahedron).expect("canonical");
    let fam = code_to_family(&ico).expect("strict");
    let d = depth(&fam, DEFAULT_TOL).expect("small family");
    let budget = SearchBudget {
        restarts: 40,
        max_iterations: 2000,
        seed: 1003,
        exhaustive_threshold: 12,
    };
    let search = code_search(&NormedSpace::euclidean(3), 12, &budget).expect("n >= 2");
    let sep = search.code.separation();
    let passed = d.depth == 12 && sep >= 1.0514 - 1e-3;
    outcome(
        3,
        "icosahedron",
        "spatial euclidean constant is 12",
        "depth 12; 12-point search separation >= 1.0504".into(),
        format!("depth {}; separation {:.9}", d.depth, sep),
        passed,
        started,
        300_000,
    )
}

/// Cubes: the sign-vector family has depth exactly 2^d and the witness
/// quotient approaches 2^d.
fn criterion_cubes() -> CriterionOutcome {
    let started = Instant::now();
    let mut passed = true;
    let mut measured = Vec::new();
    for d in 1..=4usize {
        let code = canonical_code(CanonicalCode::Hypercube(d)).expect("canonical");
        let fam = code_to_family(&code).expect("strict");
        let report = depth(&fam, DEFAULT_TOL).expect("small family");
        let w = witness_weak11(&code, 1e-4).expect("strict code");
        let want = 1usize << d;
        passed &= report.depth == want && w.computed.value >= want as f64 - 0.01;
        measured.push(format!("d={d}: depth {} witness {:.4}", report.depth, w.computed.value));
    }
    outcome(
        4,
        "cubes",
        "cube constant is 2^d, attained",
        "depth = 2^d and witness >= 2^d - 0.01 for d = 1..4".into(),
        measured.join("; "),
        passed,
        started,
        120_000,
    )
}

/// The attainment sequence for the pentagon: block quotients follow
/// (5n+1)/(n+1) and increase toward 5.
fn criterion_attainment() -> CriterionOutcome {
    let started = Instant::now();
    let pentagon = canonical_code(CanonicalCode::Pentagon).expect("canonical");
    let packages = attainment_measure(&pentagon, 50).expect("isolated blocks");
    let mut passed = packages.len() == 50;
    let mut worst_rel = 0.0_f64;
    let mut prev = 0.0_f64;
    for (i, pkg) in packages.iter().enumerate() {
        let n = (i + 1) as f64;
        let formula = (5.0 * n + 1.0) / (n + 1.0);
        let rel = (pkg.computed.value - formula).abs() / formula;
        worst_rel = worst_rel.max(rel);
        passed &= rel <= 1e-9 && pkg.computed.value > prev;
        prev = pkg.computed.value;
    }
    passed &= prev < 5.0;
    outcome(
        5,
        "attainment",
        "block quotients (5n+1)/(n+1) increase toward 5",
        "relative error <= 1e-9 for n = 1..50, strictly increasing".into(),
        format!("worst relative error {worst_rel:.2e}; last quotient {prev:.6}"),
        passed,
        started,
        60_000,
    )
}

/// Extrapolation: a measured weak-(2,2) bound N implies the weak-(1,1)
/// quotient is at most ⌊4·N²⌋ on every instance.
fn criterion_extrapolation() -> CriterionOutcome {
    let started = Instant::now();
    let budget = SearchBudget {
        restarts: 16,
        max_iterations: 250,
        seed: 1006,
        exhaustive_threshold: 12,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xE27);
    let norms = [Norm::P(1.0), Norm::P(2.0), Norm::Infinity];
    let mut violations = 0usize;
    let mut max_ratio = 0.0_f64;
    for trial in 0..100 {
        let dim = 1 + trial % 2;
        let space = NormedSpace::new(dim, norms[trial % 3]).expect("valid space");
        let mu = random_measure(&mut rng, space, 10);
        let weak11 = weak_constant_search(&mu, 1.0, &budget).expect("nonempty").value;
        let weak22 = weak_constant_search(&mu, 2.0, &budget).expect("nonempty").value;
        let cap = extrapolation_constant(2.0, weak22.ceil().max(1.0)).expect("valid") as f64;
        if weak11 > cap + 1e-9 {
            violations += 1;
        }
        max_ratio = max_ratio.max(weak11 / cap);
    }
    outcome(
        6,
        "extrapolation",
        "weak-(2,2) bound caps weak-(1,1) via the extrapolation constant",
        "0 violations on 100 random instances".into(),
        format!("{violations} violations; max quotient/cap ratio {max_ratio:.4}"),
        violations == 0,
        started,
        120_000,
    )
}

/// Open/closed equivalence of the localized operator and the angular-distance
/// inequality, both at 1e5 randomized checks.
fn criterion_openclosed() -> CriterionOutcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C7);
    let norms = [Norm::P(1.0), Norm::P(1.5), Norm::P(2.0), Norm::P(3.0), Norm::Infinity];
    let mut kind_violations = 0usize;
    for trial in 0..100_000 {
        let dim = 1 + trial % 3;
        let space = NormedSpace::new(dim, norms[trial % 5]).expect("valid space");
        let mu = random_measure(&mut rng, space, 5);
        let f = AtomFunction::new(
            (0..mu.len()).map(|_| rng.random_range(0.0..3.0)).collect(),
        )
        .expect("nonnegative");
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-6.0..6.0)).collect();
        let lower = if rng.random::<bool>() { 0.0 } else { rng.random_range(0.0..3.0) };
        let upper = if rng.random::<bool>() {
            f64::INFINITY
        } else {
            lower + rng.random_range(0.1..6.0)
        };
        let window = RadiusWindow::new(lower, upper).expect("lower < upper");
        let open = maximal_value(&mu, &f, &x, &window, BallKind::Open).expect("valid");
        let closed = maximal_value(&mu, &f, &x, &window, BallKind::Closed).expect("valid");
        if (open.value - closed.value).abs() > 1e-9 {
            kind_violations += 1;
        }
    }
    let mut angular_violations = 0usize;
    for trial in 0..100_000 {
        let dim = 1 + trial % 4;
        let space = NormedSpace::new(dim, norms[trial % 5]).expect("valid space");
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            loop {
                let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
                if v.iter().any(|&c| c != 0.0) {
                    return v;
                }
            }
        };
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let (lhs, rhs) = angular_lower_bound(&space, &x, &y).expect("nonzero");
        if lhs < rhs - 1e-9 {
            angular_violations += 1;
        }
    }
    outcome(
        7,
        "openclosed",
        "open/closed equivalence and angular inequality",
        "0 violations in 1e5 checks each at 1e-9".into(),
        format!("{kind_violations} kind violations; {angular_violations} angular violations"),
        kind_violations == 0 && angular_violations == 0,
        started,
        60_000,
    )
}

fn perturbed_strict_code(rng: &mut ChaCha8Rng, which: usize) -> SphericalCode {
    let base = match which % 4 {
        0 => canonical_code(CanonicalCode::Pentagon),
        1 => canonical_code(CanonicalCode::Icosahedron),
        2 => canonical_code(CanonicalCode::Hypercube(2)),
        _ => canonical_code(CanonicalCode::Hypercube(3)),
    }
    .expect("canonical");
    loop {
        let space = *base.space();
        let vectors: Vec<Vec<f64>> = base
            .vectors()
            .iter()
            .map(|v| {
                let jittered: Vec<f64> =
                    v.iter().map(|c| c + rng.random_range(-0.015..0.015)).collect();
                let n = crate::geometry::norm_eval(&space, &jittered).expect("dim ok");
                jittered.into_iter().map(|c| c / n).collect()
            })
            .collect();
        if let Ok(code) = SphericalCode::new(space, vectors) {
            if code.separation() > 1.0 + 1e-6 {
                return code;
            }
        }
    }
}

fn random_family(rng: &mut ChaCha8Rng) -> BallFamily {
    let dim = rng.random_range(1..=3);
    let norms = [Norm::P(1.0), Norm::P(2.0), Norm::Infinity];
    let space = NormedSpace::new(dim, norms[rng.random_range(0..3)]).expect("valid space");
    let kind = if rng.random::<bool>() { BallKind::Open } else { BallKind::Closed };
    let n = rng.random_range(2..=8);
    let balls = (0..n)
        .map(|_| {
            let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
            Ball::new(c, rng.random_range(0.05..2.0), kind).expect("positive radius")
        })
        .collect();
    BallFamily::new(space, balls).expect("nonempty")
}

/// Round-trip between strict codes and unit-ball families, and the greedy
/// selection postconditions, on 1e4 random instances each.
fn criterion_roundtrip() -> CriterionOutcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x87);
    let mut roundtrip_failures = 0usize;
    for i in 0..10_000 {
        let code = perturbed_strict_code(&mut rng, i);
        let fam = code_to_family(&code).expect("strict");
        let origin = vec![0.0; code.space().dim()];
        let back = normalize_family(&fam, &origin).expect("centers off origin");
        let mut ok = back.separation() > 1.0;
        for (a, b) in code.vectors().iter().zip(back.vectors()) {
            for (x, y) in a.iter().zip(b) {
                ok &= (x - y).abs() <= 1e-9;
            }
        }
        if !ok {
            roundtrip_failures += 1;
        }
    }
    let mut greedy_failures = 0usize;
    for _ in 0..10_000 {
        let fam = random_family(&mut rng);
        let selected = greedy_select(&fam, DEFAULT_TOL);
        let mut ok = validate_family(&selected, DEFAULT_TOL).is_besicovitch;
        for b in fam.balls() {
            let covered = selected
                .balls()
                .iter()
                .any(|s| ball_contains(fam.space(), s, &b.center, DEFAULT_TOL).expect("dim ok"));
            ok &= covered;
        }
        if !ok {
            greedy_failures += 1;
        }
    }
    outcome(
        8,
        "roundtrip",
        "code/family round-trip and greedy postconditions",
        "0 failures on 1e4 round-trips and 1e4 greedy runs".into(),
        format!("{roundtrip_failures} round-trip failures; {greedy_failures} greedy failures"),
        roundtrip_failures == 0 && greedy_failures == 0,
        started,
        120_000,
    )
}
