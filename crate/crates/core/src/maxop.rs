//! Exact evaluation of the localized centered maximal operator on discrete
//! measures, and weak-type quotient / constant computation.
//!
//! For a discrete measure the average over a ball centered at `x` only
//! changes when the radius crosses an atom distance, so the supremum over
//! radii is attained on distance-sorted prefix groups. Evaluation is exact:
//! no radius grid is involved.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance_unchecked, BallKind};
use crate::measure::{l_norm, AtomFunction, DiscreteMeasure};

/// Interval (lower, upper) of admissible radii, open at both ends.
/// `upper` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusWindow {
    lower: f64,
    upper: f64,
}

impl RadiusWindow {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower >= 0.0) || !lower.is_finite() {
            return Err(Error::InvalidInput(format!(
                "window lower bound must be finite and >= 0, got {lower}"
            )));
        }
        if !(upper > lower) {
            return Err(Error::InvalidInput(format!(
                "window must satisfy lower < upper, got ({lower}, {upper})"
            )));
        }
        Ok(RadiusWindow { lower, upper })
    }

    /// The unrestricted window (0, ∞).
    pub fn full() -> Self {
        RadiusWindow {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

impl Default for RadiusWindow {
    fn default() -> Self {
        RadiusWindow::full()
    }
}

/// Budget for the randomized searches (weak-type constants, code search).
/// The seed is always recorded in outputs so runs can be reproduced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Exhaustive subset-indicator enumeration runs when the atom count is
    /// at most this.
    pub exhaustive_threshold: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            restarts: 64,
            max_iterations: 600,
            seed: 42,
            exhaustive_threshold: 12,
        }
    }
}

/// Value of the maximal operator at one point, with the empty-supremum flag
/// and a representative radius attaining (or approaching) the value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalValue {
    pub value: f64,
    /// True when no admissible ball has positive mass; the value is then 0 by
    /// convention.
    pub empty_supremum: bool,
    pub witness_radius: Option<f64>,
}

/// A certified lower bound on a weak-type (p,p) quotient, together with the
/// function and threshold that realize it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakTypeEstimate {
    pub value: f64,
    pub certificate_f: AtomFunction,
    pub certificate_t: f64,
    /// True when the estimate came from exhaustive enumeration of subset
    /// indicators (exact within that class; still a lower bound overall).
    pub exact: bool,
}

/// One distance-sorted prefix group at a fixed center: atoms in
/// `order[..end]` lie within a common distance of the center, and that
/// distance strictly increases between consecutive groups.
#[derive(Clone, Debug)]
struct Group {
    end: usize,
    admissible: bool,
    witness_radius: f64,
}

#[derive(Clone, Debug)]
struct CenterTable {
    order: Vec<usize>,
    groups: Vec<Group>,
}

/// Closed balls of radius r realize prefix k for r ∈ [d_k, d_next);
/// open balls for r ∈ (d_k, d_next]. Admissibility is nonemptiness of the
/// intersection with the window (lower, upper). For open windows the two
/// conditions select the same prefixes, which is the discrete form of the
/// open/closed equivalence of the operator.
fn prefix_admissible(kind: BallKind, d_k: f64, d_next: f64, w: &RadiusWindow) -> bool {
    match kind {
        BallKind::Closed => {
            if d_k > w.lower {
                d_k < w.upper
            } else {
                d_next > w.lower
            }
        }
        BallKind::Open => {
            if d_k <= w.lower {
                d_next > w.lower
            } else {
                d_k < w.upper
            }
        }
    }
}

fn representative_radius(kind: BallKind, d_k: f64, d_next: f64, w: &RadiusWindow) -> f64 {
    let interior = |lo: f64, hi: f64| {
        if hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            lo + 1.0
        }
    };
    match kind {
        BallKind::Closed => {
            if d_k > w.lower && d_k < w.upper {
                d_k
            } else {
                interior(w.lower, d_next.min(w.upper))
            }
        }
        BallKind::Open => {
            if d_next > w.lower && d_next < w.upper {
                d_next
            } else {
                interior(w.lower.max(d_k), d_next.min(w.upper))
            }
        }
    }
}

fn center_table(
    mu: &DiscreteMeasure,
    x: &[f64],
    window: &RadiusWindow,
    kind: BallKind,
) -> CenterTable {
    let norm = mu.space().norm();
    let mut order: Vec<usize> = (0..mu.len()).collect();
    let dist: Vec<f64> = mu
        .atoms()
        .iter()
        .map(|a| distance_unchecked(norm, &a.point, x))
        .collect();
    order.sort_by(|&i, &j| dist[i].partial_cmp(&dist[j]).expect("finite distances"));

    let mut groups = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let d_k = dist[order[start]];
        let mut end = start + 1;
        while end < order.len() && dist[order[end]] == d_k {
            end += 1;
        }
        let d_next = if end < order.len() {
            dist[order[end]]
        } else {
            f64::INFINITY
        };
        let admissible = prefix_admissible(kind, d_k, d_next, window);
        let witness_radius = if admissible {
            representative_radius(kind, d_k, d_next, window)
        } else {
            f64::NAN
        };
        groups.push(Group {
            end,
            admissible,
            witness_radius,
        });
        start = end;
    }
    CenterTable { order, groups }
}

fn eval_table(table: &CenterTable, weights: &[f64], values: &[f64]) -> MaximalValue {
    let mut mass = 0.0;
    let mut integral = 0.0;
    let mut pos = 0;
    let mut best = f64::NEG_INFINITY;
    let mut best_radius = None;
    for g in &table.groups {
        while pos < g.end {
            let i = table.order[pos];
            mass += weights[i];
            integral += values[i] * weights[i];
            pos += 1;
        }
        if g.admissible && mass > 0.0 {
            let avg = integral / mass;
            if avg > best {
                best = avg;
                best_radius = Some(g.witness_radius);
            }
        }
    }
    if best == f64::NEG_INFINITY {
        MaximalValue {
            value: 0.0,
            empty_supremum: true,
            witness_radius: None,
        }
    } else {
        MaximalValue {
            value: best,
            empty_supremum: false,
            witness_radius: best_radius,
        }
    }
}

/// M_{(s,S),μ} f(x) for balls of the given kind: the exact supremum of
/// ball averages over admissible radii, or 0 (flagged) when no admissible
/// ball has positive mass.
pub fn maximal_value(
    mu: &DiscreteMeasure,
    f: &AtomFunction,
    x: &[f64],
    window: &RadiusWindow,
    kind: BallKind,
) -> Result<MaximalValue> {
    f.check_aligned(mu)?;
    mu.space().check_dim(x)?;
    let weights: Vec<f64> = mu.atoms().iter().map(|a| a.weight).collect();
    let table = center_table(mu, x, window, kind);
    Ok(eval_table(&table, &weights, f.values()))
}

/// Prefix tables for every atom center of a fixed measure; lets many
/// functions be evaluated against the same measure without re-sorting.
pub(crate) struct Evaluator {
    weights: Vec<f64>,
    tables: Vec<CenterTable>,
}

impl Evaluator {
    pub(crate) fn new(mu: &DiscreteMeasure, window: &RadiusWindow, kind: BallKind) -> Self {
        let weights: Vec<f64> = mu.atoms().iter().map(|a| a.weight).collect();
        let tables = mu
            .atoms()
            .iter()
            .map(|a| center_table(mu, &a.point, window, kind))
            .collect();
        Evaluator { weights, tables }
    }

    /// M f at every atom center.
    fn max_at_atoms(&self, values: &[f64]) -> Vec<f64> {
        self.tables
            .iter()
            .map(|t| eval_table(t, &self.weights, values).value)
            .collect()
    }

    /// Best weak-type (p,p) quotient of the function over all thresholds,
    /// with the maximizing threshold. `None` when the function has zero norm.
    fn quotient(&self, values: &[f64], p: f64) -> Option<(f64, f64)> {
        let norm_p: f64 = if p == 1.0 {
            values
                .iter()
                .zip(&self.weights)
                .map(|(&v, &w)| v * w)
                .sum()
        } else {
            values
                .iter()
                .zip(&self.weights)
                .map(|(&v, &w)| v.powf(p) * w)
                .sum::<f64>()
                .powf(1.0 / p)
        };
        if !(norm_p > 0.0) {
            return None;
        }
        let maxvals = self.max_at_atoms(values);
        let mut idx: Vec<usize> = (0..maxvals.len()).collect();
        idx.sort_by(|&i, &j| maxvals[j].partial_cmp(&maxvals[i]).expect("finite"));
        let mut cum = 0.0;
        let mut best: Option<(f64, f64)> = None;
        for (rank, &i) in idx.iter().enumerate() {
            cum += self.weights[i];
            let v = maxvals[i];
            // only evaluate at the last atom of each tie run: cum is then μ{Mf ≥ v}
            let last_of_run = rank + 1 == idx.len() || maxvals[idx[rank + 1]] < v;
            if last_of_run && v > 0.0 {
                let q = v * cum.powf(1.0 / p) / norm_p;
                if best.map_or(true, |(bq, _)| q > bq) {
                    best = Some((q, v));
                }
            }
        }
        best
    }
}

/// Weak-type (p,p) quotient of a single function: the supremum over
/// thresholds t of t·μ{Mf ≥ t}^{1/p}/‖f‖_p, computed exactly (the level
/// measure only jumps at values of Mf at atoms).
pub fn weak_quotient(mu: &DiscreteMeasure, f: &AtomFunction, p: f64) -> Result<WeakTypeEstimate> {
    f.check_aligned(mu)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "weak_quotient requires finite p >= 1, got {p}"
        )));
    }
    if l_norm(mu, f, p)? <= 0.0 {
        return Err(Error::InvalidInput(
            "weak_quotient requires a function with positive norm".into(),
        ));
    }
    let eval = Evaluator::new(mu, &RadiusWindow::full(), BallKind::Closed);
    let (value, t) = eval
        .quotient(f.values(), p)
        .expect("norm checked positive above");
    Ok(WeakTypeEstimate {
        value,
        certificate_f: f.clone(),
        certificate_t: t,
        exact: false,
    })
}

struct Candidate {
    value: f64,
    threshold: f64,
    values: Vec<f64>,
}

fn better(best: &mut Option<Candidate>, cand: Candidate) {
    if best.as_ref().map_or(true, |b| cand.value > b.value) {
        *best = Some(cand);
    }
}

fn ascend(eval: &Evaluator, p: f64, iters: usize, start: Vec<f64>, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let n = start.len();
    let mut values = start;
    let mut current = eval.quotient(&values, p)?;
    let mut stall = 0usize;
    for _ in 0..iters {
        let i = rng.random_range(0..n);
        let old = values[i];
        let fresh: f64 = (rng.random::<f64>() * 4.0 - 2.0).exp();
        let mut improved = false;
        for cand in [0.0, old * 0.25, old * 0.5, old * 2.0, old * 4.0, fresh] {
            if cand == old {
                continue;
            }
            values[i] = cand;
            if !values.iter().any(|&v| v > 0.0) {
                continue;
            }
            if let Some(q) = eval.quotient(&values, p) {
                if q.0 > current.0 {
                    current = q;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            values[i] = old;
            stall += 1;
            if stall > 6 * n {
                break;
            }
        } else {
            stall = 0;
            // quotients are scale-invariant; keep magnitudes tame
            let m = values.iter().cloned().fold(0.0_f64, f64::max);
            if m > 1e12 || (m > 0.0 && m < 1e-12) {
                for v in values.iter_mut() {
                    *v /= m;
                }
            }
        }
    }
    Some(Candidate {
        value: current.0,
        threshold: current.1,
        values,
    })
}

/// Certified lower bound on the weak-type (p,p) constant of the measure:
/// evaluates every single-atom indicator, exhausts all subset indicators when
/// the atom count is within the budget's threshold, and runs seeded
/// multi-restart coordinate ascent over function values. Deterministic for a
/// fixed (seed, restarts), independent of thread count.
pub fn weak_constant_search(
    mu: &DiscreteMeasure,
    p: f64,
    budget: &SearchBudget,
) -> Result<WeakTypeEstimate> {
    if mu.is_empty() {
        return Err(Error::InvalidInput(
            "weak_constant_search requires a nonempty measure".into(),
        ));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "weak_constant_search requires finite p >= 1, got {p}"
        )));
    }
    let n = mu.len();
    let eval = Evaluator::new(mu, &RadiusWindow::full(), BallKind::Closed);
    let mut best: Option<Candidate> = None;

    // single-atom indicators: the canonical certificates
    for i in 0..n {
        let mut values = vec![0.0; n];
        values[i] = 1.0;
        if let Some((q, t)) = eval.quotient(&values, p) {
            better(&mut best, Candidate { value: q, threshold: t, values });
        }
    }

    // exhaustive subset indicators
    let exhaustive = n <= budget.exhaustive_threshold && n < usize::BITS as usize - 1;
    if exhaustive {
        for mask in 1u64..(1u64 << n) {
            let values: Vec<f64> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1.0 } else { 0.0 })
                .collect();
            if let Some((q, t)) = eval.quotient(&values, p) {
                better(&mut best, Candidate { value: q, threshold: t, values });
            }
        }
    }

    // seeded randomized coordinate ascent, restarts in parallel
    let iters = budget.max_iterations;
    let results: Vec<Option<Candidate>> = (0..budget.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(r as u64));
            let start: Vec<f64> = if r == 0 {
                vec![1.0; n]
            } else {
                (0..n)
                    .map(|_| (rng.random::<f64>() * 4.0 - 2.0).exp())
                    .collect()
            };
            ascend(&eval, p, iters, start, &mut rng)
        })
        .collect();
    for cand in results.into_iter().flatten() {
        better(&mut best, cand);
    }

    let winner = best.expect("nonempty measure yields at least one indicator quotient");
    Ok(WeakTypeEstimate {
        value: winner.value,
        certificate_f: AtomFunction::new(winner.values).expect("search values are nonnegative"),
        certificate_t: winner.threshold,
        exact: exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NormedSpace;

    fn line_measure(points: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(
            NormedSpace::euclidean(1),
            points.iter().map(|&(x, w)| (vec![x], w)).collect(),
        )
        .unwrap()
    }

    fn pentagon_witness(c: f64) -> (DiscreteMeasure, AtomFunction) {
        let s = NormedSpace::euclidean(2);
        let mut atoms = vec![(vec![0.0, 0.0], c)];
        for k in 0..5 {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            atoms.push((vec![a.cos(), a.sin()], 1.0));
        }
        let mu = DiscreteMeasure::new(s, atoms).unwrap();
        let mut values = vec![0.0; 6];
        values[0] = 1.0 / c;
        (mu, AtomFunction::new(values).unwrap())
    }

    #[test]
    fn prefix_averages_on_the_line() {
        // prefixes from x = 3: {3}, {3,1}, {3,1,0} with averages 0, 0, 1/4
        let mu = line_measure(&[(0.0, 1.0), (1.0, 1.0), (3.0, 2.0)]);
        let f = AtomFunction::new(vec![1.0, 0.0, 0.0]).unwrap();
        let mv = maximal_value(&mu, &f, &[3.0], &RadiusWindow::full(), BallKind::Closed).unwrap();
        assert_eq!(mv.value, 0.25);
        assert!(!mv.empty_supremum);
        assert_eq!(mv.witness_radius, Some(3.0));
    }

    #[test]
    fn pentagon_vertex_sees_heavy_origin() {
        let (mu, f) = pentagon_witness(0.01);
        let vertex = mu.atoms()[1].point.clone();
        let mv =
            maximal_value(&mu, &f, &vertex, &RadiusWindow::full(), BallKind::Closed).unwrap();
        // separation 1.17557 > 1 keeps other vertices out of the radius-1 prefix
        assert!((mv.value - 1.0 / 1.01).abs() < 1e-12);
    }

    #[test]
    fn zero_function_has_zero_maximal_value() {
        let mu = line_measure(&[(0.0, 1.0), (2.0, 3.0)]);
        let f = AtomFunction::new(vec![0.0, 0.0]).unwrap();
        let mv = maximal_value(&mu, &f, &[1.0], &RadiusWindow::full(), BallKind::Closed).unwrap();
        assert_eq!(mv.value, 0.0);
        assert!(!mv.empty_supremum);
    }

    #[test]
    fn empty_supremum_is_flagged() {
        // window excludes every ball reaching an atom from x = 10
        let mu = line_measure(&[(0.0, 1.0)]);
        let f = AtomFunction::new(vec![1.0]).unwrap();
        let w = RadiusWindow::new(0.0, 5.0).unwrap();
        let mv = maximal_value(&mu, &f, &[10.0], &w, BallKind::Closed).unwrap();
        assert_eq!(mv.value, 0.0);
        assert!(mv.empty_supremum);
        assert_eq!(mv.witness_radius, None);
    }

    #[test]
    fn window_lower_bound_excludes_small_prefixes() {
        // with radii restricted to (1.5, ∞), the singleton prefix at an atom
        // is inadmissible
        let mu = line_measure(&[(0.0, 1.0), (1.0, 1.0)]);
        let f = AtomFunction::new(vec![1.0, 0.0]).unwrap();
        let w = RadiusWindow::new(1.5, f64::INFINITY).unwrap();
        let mv = maximal_value(&mu, &f, &[0.0], &w, BallKind::Closed).unwrap();
        assert_eq!(mv.value, 0.5);
    }

    #[test]
    fn open_and_closed_agree_on_open_windows() {
        let mu = line_measure(&[(0.0, 1.0), (1.0, 2.0), (2.5, 0.5)]);
        let f = AtomFunction::new(vec![1.0, 0.25, 2.0]).unwrap();
        for w in [
            RadiusWindow::full(),
            RadiusWindow::new(0.5, 2.0).unwrap(),
            RadiusWindow::new(1.0, 1.5).unwrap(),
        ] {
            for x in [0.0, 1.0, 2.5, 0.7] {
                let o = maximal_value(&mu, &f, &[x], &w, BallKind::Open).unwrap();
                let c = maximal_value(&mu, &f, &[x], &w, BallKind::Closed).unwrap();
                assert_eq!(o.value, c.value);
                assert_eq!(o.empty_supremum, c.empty_supremum);
            }
        }
    }

    #[test]
    fn weak_quotient_pentagon_witness() {
        let (mu, f) = pentagon_witness(0.01);
        let est = weak_quotient(&mu, &f, 1.0).unwrap();
        assert!((est.value - 5.01 / 1.01).abs() < 1e-12);
        assert!((est.certificate_t - 1.0 / 1.01).abs() < 1e-12);
    }

    #[test]
    fn weak_quotient_single_atom() {
        let mu = line_measure(&[(0.0, 1.0)]);
        let f = AtomFunction::new(vec![1.0]).unwrap();
        let est = weak_quotient(&mu, &f, 1.0).unwrap();
        assert_eq!(est.value, 1.0);
    }

    #[test]
    fn weak_quotient_square_corners_l2_in_p2() {
        // heavy origin atom of weight 1 plus the four corners of {−1,1}²
        // under ℓ∞; indicator at the origin atom, p = 2 → √5/2
        let s = NormedSpace::linf(2);
        let mut atoms = vec![(vec![0.0, 0.0], 1.0)];
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                atoms.push((vec![x, y], 1.0));
            }
        }
        let mu = DiscreteMeasure::new(s, atoms).unwrap();
        let f = AtomFunction::indicator(mu.len(), &[0]).unwrap();
        let est = weak_quotient(&mu, &f, 2.0).unwrap();
        assert!((est.value - 5.0_f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn weak_quotient_rejects_zero_function() {
        let mu = line_measure(&[(0.0, 1.0)]);
        let f = AtomFunction::new(vec![0.0]).unwrap();
        assert!(weak_quotient(&mu, &f, 1.0).is_err());
    }

    #[test]
    fn search_single_atom_is_exact_one() {
        let mu = line_measure(&[(0.0, 1.0)]);
        let est = weak_constant_search(&mu, 1.0, &SearchBudget::default()).unwrap();
        assert_eq!(est.value, 1.0);
        assert!(est.exact);
    }

    #[test]
    fn search_rediscovers_pentagon_certificate() {
        let (mu, _) = pentagon_witness(0.001);
        let budget = SearchBudget {
            restarts: 16,
            max_iterations: 400,
            ..SearchBudget::default()
        };
        let est = weak_constant_search(&mu, 1.0, &budget).unwrap();
        assert!(est.value >= 5.001 / 1.001 - 1e-9, "got {}", est.value);
    }

    #[test]
    fn search_is_deterministic() {
        let mu = line_measure(&[(0.0, 1.0), (0.5, 2.0), (1.25, 0.25), (3.0, 1.0)]);
        let budget = SearchBudget {
            restarts: 8,
            max_iterations: 200,
            ..SearchBudget::default()
        };
        let a = weak_constant_search(&mu, 1.5, &budget).unwrap();
        let b = weak_constant_search(&mu, 1.5, &budget).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn search_respects_line_cap() {
        let mu = line_measure(&[(0.0, 1.0), (0.3, 0.2), (1.1, 5.0), (2.0, 1.0), (2.2, 0.7)]);
        let est = weak_constant_search(&mu, 1.0, &SearchBudget::default()).unwrap();
        assert!(est.value <= 2.0 + 1e-6, "got {}", est.value);
    }

    #[test]
    fn window_rejects_bad_bounds() {
        assert!(RadiusWindow::new(-1.0, 1.0).is_err());
        assert!(RadiusWindow::new(2.0, 2.0).is_err());
        assert!(RadiusWindow::new(2.0, 1.0).is_err());
    }
}
