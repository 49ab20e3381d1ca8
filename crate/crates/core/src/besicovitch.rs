//! Ball-family validation, greedy selection, intersection depth, and
//! open/closed conversions.
//!
//! Depth is computed by enumerating maximal cliques of the pairwise
//! intersection graph and certifying each candidate clique's common point
//! with cyclic projection onto the balls (each ℓp ball is convex). Witness
//! points are verified directly against every ball, so the solver can only
//! under-report, never over-report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    ball_contains, distance_unchecked, norm_unchecked, Ball, BallKind, Norm, NormedSpace, Point,
};

const FEAS_TOL: f64 = 1e-10;
const FEAS_MAX_ITERS: usize = 100_000;
const MAX_BALLS: usize = 64;
const MAX_CLIQUES: usize = 200_000;

/// A nonempty, ordered collection of balls of one kind (all open or all
/// closed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallFamily {
    space: NormedSpace,
    balls: Vec<Ball>,
}

impl BallFamily {
    pub fn new(space: NormedSpace, balls: Vec<Ball>) -> Result<Self> {
        let first = balls
            .first()
            .ok_or_else(|| Error::InvalidInput("ball family must be nonempty".into()))?;
        let kind = first.kind;
        for b in &balls {
            space.check_dim(&b.center)?;
            if b.kind != kind {
                return Err(Error::InvalidInput(
                    "ball family must have a uniform kind (all open or all closed)".into(),
                ));
            }
        }
        Ok(BallFamily { space, balls })
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn kind(&self) -> BallKind {
        self.balls[0].kind
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty families
    }
}

/// Outcome of the Besicovitch check: no ball may contain another ball's
/// center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_besicovitch: bool,
    /// First violating pair `(i, j)`: ball `i` contains the center of ball
    /// `j`.
    pub violation: Option<(usize, usize)>,
}

/// Checks whether the family is a Besicovitch family. Boundary cases follow
/// [`ball_contains`]: for closed families a center within `tol` of another
/// ball's boundary counts as a violation, for open families it does not, so
/// floating-point contact never certifies a false family.
pub fn validate_family(fam: &BallFamily, tol: f64) -> ValidationReport {
    let balls = fam.balls();
    for i in 0..balls.len() {
        for j in 0..balls.len() {
            if i == j {
                continue;
            }
            let inside = ball_contains(fam.space(), &balls[i], &balls[j].center, tol)
                .expect("family dimensions validated at construction");
            if inside {
                return ValidationReport {
                    is_besicovitch: false,
                    violation: Some((i, j)),
                };
            }
        }
    }
    ValidationReport {
        is_besicovitch: true,
        violation: None,
    }
}

/// The selection procedure behind the weak-type bound: order balls by
/// non-increasing radius (ties keep input order), then select each ball whose
/// center is not yet covered by a selected ball. The output is a Besicovitch
/// family whose union covers every input center.
pub fn greedy_select(fam: &BallFamily, tol: f64) -> BallFamily {
    let balls = fam.balls();
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&i, &j| {
        balls[j]
            .radius
            .partial_cmp(&balls[i].radius)
            .expect("finite radii")
    });
    let mut selected: Vec<usize> = Vec::new();
    for &i in &order {
        let covered = selected.iter().any(|&s| {
            ball_contains(fam.space(), &balls[s], &balls[i].center, tol)
                .expect("dimensions validated")
        });
        if !covered {
            selected.push(i);
        }
    }
    BallFamily::new(
        *fam.space(),
        selected.iter().map(|&i| balls[i].clone()).collect(),
    )
    .expect("selection is nonempty: the largest ball is always selected")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthMethod {
    CliqueFeasibility,
}

/// Maximum multiplicity of the family at a single point, with a verified
/// witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    pub witness_point: Point,
    pub witness_subset: Vec<usize>,
    pub method: DepthMethod,
    /// Cliques abandoned because the feasibility solver hit its iteration
    /// cap; the reported depth is then a conservative lower bound.
    pub indeterminate_cliques: usize,
    /// Set for open families whose depth hinges on boundary contact: some
    /// clique was feasible for the closed versions of its balls but not for
    /// the open ones at the working tolerance.
    pub tolerance_sensitive: bool,
}

enum Feasibility {
    Feasible(Vec<f64>),
    /// Stalled at a point outside some ball; carries the index (within the
    /// clique) of the most violated ball.
    Infeasible { worst: usize },
    /// Iteration cap reached without a certificate.
    Indeterminate { worst: usize },
}

/// Euclidean-style projection of `z` into the ball `{‖x − c‖ ≤ r}`:
/// exact for p ∈ {1, 2, ∞}; for other p a radial retraction onto the sphere
/// (enough for certification, since witnesses are verified directly).
fn project_to_ball(norm: Norm, center: &[f64], radius: f64, z: &mut [f64]) {
    let d = distance_unchecked(norm, z, center);
    if d <= radius {
        return;
    }
    match norm {
        Norm::P(p) if p == 2.0 => {
            let scale = radius / d;
            for (zi, &ci) in z.iter_mut().zip(center) {
                *zi = ci + (*zi - ci) * scale;
            }
        }
        Norm::Infinity => {
            for (zi, &ci) in z.iter_mut().zip(center) {
                *zi = zi.clamp(ci - radius, ci + radius);
            }
        }
        Norm::P(p) if p == 1.0 => {
            // soft-threshold projection onto the ℓ1 ball
            let v: Vec<f64> = z.iter().zip(center).map(|(zi, ci)| zi - ci).collect();
            let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
            mags.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            let mut cum = 0.0;
            let mut theta = 0.0;
            for (j, &m) in mags.iter().enumerate() {
                cum += m;
                let t = (cum - radius) / (j as f64 + 1.0);
                if m - t > 0.0 {
                    theta = t;
                } else {
                    break;
                }
            }
            for ((zi, &ci), &vi) in z.iter_mut().zip(center).zip(&v) {
                *zi = ci + vi.signum() * (vi.abs() - theta).max(0.0);
            }
        }
        Norm::P(p) => {
            let d_p = norm_unchecked(Norm::P(p), z.iter().zip(center).map(|(a, b)| a - b));
            if d_p > radius {
                let scale = radius / d_p;
                for (zi, &ci) in z.iter_mut().zip(center) {
                    *zi = ci + (*zi - ci) * scale;
                }
            }
        }
    }
}

/// Cyclic projection onto the balls selected by `members`, targeting the
/// given radii, verified against the original balls per `ball_contains` at
/// `tol`.
fn find_common_point(
    fam: &BallFamily,
    members: &[usize],
    target_radii: &[f64],
    tol: f64,
) -> Feasibility {
    let space = fam.space();
    let balls = fam.balls();
    let dim = space.dim();

    let mut z = vec![0.0; dim];
    for &i in members {
        for (zc, &c) in z.iter_mut().zip(&balls[i].center) {
            *zc += c;
        }
    }
    for zc in z.iter_mut() {
        *zc /= members.len() as f64;
    }

    let worst_of = |z: &[f64]| -> usize {
        let mut worst = 0;
        let mut worst_gap = f64::NEG_INFINITY;
        for (k, &i) in members.iter().enumerate() {
            let gap = distance_unchecked(space.norm(), z, &balls[i].center) - target_radii[k];
            if gap > worst_gap {
                worst_gap = gap;
                worst = k;
            }
        }
        worst
    };

    let mut iters = 0usize;
    loop {
        let ok = members.iter().all(|&i| {
            ball_contains(space, &balls[i], &z, tol).expect("dimensions validated")
        });
        if ok {
            return Feasibility::Feasible(z);
        }
        if iters >= FEAS_MAX_ITERS {
            return Feasibility::Indeterminate { worst: worst_of(&z) };
        }
        let mut moved = 0.0_f64;
        for (k, &i) in members.iter().enumerate() {
            let before = z.clone();
            project_to_ball(space.norm(), &balls[i].center, target_radii[k], &mut z);
            moved = moved.max(distance_unchecked(space.norm(), &before, &z));
        }
        iters += members.len();
        if moved < FEAS_TOL * 1e-4 {
            // converged to a fixed point outside some ball: empty intersection
            return Feasibility::Infeasible { worst: worst_of(&z) };
        }
    }
}

fn target_radii(fam: &BallFamily, members: &[usize], tol: f64) -> Option<Vec<f64>> {
    let radii: Vec<f64> = members
        .iter()
        .map(|&i| match fam.kind() {
            BallKind::Closed => fam.balls()[i].radius,
            // aim strictly inside so the open-membership check can pass
            BallKind::Open => fam.balls()[i].radius - 2.0 * tol,
        })
        .collect();
    if radii.iter().all(|&r| r > 0.0) {
        Some(radii)
    } else {
        None
    }
}

fn bron_kerbosch(adj: &[u64], n: usize) -> Result<Vec<u64>> {
    fn expand(
        r: u64,
        p: u64,
        x: u64,
        adj: &[u64],
        out: &mut Vec<u64>,
    ) -> Result<()> {
        if p == 0 && x == 0 {
            out.push(r);
            if out.len() > MAX_CLIQUES {
                return Err(Error::InvalidInput(format!(
                    "intersection graph has more than {MAX_CLIQUES} maximal cliques"
                )));
            }
            return Ok(());
        }
        // pivot on the vertex covering the most candidates
        let mut pivot = usize::MAX;
        let mut best = -1i32;
        let mut scan = p | x;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let cover = (p & adj[u]).count_ones() as i32;
            if cover > best {
                best = cover;
                pivot = u;
            }
        }
        let mut cands = p & !adj[pivot];
        let mut p = p;
        let mut x = x;
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            let bit = 1u64 << v;
            cands &= !bit;
            expand(r | bit, p & adj[v], x & adj[v], adj, out)?;
            p &= !bit;
            x |= bit;
        }
        Ok(())
    }

    let mut out = Vec::new();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    expand(0, full, 0, adj, &mut out)?;
    Ok(out)
}

fn bits_of(mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

/// Maximum number of balls of the family sharing a common point.
///
/// Builds the pairwise intersection graph, enumerates maximal cliques with
/// pivoting, verifies candidate cliques with the projection solver, and
/// shrinks unverifiable ones by dropping the most violated ball. The returned
/// depth always comes with a directly verified witness point.
pub fn depth(fam: &BallFamily, tol: f64) -> Result<DepthReport> {
    let n = fam.len();
    if n > MAX_BALLS {
        return Err(Error::InvalidInput(format!(
            "depth supports at most {MAX_BALLS} balls, got {n}"
        )));
    }
    let balls = fam.balls();
    let norm = fam.space().norm();

    // candidate edges are generous (boundary contact included); the
    // feasibility verification downstream decides actual membership
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = distance_unchecked(norm, &balls[i].center, &balls[j].center);
            let sum = balls[i].radius + balls[j].radius;
            let touch = match fam.kind() {
                BallKind::Closed => d <= sum + tol,
                BallKind::Open => d < sum + tol,
            };
            if touch {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }

    let mut cliques = bron_kerbosch(&adj, n)?;
    cliques.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));

    let mut best: Option<(u64, Vec<f64>)> = None;
    let mut indeterminate = 0usize;
    let mut tolerance_sensitive = false;

    for &clique in &cliques {
        let size = clique.count_ones() as usize;
        let best_size = best.as_ref().map_or(0, |(m, _)| m.count_ones() as usize);
        if size <= best_size {
            break; // cliques are sorted by size
        }
        let mut mask = clique;
        loop {
            let members = bits_of(mask);
            if members.len() <= best.as_ref().map_or(0, |(m, _)| m.count_ones() as usize) {
                break;
            }
            let Some(radii) = target_radii(fam, &members, tol) else {
                break;
            };
            let outcome = find_common_point(fam, &members, &radii, tol);
            let worst = match outcome {
                Feasibility::Feasible(pt) => {
                    best = Some((mask, pt));
                    break;
                }
                Feasibility::Infeasible { worst } => worst,
                Feasibility::Indeterminate { worst } => {
                    indeterminate += 1;
                    worst
                }
            };
            if fam.kind() == BallKind::Open && !tolerance_sensitive {
                // would the closed versions have intersected?
                let closed_radii: Vec<f64> =
                    members.iter().map(|&i| balls[i].radius).collect();
                if let Feasibility::Feasible(_) =
                    find_common_point_closed(fam, &members, &closed_radii, tol)
                {
                    tolerance_sensitive = true;
                }
            }
            // shrink: drop the most violated ball and retry
            mask &= !(1u64 << members[worst]);
            if mask == 0 {
                break;
            }
        }
    }

    let (mask, point) = best.ok_or_else(|| {
        Error::InternalCheck("no feasible subset found; singleton cliques must verify".into())
    })?;
    Ok(DepthReport {
        depth: mask.count_ones() as usize,
        witness_point: point,
        witness_subset: bits_of(mask),
        method: DepthMethod::CliqueFeasibility,
        indeterminate_cliques: indeterminate,
        tolerance_sensitive,
    })
}

/// Feasibility for the closed versions of the member balls (used to flag
/// open families whose depth is decided by boundary contact).
fn find_common_point_closed(
    fam: &BallFamily,
    members: &[usize],
    radii: &[f64],
    tol: f64,
) -> Feasibility {
    let space = fam.space();
    let balls = fam.balls();
    let mut z = vec![0.0; space.dim()];
    for &i in members {
        for (zc, &c) in z.iter_mut().zip(&balls[i].center) {
            *zc += c;
        }
    }
    for zc in z.iter_mut() {
        *zc /= members.len() as f64;
    }
    let mut iters = 0usize;
    loop {
        let ok = members.iter().zip(radii).all(|(&i, &r)| {
            distance_unchecked(space.norm(), &z, &balls[i].center) <= r + tol
        });
        if ok {
            return Feasibility::Feasible(z);
        }
        if iters >= FEAS_MAX_ITERS {
            return Feasibility::Indeterminate { worst: 0 };
        }
        let mut moved = 0.0_f64;
        for (k, &i) in members.iter().enumerate() {
            let before = z.clone();
            project_to_ball(space.norm(), &balls[i].center, radii[k], &mut z);
            moved = moved.max(distance_unchecked(space.norm(), &before, &z));
        }
        iters += members.len();
        if moved < FEAS_TOL * 1e-4 {
            return Feasibility::Infeasible { worst: 0 };
        }
    }
}

/// Converts an intersecting Besicovitch family between open and closed kinds
/// while preserving both properties. Closed → open grows each radius to the
/// nearest other center; open → closed shrinks each ball onto the common
/// point. Passing the family's own kind returns it unchanged.
pub fn open_closed_convert(
    fam: &BallFamily,
    target: BallKind,
    common_point: &[f64],
    tol: f64,
) -> Result<BallFamily> {
    fam.space().check_dim(common_point)?;
    for (i, b) in fam.balls().iter().enumerate() {
        if !ball_contains(fam.space(), b, common_point, tol)? {
            return Err(Error::InvalidInput(format!(
                "common point is not contained in ball {i}"
            )));
        }
    }
    if fam.kind() == target {
        return Ok(fam.clone());
    }
    let balls = fam.balls();
    let norm = fam.space().norm();
    let converted: Result<Vec<Ball>> = balls
        .iter()
        .enumerate()
        .map(|(i, b)| match target {
            BallKind::Open => {
                let t = balls
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, other)| distance_unchecked(norm, &other.center, &b.center))
                    .fold(f64::INFINITY, f64::min);
                // singleton family: any radius above the original works
                let t = if t.is_finite() { t } else { 2.0 * b.radius };
                Ball::open(b.center.clone(), t)
            }
            BallKind::Closed => {
                let r = distance_unchecked(norm, &b.center, common_point);
                if r == 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "ball {i} is centered at the common point; the closed conversion would have radius 0"
                    )));
                }
                Ball::closed(b.center.clone(), r)
            }
        })
        .collect();
    BallFamily::new(*fam.space(), converted?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_TOL;

    fn closed_family(space: NormedSpace, balls: &[(&[f64], f64)]) -> BallFamily {
        BallFamily::new(
            space,
            balls
                .iter()
                .map(|&(c, r)| Ball::closed(c.to_vec(), r).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn pentagon_family() -> BallFamily {
        let s = NormedSpace::euclidean(2);
        let balls = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                Ball::closed(vec![a.cos(), a.sin()], 1.0).unwrap()
            })
            .collect();
        BallFamily::new(s, balls).unwrap()
    }

    #[test]
    fn separated_intervals_are_besicovitch() {
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[-1.0], 1.0), (&[1.0], 1.0)]);
        assert!(validate_family(&fam, DEFAULT_TOL).is_besicovitch);
    }

    #[test]
    fn nested_center_is_flagged_with_pair() {
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[0.0], 2.0), (&[1.0], 1.0)]);
        let report = validate_family(&fam, DEFAULT_TOL);
        assert!(!report.is_besicovitch);
        assert_eq!(report.violation, Some((0, 1)));
    }

    #[test]
    fn pentagon_family_is_besicovitch() {
        assert!(validate_family(&pentagon_family(), DEFAULT_TOL).is_besicovitch);
    }

    #[test]
    fn closed_boundary_contact_counts_as_violation() {
        // centers at distance exactly 1 = radius: conservative for closed
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[0.0], 1.0), (&[1.0], 1.0)]);
        assert!(!validate_family(&fam, DEFAULT_TOL).is_besicovitch);
    }

    #[test]
    fn open_boundary_contact_is_acceptable() {
        let s = NormedSpace::euclidean(1);
        let fam = BallFamily::new(
            s,
            vec![
                Ball::open(vec![0.0], 1.0).unwrap(),
                Ball::open(vec![1.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        assert!(validate_family(&fam, DEFAULT_TOL).is_besicovitch);
    }

    #[test]
    fn greedy_selects_big_then_uncovered() {
        let fam = closed_family(
            NormedSpace::euclidean(1),
            &[(&[0.0], 3.0), (&[1.0], 2.0), (&[5.0], 1.0)],
        );
        let out = greedy_select(&fam, DEFAULT_TOL);
        assert_eq!(out.len(), 2);
        assert_eq!(out.balls()[0].center, vec![0.0]);
        assert_eq!(out.balls()[1].center, vec![5.0]);
    }

    #[test]
    fn greedy_keeps_uncovered_family_whole() {
        let fam = closed_family(
            NormedSpace::euclidean(1),
            &[(&[0.0], 1.0), (&[10.0], 2.0), (&[20.0], 0.5)],
        );
        let out = greedy_select(&fam, DEFAULT_TOL);
        assert_eq!(out.len(), 3);
        // reordered by non-increasing radius
        assert_eq!(out.balls()[0].radius, 2.0);
        assert_eq!(out.balls()[1].radius, 1.0);
        assert_eq!(out.balls()[2].radius, 0.5);
    }

    #[test]
    fn greedy_single_ball_is_identity() {
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[0.0], 1.0)]);
        let out = greedy_select(&fam, DEFAULT_TOL);
        assert_eq!(out.balls(), fam.balls());
    }

    #[test]
    fn pentagon_depth_is_five_with_central_witness() {
        let report = depth(&pentagon_family(), DEFAULT_TOL).unwrap();
        assert_eq!(report.depth, 5);
        assert_eq!(report.witness_subset, vec![0, 1, 2, 3, 4]);
        let w = &report.witness_point;
        assert!((w[0].powi(2) + w[1].powi(2)).sqrt() < 0.2, "witness {w:?}");
        assert_eq!(report.indeterminate_cliques, 0);
    }

    #[test]
    fn square_corner_cubes_have_depth_four() {
        let s = NormedSpace::linf(2);
        let balls = [[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]]
            .iter()
            .map(|c| Ball::closed(c.to_vec(), 1.0).unwrap())
            .collect();
        let fam = BallFamily::new(s, balls).unwrap();
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        assert_eq!(report.depth, 4);
    }

    #[test]
    fn disjoint_balls_have_depth_one() {
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[0.0], 1.0), (&[5.0], 1.0)]);
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        assert_eq!(report.depth, 1);
        assert_eq!(report.witness_subset.len(), 1);
    }

    #[test]
    fn single_ball_depth() {
        let fam = closed_family(NormedSpace::euclidean(2), &[(&[3.0, 4.0], 0.5)]);
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        assert_eq!(report.depth, 1);
        assert_eq!(report.witness_point, vec![3.0, 4.0]);
    }

    #[test]
    fn chain_of_three_has_depth_two() {
        // balls A-B and B-C overlap, A-C do not
        let fam = closed_family(
            NormedSpace::euclidean(1),
            &[(&[0.0], 1.1), (&[2.0], 1.1), (&[4.0], 1.1)],
        );
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        assert_eq!(report.depth, 2);
    }

    #[test]
    fn open_tangent_pair_is_tolerance_sensitive() {
        // open balls touching at a single boundary point have empty
        // intersection; the closed versions meet, so the report flags it
        let s = NormedSpace::euclidean(1);
        let fam = BallFamily::new(
            s,
            vec![
                Ball::open(vec![0.0], 1.0).unwrap(),
                Ball::open(vec![2.0], 1.0).unwrap(),
            ],
        )
        .unwrap();
        let report = depth(&fam, DEFAULT_TOL).unwrap();
        assert_eq!(report.depth, 1);
        assert!(report.tolerance_sensitive);
    }

    #[test]
    fn convert_pentagon_closed_to_open() {
        let fam = pentagon_family();
        let open = open_closed_convert(&fam, BallKind::Open, &[0.0, 0.0], DEFAULT_TOL).unwrap();
        let sep = 2.0 * (std::f64::consts::PI / 5.0).sin();
        for b in open.balls() {
            assert_eq!(b.kind, BallKind::Open);
            assert!((b.radius - sep).abs() < 1e-12);
        }
        assert!(validate_family(&open, DEFAULT_TOL).is_besicovitch);
    }

    #[test]
    fn convert_open_pentagon_to_closed_unit_radii() {
        let s = NormedSpace::euclidean(2);
        let balls = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                Ball::open(vec![a.cos(), a.sin()], 1.1).unwrap()
            })
            .collect();
        let fam = BallFamily::new(s, balls).unwrap();
        let closed =
            open_closed_convert(&fam, BallKind::Closed, &[0.0, 0.0], DEFAULT_TOL).unwrap();
        for b in closed.balls() {
            assert_eq!(b.kind, BallKind::Closed);
            assert!((b.radius - 1.0).abs() < 1e-12);
        }
        assert!(validate_family(&closed, DEFAULT_TOL).is_besicovitch);
    }

    #[test]
    fn convert_two_interval_family() {
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[-1.0], 1.0), (&[1.0], 1.0)]);
        let open = open_closed_convert(&fam, BallKind::Open, &[0.0], DEFAULT_TOL).unwrap();
        assert_eq!(open.balls()[0].radius, 2.0);
        assert_eq!(open.balls()[1].radius, 2.0);
    }

    #[test]
    fn convert_rejects_outside_common_point() {
        let fam = closed_family(NormedSpace::euclidean(1), &[(&[-1.0], 1.0), (&[1.0], 1.0)]);
        assert!(open_closed_convert(&fam, BallKind::Open, &[5.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn convert_roundtrip_preserves_properties() {
        let fam = pentagon_family();
        let origin = [0.0, 0.0];
        let open = open_closed_convert(&fam, BallKind::Open, &origin, DEFAULT_TOL).unwrap();
        let closed = open_closed_convert(&open, BallKind::Closed, &origin, DEFAULT_TOL).unwrap();
        assert!(validate_family(&closed, DEFAULT_TOL).is_besicovitch);
        for b in closed.balls() {
            assert!(ball_contains(closed.space(), b, &origin, DEFAULT_TOL).unwrap());
        }
    }
}
