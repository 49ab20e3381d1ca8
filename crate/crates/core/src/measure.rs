//! Finitely supported discrete measures and the nonnegative functions they
//! carry. Everything downstream (maximal operator, weak-type constants,
//! witness constructions) works over this class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ball_contains, Ball, NormedSpace, Point};

/// One atom of a discrete measure: a support point and a strictly positive
/// weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Point,
    pub weight: f64,
}

/// A finite weighted sum of Dirac deltas. Atom points are pairwise distinct;
/// duplicates passed to the constructor are merged by summing weights
/// (exact coordinate equality — measures are user data, not computed
/// geometry). Atom order is otherwise preserved and is the alignment
/// contract for [`AtomFunction`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    space: NormedSpace,
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn new(space: NormedSpace, atoms: Vec<(Point, f64)>) -> Result<Self> {
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for (point, weight) in atoms {
            space.check_dim(&point)?;
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "atom weight must be positive and finite, got {weight}"
                )));
            }
            if !point.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidInput("atom coordinates must be finite".into()));
            }
            match merged.iter_mut().find(|a| a.point == point) {
                Some(existing) => existing.weight += weight,
                None => merged.push(Atom { point, weight }),
            }
        }
        Ok(DiscreteMeasure {
            space,
            atoms: merged,
        })
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// A nonnegative value per atom, aligned by index with a [`DiscreteMeasure`].
/// Represents an integrable function on the measure's support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomFunction {
    values: Vec<f64>,
}

impl AtomFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "atom function values must be nonnegative and finite, got {v}"
                )));
            }
        }
        Ok(AtomFunction { values })
    }

    /// Indicator of a set of atom indices.
    pub fn indicator(len: usize, indices: &[usize]) -> Result<Self> {
        let mut values = vec![0.0; len];
        for &i in indices {
            if i >= len {
                return Err(Error::InvalidInput(format!(
                    "indicator index {i} out of range for {len} atoms"
                )));
            }
            values[i] = 1.0;
        }
        Ok(AtomFunction { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_aligned(&self, mu: &DiscreteMeasure) -> Result<()> {
        if self.values.len() != mu.len() {
            Err(Error::Misaligned {
                atoms: mu.len(),
                values: self.values.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// μ(b): total weight of the atoms contained in the ball, per
/// [`ball_contains`] semantics at tolerance `tol`.
pub fn ball_mass(mu: &DiscreteMeasure, b: &Ball, tol: f64) -> Result<f64> {
    mu.space.check_dim(&b.center)?;
    let mut mass = 0.0;
    for atom in &mu.atoms {
        if ball_contains(&mu.space, b, &atom.point, tol)? {
            mass += atom.weight;
        }
    }
    Ok(mass)
}

/// ∫_b f dμ = Σ f_i·w_i over atoms inside the ball.
pub fn ball_integral(mu: &DiscreteMeasure, f: &AtomFunction, b: &Ball, tol: f64) -> Result<f64> {
    f.check_aligned(mu)?;
    mu.space.check_dim(&b.center)?;
    let mut total = 0.0;
    for (atom, &v) in mu.atoms.iter().zip(f.values()) {
        if ball_contains(&mu.space, b, &atom.point, tol)? {
            total += v * atom.weight;
        }
    }
    Ok(total)
}

/// ‖f‖_{L^p(μ)} = (Σ f_i^p·w_i)^{1/p}, for p ≥ 1.
pub fn l_norm(mu: &DiscreteMeasure, f: &AtomFunction, p: f64) -> Result<f64> {
    f.check_aligned(mu)?;
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("l_norm requires p >= 1, got {p}")));
    }
    let sum: f64 = mu
        .atoms
        .iter()
        .zip(f.values())
        .map(|(atom, &v)| if p == 1.0 { v * atom.weight } else { v.powf(p) * atom.weight })
        .sum();
    Ok(if p == 1.0 { sum } else { sum.powf(1.0 / p) })
}
