//! Explicit witness measures and the constants they certify.
//!
//! Each construction packages a measure, a function, the quotient the
//! construction promises, and the quotient the engine actually computes.
//! Construction fails with an internal error if the computed value ever
//! drops below the prediction, so a returned package is a checked
//! certificate.

use serde::{Deserialize, Serialize};

use crate::codes::SphericalCode;
use crate::error::{Error, Result};
use crate::geometry::distance_unchecked;
use crate::maxop::{weak_quotient, WeakTypeEstimate};
use crate::measure::{AtomFunction, DiscreteMeasure};

/// A measure/function pair with its predicted and computed weak-type
/// quotients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPackage {
    pub measure: DiscreteMeasure,
    pub function: AtomFunction,
    pub p: f64,
    pub predicted_quotient: f64,
    pub computed: WeakTypeEstimate,
}

fn check_delivers(predicted: f64, computed: &WeakTypeEstimate, what: &str) -> Result<()> {
    if computed.value >= predicted - 1e-9 {
        Ok(())
    } else {
        Err(Error::InternalCheck(format!(
            "{what}: computed quotient {} fell below predicted {predicted}",
            computed.value
        )))
    }
}

/// The weak-(1,1) witness for a strict code of size K: a light atom of mass
/// `c` at the origin plus unit masses at the code vectors, with the function
/// `1/c` at the origin. Its quotient is (K + c)/(1 + c), which tends to K as
/// c ↓ 0.
pub fn witness_weak11(code: &SphericalCode, c: f64) -> Result<WitnessPackage> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidInput(format!(
            "witness weight must be positive and finite, got {c}"
        )));
    }
    if !(code.separation() > 1.0) {
        return Err(Error::NotStrict {
            separation: code.separation(),
        });
    }
    let dim = code.space().dim();
    let mut atoms = vec![(vec![0.0; dim], c)];
    atoms.extend(code.vectors().iter().map(|v| (v.clone(), 1.0)));
    let mu = DiscreteMeasure::new(*code.space(), atoms)?;
    let mut values = vec![0.0; mu.len()];
    values[0] = 1.0 / c;
    let f = AtomFunction::new(values)?;
    let k = code.len() as f64;
    let predicted = (k + c) / (1.0 + c);
    let computed = weak_quotient(&mu, &f, 1.0)?;
    check_delivers(predicted, &computed, "witness_weak11")?;
    Ok(WitnessPackage {
        measure: mu,
        function: f,
        p: 1.0,
        predicted_quotient: predicted,
        computed,
    })
}

/// The weak-(p,p) witness: same measure with the optimal light mass
/// c = p − 1 and the plain indicator at the origin. Its quotient is
/// (p−1)^{(p−1)/p}·(K + p − 1)^{1/p}/p.
pub fn witness_weakpp(code: &SphericalCode, p: f64) -> Result<WitnessPackage> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "witness_weakpp requires finite p > 1, got {p}"
        )));
    }
    if !(code.separation() > 1.0) {
        return Err(Error::NotStrict {
            separation: code.separation(),
        });
    }
    let c = p - 1.0;
    let dim = code.space().dim();
    let mut atoms = vec![(vec![0.0; dim], c)];
    atoms.extend(code.vectors().iter().map(|v| (v.clone(), 1.0)));
    let mu = DiscreteMeasure::new(*code.space(), atoms)?;
    let f = AtomFunction::indicator(mu.len(), &[0])?;
    let k = code.len() as f64;
    let predicted = c.powf(c / p) * (k + c).powf(1.0 / p) / p;
    let computed = weak_quotient(&mu, &f, p)?;
    check_delivers(predicted, &computed, "witness_weakpp")?;
    Ok(WitnessPackage {
        measure: mu,
        function: f,
        p,
        predicted_quotient: predicted,
        computed,
    })
}

/// Minimal distance between atoms of adjacent blocks under the 3·e₁ spacing.
/// Only unit-to-unit pairs of neighboring blocks can get close: light atoms
/// sit at block centers, at least 2 away from anything in other blocks.
fn block_isolation(code: &SphericalCode) -> f64 {
    let dim = code.space().dim();
    let norm = code.space().norm();
    let mut shift = vec![0.0; dim];
    shift[0] = 3.0;
    let mut iso = 3.0_f64; // i = j pair
    for xi in code.vectors() {
        for xj in code.vectors() {
            let moved: Vec<f64> = xj.iter().zip(&shift).map(|(a, b)| a + b).collect();
            iso = iso.min(distance_unchecked(norm, &moved, xi));
        }
    }
    iso
}

/// The attainment sequence: blocks μ_n = n⁻¹·δ_{3n·e₁} + Σ δ_{x_i + 3n·e₁}
/// summed for n = 1..n_max. Per block, the indicator of the light atom
/// realizes the quotient (nK + 1)/(n + 1) on the full truncated measure, an
/// increasing sequence with limit K. Requires the blocks to be isolated:
/// codes with a diameter aligned with e₁ (the segment, sign vectors of the
/// cube) make adjacent blocks touch and are rejected.
pub fn attainment_measure(code: &SphericalCode, n_max: usize) -> Result<Vec<WitnessPackage>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be >= 1".into()));
    }
    if !(code.separation() > 1.0) {
        return Err(Error::NotStrict {
            separation: code.separation(),
        });
    }
    let iso = block_isolation(code);
    if !(iso > 1.0 + 1e-9) {
        return Err(Error::InvalidInput(format!(
            "blocks spaced 3·e1 apart touch for this code (adjacent-block distance {iso}); \
             the per-block quotient formula does not apply"
        )));
    }
    let dim = code.space().dim();
    let k = code.len();
    let mut atoms = Vec::with_capacity(n_max * (k + 1));
    for n in 1..=n_max {
        let mut light = vec![0.0; dim];
        light[0] = 3.0 * n as f64;
        atoms.push((light.clone(), 1.0 / n as f64));
        for v in code.vectors() {
            let mut p = v.clone();
            p[0] += 3.0 * n as f64;
            atoms.push((p, 1.0));
        }
    }
    let mu = DiscreteMeasure::new(*code.space(), atoms)?;

    let mut packages = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let light_index = (n - 1) * (k + 1);
        let f = AtomFunction::indicator(mu.len(), &[light_index])?;
        let predicted = (n as f64 * k as f64 + 1.0) / (n as f64 + 1.0);
        let computed = weak_quotient(&mu, &f, 1.0)?;
        check_delivers(predicted, &computed, "attainment_measure")?;
        packages.push(WitnessPackage {
            measure: mu.clone(),
            function: f,
            p: 1.0,
            predicted_quotient: predicted,
            computed,
        });
    }
    Ok(packages)
}

/// ⌊p^p·(p−1)^{1−p}·N^p⌋: the uniform weak-(1,1) bound implied by a uniform
/// weak-(p,p) bound N.
pub fn extrapolation_constant(p: f64, n: f64) -> Result<u64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "extrapolation_constant requires finite p > 1, got {p}"
        )));
    }
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "extrapolation_constant requires finite N >= 1, got {n}"
        )));
    }
    let value = p.powf(p) * (p - 1.0).powf(1.0 - p) * n.powf(p);
    if !value.is_finite() || value >= u64::MAX as f64 {
        return Err(Error::InvalidInput(format!(
            "extrapolation constant overflows at p = {p}, N = {n}"
        )));
    }
    Ok(value.floor() as u64)
}

/// p²·N/(p−1)^{2−1/p}: the strong-(p,p) bound obtained by interpolating a
/// uniform weak-(1,1) bound against the trivial L^∞ bound.
pub fn interpolation_bound(p: f64, n: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "interpolation_bound requires finite p > 1, got {p}"
        )));
    }
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "interpolation_bound requires finite N >= 1, got {n}"
        )));
    }
    Ok(p * p * n / (p - 1.0).powf(2.0 - 1.0 / p))
}
