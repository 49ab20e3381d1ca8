//! Exact evaluation of the centered Hardy–Littlewood maximal operator on
//! finitely supported measures, Besicovitch family machinery, and strict
//! kissing (spherical code) searches.
//!
//! The pieces fit together around one equivalence: the best uniform
//! weak-type (1,1) constant of the centered maximal operator over all
//! measures on (ℝ^d, ‖·‖) equals the maximal intersection depth of a
//! Besicovitch ball family, which in turn equals the strict Hadwiger
//! (translative kissing) number of the norm. The crate evaluates the
//! operator exactly on discrete measures, certifies intersection depths
//! with a convex feasibility solver, constructs the witness measures that
//! realize the constants, and searches for strict spherical codes that
//! certify lower bounds.

pub mod acceptance;
pub mod besicovitch;
pub mod codes;
pub mod error;
pub mod geometry;
pub mod maxop;
pub mod measure;
pub mod witnesses;

pub use besicovitch::{
    depth, greedy_select, open_closed_convert, validate_family, BallFamily, DepthMethod,
    DepthReport, ValidationReport,
};
pub use codes::{
    asymptotic_bounds, canonical_code, code_search, code_to_family, normalize_family,
    AsymptoticBounds, CanonicalCode, CodeSearchResult, KnownConstant, SphericalCode,
};
pub use error::{Error, Result};
pub use geometry::{
    angular_lower_bound, ball_contains, distance, min_separation, norm_eval, Ball, BallKind,
    Norm, NormedSpace, Point, DEFAULT_TOL,
};
pub use maxop::{
    maximal_value, weak_constant_search, weak_quotient, MaximalValue, RadiusWindow, SearchBudget,
    WeakTypeEstimate,
};
pub use measure::{ball_integral, ball_mass, l_norm, Atom, AtomFunction, DiscreteMeasure};
pub use witnesses::{
    attainment_measure, extrapolation_constant, interpolation_bound, witness_weak11,
    witness_weakpp, WitnessPackage,
};
