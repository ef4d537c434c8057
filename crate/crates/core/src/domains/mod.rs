//! Polynomial conformal maps `z(w) = z₁ + r w + Σ u_i w^{i+1}` of the unit
//! disk, their Richardson moments and the inverse moment problem.
//!
//! On `|w| = 1` the conjugate `z̄` equals the coefficient-conjugated map
//! evaluated at `1/w`, so every area integral of a polynomial in `(z, z̄)`
//! collapses to a single residue at `w = 0`.

mod map;
mod moments;
mod newton;
mod univalence;

pub use map::{ConformalMap, NumericMap};
pub use moments::{area_integral_over_pi, boundary_laurent, moments, moments_numeric, MomentVector};
pub use newton::{solve_map_from_moments, MapSolution, NEWTON_MAX_ITERATIONS};
pub use univalence::{segments_intersect, univalence_check, UnivalenceReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("invalid moment targets: {0}")]
    InvalidMoments(String),
    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("map is not univalent: {0:?}")]
    NonUnivalent(Box<UnivalenceReport>),
    #[error("invalid map: {0}")]
    InvalidMap(String),
}

/// Samples `z(e^{2πik/N})`, `k = 0..N−1`, counterclockwise.
pub fn boundary_points(map: &NumericMap, n: usize) -> Vec<num_complex::Complex64> {
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            map.eval(num_complex::Complex64::from_polar(1.0, t))
        })
        .collect()
}
