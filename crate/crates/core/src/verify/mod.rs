//! Floating-point verification: pullback quadrature of the identity over a
//! domain, the explicit disk pressure, and the ball identity in `d` variables.

pub mod ball;
pub mod pressure;
pub mod quadrature;

pub use ball::{ball_identity_check, harmonic_basis, integrate_ball, BallReport, BallSpec, MultiPoly};
pub use pressure::{pressure_disk, verify_pressure, LogRingElem, PressureExpr, PressureReport, SourceStrength};
pub use quadrature::{
    evaluate_functional, evaluate_functional_exact, integrate_adaptive, integrate_fixed, integrate_solution,
    verify_identity, AreaIntegral, CenteredPoly, IdentityEntry, IdentityReport, DEFAULT_RESOLUTION,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("quadrature refinement did not converge up to {resolution} radial nodes")]
    NoConvergence { resolution: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
