//! Exact arithmetic substrate: Gaussian rationals, polynomials in `(z, z̄)`,
//! Laurent polynomials, the trigonometric ring used for Wronskians, and
//! normal-ordered differential operators.

pub mod diffop;
pub mod gauss_rat;
pub mod laurent;
pub mod linsolve;
pub mod poly2;
pub mod trig;

pub use diffop::DiffOp2;
pub use gauss_rat::{parse_rational, rat_to_f64, rationalize_f64, GaussRat, Rational};
pub use laurent::{residue, Laurent, LaurentPoly, Scalar};
pub use poly2::{Mono, NumericPoly, Poly2, XyPoly};
pub use trig::{determinant, wronskian_theta, TrigElem};

use thiserror::Error;

/// Tolerance used whenever a float is turned into an exact rational.
pub const FLOAT_RATIONALIZE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not exactly divisible")]
    NotDivisible,
    #[error("trigonometric element is not a polynomial in (z, z̄)")]
    NotPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Exact quotient in either ring supporting it.
pub trait ExactDivide: Sized {
    fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError>;
}

impl ExactDivide for TrigElem {
    fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        TrigElem::exact_divide(self, divisor)
    }
}

impl ExactDivide for Poly2 {
    fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        Poly2::exact_divide(self, divisor)
    }
}

pub fn exact_divide<T: ExactDivide>(a: &T, b: &T) -> Result<T, AlgebraError> {
    a.exact_divide(b)
}
