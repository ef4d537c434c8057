//! Laurent polynomials `Σ c_k w^k`, `k ∈ ℤ`, stored densely from the lowest power.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, GaussRat};

/// Coefficient ring shared by the exact and floating-point Laurent engines.
pub trait Scalar:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl Scalar for GaussRat {}
impl Scalar for Complex64 {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Laurent<T> {
    lo: i64,
    coeffs: Vec<T>,
}

pub type LaurentPoly = Laurent<GaussRat>;

impl<T: Scalar> Laurent<T> {
    pub fn zero() -> Self {
        Laurent { lo: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Laurent::monomial(0, c)
    }

    pub fn monomial(k: i64, c: T) -> Self {
        Laurent { lo: k, coeffs: vec![c] }.trimmed()
    }

    /// Builds from `(power, coefficient)` pairs; repeated powers are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(terms: I) -> Self {
        let terms: Vec<(i64, T)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Laurent::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![T::zero(); (hi - lo + 1) as usize];
        for (k, c) in terms {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = slot.clone() + c;
        }
        Laurent { lo, coeffs }.trimmed()
    }

    /// Polynomial `Σ coeffs[i] w^i`.
    pub fn from_poly(coeffs: Vec<T>) -> Self {
        Laurent { lo: 0, coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            return Laurent { lo: 0, coeffs: Vec::new() };
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low_power(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    pub fn high_power(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> T {
        let idx = k - self.lo;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            T::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Coefficient of `w^{-1}`.
    pub fn residue(&self) -> T {
        self.coeff(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.lo + i as i64, c))
    }

    pub fn map_coeffs<F: Fn(i64, &T) -> T>(&self, f: F) -> Self {
        Laurent { lo: self.lo, coeffs: self.coeffs.iter().enumerate().map(|(i, c)| f(self.lo + i as i64, c)).collect() }
            .trimmed()
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map_coeffs(|_, c| c.clone() * k.clone())
    }

    pub fn shift(&self, by: i64) -> Self {
        Laurent { lo: self.lo + by, coeffs: self.coeffs.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Laurent::constant(T::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `d/dw`.
    pub fn derivative(&self) -> Self
    where
        T: From<i64>,
    {
        Laurent::from_terms(self.terms().map(|(k, c)| (k - 1, c.clone() * T::from(k))))
    }

    /// Coefficient of `w^{-1}` in `self * other`, without forming the product.
    pub fn residue_of_product(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (k, c) in self.terms() {
            let d = other.coeff(-1 - k);
            if !d.is_zero() {
                acc = acc + c.clone() * d;
            }
        }
        acc
    }

    pub fn eval(&self, w: T) -> T
    where
        T: std::ops::Div<Output = T>,
    {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * w.clone() + c.clone();
        }
        let mut factor = T::one();
        if self.lo >= 0 {
            for _ in 0..self.lo {
                factor = factor * w.clone();
            }
            acc * factor
        } else {
            for _ in 0..(-self.lo) {
                factor = factor * w.clone();
            }
            acc / factor
        }
    }
}

impl LaurentPoly {
    /// Exact quotient in the Laurent ring over the Gaussian rationals.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Laurent::zero());
        }
        // Work with ordinary polynomials: self = w^lo A(w), divisor = w^dlo B(w).
        let a = &self.coeffs;
        let b = &divisor.coeffs;
        if a.len() < b.len() {
            return Err(AlgebraError::NotDivisible);
        }
        let lead_inv = b.last().unwrap().inv()?;
        let mut rem = a.clone();
        let qlen = a.len() - b.len() + 1;
        let mut quot = vec![GaussRat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + b.len() - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &(&c * bj);
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NotDivisible);
        }
        Ok(Laurent { lo: self.lo - divisor.lo, coeffs: quot }.trimmed())
    }

    pub fn to_complex(&self) -> Laurent<Complex64> {
        Laurent { lo: self.lo, coeffs: self.coeffs.iter().map(GaussRat::to_complex).collect() }.trimmed()
    }
}

impl<'b, T: Scalar> Add<&'b Laurent<T>> for &Laurent<T> {
    type Output = Laurent<T>;
    fn add(self, rhs: &'b Laurent<T>) -> Laurent<T> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.high_power().unwrap().max(rhs.high_power().unwrap());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Laurent { lo, coeffs }.trimmed()
    }
}

impl<'b, T: Scalar> Sub<&'b Laurent<T>> for &Laurent<T> {
    type Output = Laurent<T>;
    fn sub(self, rhs: &'b Laurent<T>) -> Laurent<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &Laurent<T> {
    type Output = Laurent<T>;
    fn neg(self) -> Laurent<T> {
        Laurent { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<'b, T: Scalar> Mul<&'b Laurent<T>> for &Laurent<T> {
    type Output = Laurent<T>;
    fn mul(self, rhs: &'b Laurent<T>) -> Laurent<T> {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent { lo: self.lo + rhs.lo, coeffs }.trimmed()
    }
}

impl<T: Scalar> Add for Laurent<T> {
    type Output = Laurent<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Laurent<T> {
    type Output = Laurent<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Laurent<T> {
    type Output = Laurent<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Coefficient of `w^{-1}`.
pub fn residue(l: &LaurentPoly) -> GaussRat {
    l.residue()
}
