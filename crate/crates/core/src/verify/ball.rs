//! The quadrature identity of a `d`-ball in the medium with permeability
//! `ξ₁^{−2}`, checked by exact-degree quadrature.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use gauss_quad::jacobi::GaussJacobi;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre;
use super::VerifyError;
use crate::algebra::gauss_rat::{format_rational, rational_from_json};
use crate::algebra::linsolve::eliminate;
use crate::algebra::{rat_to_f64, GaussRat, Rational};

/// Polynomial in `d` real variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly { dim, terms: BTreeMap::new() }
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        assert_eq!(exps.len(), self.dim, "exponent length must match dimension");
        let e = self.terms.entry(exps).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            let key: Vec<Vec<u32>> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn diff(&self, var: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = e.clone();
                f[var] -= 1;
                out.add_term(f, c * Rational::from_integer(e[var].into()));
            }
        }
        out
    }

    /// `ξ_var · p`.
    pub fn mul_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[var] += 1;
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        (0..self.dim).fold(Self::zero(self.dim), |acc, i| acc.add(&self.diff(i).diff(i)))
    }

    pub fn eval(&self, pt: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c) * e.iter().zip(pt).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Parses `[[[e₁,..,e_d], "coef"], ..]`.
    pub fn from_json(v: &serde_json::Value, dim: usize) -> Result<Self, VerifyError> {
        let bad = || VerifyError::InvalidInput(format!("expected [[exponents], coefficient] terms, got {v}"));
        let mut p = Self::zero(dim);
        for t in v.as_array().ok_or_else(bad)? {
            let t = t.as_array().filter(|t| t.len() == 2).ok_or_else(bad)?;
            let exps: Vec<u32> = t[0]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()).ok_or_else(bad))
                .collect::<Result<_, _>>()?;
            if exps.len() != dim {
                return Err(VerifyError::InvalidInput(format!("term {exps:?} has wrong dimension, want {dim}")));
            }
            let c = rational_from_json(&t[1]).map_err(|e| VerifyError::InvalidInput(e.to_string()))?;
            p.add_term(exps, c);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.terms.iter().map(|(e, c)| serde_json::json!([e, format_rational(c)])).collect())
    }
}

/// All exponent vectors of total degree `k` in `d` variables, lexicographic.
fn exponents_of_degree(d: usize, k: u32) -> Vec<Vec<u32>> {
    if d == 1 {
        return vec![vec![k]];
    }
    (0..=k)
        .rev()
        .flat_map(|first| {
            exponents_of_degree(d - 1, k - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Basis of homogeneous harmonic polynomials of degree `k` in `d` variables,
/// from the exact null space of the Laplacian on degree-`k` monomials.
pub fn harmonic_basis(d: usize, k: u32) -> Vec<MultiPoly> {
    let cols = exponents_of_degree(d, k);
    if k < 2 {
        return cols.into_iter().map(|e| MultiPoly::monomial(e, Rational::from_integer(1.into()))).collect();
    }
    let rows = exponents_of_degree(d, k - 2);
    let index: BTreeMap<&Vec<u32>, usize> = rows.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut a = vec![vec![GaussRat::zero(); cols.len()]; rows.len()];
    for (j, e) in cols.iter().enumerate() {
        let lap = MultiPoly::monomial(e.clone(), Rational::from_integer(1.into())).laplacian();
        for (f, c) in lap.terms() {
            a[index[f]][j] = GaussRat::real(c.clone());
        }
    }
    let elim = eliminate(&a, &vec![GaussRat::zero(); rows.len()]);
    elim.null_space()
        .into_iter()
        .map(|v| {
            let mut p = MultiPoly::zero(d);
            for (e, c) in cols.iter().zip(v) {
                p.add_term(e.clone(), c.re);
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallSpec {
    pub d: usize,
    pub r: Rational,
    pub center: Vec<Rational>,
}

impl BallSpec {
    pub fn new(d: usize, r: Rational, center: Vec<Rational>) -> Result<Self, VerifyError> {
        if d < 2 {
            return Err(VerifyError::InvalidInput(format!("dimension must be at least 2, got {d}")));
        }
        if center.len() != d {
            return Err(VerifyError::InvalidInput(format!("center has {} coordinates, want {d}", center.len())));
        }
        if r <= Rational::zero() {
            return Err(VerifyError::InvalidInput("radius must be positive".into()));
        }
        if center[0].is_zero() {
            return Err(VerifyError::InvalidInput("center must lie off the hyperplane ξ₁ = 0".into()));
        }
        Ok(BallSpec { d, r, center })
    }

    /// `v_d = 2π r²/d · v_{d−2}` with `v₀ = 1`, `v₁ = 2r`.
    pub fn volume(&self) -> f64 {
        let r = rat_to_f64(&self.r);
        let mut v = if self.d.is_multiple_of(2) { 1.0 } else { 2.0 * r };
        let mut k = if self.d.is_multiple_of(2) { 0 } else { 1 };
        while k < self.d {
            k += 2;
            v *= 2.0 * std::f64::consts::PI * r * r / k as f64;
        }
        v
    }
}

/// Quadrature nodes on `S^{d−1}`: `ω = (t, √(1−t²) ω′)` with Gauss-Jacobi in
/// `t` for the weight `(1−t²)^{(d−3)/2}`, terminating in a trapezoid on the
/// circle. Exact for polynomials of degree below `2n`.
fn sphere_rule(d: usize, n: usize) -> Vec<(Vec<f64>, f64)> {
    if d == 2 {
        let m = 2 * n;
        return (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                (vec![t.cos(), t.sin()], 2.0 * std::f64::consts::PI / m as f64)
            })
            .collect();
    }
    let a = (d as f64 - 3.0) / 2.0;
    let rule = GaussJacobi::new(
        NonZeroUsize::new(n).expect("positive node count"),
        a.try_into().expect("valid exponent"),
        a.try_into().expect("valid exponent"),
    );
    let inner = sphere_rule(d - 1, n);
    let mut out = Vec::with_capacity(inner.len() * n);
    for &(t, w) in rule.as_node_weight_pairs() {
        let s = (1.0 - t * t).sqrt();
        for (om, wi) in &inner {
            let mut pt = Vec::with_capacity(d);
            pt.push(t);
            pt.extend(om.iter().map(|v| v * s));
            out.push((pt, w * wi));
        }
    }
    out
}

/// `∫_{|ξ−ξ′|<r} f` with `n` radial Gauss nodes (weight `ρ^{d−1}`).
pub fn integrate_ball(spec: &BallSpec, n: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let r = rat_to_f64(&spec.r);
    let c: Vec<f64> = spec.center.iter().map(rat_to_f64).collect();
    let radial = gauss_legendre(n + spec.d / 2, 0.0, r);
    let sphere = sphere_rule(spec.d, n);
    let mut total = 0.0;
    for &(rho, wr) in &radial {
        let jac = rho.powi(spec.d as i32 - 1) * wr;
        let shell: f64 = sphere
            .iter()
            .map(|(om, w)| {
                let pt: Vec<f64> = om.iter().zip(&c).map(|(o, ci)| ci + rho * o).collect();
                w * f(&pt)
            })
            .sum();
        total += jac * shell;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    pub d: usize,
    pub harmonic: bool,
    pub phi: serde_json::Value,
    pub integral: f64,
    pub predicted: f64,
    pub rel_error: f64,
    pub refinement_change: f64,
    pub passed: bool,
}

pub const BALL_TOL: f64 = 1e-8;

/// Checks `∫_B φ = v_d(φ(ξ′) + r²/((d+2)ξ′₁) ∂₁φ(ξ′))` for
/// `φ = (ξ₁∂₁ − 1) h` with `h` harmonic.
pub fn ball_identity_check(spec: &BallSpec, h: &MultiPoly) -> Result<BallReport, VerifyError> {
    if h.dim != spec.d {
        return Err(VerifyError::InvalidInput(format!("polynomial has {} variables, ball has {}", h.dim, spec.d)));
    }
    let harmonic = h.laplacian().is_zero();
    if !harmonic {
        return Err(VerifyError::InvalidInput("h is not harmonic".into()));
    }
    let phi = h.diff(0).mul_var(0).add(&h.scale(&Rational::from_integer((-1).into())));
    let c: Vec<f64> = spec.center.iter().map(rat_to_f64).collect();
    let r = rat_to_f64(&spec.r);
    let dphi = phi.diff(0);
    let predicted = spec.volume() * (phi.eval(&c) + r * r / ((spec.d as f64 + 2.0) * c[0]) * dphi.eval(&c));
    let n = (phi.degree() as usize / 2 + 2).max(4);
    let coarse = integrate_ball(spec, n, &|p| phi.eval(p));
    let integral = integrate_ball(spec, 2 * n, &|p| phi.eval(p));
    let abs_scale = integrate_ball(spec, 2 * n, &|p| phi.eval(p).abs());
    let scale = predicted.abs().max(abs_scale).max(f64::MIN_POSITIVE);
    let rel_error = (integral - predicted).abs() / scale;
    let refinement_change = (integral - coarse).abs() / scale;
    Ok(BallReport {
        d: spec.d,
        harmonic,
        phi: phi.to_json(),
        integral,
        predicted,
        rel_error,
        refinement_change,
        passed: rel_error <= BALL_TOL,
    })
}
