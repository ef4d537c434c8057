use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use num_traits::One;

use crate::algebra::poly2::substitute;
use crate::algebra::{GaussRat, NumericPoly, Poly2, Rational};
use crate::domains::NumericMap;
use crate::fluxes::{Family, FluxVector};
use crate::intertwine::IntertwinerBundle;

/// Starting radial node count; angular nodes are always twice as many.
pub const DEFAULT_RESOLUTION: usize = 16;
pub const MAX_RESOLUTION: usize = 4096;
pub const REFINEMENT_TOL: f64 = 1e-10;

/// Gauss-Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap());
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

/// Value of `∫_Ω φ dx dy` together with `∫_Ω |φ| dx dy`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaIntegral {
    pub value: Complex64,
    pub abs_value: f64,
    pub radial_nodes: usize,
}

/// Fixed-resolution pullback quadrature: Gauss-Legendre in `ρ̂ ∈ [0, 1]`
/// and the trapezoid rule with `2n` nodes in `τ`.
pub fn integrate_fixed<F>(map: &NumericMap, n: usize, phi: &F) -> AreaIntegral
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let radial = gauss_legendre(n, 0.0, 1.0);
    let m = 2 * n;
    let dtau = 2.0 * std::f64::consts::PI / m as f64;
    // per-angle partial sums, reduced in index order for determinism
    let parts: Vec<(Complex64, f64)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let e = Complex64::from_polar(1.0, k as f64 * dtau);
            radial.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(acc, abs), &(rho, w)| {
                let wpt = rho * e;
                let jac = map.derivative(wpt).norm_sqr() * rho * w * dtau;
                let v = phi(map.eval(wpt));
                (acc + v * jac, abs + v.norm() * jac)
            })
        })
        .collect();
    let (value, abs_value) = parts.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (v, s)| (a + v, b + s));
    AreaIntegral { value, abs_value, radial_nodes: n }
}

/// Doubles the resolution from `start` until the relative change drops
/// below `1e−10` (relative to `max(|I|, ∫|φ|)`).
pub fn integrate_adaptive<F>(map: &NumericMap, start: usize, phi: &F) -> Result<AreaIntegral, VerifyError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let mut n = start.max(2);
    let mut prev = integrate_fixed(map, n, phi);
    while n < MAX_RESOLUTION {
        n *= 2;
        let cur = integrate_fixed(map, n, phi);
        let scale = cur.value.norm().max(cur.abs_value).max(f64::MIN_POSITIVE);
        if (cur.value - prev.value).norm() <= REFINEMENT_TOL * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(VerifyError::NoConvergence { resolution: n })
}

/// A polynomial re-expanded about a centre `c`, evaluated in `z − c`.
/// High powers of `z − z₁` lose every significant digit when expanded about
/// the origin; the centred form keeps them at full relative precision.
#[derive(Clone, Debug)]
pub struct CenteredPoly {
    pub centered: Poly2,
    numeric: NumericPoly,
    center: Complex64,
}

impl CenteredPoly {
    pub fn new(phi: &Poly2, center: &GaussRat) -> Self {
        let s1 = &Poly2::z() + &Poly2::constant(center.clone());
        let s2 = &Poly2::zbar() + &Poly2::constant(center.conj());
        let centered = substitute(phi, &s1, &s2);
        let numeric = NumericPoly::from(&centered);
        CenteredPoly { centered, numeric, center: center.to_complex() }
    }

    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        self.numeric.eval_at(z - self.center)
    }
}

/// `∫_Ω T[f] dx dy` for a polynomial `f`.
pub fn integrate_solution(
    map: &NumericMap,
    bundle: &IntertwinerBundle,
    f: &Poly2,
    resolution: usize,
) -> Result<AreaIntegral, VerifyError> {
    let phi = NumericPoly::from(&bundle.t.apply(f));
    integrate_adaptive(map, resolution, &|z| phi.eval_at(z))
}

/// `π(Q φ(z₁) + Σ_j Q_j ∂_z^j φ(z₁) + Q̄_j ∂_z̄^j φ(z₁))` in floating point.
pub fn evaluate_functional(phi: &Poly2, fluxes: &FluxVector, z1: Complex64) -> Complex64 {
    let mut acc = fluxes.q.to_complex() * NumericPoly::from(phi).eval_at(z1);
    let mut dz = phi.clone();
    let mut dzb = phi.clone();
    for q in &fluxes.qj {
        dz = dz.dz();
        dzb = dzb.dzbar();
        let q = q.to_complex();
        acc += q * NumericPoly::from(&dz).eval_at(z1) + q.conj() * NumericPoly::from(&dzb).eval_at(z1);
    }
    acc * std::f64::consts::PI
}

/// The same functional divided by `π`, exactly, read off the Taylor
/// coefficients of the centred polynomial.
pub fn evaluate_functional_exact(phi: &CenteredPoly, fluxes: &FluxVector) -> GaussRat {
    let c = &phi.centered;
    let mut acc = &fluxes.q * &c.coeff(0, 0);
    let mut fact = Rational::one();
    for (j, q) in fluxes.qj.iter().enumerate() {
        let j = j as u32 + 1;
        fact *= Rational::from_integer(j.into());
        let sum = &(q * &c.coeff(j, 0)) + &(&q.conj() * &c.coeff(0, j));
        acc += &sum.scale(&fact);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub family: Family,
    pub p: usize,
    pub numeric: [f64; 2],
    pub predicted: [f64; 2],
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub entries: Vec<IdentityEntry>,
    pub max_rel_error: f64,
    pub max_radial_nodes: usize,
}

impl IdentityReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_rel_error <= tol
    }
}

/// Compares `∫_Ω T[f]` against `π Q̂[T[f]](z₁)` for `f = (z − z₁)^p` and
/// `(z̄ − z̄₁)^p`, `p = 0..=basis`. The relative error is measured against
/// `max(|predicted|, ∫|φ|)` so that functionals near zero stay meaningful.
pub fn verify_identity(
    map: &NumericMap,
    z1_exact: &GaussRat,
    bundle: &IntertwinerBundle,
    fluxes: &FluxVector,
    basis: usize,
    resolution: usize,
) -> Result<IdentityReport, VerifyError> {
    let mut entries = Vec::new();
    let mut max_nodes = 0;
    for p in 0..=basis {
        for family in [Family::Analytic, Family::Antianalytic] {
            let f = match family {
                Family::Analytic => Poly2::shifted_z_power(z1_exact, p as u32),
                Family::Antianalytic => Poly2::shifted_zbar_power(z1_exact, p as u32),
            };
            let phi = CenteredPoly::new(&bundle.t.apply(&f), z1_exact);
            let integral = integrate_adaptive(map, resolution, &|z| phi.eval_at(z))?;
            max_nodes = max_nodes.max(integral.radial_nodes);
            let predicted = evaluate_functional_exact(&phi, fluxes).to_complex() * std::f64::consts::PI;
            let scale = predicted.norm().max(integral.abs_value).max(f64::MIN_POSITIVE);
            let rel_error = (integral.value - predicted).norm() / scale;
            entries.push(IdentityEntry {
                family,
                p,
                numeric: [integral.value.re, integral.value.im],
                predicted: [predicted.re, predicted.im],
                rel_error,
            });
        }
    }
    let max_rel_error = entries.iter().map(|e| e.rel_error).fold(0.0, f64::max);
    Ok(IdentityReport { entries, max_rel_error, max_radial_nodes: max_nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GaussRat, Rational};
    use crate::domains::ConformalMap;
    use crate::fluxes::{fluxes_for_map, lhs_functionals};
    use crate::intertwine::build_axis;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let q = gauss_legendre(5, 0.0, 2.0);
        let v: f64 = q.iter().map(|&(x, w)| w * x.powi(9)).sum();
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn disk_area_and_first_intertwiner() {
        let map = NumericMap::disk(Complex64::new(2.0, 0.0), 1.5);
        let area = integrate_adaptive(&map, DEFAULT_RESOLUTION, &|_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((area.value.re - std::f64::consts::PI * 2.25).abs() < 1e-12);
        let b = build_axis(1);
        let v = integrate_solution(&map, &b, &Poly2::one(), DEFAULT_RESOLUTION).unwrap();
        assert!((v.value.re + std::f64::consts::PI * 2.25).abs() < 1e-12);
    }

    #[test]
    fn matches_exact_functional() {
        // π·2!·V₂ for axis n = 1, disk r = 1, z₁ = 2
        let exact = ConformalMap::disk(GaussRat::from_int(2), Rational::from_integer(1.into())).unwrap();
        let b = build_axis(1);
        let v = lhs_functionals(&b, &exact, 2);
        let f = Poly2::shifted_z_power(&exact.z1, 2);
        let got = integrate_solution(&exact.to_numeric(), &b, &f, DEFAULT_RESOLUTION).unwrap();
        let want = std::f64::consts::PI * 2.0 * v.v[2].to_complex();
        assert!((got.value - want).norm() < 1e-12, "{} vs {want}", got.value);
        assert!((want.re - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn disk_identity_holds_numerically() {
        let exact = ConformalMap::disk(GaussRat::from_int(2), Rational::from_integer(1.into())).unwrap();
        let b = build_axis(1);
        let sol = fluxes_for_map(&b, &exact).unwrap();
        let rep = verify_identity(&exact.to_numeric(), &exact.z1, &b, &sol.fluxes, 6, DEFAULT_RESOLUTION).unwrap();
        assert!(rep.passed(1e-10), "{}", rep.max_rel_error);
    }
}
