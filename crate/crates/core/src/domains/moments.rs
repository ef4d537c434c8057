use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ConformalMap, NumericMap};
use crate::algebra::{GaussRat, LaurentPoly, Poly2};

/// Richardson moments stored divided by `π`, so that they stay exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub over_pi: Vec<GaussRat>,
}

impl MomentVector {
    /// `M_p = π·over_pi[p]` in floating point.
    pub fn values(&self) -> Vec<Complex64> {
        self.over_pi.iter().map(|c| c.to_complex() * std::f64::consts::PI).collect()
    }
}

/// `p(z(w), z̄(1/w))` as a Laurent polynomial in `w`.
pub fn boundary_laurent(p: &Poly2, map: &ConformalMap) -> LaurentPoly {
    let z = map.z_laurent();
    let zb = map.zbar_laurent();
    let mut zp = vec![LaurentPoly::constant(GaussRat::one())];
    for i in 0..p.degree1() as usize {
        let next = &zp[i] * &z;
        zp.push(next);
    }
    let mut zbp = vec![LaurentPoly::constant(GaussRat::one())];
    for i in 0..p.degree2() as usize {
        let next = &zbp[i] * &zb;
        zbp.push(next);
    }
    let mut out = LaurentPoly::zero();
    for (m, c) in p.terms() {
        out = &out + &(&zp[m.a as usize] * &zbp[m.b as usize]).scale(c);
    }
    out
}

/// `(1/π)∫_Ω p dx dy = Res_{w=0}[G(z(w), z̄(1/w)) z′(w)]` with `∂_z̄ G = p`.
pub fn area_integral_over_pi(p: &Poly2, map: &ConformalMap) -> GaussRat {
    boundary_laurent(&p.antiderivative_zbar(), map).residue_of_product(&map.dz_laurent())
}

/// `M_p/π = Res[z̄(1/w)(z(w) − z₁)^p z′(w)]` for `p = 0..=pmax`, exactly.
pub fn moments(map: &ConformalMap, pmax: usize) -> MomentVector {
    let zb = map.zbar_laurent();
    let shifted = &map.z_laurent() - &LaurentPoly::constant(map.z1.clone());
    let mut a = map.dz_laurent();
    let mut over_pi = Vec::with_capacity(pmax + 1);
    for _ in 0..=pmax {
        over_pi.push(zb.residue_of_product(&a));
        a = &a * &shifted;
    }
    MomentVector { over_pi }
}

/// Floating-point moments over `π`, same residue formula.
pub fn moments_numeric(map: &NumericMap, pmax: usize) -> Vec<Complex64> {
    let c = map.coefficients();
    let shifted: Vec<Complex64> = std::iter::once(Complex64::zero()).chain(c[1..].iter().copied()).collect();
    let mut a: Vec<Complex64> = (1..c.len()).map(|j| c[j] * j as f64).collect();
    let mut out = Vec::with_capacity(pmax + 1);
    for _ in 0..=pmax {
        out.push(residue_against_conj(&c, &a));
        a = poly_mul(&a, &shifted);
    }
    out
}

/// `Res[Σ_j c̄_j w^{−j} · A(w)] = Σ_{j≥1} c̄_j A_{j−1}`.
pub(crate) fn residue_against_conj(c: &[Complex64], a: &[Complex64]) -> Complex64 {
    (1..c.len()).filter(|&j| j - 1 < a.len()).map(|j| c[j].conj() * a[j - 1]).sum()
}

pub(crate) fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn disk_moments() {
        let m = ConformalMap::disk(GaussRat::from_ints(2, 1), rat(3, 2)).unwrap();
        let mv = moments(&m, 4);
        assert_eq!(mv.over_pi[0], GaussRat::ratio(9, 4));
        assert!(mv.over_pi[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn area_matches_coefficient_formula() {
        // M₀/π = r² + Σ (i+1)|u_i|²
        let u = vec![GaussRat::ratio(1, 5), GaussRat::from_ints(0, 1).scale(&rat(1, 10)), GaussRat::ratio(-1, 20)];
        let m = ConformalMap::new(GaussRat::from_int(2), rat(1, 1), u.clone()).unwrap();
        let expected = u
            .iter()
            .enumerate()
            .fold(GaussRat::one(), |acc, (i, c)| &acc + &GaussRat::real(c.norm_sqr()).scale(&rat(i as i64 + 2, 1)));
        assert_eq!(moments(&m, 0).over_pi[0], expected);
        assert_eq!(area_integral_over_pi(&Poly2::one(), &m), expected);
    }

    #[test]
    fn exact_and_numeric_agree() {
        let m = ConformalMap::new(
            GaussRat::from_ints(1, -1),
            rat(7, 5),
            vec![GaussRat::ratio(1, 4), GaussRat::from_ints(0, 1).scale(&rat(1, 9))],
        )
        .unwrap();
        let exact = moments(&m, 5);
        let num = moments_numeric(&m.to_numeric(), 5);
        for (e, n) in exact.over_pi.iter().zip(&num) {
            assert!((e.to_complex() - n).norm() < 1e-13);
        }
        // moments of order above k̃ vanish
        assert!(exact.over_pi[3..].iter().all(Zero::is_zero));
    }

    #[test]
    fn generic_area_integral_reproduces_moments() {
        let m = ConformalMap::new(GaussRat::from_int(2), rat(1, 1), vec![GaussRat::ratio(1, 4)]).unwrap();
        let mv = moments(&m, 3);
        for p in 0..=3u32 {
            assert_eq!(area_integral_over_pi(&Poly2::shifted_z_power(&m.z1, p), &m), mv.over_pi[p as usize]);
        }
    }
}
