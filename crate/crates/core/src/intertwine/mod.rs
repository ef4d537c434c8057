//! Intertwining operators `T` with `ζ·T∘Δ = L∘T`, where `L` is the cleared
//! elliptic operator `ζΔ − 2∇ζ·∇` of the medium with permeability `ζ⁻²`.
//!
//! Three families are built. The axis family is a product of first-order
//! factors in `x∂ₓ`. The dihedral and deformed families come from a
//! Wronskian in `θ` expanded along its last row, so that
//! `T = Σ_j c_j(z, z̄) ∂_θ^j` with polynomial `c_j`.

mod checks;
mod medium;
mod search;

pub use checks::{
    check_intertwining, check_schrodinger_gauge, operator_residual, root_orbits, MonomialResidual, ResidualReport,
    RootOrbit,
};
pub use medium::MediumSpec;
pub use search::{search_deformed, DeformedCandidate, SearchOutcome};

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::trig::derivative_row;
use crate::algebra::{determinant, wronskian_theta, AlgebraError, DiffOp2, GaussRat, Poly2, TrigElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntertwineError {
    #[error("invalid medium {0}")]
    InvalidMedium(String),
    #[error("Wronskian minor is not divisible by the denominator")]
    NotDivisible,
    #[error("candidate does not yield polynomial coefficients")]
    NotPolynomial,
    #[error("denominator Wronskian vanishes identically")]
    Degenerate,
    #[error("root data unavailable for {0}")]
    NotApplicable(String),
}

impl From<AlgebraError> for IntertwineError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NotPolynomial | AlgebraError::NotHomogeneous => IntertwineError::NotPolynomial,
            AlgebraError::DivisionByZero => IntertwineError::Degenerate,
            _ => IntertwineError::NotDivisible,
        }
    }
}

/// `T`, `ζ` and the cleared operator `L = ζΔ − 2∇ζ·∇` of one medium.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntertwinerBundle {
    pub medium: MediumSpec,
    #[serde(rename = "T")]
    pub t: DiffOp2,
    pub zeta: Poly2,
    #[serde(rename = "L_cleared")]
    pub l_cleared: DiffOp2,
}

impl IntertwinerBundle {
    pub fn build(medium: &MediumSpec) -> Result<Self, IntertwineError> {
        medium.validate()?;
        match medium {
            MediumSpec::Axis { n } => Ok(build_axis(*n)),
            MediumSpec::Dihedral { s, n, l } => build_dihedral(*s, *n, *l),
            MediumSpec::Deformed { k, phases } => build_deformed(k, phases),
        }
    }

    /// Order of `T` (zero for the identity).
    pub fn order(&self) -> u32 {
        self.t.order().unwrap_or(0)
    }

    pub fn zeta_degree(&self) -> u32 {
        self.zeta.total_degree().unwrap_or(0)
    }
}

/// `ζΔ − 2∇ζ·∇ = 4ζ∂_z∂_z̄ − 4ζ_z̄∂_z − 4ζ_z∂_z̄`.
pub fn cleared_operator(zeta: &Poly2) -> DiffOp2 {
    let four = GaussRat::from_int(4);
    let mut op = DiffOp2::term(1, 1, zeta.scale(&four));
    op = &op - &DiffOp2::term(1, 0, zeta.dzbar().scale(&four));
    &op - &DiffOp2::term(0, 1, zeta.dz().scale(&four))
}

/// `T_n = Π_{j=1..n} (x∂ₓ − (2j − 1))`, the expanded form of
/// `x^n (∂ₓ − n/x)···(∂ₓ − 1/x)`; `ζ = x^n`.
///
/// The factors commute, so the product order is immaterial. This family
/// keeps the normalization `T_1 = x∂ₓ − 1`.
pub fn build_axis(n: u32) -> IntertwinerBundle {
    let x_dx = DiffOp2::dx().left_mul(&Poly2::x());
    let mut t = DiffOp2::identity();
    for j in (1..=n).rev() {
        let shift = DiffOp2::multiplication(Poly2::constant(GaussRat::from_int(2 * j as i64 - 1)));
        t = t.compose(&(&x_dx - &shift));
    }
    let zeta = Poly2::x().pow(n);
    IntertwinerBundle { medium: MediumSpec::Axis { n }, l_cleared: cleared_operator(&zeta), t, zeta }
}

/// Dihedral intertwiner from `ρ^{s(n+l)} W[sin θ_1..sin θ_n, f] / (cos^{n(n−1)/2} sθ · sin^{l(l−1)/2} sθ)`
/// with `θ_k = k(sθ + π/2)` for `k ≤ n − l` and `(2k + l − n)(sθ + π/2)` above.
pub fn build_dihedral(s: u32, n: u32, l: u32) -> Result<IntertwinerBundle, IntertwineError> {
    let medium = MediumSpec::dihedral(s, n, l)?;
    let psis: Vec<TrigElem> = (1..=n as i64)
        .map(|k| {
            let mult = if k <= (n - l) as i64 { k } else { 2 * k + l as i64 - n as i64 };
            TrigElem::sin_phase(mult * s as i64, mult)
        })
        .collect();
    let den =
        &TrigElem::cos(s as i64).pow(n * (n - 1) / 2) * &TrigElem::sin(s as i64).pow(l * (l.saturating_sub(1)) / 2);
    wronskian_bundle(medium, &psis, &den, (s * (n + l)) as i64)
}

/// Wronskian-ratio intertwiner `ρ^{k_n} W[ψ_1..ψ_n, f] / W[ψ_1..ψ_{n−1}]`,
/// `ψ_j = sin(k_j θ + q_j π/2)`.
pub fn build_deformed(k: &[u32], phases: &[i64]) -> Result<IntertwinerBundle, IntertwineError> {
    let medium = MediumSpec::deformed(k.to_vec(), phases.to_vec())?;
    let psis = deformed_psis(k, phases);
    let den = wronskian_theta(&psis[..psis.len() - 1]);
    wronskian_bundle(medium, &psis, &den, *k.last().unwrap() as i64)
}

fn deformed_psis(k: &[u32], phases: &[i64]) -> Vec<TrigElem> {
    k.iter().zip(phases).map(|(&k, &q)| TrigElem::sin_phase(k as i64, q)).collect()
}

/// `ζ` alone for a deformed candidate; much cheaper than the full bundle.
pub fn deformed_zeta(k: &[u32], phases: &[i64]) -> Result<Poly2, IntertwineError> {
    MediumSpec::deformed(k.to_vec(), phases.to_vec())?;
    let psis = deformed_psis(k, phases);
    let den = wronskian_theta(&psis[..psis.len() - 1]);
    let zeta = ratio_to_poly(&wronskian_theta(&psis), &den, *k.last().unwrap() as i64)?;
    if zeta.is_zero() {
        return Err(IntertwineError::Degenerate);
    }
    Ok(zeta.normalized_to(&GaussRat::one()))
}

fn ratio_to_poly(num: &TrigElem, den: &TrigElem, rho: i64) -> Result<Poly2, IntertwineError> {
    if den.is_zero() {
        return Err(IntertwineError::Degenerate);
    }
    let q = num.exact_divide(den).map_err(|e| match e {
        AlgebraError::DivisionByZero => IntertwineError::Degenerate,
        _ => IntertwineError::NotDivisible,
    })?;
    Ok(q.with_rho_power(rho).to_poly2()?)
}

fn wronskian_bundle(
    medium: MediumSpec,
    psis: &[TrigElem],
    den: &TrigElem,
    rho: i64,
) -> Result<IntertwinerBundle, IntertwineError> {
    let n = psis.len();
    let rows: Vec<Vec<TrigElem>> = psis.iter().map(|p| derivative_row(p, n + 1)).collect();
    let zeta = ratio_to_poly(&wronskian_theta(psis), den, rho)?;
    if zeta.is_zero() {
        return Err(IntertwineError::Degenerate);
    }
    // Cofactor of f^{(j)} in the last row of the (n+1)×(n+1) determinant.
    let d_theta = DiffOp2::d_theta();
    let mut t = DiffOp2::zero();
    let mut d_pow = DiffOp2::identity();
    for j in 0..=n {
        let minor: Vec<Vec<TrigElem>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let mut cof = determinant(&minor);
        if (n + j) % 2 == 1 {
            cof = -&cof;
        }
        let c = ratio_to_poly(&cof, den, rho)?;
        t = &t + &d_pow.left_mul(&c);
        d_pow = d_theta.compose(&d_pow);
    }
    let zeta = zeta.normalized_to(&GaussRat::one());
    let lead = t.coeff(n as u32, 0);
    let scale = lead.leading().map(|(_, c)| c.inv()).ok_or(IntertwineError::Degenerate)??;
    let t = t.scale(&scale);
    Ok(IntertwinerBundle { medium, l_cleared: cleared_operator(&zeta), t, zeta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn axis_small_orders() {
        let b0 = build_axis(0);
        assert_eq!(b0.t, DiffOp2::identity());
        assert_eq!(b0.zeta, Poly2::one());
        let b1 = build_axis(1);
        let x_dx = DiffOp2::dx().left_mul(&Poly2::x());
        assert_eq!(b1.t, &x_dx - &DiffOp2::identity());
        let b2 = build_axis(2);
        let expected = &(&DiffOp2::dx().pow(2).left_mul(&Poly2::x().pow(2)) - &x_dx.scale(&g(3)))
            + &DiffOp2::multiplication(Poly2::constant(g(3)));
        assert_eq!(b2.t, expected);
    }

    #[test]
    fn axis_on_powers_of_x() {
        // T_n[x^k] = Π_{j=1..n} (k − 2j + 1) x^k
        for n in 0..5u32 {
            let t = build_axis(n).t;
            for k in 0..7u32 {
                let factor: i64 = (1..=n as i64).map(|j| k as i64 - 2 * j + 1).product();
                assert_eq!(t.apply(&Poly2::x().pow(k)), Poly2::x().pow(k).scale(&g(factor)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn dihedral_first_case_matches_hand_expansion() {
        // ρ W[cos θ, f] = ρ(cos θ ∂_θ f + sin θ f) = i x z f′ + y f for analytic f
        let b = build_dihedral(1, 1, 0).unwrap();
        assert_eq!(b.zeta, Poly2::x().normalized_to(&GaussRat::one()));
        let f = Poly2::z().pow(3);
        let hand = &(&(&Poly2::x() * &Poly2::z()) * &f.dz()).scale(&GaussRat::i()) + &(&Poly2::y() * &f);
        assert!(b.t.apply(&f).proportionality(&hand).is_some());
        let img = b.t.apply(&Poly2::z());
        let zzb = &Poly2::z() * &Poly2::zbar();
        assert!(img.proportionality(&zzb).is_some());
        assert!(b.l_cleared.apply(&zzb).is_zero());
    }

    #[test]
    fn dihedral_zeta_is_root_product() {
        let x = Poly2::x();
        let y = Poly2::y();
        let check = |s, n, l, expected: Poly2| {
            let b = build_dihedral(s, n, l).unwrap();
            assert!(b.zeta.proportionality(&expected).is_some(), "({s},{n},{l}) gave {}", b.zeta);
            assert_eq!(b.zeta_degree(), s * (n + l));
            assert_eq!(b.order(), n);
        };
        check(1, 2, 0, x.pow(2));
        check(1, 2, 1, &x.pow(2) * &y);
        let x2y2 = &x.pow(2) - &y.pow(2);
        check(2, 1, 0, x2y2.clone());
        check(2, 2, 1, &x2y2.pow(2) * &(&x * &y));
        check(3, 1, 0, &x.pow(3) - &(&x * &y.pow(2)).scale(&g(3)));
    }

    #[test]
    fn deformed_reproduces_dihedral_data() {
        let d = build_dihedral(1, 3, 0).unwrap();
        let df = build_deformed(&[1, 2, 3], &[1, 2, 3]).unwrap();
        assert_eq!(d.zeta, df.zeta);
        assert_eq!(df.t, d.t);
    }

    #[test]
    fn deformed_single_function() {
        // n = 1: ζ = ρ^{k} sin(kθ + qπ/2)
        assert!(build_deformed(&[2], &[0]).is_ok());
        assert_eq!(deformed_zeta(&[1], &[1]).unwrap(), Poly2::x().normalized_to(&GaussRat::one()));
        assert_eq!(deformed_zeta(&[0], &[0]), Err(IntertwineError::Degenerate));
    }

    #[test]
    fn deformed_target_medium() {
        let x = Poly2::x();
        let y = Poly2::y();
        let target = &x.pow(2) * &(&y.pow(2).scale(&g(5)) - &x.pow(2));
        let zeta = deformed_zeta(&[1, 4], &[1, 0]).unwrap();
        assert!(zeta.proportionality(&target).is_some(), "{zeta}");
    }
}
