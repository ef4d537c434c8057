//! Multipole fluxes that turn a polynomial domain into a quadrature domain
//! for a given medium.
//!
//! For `φ = T[f]` with analytic `f` the identity `∫_Ω φ = π Q̂[φ](z₁)`,
//! `Q̂ = Q + Σ_j Q_j ∂_z^j + Q̄_j ∂_z̄^j`, becomes one linear equation per
//! power `f = (z − z₁)^p`. The left sides (`V_p`) are exact residues on the
//! map; the right sides (`U_p`) are linear forms in the fluxes. The same is
//! done for the antianalytic family `f = (z̄ − z̄₁)^p`, whose constant term
//! multiplies `Q̄`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::linsolve::eliminate;
use crate::algebra::{GaussRat, LaurentPoly, Poly2, Rational};
use crate::domains::{area_integral_over_pi, boundary_laurent, ConformalMap};
use crate::intertwine::IntertwinerBundle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FluxError {
    #[error("source lies on a mirror line: ζ(z₁) = 0")]
    SourceOnMirror,
    #[error("flux system is rank deficient (rank {rank} of {unknowns})")]
    SingularSystem { rank: usize, unknowns: usize },
}

/// Number of multipole coefficients `K = (k̃+1)(deg ζ + 1) − 1`.
pub fn multipole_count(ktilde: usize, zeta_degree: u32) -> usize {
    (ktilde + 1) * (zeta_degree as usize + 1) - 1
}

/// Highest power with a possibly nonzero functional, `(k̃+2)(deg ζ + 1) − 2`.
pub fn max_power(ktilde: usize, zeta_degree: u32) -> usize {
    (ktilde + 2) * (zeta_degree as usize + 1) - 2
}

/// `V_p = (1/π p!) ∫_Ω T[f_p]` for both families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureFunctional {
    pub v: Vec<GaussRat>,
    pub v_conj: Vec<GaussRat>,
}

/// Rows of coefficients over the unknowns `[Q, Q̄, Q_1..Q_K, Q̄_1..Q̄_K]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxLinearForms {
    pub multipoles: usize,
    pub u: Vec<Vec<GaussRat>>,
    pub u_conj: Vec<Vec<GaussRat>>,
}

fn factorials(n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for i in 1..=n {
        let next = &out[i - 1] * Rational::from_integer((i as i64).into());
        out.push(next);
    }
    out
}

/// Computes `V_p` for `p = 0..=pmax`.
///
/// Holomorphic family: with `T[f] = Σ_a B_a f^{(a)}` and `∂_z̄ G_a = B_a`,
/// `V_p = Σ_a Res[G_a(z, z̄(1/w)) (z − z₁)^{p−a} z′] / (p−a)!`; each
/// `G_a` is pulled back to the circle once. The antianalytic family goes
/// through the generic area residue.
pub fn lhs_functionals(bundle: &IntertwinerBundle, map: &ConformalMap, pmax: usize) -> QuadratureFunctional {
    let fact = factorials(pmax);
    let pulled: Vec<LaurentPoly> =
        bundle.t.apply_to_analytic().iter().map(|b| boundary_laurent(&b.antiderivative_zbar(), map)).collect();
    let shifted = &map.z_laurent() - &LaurentPoly::constant(map.z1.clone());
    let mut s = vec![map.dz_laurent()];
    for q in 0..pmax {
        let next = &s[q] * &shifted;
        s.push(next);
    }
    let v = (0..=pmax)
        .map(|p| {
            pulled.iter().enumerate().take(p + 1).fold(GaussRat::zero(), |acc, (a, g)| {
                let r = g.residue_of_product(&s[p - a]);
                &acc + &r.scale(&fact[p - a].recip())
            })
        })
        .collect();
    let v_conj = (0..=pmax)
        .map(|p| {
            let phi = bundle.t.apply(&Poly2::shifted_zbar_power(&map.z1, p as u32));
            area_integral_over_pi(&phi, map).scale(&fact[p].recip())
        })
        .collect();
    QuadratureFunctional { v, v_conj }
}

fn form_row(phi: &Poly2, z1: &GaussRat, k: usize, conj_family: bool) -> Vec<GaussRat> {
    let mut row = vec![GaussRat::zero(); 2 * k + 2];
    row[if conj_family { 1 } else { 0 }] = phi.eval_at(z1);
    let mut dz = phi.clone();
    let mut dzb = phi.clone();
    for j in 1..=k {
        dz = dz.dz();
        dzb = dzb.dzbar();
        row[1 + j] = dz.eval_at(z1);
        row[1 + k + j] = dzb.eval_at(z1);
    }
    row
}

/// `U_p = Q̂[T[f_p]](z₁)/p!` as exact linear forms with `K` multipoles.
pub fn rhs_forms(
    bundle: &IntertwinerBundle,
    z1: &GaussRat,
    k: usize,
    pmax: usize,
) -> Result<FluxLinearForms, FluxError> {
    if bundle.zeta.eval_at(z1).is_zero() {
        return Err(FluxError::SourceOnMirror);
    }
    let fact = factorials(pmax);
    let build = |conj_family: bool| -> Vec<Vec<GaussRat>> {
        (0..=pmax)
            .map(|p| {
                let f = if conj_family {
                    Poly2::shifted_zbar_power(z1, p as u32)
                } else {
                    Poly2::shifted_z_power(z1, p as u32)
                };
                let phi = bundle.t.apply(&f).scale(&GaussRat::real(fact[p].recip()));
                form_row(&phi, z1, k, conj_family)
            })
            .collect()
    };
    Ok(FluxLinearForms { multipoles: k, u: build(false), u_conj: build(true) })
}

/// Multipole fluxes; `qj[j−1]` multiplies `∂_z^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxVector {
    #[serde(rename = "Q")]
    pub q: GaussRat,
    #[serde(rename = "Qj")]
    pub qj: Vec<GaussRat>,
}

impl FluxVector {
    /// Applies the source-strength sign `(−1)^j` used only when reporting.
    pub fn source_strengths(&self) -> Vec<GaussRat> {
        self.qj.iter().enumerate().map(|(i, q)| if i % 2 == 0 { -q } else { q.clone() }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Analytic,
    Antianalytic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationResidual {
    pub family: Family,
    pub p: usize,
    pub dropped: bool,
    pub residual: GaussRat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxSolution {
    pub fluxes: FluxVector,
    /// Independent unknowns of the antianalytic family; equal to the
    /// conjugates of `Q`, `Q_j` when the solution is consistent.
    pub q_bar: GaussRat,
    pub qj_bar: Vec<GaussRat>,
    pub drop: usize,
    pub rank: usize,
    pub residuals: Vec<EquationResidual>,
}

impl FluxSolution {
    pub fn all_residuals_zero(&self) -> bool {
        self.residuals.iter().all(|r| r.residual.is_zero())
    }

    pub fn q_is_real(&self) -> bool {
        self.fluxes.q.im.is_zero()
    }

    /// `Q̄ = conj(Q)` and `Q̄_j = conj(Q_j)` for every `j`.
    pub fn conjugates_consistent(&self) -> bool {
        self.q_bar == self.fluxes.q.conj() && self.qj_bar.iter().zip(&self.fluxes.qj).all(|(b, q)| *b == q.conj())
    }

    pub fn equation_count(&self) -> usize {
        self.residuals.len()
    }

    pub fn passed(&self) -> bool {
        self.all_residuals_zero() && self.q_is_real() && self.conjugates_consistent()
    }
}

/// Solves the equations with `p ≥ drop` of both families exactly and reports
/// residuals of every equation, including the `p < drop` ones.
pub fn solve_fluxes(v: &QuadratureFunctional, forms: &FluxLinearForms, drop: usize) -> Result<FluxSolution, FluxError> {
    let k = forms.multipoles;
    let unknowns = 2 * k + 2;
    let pmax = v.v.len().min(forms.u.len());
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in drop..pmax {
        rows.push(forms.u[p].clone());
        rhs.push(v.v[p].clone());
        rows.push(forms.u_conj[p].clone());
        rhs.push(v.v_conj[p].clone());
    }
    let elim = eliminate(&rows, &rhs);
    if !elim.full_column_rank() {
        return Err(FluxError::SingularSystem { rank: elim.rank, unknowns });
    }
    let x = elim.pivot_solution();
    let dot = |row: &[GaussRat]| row.iter().zip(&x).fold(GaussRat::zero(), |acc, (a, b)| &acc + &(a * b));
    let mut residuals = Vec::new();
    for p in 0..pmax {
        for (family, form, val) in
            [(Family::Analytic, &forms.u[p], &v.v[p]), (Family::Antianalytic, &forms.u_conj[p], &v.v_conj[p])]
        {
            residuals.push(EquationResidual { family, p, dropped: p < drop, residual: &dot(form) - val });
        }
    }
    Ok(FluxSolution {
        fluxes: FluxVector { q: x[0].clone(), qj: x[2..2 + k].to_vec() },
        q_bar: x[1].clone(),
        qj_bar: x[2 + k..].to_vec(),
        drop,
        rank: elim.rank,
        residuals,
    })
}

/// Full pipeline for one map: functionals, forms and the solve, sized by
/// the map degree and `deg ζ`.
pub fn fluxes_for_map(bundle: &IntertwinerBundle, map: &ConformalMap) -> Result<FluxSolution, FluxError> {
    let n = bundle.zeta_degree();
    let kt = map.ktilde();
    let pmax = max_power(kt, n);
    let forms = rhs_forms(bundle, &map.z1, multipole_count(kt, n), pmax)?;
    let v = lhs_functionals(bundle, map, pmax);
    solve_fluxes(&v, &forms, bundle.order() as usize)
}

mod equivalent;
pub use equivalent::{equivalent_fluxes, targets_from_fluxes, EquivalentFluxError, EquivalentFluxes};
