use serde::{Deserialize, Serialize};

use num_traits::One;

use super::{IntertwineError, IntertwinerBundle, MediumSpec};
use crate::algebra::{DiffOp2, GaussRat, Poly2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialResidual {
    pub a: u32,
    pub b: u32,
    pub residual: Poly2,
}

/// Outcome of an exact identity check over all monomials `z^a z̄^b`, `a + b ≤ D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub degree: u32,
    pub checked: usize,
    pub nonzero: Vec<MonomialResidual>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.nonzero.is_empty()
    }

    fn over_monomials<F: Fn(&Poly2) -> Poly2>(degree: u32, residual: F) -> Self {
        let mut checked = 0;
        let mut nonzero = Vec::new();
        for total in 0..=degree {
            for a in 0..=total {
                let b = total - a;
                let m = Poly2::monomial(a, b, GaussRat::one());
                let r = residual(&m);
                checked += 1;
                if !r.is_zero() {
                    nonzero.push(MonomialResidual { a, b, residual: r });
                }
            }
        }
        ResidualReport { degree, checked, nonzero }
    }
}

/// `ζ·T[Δm] − L[T[m]]` for every monomial up to `degree`.
pub fn check_intertwining(bundle: &IntertwinerBundle, degree: u32) -> ResidualReport {
    let lap = DiffOp2::laplacian();
    ResidualReport::over_monomials(degree, |m| {
        let lhs = &bundle.zeta * &bundle.t.apply(&lap.apply(m));
        let rhs = bundle.l_cleared.apply(&bundle.t.apply(m));
        &lhs - &rhs
    })
}

/// The operator `ζ·T∘Δ − L∘T`; zero exactly when the identity holds on
/// every input, not just on a finite monomial set.
pub fn operator_residual(bundle: &IntertwinerBundle) -> DiffOp2 {
    let lhs = bundle.t.compose(&DiffOp2::laplacian()).left_mul(&bundle.zeta);
    &lhs - &bundle.l_cleared.compose(&bundle.t)
}

/// One orbit of mirror lines: `poly` is the product of the linear forms
/// `α·z` over the orbit, `multiplicity` the common `m_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootOrbit {
    pub poly: Poly2,
    pub multiplicity: u32,
}

/// Root data for media whose `ζ` is a root product. Orbits with zero
/// multiplicity are omitted.
pub fn root_orbits(medium: &MediumSpec) -> Option<Vec<RootOrbit>> {
    let orbits = match medium {
        MediumSpec::Axis { n } => vec![RootOrbit { poly: Poly2::x(), multiplicity: *n }],
        MediumSpec::Dihedral { s, n, l } => {
            let zs = Poly2::z().pow(*s);
            let zbs = Poly2::zbar().pow(*s);
            let cos_orbit = (&zs + &zbs).scale(&GaussRat::ratio(1, 2));
            let sin_orbit = (&zs - &zbs).scale(&(&GaussRat::ratio(-1, 2) * &GaussRat::i()));
            vec![RootOrbit { poly: cos_orbit, multiplicity: *n }, RootOrbit { poly: sin_orbit, multiplicity: *l }]
        }
        MediumSpec::Deformed { .. } => return None,
    };
    Some(orbits.into_iter().filter(|o| o.multiplicity > 0).collect())
}

/// `|∇P|² − PΔP`, which equals `P² Σ_{α} (α·α)/(α·z)²` when `P = Π α·z`.
pub(crate) fn orbit_potential_numerator(p: &Poly2) -> Poly2 {
    let grad2 = &p.dx().pow(2) + &p.dy().pow(2);
    let lap = p.d_mixed(1, 1).scale(&GaussRat::from_int(4));
    &grad2 - &(p * &lap)
}

/// Checks `ζ(∇ζ⁻²∇)[ζm] = Δm − V m`, `V = Σ_{α∈R₊} (α·α) m_α(m_α+1)/(α·z)²`,
/// after multiplying through by `ζ² Π_o P_o²`:
/// `Π·L[ζm] = ζ²(Π·Δm − Σ_o m_o(m_o+1)(Π/P_o²)(|∇P_o|² − P_oΔP_o)·m)`.
pub fn check_schrodinger_gauge(bundle: &IntertwinerBundle, degree: u32) -> Result<ResidualReport, IntertwineError> {
    let orbits =
        root_orbits(&bundle.medium).ok_or_else(|| IntertwineError::NotApplicable(bundle.medium.to_string()))?;
    let squares: Vec<Poly2> = orbits.iter().map(|o| o.poly.pow(2)).collect();
    let pi_all = squares.iter().fold(Poly2::one(), |acc, s| &acc * s);
    let potential = orbits.iter().enumerate().fold(Poly2::zero(), |acc, (i, o)| {
        let others = squares.iter().enumerate().filter(|(j, _)| *j != i).fold(Poly2::one(), |acc, (_, s)| &acc * s);
        let weight = GaussRat::from_int(o.multiplicity as i64 * (o.multiplicity as i64 + 1));
        &acc + &(&others * &orbit_potential_numerator(&o.poly)).scale(&weight)
    });
    let zeta2 = bundle.zeta.pow(2);
    let lap = DiffOp2::laplacian();
    Ok(ResidualReport::over_monomials(degree, |m| {
        let lhs = &pi_all * &bundle.l_cleared.apply(&(&bundle.zeta * m));
        let rhs = &zeta2 * &(&(&pi_all * &lap.apply(m)) - &(&potential * m));
        &lhs - &rhs
    }))
}
