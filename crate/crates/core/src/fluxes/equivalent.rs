use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::{fluxes_for_map, FluxError, FluxSolution, FluxVector};
use crate::algebra::GaussRat;
use crate::domains::{solve_map_from_moments, ConformalMap, DomainError, NumericMap};
use crate::intertwine::IntertwinerBundle;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquivalentFluxError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Flux(#[from] FluxError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalentFluxes {
    pub map: ConformalMap,
    #[serde(skip)]
    pub numeric_map: NumericMap,
    pub newton_iterations: usize,
    pub solution: FluxSolution,
}

/// Homogeneous fluxes `(Q̃, Q̃_j)` to the fluxes of `bundle`'s medium that
/// produce the same domain: moments `M_p = π p! Q̃_p`, the map from the
/// inverse problem (rationalized at `1e−13`), then the exact flux solve.
pub fn equivalent_fluxes(
    homog: &FluxVector,
    z1: &GaussRat,
    bundle: &IntertwinerBundle,
    guess: Option<&NumericMap>,
) -> Result<EquivalentFluxes, EquivalentFluxError> {
    let sol = solve_map_from_moments(z1.to_complex(), &targets_from_fluxes(homog), guess)?;
    let mut map = sol.map.to_exact()?;
    map.z1 = z1.clone();
    let solution = fluxes_for_map(bundle, &map)?;
    Ok(EquivalentFluxes { map, numeric_map: sol.map, newton_iterations: sol.iterations, solution })
}

/// Moment targets `M_p/π = p! Q̃_p` in floating point.
pub fn targets_from_fluxes(homog: &FluxVector) -> Vec<Complex64> {
    let mut fact = 1.0;
    std::iter::once(homog.q.to_complex())
        .chain(homog.qj.iter().enumerate().map(|(j, q)| {
            fact *= (j + 1) as f64;
            q.to_complex() * fact
        }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwine::{build_axis, build_dihedral};

    #[test]
    fn disk_example() {
        let homog = FluxVector { q: GaussRat::from_int(1), qj: vec![] };
        let out = equivalent_fluxes(&homog, &GaussRat::from_int(2), &build_axis(1), None).unwrap();
        assert_eq!(out.solution.fluxes.q, GaussRat::from_int(1));
        assert_eq!(out.solution.fluxes.qj, vec![GaussRat::ratio(1, 8)]);
    }

    #[test]
    fn homogeneous_medium_is_identity() {
        let homog = FluxVector { q: GaussRat::from_int(1), qj: vec![GaussRat::ratio(1, 20)] };
        let out = equivalent_fluxes(&homog, &GaussRat::from_int(2), &build_axis(0), None).unwrap();
        let got = &out.solution.fluxes;
        assert!((got.q.to_complex() - 1.0).norm() < 1e-12);
        assert!((got.qj[0].to_complex() - 0.05).norm() < 1e-12);
    }

    #[test]
    fn dihedral_multipole_count() {
        let homog = FluxVector { q: GaussRat::from_int(1), qj: vec![GaussRat::ratio(1, 20)] };
        let out = equivalent_fluxes(&homog, &GaussRat::from_int(2), &build_dihedral(1, 1, 0).unwrap(), None).unwrap();
        assert_eq!(out.solution.fluxes.qj.len(), 3);
        assert!(out.solution.passed());
    }
}
