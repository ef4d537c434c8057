//! Integrates `T[(z − z₁)^p]` over a non-circular domain by pullback
//! quadrature and compares with the point functional of the exact fluxes.

use qdomains::algebra::NumericPoly;
use qdomains::algebra::{GaussRat, Rational};
use qdomains::domains::ConformalMap;
use qdomains::fluxes::fluxes_for_map;
use qdomains::intertwine::build_dihedral;
use qdomains::verify::{integrate_fixed, verify_identity, DEFAULT_RESOLUTION};

fn main() {
    let map = ConformalMap::new(
        GaussRat::new(Rational::from_integer(3.into()), Rational::new(1.into(), 2.into())),
        Rational::from_integer(1.into()),
        vec![GaussRat::from_ints(0, 0), GaussRat::ratio(1, 10)],
    )
    .unwrap();
    let bundle = build_dihedral(1, 1, 0).unwrap();
    let sol = fluxes_for_map(&bundle, &map).unwrap();
    let num = map.to_numeric();
    let rep = verify_identity(&num, &map.z1, &bundle, &sol.fluxes, 6, DEFAULT_RESOLUTION).unwrap();
    for e in &rep.entries {
        println!("{:?} p = {}: rel error {:.2e}", e.family, e.p, e.rel_error);
    }
    println!("max relative error {:.2e}", rep.max_rel_error);

    // spectral convergence of the raw quadrature for one integrand
    let phi = NumericPoly::from(&bundle.t.apply(&qdomains::algebra::Poly2::shifted_z_power(&map.z1, 4)));
    let exact = integrate_fixed(&num, 64, &|z| phi.eval_at(z)).value;
    for n in [2, 4, 8, 16] {
        let v = integrate_fixed(&num, n, &|z| phi.eval_at(z)).value;
        println!("{n:>3} radial nodes: error {:.2e}", (v - exact).norm());
    }
}
