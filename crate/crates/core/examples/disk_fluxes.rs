//! Multipole fluxes of a disk in the `1/x²` medium and of a
//! three-coefficient map in a dihedral medium, solved exactly.

use qdomains::algebra::{GaussRat, Rational};
use qdomains::domains::ConformalMap;
use qdomains::fluxes::fluxes_for_map;
use qdomains::intertwine::{build_axis, build_dihedral};

fn main() {
    let disk = ConformalMap::disk(GaussRat::from_int(2), Rational::from_integer(1.into())).unwrap();
    let sol = fluxes_for_map(&build_axis(1), &disk).unwrap();
    println!("disk r = 1 at z1 = 2, axis n = 1");
    println!("  Q = {}, Q1 = {}", sol.fluxes.q, sol.fluxes.qj[0]);
    println!(
        "  {} equations, {} dropped powers, all residuals zero: {}",
        sol.equation_count(),
        sol.drop,
        sol.all_residuals_zero()
    );

    let map = ConformalMap::new(
        GaussRat::new(Rational::from_integer(2.into()), Rational::new(1.into(), 3.into())),
        Rational::new(5.into(), 4.into()),
        vec![GaussRat::ratio(1, 10), GaussRat::from_ints(0, 0), GaussRat::ratio(1, 50)],
    )
    .unwrap();
    let sol = fluxes_for_map(&build_dihedral(1, 2, 1).unwrap(), &map).unwrap();
    println!("k̃ = 3 map, dihedral (1,2,1)");
    println!("  Q = {}", sol.fluxes.q);
    for (j, q) in sol.fluxes.qj.iter().enumerate() {
        println!("  Q{} ≈ {:.6e}", j + 1, q.to_complex());
    }
    println!("  passed: {}", sol.passed());
}
