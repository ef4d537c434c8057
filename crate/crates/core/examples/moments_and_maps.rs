//! Exact moments of a polynomial map, the inverse problem back to the map,
//! and the univalence certificate near a cusp.

use num_complex::Complex64;
use qdomains::algebra::{GaussRat, Rational};
use qdomains::domains::{moments, solve_map_from_moments, univalence_check, ConformalMap, NumericMap};

fn main() {
    let map = ConformalMap::new(GaussRat::from_int(2), Rational::from_integer(1.into()), vec![GaussRat::ratio(1, 5)])
        .unwrap();
    let m = moments(&map, 3);
    for (p, v) in m.over_pi.iter().enumerate() {
        println!("M{p}/π = {v}");
    }
    let targets: Vec<Complex64> = m.over_pi.iter().map(GaussRat::to_complex).collect();
    let sol = solve_map_from_moments(Complex64::new(2.0, 0.0), &targets[..2], None).unwrap();
    println!("recovered r = {:.15}, u1 = {:.15} in {} Newton steps", sol.map.r, sol.map.u[0], sol.iterations);

    for u1 in [0.25, 0.49, 0.5, 0.8] {
        let rep =
            univalence_check(&NumericMap { z1: Complex64::new(0.0, 0.0), r: 1.0, u: vec![Complex64::new(u1, 0.0)] });
        println!(
            "u1 = {u1}: univalent {}, min |root of z'| {:?}, min |z'| on circle {:.3e}, crossings {}",
            rep.univalent, rep.min_root_modulus, rep.min_boundary_derivative, rep.self_intersections
        );
    }
}
