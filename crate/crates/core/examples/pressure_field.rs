//! The closed-form pressure of a disk growing in the `1/x²` medium: exact
//! PDE residual, boundary constancy, kinematic law and source strengths.

use qdomains::algebra::{GaussRat, Rational};
use qdomains::verify::{pressure_disk, verify_pressure};

fn main() {
    let one = Rational::from_integer(1.into());
    let expr = pressure_disk(&one, &one, &GaussRat::from_int(2)).unwrap();
    let rep = verify_pressure(&expr).unwrap();
    println!("PDE residual is the zero polynomial: {}", rep.pde_residual_zero);
    println!("boundary std/|mean|: {:.2e}", rep.boundary_spread);
    println!("kinematic error: {:.2e}", rep.kinematic_error);
    println!("expected monopole {} and dipole {}", rep.expected_monopole, rep.expected_dipole);
    for s in &rep.measured {
        println!("  contour radius {:.0e}: monopole {:.12}, dipole {:.12}", s.radius, s.monopole, s.dipole);
    }
    println!("far-field error (in units of r/x1): {:.3}", rep.far_field_error);
    println!("all checks passed: {}", rep.passed);
}
