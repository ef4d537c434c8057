//! Builds the intertwiner of each medium family and checks the identity
//! `ζ·T∘Δ = L∘T` as an operator equation.

use qdomains::intertwine::{check_intertwining, operator_residual, IntertwinerBundle, MediumSpec};

fn main() {
    for spec in ["axis:1", "axis:3", "dihedral:1,2,1", "dihedral:1,1,0", "deformed:1,4:1,0"] {
        let medium: MediumSpec = spec.parse().expect("valid medium");
        let b = IntertwinerBundle::build(&medium).expect("buildable medium");
        let report = check_intertwining(&b, 6);
        println!("{spec}: order {}, deg ζ {}", b.order(), b.zeta_degree());
        println!("  ζ(x, y) = {}", b.zeta.to_xy());
        println!("  T = {}", b.t);
        println!(
            "  operator residual zero: {}, monomials checked: {}, failures: {}",
            operator_residual(&b).is_zero(),
            report.checked,
            report.nonzero.len()
        );
    }
}
