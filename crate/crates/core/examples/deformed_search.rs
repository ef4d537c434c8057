//! Searches Wronskian-ratio media over small index sets and quarter-turn
//! phases for a polynomial `ζ`, then certifies the hit.

use qdomains::algebra::{GaussRat, XyPoly};
use qdomains::intertwine::{check_intertwining, search_deformed, IntertwinerBundle};

fn main() {
    // x²(5y² − x²)
    let target = XyPoly::from_terms([(2, 2, GaussRat::from_int(5)), (4, 0, GaussRat::from_int(-1))]).to_zzbar();
    let outcome = search_deformed(3, 6, &[0, 1], Some(&target));
    println!("evaluated {} configurations, {} matches", outcome.evaluated, outcome.candidates.len());
    for c in &outcome.candidates {
        let b = IntertwinerBundle::build(&c.medium).unwrap();
        println!(
            "{}: ζ = {}, order {}, intertwining exact to degree 8: {}",
            c.medium,
            c.zeta.to_xy(),
            b.order(),
            check_intertwining(&b, 8).passed()
        );
    }
}
