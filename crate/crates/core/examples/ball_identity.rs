//! The mean-value identity of a `d`-ball for `φ = (ξ₁∂₁ − 1)h`, tested on
//! every harmonic basis polynomial of degree at most 4.

use qdomains::algebra::Rational;
use qdomains::verify::{ball_identity_check, harmonic_basis, BallSpec};

fn main() {
    for d in [2, 3, 4] {
        let mut center = vec![Rational::from_integer(0.into()); d];
        center[0] = Rational::from_integer(2.into());
        let spec = BallSpec::new(d, Rational::from_integer(1.into()), center).unwrap();
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for k in 0..=4 {
            for h in harmonic_basis(d, k) {
                let rep = ball_identity_check(&spec, &h).unwrap();
                worst = worst.max(rep.rel_error);
                count += 1;
            }
        }
        println!("d = {d}: {count} harmonics, volume {:.12}, max relative error {worst:.2e}", spec.volume());
    }
}
