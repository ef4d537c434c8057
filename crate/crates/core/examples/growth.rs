//! Injection at a point: frames of the growing domain, the equivalent medium
//! fluxes, the breakdown time of a dipole burst, and path independence.

use qdomains::algebra::{rat_to_f64, GaussRat, Rational};
use qdomains::growth::{evolve, path_independence_check, SchedulePiece, SourceSchedule};
use qdomains::intertwine::build_axis;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn main() {
    let bundle = build_axis(1);
    let steady = SourceSchedule::new(
        GaussRat::from_int(2),
        vec![SchedulePiece { t_start: q(0, 1), t_end: q(2, 1), q: q(1, 1), qj: vec![GaussRat::ratio(1, 40)] }],
    )
    .unwrap();
    let times: Vec<Rational> = (1..=4).map(|i| q(i, 2)).collect();
    let evo = evolve(&steady, &bundle, &times).unwrap();
    for f in &evo.frames {
        println!(
            "t = {}: r = {:.9}, u1 = {:.3e}, Q = {:.9}, Q1 = {:.3e}",
            f.t.0,
            f.numeric_map.r,
            f.numeric_map.u.first().copied().unwrap_or_default(),
            f.medium_fluxes.q.to_complex().re,
            f.medium_fluxes.qj[0].to_complex()
        );
    }

    let burst = SourceSchedule::new(
        GaussRat::from_int(2),
        vec![
            SchedulePiece { t_start: q(0, 1), t_end: q(1, 1), q: q(1, 1), qj: vec![] },
            SchedulePiece { t_start: q(1, 1), t_end: q(10, 1), q: q(1, 100), qj: vec![GaussRat::ratio(1, 5)] },
        ],
    )
    .unwrap();
    let times: Vec<Rational> = (1..=10).map(|i| q(i, 1)).collect();
    let evo = evolve(&burst, &bundle, &times).unwrap();
    if let Some(b) = evo.breakdown {
        println!("dipole burst: univalence lost in [{:.7}, {:.7}]", b.last_valid, b.first_invalid);
    }

    let front = SourceSchedule::new(
        GaussRat::from_int(2),
        vec![SchedulePiece { t_start: q(0, 1), t_end: q(1, 2), q: q(4, 1), qj: vec![GaussRat::ratio(1, 10)] }],
    )
    .unwrap();
    let rep = path_independence_check(&steady, &front, &bundle, &q(2, 1)).unwrap();
    println!(
        "path independence at t = {}: map distance {:.1e}, passed {}",
        rat_to_f64(&q(2, 1)),
        rep.map_distance,
        rep.passed
    );
}
