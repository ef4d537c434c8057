//! End-to-end acceptance run. Each criterion prints one `PASS`/`FAIL` line;
//! the process exits nonzero if any line fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qdomains::algebra::{GaussRat, Rational, XyPoly};
use qdomains::domains::{univalence_check, ConformalMap};
use qdomains::fluxes::{fluxes_for_map, lhs_functionals, max_power};
use qdomains::growth::{path_independence_check, SchedulePiece, SourceSchedule};
use qdomains::intertwine::{
    build_axis, build_deformed, build_dihedral, check_intertwining, check_schrodinger_gauge, search_deformed,
    IntertwinerBundle, MediumSpec,
};
use qdomains::verify::{
    ball_identity_check, harmonic_basis, pressure_disk, verify_identity, verify_pressure, BallSpec, DEFAULT_RESOLUTION,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn identity_media() -> Vec<(String, IntertwinerBundle)> {
    let mut media: Vec<(String, IntertwinerBundle)> = (0..=3).map(|n| (format!("axis:{n}"), build_axis(n))).collect();
    for (s, n, l) in [(1, 1, 0), (1, 2, 1)] {
        media.push((format!("dihedral:{s},{n},{l}"), build_dihedral(s, n, l).unwrap()));
    }
    media
}

fn gauge_media() -> Vec<IntertwinerBundle> {
    let mut media: Vec<IntertwinerBundle> = (0..=4).map(build_axis).collect();
    for (s, n, l) in [(1, 1, 0), (1, 2, 0), (2, 1, 0), (1, 2, 1), (2, 2, 1)] {
        media.push(build_dihedral(s, n, l).unwrap());
    }
    media
}

/// Univalent polynomial maps in the open quadrant, kept clear of both axes
/// so that every tested medium is regular on the closure.
fn random_maps(count: usize, seed: u64) -> Vec<ConformalMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let z1 = GaussRat::new(q(rng.gen_range(16..=32), 8), q(rng.gen_range(12..=28), 8));
        let r = q(rng.gen_range(3..=6), 10);
        let kt = rng.gen_range(0..=3);
        let u: Vec<GaussRat> = (1..=kt)
            .map(|j| {
                let b = 15 / j as i64;
                GaussRat::new(q(rng.gen_range(-b..=b), 100), q(rng.gen_range(-b..=b), 100))
            })
            .collect();
        let map = ConformalMap::new(z1, r, u).unwrap();
        let num = map.to_numeric();
        let reach = num.r + num.u.iter().map(|c| c.norm()).sum::<f64>();
        if reach < num.z1.re.min(num.z1.im) && univalence_check(&num).univalent {
            out.push(map);
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let map = ConformalMap::disk(GaussRat::from_int(2), q(1, 1)).unwrap();
    let sol = fluxes_for_map(&build_axis(1), &map).unwrap();
    let ok = sol.fluxes.q == GaussRat::from_int(1)
        && sol.fluxes.qj == vec![GaussRat::ratio(1, 8)]
        && sol.qj_bar == vec![GaussRat::ratio(1, 8)]
        && sol.equation_count() == 6
        && sol.all_residuals_zero();
    outcome(
        ok,
        format!(
            "Q = {}, Q1 = {}, {} equations with zero residual",
            sol.fluxes.q,
            sol.fluxes.qj[0],
            sol.equation_count()
        ),
    )
}

fn criterion_2() -> Outcome {
    let media = gauge_media();
    let failed: Vec<String> =
        media.iter().filter(|b| !check_intertwining(b, 8).passed()).map(|b| b.medium.to_string()).collect();
    outcome(failed.is_empty(), format!("{} media to degree 8, failures {:?}", media.len(), failed))
}

fn criterion_3() -> Outcome {
    let media = gauge_media();
    let failed: Vec<String> = media
        .iter()
        .filter(|b| !check_schrodinger_gauge(b, 8).map(|r| r.passed()).unwrap_or(false))
        .map(|b| b.medium.to_string())
        .collect();
    outcome(failed.is_empty(), format!("{} media to degree 8, failures {:?}", media.len(), failed))
}

/// Shared by criteria 4 and 5: exact solves, truncation and quadrature.
struct RandomMapRun {
    cases: usize,
    exact_failures: Vec<String>,
    truncation_failures: Vec<String>,
    worst_identity: f64,
}

struct CaseResult {
    label: String,
    exact: bool,
    truncated: bool,
    identity: f64,
}

fn run_case(i: usize, map: &ConformalMap, name: &str, bundle: &IntertwinerBundle) -> CaseResult {
    let label = format!("map {i} (k̃ = {}) in {name}", map.ktilde());
    let pmax = max_power(map.ktilde(), bundle.zeta_degree());
    let Ok(sol) = fluxes_for_map(bundle, map) else {
        return CaseResult { label, exact: false, truncated: true, identity: f64::INFINITY };
    };
    let extended = lhs_functionals(bundle, map, pmax + 6);
    let truncated = extended.v[pmax + 1..].iter().chain(&extended.v_conj[pmax + 1..]).all(num_traits::Zero::is_zero);
    let identity = verify_identity(&map.to_numeric(), &map.z1, bundle, &sol.fluxes, pmax + 2, DEFAULT_RESOLUTION)
        .map_or(f64::INFINITY, |r| r.max_rel_error);
    CaseResult { label, exact: sol.passed(), truncated, identity }
}

fn random_map_run() -> RandomMapRun {
    let maps = random_maps(20, 20240611);
    let media = identity_media();
    let cases: Vec<(usize, &ConformalMap, &(String, IntertwinerBundle))> =
        maps.iter().enumerate().flat_map(|(i, m)| media.iter().map(move |b| (i, m, b))).collect();
    let results: Vec<CaseResult> =
        cases.par_iter().map(|(i, map, (name, bundle))| run_case(*i, map, name, bundle)).collect();
    RandomMapRun {
        cases: results.len(),
        exact_failures: results.iter().filter(|r| !r.exact).map(|r| r.label.clone()).collect(),
        truncation_failures: results.iter().filter(|r| !r.truncated).map(|r| r.label.clone()).collect(),
        worst_identity: results.iter().map(|r| r.identity).fold(0.0, f64::max),
    }
}

fn criterion_4(run: &RandomMapRun) -> Outcome {
    let ok = run.exact_failures.is_empty() && run.worst_identity <= 1e-9;
    outcome(
        ok,
        format!(
            "{} cases, exact failures {:?}, max identity error {:.2e}",
            run.cases, run.exact_failures, run.worst_identity
        ),
    )
}

fn criterion_5(run: &RandomMapRun) -> Outcome {
    outcome(
        run.truncation_failures.is_empty(),
        format!("{} cases, six powers beyond the bound, failures {:?}", run.cases, run.truncation_failures),
    )
}

fn criterion_6() -> Outcome {
    let rep = verify_pressure(&pressure_disk(&q(1, 1), &q(1, 1), &GaussRat::from_int(2)).unwrap()).unwrap();
    let worst = rep.measured.iter().fold(0.0_f64, |m, s| {
        m.max((s.monopole - rep.expected_monopole).abs()).max((s.dipole - rep.expected_dipole).abs())
    });
    let ok = rep.pde_residual_zero && rep.boundary_ok && rep.kinematic_ok && rep.sources_ok;
    outcome(
        ok,
        format!(
            "PDE exact {}, boundary {:.1e}, kinematic {:.1e}, source error {worst:.1e}",
            rep.pde_residual_zero, rep.boundary_spread, rep.kinematic_error
        ),
    )
}

fn criterion_7() -> Outcome {
    let piece = |a: Rational, b: Rational, rate: Rational, qj: Vec<GaussRat>| SchedulePiece {
        t_start: a,
        t_end: b,
        q: rate,
        qj,
    };
    let z1 = GaussRat::new(q(5, 2), q(1, 3));
    let steady = SourceSchedule::new(z1.clone(), vec![piece(q(0, 1), q(2, 1), q(1, 1), vec![GaussRat::ratio(1, 40)])]);
    let staged = SourceSchedule::new(
        z1,
        vec![piece(q(0, 1), q(1, 2), q(3, 1), vec![]), piece(q(1, 1), q(3, 2), q(1, 1), vec![GaussRat::ratio(1, 10)])],
    );
    let rep = path_independence_check(&steady.unwrap(), &staged.unwrap(), &build_axis(1), &q(2, 1)).unwrap();
    let ok = rep.cumulative_equal && rep.map_distance <= 1e-10;
    outcome(ok, format!("map coefficient distance {:.1e}", rep.map_distance))
}

fn criterion_8() -> Outcome {
    let spec = BallSpec::new(3, q(1, 1), vec![q(2, 1), q(0, 1), q(0, 1)]).unwrap();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 0..=4 {
        for h in harmonic_basis(3, k) {
            worst = worst.max(ball_identity_check(&spec, &h).unwrap().rel_error);
            count += 1;
        }
    }
    outcome(worst <= 1e-8, format!("{count} harmonics, max relative error {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let target = XyPoly::from_terms([(2, 2, GaussRat::from_int(5)), (4, 0, GaussRat::from_int(-1))]).to_zzbar();
    let search = search_deformed(3, 6, &[0, 1, 2, 3], Some(&target));
    let Some(hit) = search.candidates.first() else {
        return outcome(
            false,
            format!("search exhausted {} configurations (n ≤ 3, k ≤ 6, quarter-turn phases)", search.evaluated),
        );
    };
    let MediumSpec::Deformed { k, phases } = &hit.medium else {
        return outcome(false, "search returned a non-deformed medium");
    };
    let bundle = build_deformed(k, phases).unwrap();
    let exact = check_intertwining(&bundle, 8).passed();
    // ζ vanishes on x = 0 and y = ±x/√5; this source sits clear of all three
    let map = ConformalMap::new(GaussRat::new(q(3, 1), q(1, 2)), q(1, 2), vec![GaussRat::ratio(1, 20)]).unwrap();
    let sol = fluxes_for_map(&bundle, &map).unwrap();
    let pmax = max_power(map.ktilde(), bundle.zeta_degree());
    let rep = verify_identity(&map.to_numeric(), &map.z1, &bundle, &sol.fluxes, pmax + 2, DEFAULT_RESOLUTION).unwrap();
    let ok = exact && sol.passed() && rep.max_rel_error <= 1e-8;
    outcome(
        ok,
        format!(
            "{} of {} configurations match, first {}; intertwining exact {exact}, identity error {:.2e}",
            search.candidates.len(),
            search.evaluated,
            hit.medium,
            rep.max_rel_error
        ),
    )
}

fn report(id: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    println!(
        "criterion {id} [{}] {title}: {} ({:.2} s)",
        if o.passed { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.passed
}

fn main() {
    // `cargo test -- <filter>` passes arguments; this runner ignores them
    let mut all = true;
    all &= report(1, "disk closed form", criterion_1);
    all &= report(2, "intertwining identities", criterion_2);
    all &= report(3, "Schrödinger gauge", criterion_3);
    let start = Instant::now();
    let run = random_map_run();
    let shared = start.elapsed().as_secs_f64();
    all &= report(4, "quadrature identity at random maps", || criterion_4(&run));
    all &= report(5, "functional truncation", || criterion_5(&run));
    println!("  (criteria 4 and 5 share one {shared:.2} s computation)");
    all &= report(6, "pressure field", criterion_6);
    all &= report(7, "path independence", criterion_7);
    all &= report(8, "ball identity", criterion_8);
    all &= report(9, "deformed family", criterion_9);
    if !all {
        std::process::exit(1);
    }
}
