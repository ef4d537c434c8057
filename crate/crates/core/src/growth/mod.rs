//! Free-boundary growth as a sequence of static inverse problems: cumulative
//! homogeneous fluxes fix the moments, the moments fix the map, and the map
//! fixes the medium fluxes.

mod schedule;

pub use schedule::{SchedulePiece, SourceSchedule};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::linsolve::eliminate;
use crate::algebra::{rat_to_f64, GaussRat, Poly2, Rational};
use crate::domains::{
    moments_numeric, solve_map_from_moments, ConformalMap, DomainError, NumericMap, UnivalenceReport,
};
use crate::fluxes::{
    equivalent_fluxes, multipole_count, rhs_forms, targets_from_fluxes, EquivalentFluxError, FluxError, FluxVector,
};
use crate::intertwine::IntertwinerBundle;
use crate::verify::{integrate_adaptive, CenteredPoly, VerifyError, DEFAULT_RESOLUTION};

/// Breakdown times are bracketed to this width.
pub const BREAKDOWN_TOL: f64 = 1e-6;
pub const PATH_TOL: f64 = 1e-10;
pub const CONSERVATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Flux(#[from] FluxError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("domain stopped being univalent near t = {0}")]
    Breakdown(f64),
}

impl From<EquivalentFluxError> for GrowthError {
    fn from(e: EquivalentFluxError) -> Self {
        match e {
            EquivalentFluxError::Domain(d) => GrowthError::Domain(d),
            EquivalentFluxError::Flux(f) => GrowthError::Flux(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Frame {
    pub t: ExactTime,
    pub map: ConformalMap,
    pub homog_fluxes: FluxVector,
    pub medium_fluxes: FluxVector,
    pub newton_iterations: usize,
    /// `max_p |M_p/π − p! Q̃_p|` on the floating-point map.
    pub moment_residual: f64,
    #[serde(skip)]
    pub numeric_map: NumericMap,
}

/// Time stamp serialized as an exact rational string.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct ExactTime(pub Rational);

impl Serialize for ExactTime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::algebra::gauss_rat::format_rational(&self.0))
    }
}

/// The first output time at which the domain stopped being univalent,
/// together with a bracket `[last_valid, first_invalid]` of width at most
/// [`BREAKDOWN_TOL`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Breakdown {
    pub output_time: f64,
    pub last_valid: f64,
    pub first_invalid: f64,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub univalence: Option<UnivalenceReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evolution {
    pub frames: Vec<Frame>,
    /// Output times before any fluid was injected.
    pub empty_times: Vec<f64>,
    pub breakdown: Option<Breakdown>,
}

fn map_is_valid(
    schedule: &SourceSchedule,
    t: &Rational,
    guess: Option<&NumericMap>,
) -> Result<NumericMap, DomainError> {
    let targets = targets_from_fluxes(&schedule.cumulative(t));
    solve_map_from_moments(schedule.z1.to_complex(), &targets, guess).map(|s| s.map)
}

fn is_breakdown(e: &GrowthError) -> bool {
    matches!(e, GrowthError::Domain(DomainError::NonUnivalent(_) | DomainError::NoConvergence { .. }))
}

/// Bisects on exact dyadic times between a valid and a failing time, warm
/// starting each solve from the last valid map.
fn bracket_breakdown(
    schedule: &SourceSchedule,
    mut lo: Rational,
    mut hi: Rational,
    mut guess: Option<NumericMap>,
) -> (f64, f64) {
    let half = Rational::new(1.into(), 2.into());
    while rat_to_f64(&(&hi - &lo)) > BREAKDOWN_TOL {
        let mid = (&lo + &hi) * &half;
        match map_is_valid(schedule, &mid, guess.as_ref()) {
            Ok(m) => {
                lo = mid;
                guess = Some(m);
            }
            Err(_) => hi = mid,
        }
    }
    (rat_to_f64(&lo), rat_to_f64(&hi))
}

/// Reconstructs the domain at every output time (sorted ascending), warm
/// starting each inverse problem from the previous frame. Stops at the
/// first non-univalent (or non-convergent) time and brackets the
/// breakdown.
pub fn evolve(
    schedule: &SourceSchedule,
    bundle: &IntertwinerBundle,
    times: &[Rational],
) -> Result<Evolution, GrowthError> {
    let mut sorted = times.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut frames: Vec<Frame> = Vec::new();
    let mut empty_times = Vec::new();
    let mut last_valid = Rational::zero();
    for t in sorted {
        let homog = schedule.cumulative(&t);
        if homog.q.is_zero() {
            empty_times.push(rat_to_f64(&t));
            continue;
        }
        let guess = frames.last().map(|f| f.numeric_map.clone());
        match equivalent_fluxes(&homog, &schedule.z1, bundle, guess.as_ref()).map_err(GrowthError::from) {
            Ok(out) => {
                let targets = targets_from_fluxes(&homog);
                let m = moments_numeric(&out.numeric_map, targets.len() - 1);
                let moment_residual = m.iter().zip(&targets).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                last_valid = t.clone();
                frames.push(Frame {
                    t: ExactTime(t),
                    map: out.map,
                    homog_fluxes: homog,
                    medium_fluxes: out.solution.fluxes,
                    newton_iterations: out.newton_iterations,
                    moment_residual,
                    numeric_map: out.numeric_map,
                });
            }
            Err(e) if is_breakdown(&e) => {
                let univalence = match &e {
                    GrowthError::Domain(DomainError::NonUnivalent(r)) => Some((**r).clone()),
                    _ => None,
                };
                let start_guess = frames.last().map(|f| f.numeric_map.clone());
                let (lo, hi) = bracket_breakdown(schedule, last_valid.clone(), t.clone(), start_guess);
                return Ok(Evolution {
                    frames,
                    empty_times,
                    breakdown: Some(Breakdown {
                        output_time: rat_to_f64(&t),
                        last_valid: lo,
                        first_invalid: hi,
                        reason: e.to_string(),
                        univalence,
                    }),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Evolution { frames, empty_times, breakdown: None })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathReport {
    pub t_final: f64,
    pub cumulative_equal: bool,
    pub map_distance: f64,
    pub medium_flux_distance: f64,
    pub passed: bool,
}

fn flux_distance(a: &FluxVector, b: &FluxVector) -> f64 {
    let n = a.qj.len().max(b.qj.len());
    let get = |v: &FluxVector, j: usize| v.qj.get(j).map_or(Complex64::zero(), GaussRat::to_complex);
    (0..n).map(|j| (get(a, j) - get(b, j)).norm()).fold((a.q.to_complex() - b.q.to_complex()).norm(), f64::max)
}

/// Final frame of `schedule` at `t_final`; cold start first, then a warm
/// path of 16 intermediate times if the cold solve fails.
fn final_frame(
    schedule: &SourceSchedule,
    bundle: &IntertwinerBundle,
    t_final: &Rational,
) -> Result<Frame, GrowthError> {
    let direct = evolve(schedule, bundle, std::slice::from_ref(t_final))?;
    if direct.breakdown.is_none() {
        if let Some(f) = direct.frames.into_iter().next() {
            return Ok(f);
        }
    }
    let times: Vec<Rational> = (1..=16).map(|i| t_final * Rational::new(i.into(), 16.into())).collect();
    let evo = evolve(schedule, bundle, &times)?;
    match (evo.breakdown, evo.frames.last()) {
        (None, Some(f)) => Ok(f.clone()),
        (Some(b), _) => Err(GrowthError::Breakdown(b.first_invalid)),
        (None, None) => Err(GrowthError::Domain(DomainError::InvalidMoments("no fluid injected by t_final".into()))),
    }
}

/// Evolves both schedules to `t_final` and compares final map coefficients
/// and medium fluxes. A mismatch in cumulative fluxes is reported (and
/// fails the check) rather than treated as an error.
pub fn path_independence_check(
    a: &SourceSchedule,
    b: &SourceSchedule,
    bundle: &IntertwinerBundle,
    t_final: &Rational,
) -> Result<PathReport, GrowthError> {
    let (ca, cb) = (a.cumulative(t_final), b.cumulative(t_final));
    let k = ca.qj.len().max(cb.qj.len());
    let pad = |v: &FluxVector| {
        let mut qj = v.qj.clone();
        qj.resize(k, GaussRat::zero());
        (v.q.clone(), qj)
    };
    let cumulative_equal = a.z1 == b.z1 && pad(&ca) == pad(&cb);
    let fa = final_frame(a, bundle, t_final)?;
    let fb = final_frame(b, bundle, t_final)?;
    let map_distance = fa.numeric_map.max_coefficient_distance(&fb.numeric_map);
    let medium_flux_distance = flux_distance(&fa.medium_fluxes, &fb.medium_fluxes);
    Ok(PathReport {
        t_final: rat_to_f64(t_final),
        cumulative_equal,
        map_distance,
        medium_flux_distance,
        passed: cumulative_equal && map_distance <= PATH_TOL && medium_flux_distance <= PATH_TOL,
    })
}

/// Functions `φ = T[f]` annihilated by every evaluation functional
/// `Q + Σ_{j≤K} Q_j ∂_z^j + Q̄_j ∂_z̄^j` at `z₁`, so that `∫_Ω φ = 0` for
/// every quadrature domain with `K` multipoles at `z₁`. Built from the
/// exact null space of the transposed flux forms; `count` random integer
/// combinations are returned.
pub fn conserved_functionals(
    bundle: &IntertwinerBundle,
    z1: &GaussRat,
    ktilde: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Poly2>, GrowthError> {
    let k = multipole_count(ktilde, bundle.zeta_degree());
    let pmax = 2 * k + 4 + bundle.order() as usize;
    let forms = rhs_forms(bundle, z1, k, pmax)?;
    let fact = |p: usize| (1..=p).fold(Rational::one(), |acc, i| acc * Rational::from_integer((i as i64).into()));
    // basis column c ↦ (family, p); its form rows describe T[f_p]/p!
    let mut basis = Vec::new();
    let mut cols = Vec::new();
    for p in 0..=pmax {
        for (conj, row) in [(false, &forms.u[p]), (true, &forms.u_conj[p])] {
            let f = if conj { Poly2::shifted_zbar_power(z1, p as u32) } else { Poly2::shifted_z_power(z1, p as u32) };
            let phi = bundle.t.apply(&f).scale(&GaussRat::real(fact(p).recip()));
            if phi.is_zero() {
                continue;
            }
            basis.push(phi);
            cols.push(row.clone());
        }
    }
    let rows = forms.u[0].len();
    let a: Vec<Vec<GaussRat>> = (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let kernel = eliminate(&a, &vec![GaussRat::zero(); rows]).null_space();
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut phi = Poly2::zero();
        for v in &kernel {
            let c = GaussRat::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            for (b, x) in basis.iter().zip(v) {
                phi = &phi + &b.scale(&(&c * x));
            }
        }
        if !phi.is_zero() {
            out.push(phi);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConservationReport {
    pub functionals: usize,
    /// `max |∫_Ω φ| / ∫_Ω |φ|` over functionals and frames.
    pub max_relative_integral: f64,
    pub passed: bool,
}

/// Integrates each conserved functional over every frame.
pub fn conservation_check(frames: &[Frame], functionals: &[Poly2]) -> Result<ConservationReport, GrowthError> {
    let mut worst: f64 = 0.0;
    for phi in functionals {
        for f in frames {
            let num = CenteredPoly::new(phi, &f.map.z1);
            let i = integrate_adaptive(&f.numeric_map, DEFAULT_RESOLUTION, &|z| num.eval_at(z))?;
            worst = worst.max(i.value.norm() / i.abs_value.max(f64::MIN_POSITIVE));
        }
    }
    Ok(ConservationReport {
        functionals: functionals.len(),
        max_relative_integral: worst,
        passed: worst <= CONSERVATION_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwine::{build_axis, build_dihedral};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn constant(q: Rational, qj: Vec<GaussRat>, t_end: Rational) -> SourceSchedule {
        SourceSchedule::new(GaussRat::from_int(2), vec![SchedulePiece { t_start: r(0, 1), t_end, q, qj }]).unwrap()
    }

    #[test]
    fn monopole_grows_disks() {
        let s = constant(r(1, 1), vec![], r(10, 1));
        let times: Vec<Rational> = [1, 2, 4].iter().map(|&t| r(t, 1)).collect();
        let evo = evolve(&s, &build_axis(1), &times).unwrap();
        assert_eq!(evo.frames.len(), 3);
        for f in &evo.frames {
            let t = rat_to_f64(&f.t.0);
            assert!((f.numeric_map.r - t.sqrt()).abs() < 1e-13);
            assert!((f.medium_fluxes.q.to_complex().re - t).abs() < 1e-12);
            assert!((f.medium_fluxes.qj[0].to_complex().re - t * t / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_times_are_skipped() {
        let s = SourceSchedule::new(GaussRat::from_int(2), vec![]).unwrap();
        let evo = evolve(&s, &build_axis(1), &[r(1, 1)]).unwrap();
        assert!(evo.frames.is_empty());
        assert_eq!(evo.empty_times, vec![1.0]);
    }

    #[test]
    fn dipole_burst_breaks_down() {
        // a unit disk first, then a dipole that outgrows the area
        let pieces = vec![
            SchedulePiece { t_start: r(0, 1), t_end: r(1, 1), q: r(1, 1), qj: vec![] },
            SchedulePiece { t_start: r(1, 1), t_end: r(10, 1), q: r(1, 100), qj: vec![GaussRat::ratio(1, 5)] },
        ];
        let s = SourceSchedule::new(GaussRat::from_int(2), pieces).unwrap();
        let times: Vec<Rational> = (1..=10).map(|t| r(t, 1)).collect();
        let evo = evolve(&s, &build_axis(0), &times).unwrap();
        let b = evo.breakdown.expect("breakdown");
        assert!(b.first_invalid - b.last_valid <= BREAKDOWN_TOL);
        assert!(evo.frames.len() >= 2);
        assert!(b.last_valid >= rat_to_f64(&evo.frames.last().unwrap().t.0));
        assert!(b.first_invalid <= b.output_time);
    }

    #[test]
    fn double_rate_then_idle_matches_constant_rate() {
        let a = constant(r(1, 1), vec![GaussRat::ratio(1, 20)], r(1, 1));
        let b = constant(r(2, 1), vec![GaussRat::ratio(1, 10)], r(1, 2));
        let rep = path_independence_check(&a, &b, &build_dihedral(1, 1, 0).unwrap(), &r(1, 1)).unwrap();
        assert!(rep.passed, "{rep:?}");
        let c = constant(r(3, 1), vec![GaussRat::ratio(1, 10)], r(1, 2));
        let neg = path_independence_check(&a, &c, &build_axis(1), &r(1, 1)).unwrap();
        assert!(!neg.passed && !neg.cumulative_equal);
    }

    #[test]
    fn conserved_functionals_vanish_on_disks() {
        let b = build_axis(1);
        let s = constant(r(1, 1), vec![], r(4, 1));
        let evo = evolve(&s, &b, &[r(1, 1), r(2, 1), r(3, 1)]).unwrap();
        let phis = conserved_functionals(&b, &s.z1, 0, 5, 7).unwrap();
        assert_eq!(phis.len(), 5);
        let rep = conservation_check(&evo.frames, &phis).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
