//! Command-line front end: argument parsing, dispatch and deterministic
//! JSON, JSONL and CSV output.
//!
//! Exit codes: `0` when every internal check passes, `1` when a check
//! fails, `2` on validation errors, `3` when Newton does not converge or a
//! map is not univalent, `4` when a flux system is singular.

mod scenario;

pub use scenario::{parse_times, Scenario};

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::gauss_rat::gauss_from_json;
use crate::algebra::poly2::poly_from_json;
use crate::algebra::{parse_rational, GaussRat, Rational};
use crate::domains::{boundary_points, moments, solve_map_from_moments, univalence_check, ConformalMap, DomainError};
use crate::fluxes::{equivalent_fluxes, fluxes_for_map, EquivalentFluxError, FluxError, FluxSolution, FluxVector};
use crate::growth::{
    conservation_check, conserved_functionals, evolve, path_independence_check, GrowthError, SourceSchedule,
};
use crate::intertwine::{
    check_intertwining, check_schrodinger_gauge, operator_residual, search_deformed, IntertwineError,
    IntertwinerBundle, MediumSpec,
};
use crate::verify::{
    ball_identity_check, harmonic_basis, pressure_disk, verify_identity, verify_pressure, BallSpec, MultiPoly,
    VerifyError, DEFAULT_RESOLUTION,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("{0}")]
    Singular(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::NoConvergence(_) => 3,
            CliError::Singular(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::NoConvergence(_) => "no_convergence",
            CliError::Singular(_) => "singular_system",
        }
    }
}

impl From<IntertwineError> for CliError {
    fn from(e: IntertwineError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        match e {
            DomainError::NoConvergence { .. } | DomainError::NonUnivalent(_) => CliError::NoConvergence(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<FluxError> for CliError {
    fn from(e: FluxError) -> Self {
        match e {
            FluxError::SingularSystem { .. } => CliError::Singular(e.to_string()),
            FluxError::SourceOnMirror => CliError::Validation(e.to_string()),
        }
    }
}

impl From<EquivalentFluxError> for CliError {
    fn from(e: EquivalentFluxError) -> Self {
        match e {
            EquivalentFluxError::Domain(d) => d.into(),
            EquivalentFluxError::Flux(f) => f.into(),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            VerifyError::InvalidInput(_) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        match e {
            GrowthError::InvalidSchedule(_) => CliError::Validation(e.to_string()),
            GrowthError::Domain(d) => d.into(),
            GrowthError::Flux(f) => f.into(),
            GrowthError::Verify(v) => v.into(),
            GrowthError::Breakdown(_) => CliError::NoConvergence(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qdomains", version, about = "Quadrature domains for Calogero-Moser media")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build T, ζ and the cleared operator L for a medium.
    Intertwiner {
        #[arg(long)]
        medium: String,
        #[command(flatten)]
        out: Output,
    },
    /// Exact check of ζ·T[Δm] = L[T m] on monomials, plus the gauge identity.
    CheckIntertwining {
        #[arg(long)]
        medium: String,
        #[arg(long, default_value_t = 6)]
        degree: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Enumerate deformed configurations with polynomial ζ.
    SearchDeformed {
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 6)]
        max_k: u32,
        /// Phase grid in quarter turns, comma separated.
        #[arg(long, default_value = "0,1")]
        phases: String,
        /// Target ζ as Cartesian rows `[[a, b, "coef"], ..]` for `x^a y^b`.
        #[arg(long)]
        target: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Exact moments `M_p/π` of a map, or the map from targets `M_p/π`.
    Moments {
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 4)]
        pmax: usize,
        /// JSON array of targets `M_p/π`, solved for a map at `--z1`.
        #[arg(long)]
        targets: Option<String>,
        #[arg(long)]
        z1: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Exact multipole fluxes of a map in a medium, or the medium fluxes
    /// equivalent to homogeneous ones.
    Fluxes {
        #[arg(long)]
        medium: String,
        #[arg(long)]
        map: Option<String>,
        /// Homogeneous fluxes `{"Q": .., "Qj": [..]}` (needs `--z1`).
        #[arg(long)]
        homogeneous: Option<String>,
        #[arg(long)]
        z1: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Numerical quadrature of the identity against the exact fluxes.
    VerifyIdentity {
        #[arg(long)]
        medium: String,
        #[arg(long)]
        map: String,
        /// Highest power `p` of the test functions.
        #[arg(long, default_value_t = 6)]
        basis: usize,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Checks of the closed-form disk pressure.
    PressureCheck {
        #[arg(long)]
        r: String,
        #[arg(long)]
        rdot: String,
        /// Source point `x1` or `x1,y1`.
        #[arg(long)]
        z1: String,
        #[command(flatten)]
        out: Output,
    },
    /// Quadrature identity of a d-ball.
    BallCheck {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1")]
        r: String,
        /// Comma-separated center coordinates.
        #[arg(long)]
        center: String,
        /// Harmonic polynomial `[[[e1,..,ed], "coef"], ..]`; all harmonics
        /// of degree at most 4 when omitted.
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Evolve a scenario; one JSON frame per line.
    Grow {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        times: Option<String>,
        /// Boundary points per frame, written as CSV next to `--out`.
        #[arg(long)]
        emit_boundary: Option<usize>,
        /// Check conserved functionals with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Compare two schedules with equal cumulative fluxes.
    PathCheck {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        t_final: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

/// Entry point for the binary: parses `std::env::args`, applies
/// `QDOMAINS_THREADS` and returns the process exit code.
pub fn main_from_env() -> i32 {
    if let Some(n) = std::env::var("QDOMAINS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only happens in tests; ignoring it is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}

/// Runs a parsed command; diagnostics go to standard error as JSON.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            e.exit_code()
        }
    }
}

fn invalid<E: ToString>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn parse_json(text: &str) -> Result<Value, CliError> {
    // arguments starting with '@' name a file
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => text.to_string(),
    };
    serde_json::from_str(&body).map_err(|e| invalid(format!("invalid JSON: {e}")))
}

fn parse_medium(s: &str) -> Result<(MediumSpec, IntertwinerBundle), CliError> {
    let m = MediumSpec::from_str(s).map_err(invalid)?;
    let b = IntertwinerBundle::build(&m)?;
    Ok((m, b))
}

fn parse_map(s: &str) -> Result<ConformalMap, CliError> {
    serde_json::from_value(parse_json(s)?).map_err(invalid)
}

fn parse_point(s: &str) -> Result<GaussRat, CliError> {
    if s.trim_start().starts_with('[') {
        return gauss_from_json(&parse_json(s)?).map_err(invalid);
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let get =
        |i: usize| parts.get(i).map_or(Ok(Rational::from_integer(0.into())), |p| parse_rational(p)).map_err(invalid);
    if parts.is_empty() || parts.len() > 2 {
        return Err(invalid(format!("expected x1 or x1,y1, got {s:?}")));
    }
    Ok(GaussRat::new(get(0)?, get(1)?))
}

fn write_text(out: &Output, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn write_json<T: Serialize>(out: &Output, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    write_text(out, &text)
}

/// Flat flux layout: `"Q"` as a real string when real, `"Q1"`, `"Q2"`, ..
/// as `["re","im"]`.
pub fn flux_json(f: &FluxVector) -> Value {
    let mut obj = serde_json::Map::new();
    let q = if f.q.is_real() { json!(f.q.re.to_string()) } else { serde_json::to_value(&f.q).expect("gauss json") };
    obj.insert("Q".into(), q);
    for (j, qj) in f.qj.iter().enumerate() {
        obj.insert(format!("Q{}", j + 1), serde_json::to_value(qj).expect("gauss json"));
    }
    Value::Object(obj)
}

fn flux_report(medium: &MediumSpec, map: &ConformalMap, sol: &FluxSolution) -> Value {
    let mut v = flux_json(&sol.fluxes);
    let obj = v.as_object_mut().expect("object");
    obj.insert("medium".into(), json!(medium.to_string()));
    obj.insert("map".into(), serde_json::to_value(map).expect("map json"));
    obj.insert("source_strengths".into(), serde_json::to_value(sol.fluxes.source_strengths()).expect("json"));
    obj.insert("equations".into(), json!(sol.equation_count()));
    obj.insert("dropped".into(), json!(sol.drop));
    obj.insert("rank".into(), json!(sol.rank));
    obj.insert("residuals".into(), serde_json::to_value(&sol.residuals).expect("json"));
    obj.insert("q_real".into(), json!(sol.q_is_real()));
    obj.insert("conjugates_consistent".into(), json!(sol.conjugates_consistent()));
    obj.insert("passed".into(), json!(sol.passed()));
    v
}

fn dispatch(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Intertwiner { medium, out } => {
            let (m, b) = parse_medium(&medium)?;
            let v = json!({
                "medium": m.to_string(),
                "order": b.order(),
                "zeta_degree": b.zeta_degree(),
                "bundle": b,
                "zeta_xy": b.zeta.to_xy(),
            });
            write_json(&out, &v)?;
            Ok(true)
        }
        Command::CheckIntertwining { medium, degree, out } => {
            let (m, b) = parse_medium(&medium)?;
            let rep = check_intertwining(&b, degree);
            let op_zero = operator_residual(&b).is_zero();
            let gauge = match check_schrodinger_gauge(&b, degree) {
                Ok(g) => Some(g),
                Err(IntertwineError::NotApplicable(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let passed = rep.passed() && op_zero && gauge.as_ref().is_none_or(|g| g.passed());
            let v = json!({
                "medium": m.to_string(),
                "intertwining": rep,
                "operator_identity_zero": op_zero,
                "gauge": gauge,
                "passed": passed,
            });
            write_json(&out, &v)?;
            Ok(passed)
        }
        Command::SearchDeformed { max_n, max_k, phases, target, out } => {
            let grid: Vec<i64> = phases
                .split(',')
                .map(|p| p.trim().parse::<i64>().map_err(|e| invalid(format!("phase {p:?}: {e}"))))
                .collect::<Result<_, _>>()?;
            let target = match target {
                Some(t) => {
                    Some(poly_from_json::<crate::algebra::poly2::Xy>(&parse_json(&t)?).map_err(invalid)?.to_zzbar())
                }
                None => None,
            };
            let outcome = search_deformed(max_n, max_k, &grid, target.as_ref());
            // with no candidates, the bounds and count describe the exhausted space
            let mut v = serde_json::to_value(&outcome).map_err(|e| CliError::Io(e.to_string()))?;
            v["found"] = json!(!outcome.candidates.is_empty());
            write_json(&out, &v)?;
            Ok(true)
        }
        Command::Moments { map, pmax, targets, z1, out } => match (map, targets) {
            (Some(map), None) => {
                let m = parse_map(&map)?;
                let report = univalence_check(&m.to_numeric());
                let v = json!({"map": m, "moments_over_pi": moments(&m, pmax).over_pi, "univalence": report});
                write_json(&out, &v)?;
                if report.univalent {
                    Ok(true)
                } else {
                    Err(DomainError::NonUnivalent(Box::new(report)).into())
                }
            }
            (None, Some(targets)) => {
                let z1 = parse_point(&z1.ok_or_else(|| invalid("--targets needs --z1"))?)?;
                let t: Vec<Complex64> = parse_json(&targets)?
                    .as_array()
                    .ok_or_else(|| invalid("targets must be an array"))?
                    .iter()
                    .map(|v| gauss_from_json(v).map(|g| g.to_complex()).map_err(invalid))
                    .collect::<Result<_, _>>()?;
                let sol = solve_map_from_moments(z1.to_complex(), &t, None)?;
                let exact = sol.map.to_exact()?;
                let v = json!({
                    "map": exact,
                    "newton_iterations": sol.iterations,
                    "residual": sol.residual,
                    "univalence": univalence_check(&sol.map),
                });
                write_json(&out, &v)?;
                Ok(true)
            }
            _ => Err(invalid("moments needs exactly one of --map or --targets")),
        },
        Command::Fluxes { medium, map, homogeneous, z1, out } => {
            let (m, b) = parse_medium(&medium)?;
            match (map, homogeneous) {
                (Some(map), None) => {
                    let map = parse_map(&map)?;
                    let sol = fluxes_for_map(&b, &map)?;
                    write_json(&out, &flux_report(&m, &map, &sol))?;
                    Ok(sol.passed())
                }
                (None, Some(h)) => {
                    let z1 = parse_point(&z1.ok_or_else(|| invalid("--homogeneous needs --z1"))?)?;
                    let homog: FluxVector = serde_json::from_value(parse_json(&h)?).map_err(invalid)?;
                    let eq = equivalent_fluxes(&homog, &z1, &b, None)?;
                    let mut v = flux_report(&m, &eq.map, &eq.solution);
                    v.as_object_mut().expect("object").insert("homogeneous".into(), flux_json(&homog));
                    write_json(&out, &v)?;
                    Ok(eq.solution.passed())
                }
                _ => Err(invalid("fluxes needs exactly one of --map or --homogeneous")),
            }
        }
        Command::VerifyIdentity { medium, map, basis, resolution, tol, out } => {
            let (m, b) = parse_medium(&medium)?;
            let map = parse_map(&map)?;
            let num = map.to_numeric();
            let uni = univalence_check(&num);
            if !uni.univalent {
                return Err(DomainError::NonUnivalent(Box::new(uni)).into());
            }
            let sol = fluxes_for_map(&b, &map)?;
            let rep = verify_identity(&num, &map.z1, &b, &sol.fluxes, basis, resolution)?;
            let passed = rep.passed(tol) && sol.passed();
            let v = json!({"medium": m.to_string(), "map": map, "fluxes": flux_json(&sol.fluxes), "tolerance": tol, "report": rep, "passed": passed});
            write_json(&out, &v)?;
            Ok(passed)
        }
        Command::PressureCheck { r, rdot, z1, out } => {
            let r = parse_rational(&r).map_err(invalid)?;
            let rdot = parse_rational(&rdot).map_err(invalid)?;
            let z1 = parse_point(&z1)?;
            let expr = pressure_disk(&r, &rdot, &z1)?;
            let rep = verify_pressure(&expr)?;
            write_json(&out, &rep)?;
            Ok(rep.passed)
        }
        Command::BallCheck { d, r, center, h, out } => {
            let r = parse_rational(&r).map_err(invalid)?;
            let center: Vec<Rational> =
                center.split(',').map(|c| parse_rational(c.trim()).map_err(invalid)).collect::<Result<_, _>>()?;
            let spec = BallSpec::new(d, r, center)?;
            let polys = match h {
                Some(h) => vec![MultiPoly::from_json(&parse_json(&h)?, d)?],
                None => (0..=4).flat_map(|k| harmonic_basis(d, k)).collect(),
            };
            let reports = polys.iter().map(|p| ball_identity_check(&spec, p)).collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let worst = reports.iter().map(|r| r.rel_error).fold(0.0, f64::max);
            write_json(
                &out,
                &json!({"d": d, "volume": spec.volume(), "max_rel_error": worst, "reports": reports, "passed": passed}),
            )?;
            Ok(passed)
        }
        Command::Grow { scenario, times, emit_boundary, seed, out } => {
            grow(&scenario, times, emit_boundary, seed, &out)
        }
        Command::PathCheck { scenario, t_final, out } => {
            let sc = Scenario::from_json(&parse_json(&scenario)?)?;
            if sc.schedules.len() != 2 {
                return Err(invalid("path-check needs schedule_a and schedule_b"));
            }
            let t_final = match t_final {
                Some(t) => parse_rational(&t).map_err(invalid)?,
                None => sc.t_final.clone().ok_or_else(|| invalid("path-check needs t_final"))?,
            };
            let b = IntertwinerBundle::build(&sc.medium)?;
            let (a, bb) = (pad_schedule(&sc.schedules[0], sc.degree), pad_schedule(&sc.schedules[1], sc.degree));
            let rep = path_independence_check(&a, &bb, &b, &t_final)?;
            write_json(&out, &rep)?;
            Ok(rep.passed)
        }
    }
}

/// Pads every piece's rates to the scenario degree.
fn pad_schedule(s: &SourceSchedule, degree: usize) -> SourceSchedule {
    let mut s = s.clone();
    for p in &mut s.pieces {
        p.qj.resize(degree, GaussRat::from_int(0));
    }
    s
}

fn boundary_path(out: &Path, frame: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "frames".into());
    out.with_file_name(format!("{stem}.frame{frame}.csv"))
}

/// `x,y` rows with 17 significant digits.
pub fn boundary_csv(points: &[Complex64]) -> String {
    let mut s = String::from("x,y\n");
    for p in points {
        s.push_str(&format!("{:.16e},{:.16e}\n", p.re, p.im));
    }
    s
}

fn grow(
    scenario: &str,
    times: Option<String>,
    emit_boundary: Option<usize>,
    seed: Option<u64>,
    out: &Output,
) -> Result<bool, CliError> {
    let sc = Scenario::from_json(&parse_json(scenario)?)?;
    let times = match times {
        Some(t) => parse_times(&t)?,
        None => sc.times.clone(),
    };
    if times.is_empty() {
        return Err(invalid("no output times given"));
    }
    let boundary = emit_boundary.unwrap_or(sc.boundary);
    if boundary > 0 && out.out.is_none() {
        return Err(invalid("boundary output needs --out"));
    }
    let bundle = IntertwinerBundle::build(&sc.medium)?;
    let schedule = pad_schedule(&sc.schedules[0], sc.degree);
    let evo = evolve(&schedule, &bundle, &times)?;
    let mut text = String::new();
    for f in &evo.frames {
        let line = json!({
            "t": f.t,
            "map": f.map,
            "homog_fluxes": flux_json(&f.homog_fluxes),
            "medium_fluxes": flux_json(&f.medium_fluxes),
            "newton_iterations": f.newton_iterations,
            "moment_residual": f.moment_residual,
        });
        text.push_str(&serde_json::to_string(&line).map_err(|e| CliError::Io(e.to_string()))?);
        text.push('\n');
    }
    write_text(out, &text)?;
    if let Some(path) = &out.out {
        if boundary > 0 {
            for (i, f) in evo.frames.iter().enumerate() {
                let p = boundary_path(path, i);
                std::fs::write(&p, boundary_csv(&boundary_points(&f.numeric_map, boundary)))
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            }
        }
    }
    let conservation = match seed {
        Some(seed) => {
            let phis = conserved_functionals(&bundle, &schedule.z1, schedule.ktilde(), 5, seed)?;
            Some(conservation_check(&evo.frames, &phis)?)
        }
        None => None,
    };
    let monotone = evo.frames.windows(2).all(|w| w[0].homog_fluxes.q.re < w[1].homog_fluxes.q.re);
    let passed = evo.breakdown.is_none() && monotone && conservation.as_ref().is_none_or(|c| c.passed);
    eprintln!(
        "{}",
        json!({"frames": evo.frames.len(), "empty_times": evo.empty_times, "area_increasing": monotone,
               "breakdown": evo.breakdown, "conservation": conservation, "passed": passed})
    );
    if let Some(b) = &evo.breakdown {
        return Err(CliError::NoConvergence(format!(
            "domain not univalent at t = {}; breakdown in [{}, {}]",
            b.output_time, b.last_valid, b.first_invalid
        )));
    }
    Ok(passed)
}
