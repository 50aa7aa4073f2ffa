//! Subcommand implementations behind the `gg` binary. Each command returns
//! an [`Outcome`] or a [`CliError`]; the binary only does I/O.

pub mod report;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use gg_core::expr::{parse, Expr, Var};
use gg_core::geom::{integrate_geodesic, GeodesicState, ImplicitSurface};
use gg_core::kovacic::{classify, classify_profile, SearchOptions, Verdict};
use gg_core::nve::{derive_nve, make_surface, normal_form, pde_candidate_test, singularity_profile, NveError, SurfaceError};
use gg_core::{Rat, RatFun};

pub use report::{Input, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

const SIGN_NOTE: &str = "r is the coefficient in w'' = r w as derived from the NVE; \
a published display of this equation for xyz=1 carries the opposite overall sign, \
which would contradict the exponent table (beta = -9/4 at y = 0)";

#[derive(Debug, Error)]
#[error("[{code}] {message}")]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<NveError> for CliError {
    fn from(e: NveError) -> Self {
        match e {
            NveError::Parse(p) => CliError::new("expr.parse", p.to_string()),
            NveError::Surface(s) => s.into(),
        }
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        let code = match &e {
            SurfaceError::SymmetryViolated { .. } => "nve.symmetry_violated",
            SurfaceError::DependsOnZ => "nve.depends_on_z",
            SurfaceError::SingularAxis => "nve.singular_axis",
            SurfaceError::NotRational(_) => "nve.not_rational",
        };
        CliError::new(code, e.to_string())
    }
}

/// Knobs shared by the classifying commands.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Size of the pool for the assignment fan-out; `None` uses rayon's default.
    pub threads: Option<usize>,
    pub search: SearchOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: None,
            search: SearchOptions::default(),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub exit: i32,
    pub report: Report,
    /// Payload for stdout or `--out` (geodesic CSV).
    pub csv: Option<String>,
}

fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::new("cli.threads", "--threads must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::new("cli.threads", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn verdict_exit(v: &Verdict) -> i32 {
    match v {
        Verdict::NonIntegrable => EXIT_OK,
        _ => EXIT_INCONCLUSIVE,
    }
}

fn parse_expr(text: &str) -> Result<Expr, CliError> {
    parse(text).map_err(|e| CliError::new("expr.parse", e.to_string()))
}

fn analyze_expr(command: &str, f: Expr, text: String, n: Option<u64>, opts: &RunOptions) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let surface = make_surface(f)?;
    let coeffs = derive_nve(&surface)?;
    let ode = normal_form(&coeffs);
    let mut report = Report::new(
        command,
        Input {
            surface: Some(text),
            n,
            symmetry_check: Some(report::mode_name(surface.symmetry).to_string()),
            prefilter: Some(opts.search.prefilter),
            ..Input::default()
        },
    );
    report.set_nve(&coeffs, &ode);
    let profile = singularity_profile(&ode);
    let search = opts.search.clone();
    let class = in_pool(opts.threads, move || classify_profile(profile, search))?;
    report.classification = Some(report::class_report(&class));
    report.pde = Some(report::pde_report(&pde_candidate_test(&surface)?));
    report.notes.push(SIGN_NOTE.to_string());
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(Outcome {
        exit: verdict_exit(&class.verdict),
        report,
        csv: None,
    })
}

/// Full pipeline for `z = f(x, y)`.
pub fn cmd_analyze(f: &str, opts: &RunOptions) -> Result<Outcome, CliError> {
    analyze_expr("analyze", parse_expr(f)?, f.to_string(), None, opts)
}

/// The surface `x^n y^n z = 1`, written over the rotated axes as
/// `z = (x^2 - y^2)^(-n)`.
pub fn cmd_family(n: u64, opts: &RunOptions) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::new("cli.family", "--n must be a positive integer"));
    }
    if n > 64 {
        return Err(CliError::new("cli.family", "--n is limited to 64"));
    }
    let text = format!("(x^2-y^2)^(-{n})");
    analyze_expr("family", parse_expr(&text)?, text, Some(n), opts)
}

/// Classification of `w'' = r w` for a rational `r(y)`.
pub fn cmd_kovacic(r: &str, opts: &RunOptions) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let e = parse_expr(r)?;
    let r_fun: RatFun = e
        .to_ratfun(Var::Y)
        .map_err(|err| CliError::new("expr.ratfun", err.to_string()))?;
    let mut report = Report::new(
        "kovacic",
        Input {
            r: Some(r.to_string()),
            prefilter: Some(opts.search.prefilter),
            ..Input::default()
        },
    );
    report.normal_form = Some(r_fun.fmt_var("y"));
    let search = opts.search.clone();
    let class = in_pool(opts.threads, move || classify(&r_fun, search))?;
    report.classification = Some(report::class_report(&class));
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(Outcome {
        exit: verdict_exit(&class.verdict),
        report,
        csv: None,
    })
}

/// Runs the candidate test; completing the test is success whatever its verdict.
pub fn cmd_pde(f: &str) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let surface = make_surface(parse_expr(f)?)?;
    let outcome = pde_candidate_test(&surface)?;
    let mut report = Report::new(
        "pde-test",
        Input {
            surface: Some(f.to_string()),
            symmetry_check: Some(report::mode_name(surface.symmetry).to_string()),
            ..Input::default()
        },
    );
    report.pde = Some(report::pde_report(&outcome));
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(Outcome {
        exit: EXIT_OK,
        report,
        csv: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Direction {
    Random,
    Fixed([f64; 3]),
}

#[derive(Clone, Debug)]
pub struct GeodesicArgs {
    pub f: String,
    pub c: String,
    pub start: [f64; 3],
    pub dir: Direction,
    pub seed: u64,
    pub length: f64,
    pub step: f64,
}

/// Parses `a,b,c` into three finite floats.
pub fn parse_triple(s: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::new("cli.vector", format!("expected three comma-separated numbers, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse::<f64>().map_err(|_| bad())?;
        if !o.is_finite() {
            return Err(bad());
        }
    }
    Ok(out)
}

fn random_direction(seed: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = [0; 3].map(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return v;
        }
    }
}

pub fn cmd_geodesic(args: &GeodesicArgs) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let f = parse_expr(&args.f)?;
    let c: Rat = parse_expr(&args.c)?
        .as_num()
        .cloned()
        .ok_or_else(|| CliError::new("cli.level", format!("--c must be a rational number, got {:?}", args.c)))?;
    if !(args.length > 0.0 && args.step > 0.0 && args.length.is_finite() && args.step.is_finite()) {
        return Err(CliError::new("cli.length", "--length and --step must be positive"));
    }
    if args.length / args.step > 1e8 {
        return Err(CliError::new("cli.length", "more than 1e8 steps requested"));
    }
    let surf: ImplicitSurface<f64> = ImplicitSurface::new(f, c);
    let miss = (surf.value(&args.start) - surf.level()).abs();
    if !(miss <= 1e-9 * surf.level().abs().max(1.0)) {
        return Err(CliError::new(
            "geom.off_surface",
            format!("start point is not on the surface (|F - c| = {miss:e})"),
        ));
    }
    let dir = match args.dir {
        Direction::Random => random_direction(args.seed),
        Direction::Fixed(d) => d,
    };
    let ic = GeodesicState::from_direction(&surf, args.start, dir).map_err(|e| CliError::new("geom.state", e.to_string()))?;
    let traj = integrate_geodesic(&surf, ic, args.length, args.step);
    let mut report = Report::new(
        "geodesic",
        Input {
            level_set: Some(format!("{} = {}", args.f, args.c)),
            ..Input::default()
        },
    );
    report.geodesic = Some(report::GeodesicReport {
        seed: matches!(args.dir, Direction::Random).then_some(args.seed),
        direction: ic.vel.map(|v| format!("{v:.16e}")).to_vec(),
        samples: traj.samples.len(),
        max_f_drift: format!("{:.3e}", traj.max_f_drift),
        max_speed_drift: format!("{:.3e}", traj.max_speed_drift),
        fault: traj.fault.as_ref().map(ToString::to_string),
    });
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(Outcome {
        exit: if traj.fault.is_some() { EXIT_INCONCLUSIVE } else { EXIT_OK },
        report,
        csv: Some(traj.to_csv()),
    })
}
