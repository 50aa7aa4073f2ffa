//! Acceptance run: one PASS/FAIL line per criterion. Every expected value
//! is rebuilt here from hand-derived formulas, not taken from the library.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gg_cli::report::canonical_json;
use gg_cli::{cmd_analyze, cmd_family, cmd_kovacic, cmd_pde, RunOptions};
use gg_core::exact::{partial_fractions, QPoly, RatFun};
use gg_core::expr::parse;
use gg_core::geom::{cross_validate_nve, gauss_curvature, integrate_geodesic, GeodesicState, ImplicitSurface};
use gg_core::kovacic::{
    classify, classify_profile, enumerate_assignments, irrationality_check, Assignment, ESets, FactorESet, FoundP,
    PSearch, SearchOptions, Verdict,
};
use gg_core::numfield::{roots_of, AlgNum, FieldCtx, InvError};
use gg_core::nve::{
    make_surface, normal_form_of, pde_candidate_test, singularity_profile, tau_pair, tau_string, Location, PdeVerdict,
    QuadExt,
};
use gg_core::Rat;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn p(c: &[i64]) -> QPoly {
    QPoly::from_i64s(c)
}

fn y_pow(k: usize) -> QPoly {
    QPoly::monomial(Rat::one(), k)
}

/// `2n²(2n+1)(4n³ − 10n² − y^{4n+2}(4n+5)) / (y²(4n² + y^{4n+2})²)`.
fn family_r(n: i64) -> RatFun {
    let k = (4 * n + 2) as usize;
    let lead = Rat::from_integer((2 * n * n * (2 * n + 1)).into());
    let inner = &QPoly::constant(Rat::from_integer((4 * n * n * n - 10 * n * n).into()))
        - &y_pow(k).scale(&Rat::from_integer((4 * n + 5).into()));
    let base = &QPoly::constant(Rat::from_integer((4 * n * n).into())) + &y_pow(k);
    RatFun::new(inner.scale(&lead), &y_pow(2) * &(&base * &base))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn criterion1() -> Check {
    let ((report, class), took) = timed(|| {
        let out = cmd_analyze("1/(x^2-y^2)", &RunOptions::default()).unwrap();
        let (_, _, ode) = normal_form_of("1/(x^2-y^2)").unwrap();
        (out, classify_profile(singularity_profile(&ode), SearchOptions::default()))
    });
    ensure!(report.exit == 0, "exit {}", report.exit);
    let y6 = p(&[4, 0, 0, 0, 0, 0, 1]);
    let oracle = RatFun::new(p(&[-36, 0, 0, 0, 0, 0, -54]), &y_pow(2) * &(&y6 * &y6));
    ensure!(class.profile.r == oracle, "r = {}", class.profile.r);
    let prof = &class.profile;
    let total: usize = prof.finite.iter().map(|pt| pt.roots()).sum::<usize>() + prof.infinity.iter().count();
    ensure!(prof.fuchsian() && total == 8, "{total} singular points");
    let (origin, six) = (&prof.finite[0], &prof.finite[1]);
    ensure!(origin.location == Location::Finite(p(&[0, 1])), "first point {:?}", origin.location);
    ensure!(origin.beta == rat(-9, 4), "beta0 {}", origin.beta);
    ensure!(six.location == Location::Finite(y6.clone()) && six.beta == rat(5, 16), "six points");
    let inf = prof.infinity.as_ref().unwrap();
    ensure!(inf.beta.is_zero(), "beta_inf {}", inf.beta);
    // tau0 = 1/2 ± (1/2) sqrt(-8)
    let half = QuadExt::rational(rat(1, 2));
    let s = QuadExt::sqrt(&rat(-8, 1)).scale(&rat(1, 2));
    ensure!(origin.tau == [&half + &s, &half - &s], "tau0 {:?}", origin.tau);
    ensure!(tau_string(&origin.beta) == "(1 ± i*sqrt(8))/2", "tau0 text");
    ensure!(origin.eset == vec![2] && six.eset == vec![2, 5, -1] && inf.eset == vec![0, 2, 4], "E-sets");
    let counts: BTreeMap<u64, usize> = class.counts.iter().map(|(&d, &(o, _))| (d, o)).collect();
    ensure!(counts == BTreeMap::from([(0, 21), (1, 21), (2, 1), (3, 1), (4, 1)]), "counts {counts:?}");
    let inconsistent = class
        .ledger
        .iter()
        .filter(|l| matches!(l.outcome, PSearch::Inconsistent { .. }))
        .count();
    ensure!(class.ledger.len() == 45 && inconsistent == 45, "{inconsistent} of {} inconsistent", class.ledger.len());
    ensure!(class.verdict == Verdict::NonIntegrable, "verdict {:?}", class.verdict);
    let rv = report.report.classification.unwrap().verdict.kind;
    ensure!(rv == "NonIntegrable", "report verdict {rv}");
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("45/45 inconsistent, NonIntegrable, {:.2}s", took.as_secs_f64()))
}

fn criterion2() -> Check {
    for n in 1..=3i64 {
        let (_, _, ode) = normal_form_of(&format!("(x^2-y^2)^(-{n})")).unwrap();
        ensure!(ode.r == family_r(n), "n={n}: r = {}", ode.r);
        let prof = singularity_profile(&ode);
        let b0 = rat((1 + 2 * n) * (2 * n - 5), 4);
        let origin = prof.finite.iter().find(|pt| pt.location == Location::Finite(p(&[0, 1])));
        ensure!(origin.is_some_and(|o| o.beta == b0), "n={n}: beta0");
        let k = (4 * n + 2) as usize;
        let others: usize = prof
            .finite
            .iter()
            .filter(|pt| pt.beta == rat(5, 16))
            .map(|pt| pt.roots())
            .sum();
        ensure!(others == k, "n={n}: {others} points with beta 5/16");
    }
    Ok("n = 1, 2, 3".into())
}

fn criterion3() -> Check {
    let (out, took) = timed(|| cmd_family(2, &RunOptions::default()).unwrap());
    let c = out.report.classification.unwrap();
    let counts: Vec<usize> = c.counts.iter().map(|r| r.ordered).collect();
    ensure!(counts == vec![615, 55, 55, 55, 1, 1, 1], "counts {counts:?}");
    ensure!(c.verdict.kind == "NonIntegrable" && out.exit == 0, "verdict {}", c.verdict.kind);
    ensure!(took < Duration::from_secs(1800), "took {took:?}");
    Ok(format!("615/55/55/55/1/1/1, NonIntegrable, {:.1}s", took.as_secs_f64()))
}

fn criterion4() -> Check {
    let (all, took) = timed(|| (1..=10_000u64).all(irrationality_check));
    ensure!(all, "some n gives a rational square root");
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    // n² − 2n − 1 = (n−1)² − 2 sits strictly between consecutive squares for n ≥ 3
    for n in 3..=10_000i64 {
        let m = (n - 1) * (n - 1) - 2;
        let s = (m as f64).sqrt() as i64;
        ensure!(s * s != m && (s + 1) * (s + 1) != m, "oracle disagrees at {n}");
    }
    Ok(format!("1..=10^4 in {:.1} ms", took.as_secs_f64() * 1e3))
}

fn criterion5() -> Check {
    let verdict = |f: &str| pde_candidate_test(&make_surface(parse(f).unwrap()).unwrap()).unwrap();
    ensure!(verdict("x^2+y^2").verdict == PdeVerdict::Pass, "x^2+y^2");
    ensure!(verdict("cos(2*x)*exp(-2*y^2)").verdict == PdeVerdict::PlausiblyPass, "cos(2x)exp(-2y^2)");
    let fail = verdict("1/(x^2-y^2)");
    ensure!(fail.verdict == PdeVerdict::Fail, "1/(x^2-y^2) verdict");
    ensure!(fail.residual == Some(RatFun::new(p(&[-4]), y_pow(3))), "residual {:?}", fail.residual);
    let cli = cmd_pde("1/(x^2-y^2)").unwrap().report.pde.unwrap();
    ensure!(cli.residual.as_deref() == Some("-4/(y^3)"), "report residual {:?}", cli.residual);
    Ok("pass / plausibly pass / fail with -4/y^3".into())
}

fn criterion6() -> Check {
    let y = p(&[0, 1]);
    let y1 = p(&[-1, 1]);
    let r = &(&RatFun::new(p(&[-3]), (&y * &y).scale(&rat(16, 1)))
        + &RatFun::new(p(&[-3]), (&y1 * &y1).scale(&rat(16, 1))))
        + &RatFun::new(p(&[1]), (&y * &y1).scale(&rat(8, 1)));
    let class = classify(&r, SearchOptions::default());
    let Verdict::CaseII { p: found, assignment } = &class.verdict else {
        return Err(format!("verdict {:?}", class.verdict));
    };
    ensure!(*found == FoundP::Rational(QPoly::one()), "P = {found}");
    ensure!(assignment.d == 0 && assignment.e == vec![vec![1, 1]] && assignment.e_inf == 2, "{assignment:?}");
    // θ = ½(1/y + 1/(y−1)) and P = 1 must satisfy θ'' + 3θθ' + θ³ − 4rθ − 2r' = 0
    let theta = (&RatFun::new(p(&[1]), y.clone()) + &RatFun::new(p(&[1]), y1.clone())).scale(&rat(1, 2));
    let d1 = theta.derivative();
    let three = rat(3, 1);
    let res = &(&(&(&d1.derivative() + &(&theta * &d1).scale(&three)) + &(&theta * &(&theta * &theta)))
        - &(&r * &theta).scale(&rat(4, 1)))
        - &r.derivative().scale(&rat(2, 1));
    ensure!(res.is_zero(), "residual {res}");
    let cli = cmd_kovacic("-3/(16*y^2)-3/(16*(y-1)^2)+1/(8*y*(y-1))", &RunOptions::default()).unwrap();
    ensure!(cli.exit == 2, "exit {}", cli.exit);
    Ok("CaseII, P = 1 at d = 0, e = (1,1; 2), re-verified".into())
}

fn surface(f: &str, c: i64) -> ImplicitSurface<f64> {
    ImplicitSurface::new(parse(f).unwrap(), Rat::from_integer(c.into()))
}

fn criterion7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for r in [1i64, 2, 5] {
        let s = surface("x^2+y^2+z^2", r * r);
        for _ in 0..10 {
            let v: [f64; 3] = [0; 3].map(|_| rng.gen_range(-1.0..1.0));
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let pt = v.map(|c| c * r as f64 / n);
            let k = gauss_curvature(&s, &pt).unwrap();
            ensure!((k - 1.0 / (r * r) as f64).abs() < 1e-10, "sphere R={r}: K = {k}");
        }
    }
    let fams: Vec<_> = (1..=3).map(|n| surface(&format!("(x*y*z)^{n}"), 1)).collect();
    for _ in 0..10 {
        let (x, y): (f64, f64) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let pt = [x, y, 1.0 / (x * y)];
        // Monge patch z = 1/(xy)
        let (fx, fy) = (-1.0 / (x * x * y), -1.0 / (x * y * y));
        let (fxx, fyy, fxy) = (2.0 / (x.powi(3) * y), 2.0 / (x * y.powi(3)), 1.0 / (x * x * y * y));
        let oracle = (fxx * fyy - fxy * fxy) / (1.0 + fx * fx + fy * fy).powi(2);
        for s in &fams {
            let k = gauss_curvature(s, &pt).unwrap();
            ensure!((k - oracle).abs() < 1e-10, "K = {k}, oracle {oracle}");
        }
    }
    let runs: Vec<_> = fams
        .iter()
        .map(|s| {
            let st = GeodesicState::from_direction(s, [1.0, 1.0, 1.0], [0.3, -0.9, 0.2]).unwrap();
            integrate_geodesic(s, st, 5.0, 1e-3)
        })
        .collect();
    let mut spread: f64 = 0.0;
    for r in &runs[1..] {
        for (a, b) in r.samples.iter().zip(&runs[0].samples) {
            for i in 0..3 {
                spread = spread.max((a.state.pos[i] - b.state.pos[i]).abs());
            }
        }
    }
    ensure!(spread < 1e-9, "n-dependence {spread:e}");
    let drift = runs.iter().map(|t| t.max_f_drift.max(t.max_speed_drift)).fold(0.0, f64::max);
    ensure!(drift < 1e-8, "drift {drift:e}");
    // great circle through (1,0,0) with velocity (0,1,0) is (cos s, sin s, 0)
    let sphere = surface("x^2+y^2+z^2", 1);
    let err = |h: f64| {
        let st = GeodesicState::new(&sphere, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], 1e-12).unwrap();
        let t = integrate_geodesic(&sphere, st, 5.0, h);
        t.samples
            .iter()
            .map(|smp| {
                let e = [smp.s.cos(), smp.s.sin(), 0.0];
                (0..3).map(|i| (smp.state.pos[i] - e[i]).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };
    let ratio = err(0.05) / err(0.025);
    ensure!((12.0..=20.0).contains(&ratio), "RK4 ratio {ratio}");
    Ok(format!("n-spread {spread:.1e}, drift {drift:.1e}, RK4 ratio {ratio:.2}"))
}

fn criterion8() -> Check {
    let mut worst: f64 = 0.0;
    for (f, w) in [("1/(x^2-y^2)", [1.0, 2.0]), ("x^2+y^2", [0.0, 1.0])] {
        let s = make_surface(parse(f).unwrap()).unwrap();
        let r = cross_validate_nve::<f64>(&s, w, 2000).map_err(|e| e.to_string())?;
        ensure!(r.deviation < 1e-6, "{f}: deviation {:e}", r.deviation);
        ensure!(r.transform_deviation < 1e-6, "{f}: transform deviation {:e}", r.transform_deviation);
        worst = worst.max(r.deviation).max(r.transform_deviation);
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> QPoly {
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..6)).collect();
    QPoly::from_i64s(&c)
}

fn random_nonzero(rng: &mut ChaCha8Rng, deg: usize) -> QPoly {
    loop {
        let q = random_poly(rng, deg);
        if !q.is_zero() {
            return q;
        }
    }
}

fn brute_force(sets: &ESets) -> BTreeSet<Assignment> {
    let slots: Vec<&Vec<i64>> = sets.finite.iter().flat_map(|f| vec![&f.values; f.roots]).collect();
    let mut tuples: Vec<Vec<i64>> = vec![Vec::new()];
    for s in &slots {
        tuples = tuples
            .iter()
            .flat_map(|t| s.iter().map(move |&v| [t.clone(), vec![v]].concat()))
            .collect();
    }
    let mut out = BTreeSet::new();
    for t in &tuples {
        for &e_inf in &sets.infinity {
            let diff = e_inf - t.iter().sum::<i64>();
            if diff < 0 || diff % 2 != 0 || (e_inf % 2 == 0 && t.iter().all(|e| e % 2 == 0)) {
                continue;
            }
            let mut e = Vec::new();
            let mut k = 0;
            for f in &sets.finite {
                e.push(t[k..k + f.roots].to_vec());
                k += f.roots;
            }
            out.insert(Assignment {
                d: (diff / 2) as u64,
                e,
                e_inf,
            });
        }
    }
    out
}

fn criterion9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let rf = |rng: &mut ChaCha8Rng| RatFun::new(random_poly(rng, 3), random_nonzero(rng, 3));
        let (a, b, c) = (rf(&mut rng), rf(&mut rng), rf(&mut rng));
        ensure!(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity");
        ensure!(&(&a * &b) * &c == &a * &(&b * &c) && &a + &b == &b + &a, "associativity / commutativity");
        if let Some(inv) = a.inv() {
            ensure!(&a * &inv == RatFun::one(), "inverse of {a}");
        }
    }
    let mut checked = 0;
    for _ in 0..200 {
        let (q1, q2) = (random_nonzero(&mut rng, 3), random_nonzero(&mut rng, 2));
        let r = RatFun::new(random_poly(&mut rng, 7), &q1 * &(&q2 * &q2));
        if let Ok(pf) = partial_fractions(&r) {
            ensure!(pf.reassemble() == r, "reassembly of {r}");
            checked += 1;
        }
    }
    ensure!(checked >= 150, "only {checked} decomposable cases");
    let ctx = FieldCtx::new(&p(&[4, 0, 0, 0, 0, 0, 1]), 0).map_err(|e| format!("{e:?}"))?;
    for _ in 0..50 {
        let a = ctx.element(random_poly(&mut rng, 5));
        if a.rep().is_zero() {
            continue;
        }
        match a.inv() {
            Ok(inv) => ensure!((a * inv).rep() == &QPoly::one(), "round trip"),
            // y^6 + 4 factors over Q, so zero divisors are expected
            Err(InvError::Split(s)) => {
                ensure!(s.tracked.modulus() * s.other.modulus() == p(&[4, 0, 0, 0, 0, 0, 1]), "split product")
            }
            Err(e) => return Err(format!("{e:?}")),
        }
    }
    let (_, roots) = roots_of(&p(&[-2, 0, 0, 1])).map_err(|e| e.to_string())?;
    let prod = roots.iter().fold(AlgNum::one(), |acc, r| acc * r.clone());
    ensure!(prod.as_rational() == Some(rat(2, 1)), "product of cube roots of 2");
    for _ in 0..200 {
        let vals = |rng: &mut ChaCha8Rng| {
            let s: BTreeSet<i64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(-3..7)).collect();
            s.into_iter().collect::<Vec<_>>()
        };
        let sets = ESets {
            finite: (0..rng.gen_range(0..3))
                .map(|_| FactorESet {
                    roots: rng.gen_range(1..4),
                    values: vals(&mut rng),
                })
                .collect(),
            infinity: vals(&mut rng),
        };
        let got: BTreeSet<Assignment> = enumerate_assignments(&sets).into_iter().collect();
        ensure!(got == brute_force(&sets), "enumeration differs for {sets:?}");
    }
    let json = |threads| {
        let opts = RunOptions {
            threads: Some(threads),
            ..RunOptions::default()
        };
        canonical_json(&cmd_family(1, &opts).unwrap().report)
    };
    ensure!(json(1) == json(4), "reports differ across thread counts");
    let [tp, tm] = tau_pair(&rat(5, 16));
    ensure!(tp.as_rational() == Some(&rat(5, 4)) && tm.as_rational() == Some(&rat(-1, 4)), "tau(5/16)");
    Ok(format!("field axioms, {checked} partial fractions, numfield, enumeration, threads"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("xyz=1 end-to-end", criterion1),
        ("family normal form n=1..3", criterion2),
        ("x^2 y^2 z=1 counts and verdict", criterion3),
        ("irrationality sweep", criterion4),
        ("PDE candidate test", criterion5),
        ("dihedral positive control", criterion6),
        ("geometry oracle", criterion7),
        ("NVE cross-validation", criterion8),
        ("property suites", criterion9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
