//! From a symmetric Monge patch `z = f(x, y)` to the normal form
//! `w'' = r(y) w` of the variational equation along the planar geodesic
//! `x = 0`.

mod profile;
mod quad;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::RatFun;
use crate::expr::{eval_interval, Expr, RatFunError, Var};
use crate::interval::CBox;
use crate::Rat;

pub use profile::{eset, limit_beta, singularity_profile, Location, PointData, ProfileStatus, SingularityProfile};
pub use quad::{square_free_split, tau_pair, tau_string, QuadExt};

/// Points where transcendental identities are sampled.
const SAMPLES: usize = 20;
const SAMPLE_PREC: u32 = 256;

/// `y = (4k+3)/8`, away from the origin where most examples are singular.
fn sample_points() -> impl Iterator<Item = Rat> {
    (0..SAMPLES as i64).map(|k| Rat::new((4 * k + 3).into(), 8.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exact,
    /// Interval evaluation at sample points; a pass is only plausible.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MongeSurface {
    pub f: Expr,
    pub symmetry: CheckMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("f_x(0, y) does not vanish (witness y = {witness})")]
    SymmetryViolated { witness: Rat },
    #[error("f may only depend on x and y")]
    DependsOnZ,
    #[error("f is not defined along x = 0")]
    SingularAxis,
    #[error("{0}")]
    NotRational(String),
}

fn at_axis(e: &Expr) -> Expr {
    e.subst(Var::X, &Expr::zero())
}

fn exact_on_axis(e: &Expr) -> Result<RatFun, SurfaceError> {
    at_axis(e).to_ratfun(Var::Y).map_err(|err| match err {
        RatFunError::DivisionByZero => SurfaceError::SingularAxis,
        RatFunError::WrongVariable { .. } => SurfaceError::DependsOnZ,
        other => SurfaceError::NotRational(other.to_string()),
    })
}

/// First sample point whose enclosure of `g(0, y)` excludes zero.
fn sampled_witness(g: &Expr) -> Option<Rat> {
    let g = at_axis(g);
    sample_points().find(|y| {
        let mut bind = BTreeMap::new();
        bind.insert(Var::Y, CBox::from_rat(y, SAMPLE_PREC));
        eval_interval(&g, &bind, SAMPLE_PREC).is_ok_and(|v| v.excludes_zero())
    })
}

fn first_nonzero(r: &RatFun) -> Rat {
    sample_points()
        .find(|y| r.eval(y).is_some_and(|v| !v.is_zero()))
        .expect("a nonzero rational function vanishes at most deg(num) times")
}

/// Checks `f_x(0, y) ≡ 0`: exactly for rational `f`, by sampling otherwise.
pub fn make_surface(f: Expr) -> Result<MongeSurface, SurfaceError> {
    if f.contains_var(Var::Z) {
        return Err(SurfaceError::DependsOnZ);
    }
    let fx = f.differentiate(Var::X);
    if f.has_func() {
        if let Some(witness) = sampled_witness(&fx) {
            return Err(SurfaceError::SymmetryViolated { witness });
        }
        return Ok(MongeSurface {
            f,
            symmetry: CheckMode::Sampled,
        });
    }
    let g = exact_on_axis(&fx)?;
    if !g.is_zero() {
        return Err(SurfaceError::SymmetryViolated {
            witness: first_nonzero(&g),
        });
    }
    Ok(MongeSurface {
        f,
        symmetry: CheckMode::Exact,
    })
}

/// `ξ'' + a ξ' + b ξ = 0` in the `y` parameterization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NVECoefficients {
    pub a: RatFun,
    pub b: RatFun,
}

/// `w'' = r w` with `w = ξ·exp(½∫a)`; `half_a` records the multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormODE {
    pub r: RatFun,
    pub half_a: RatFun,
}

/// Restrictions of `f_y`, `f_yy`, `f_xx` to the axis.
pub fn axis_derivatives(s: &MongeSurface) -> Result<[RatFun; 3], SurfaceError> {
    if s.f.has_func() {
        return Err(SurfaceError::NotRational(
            "the variational equation needs a rational f".into(),
        ));
    }
    let fy = s.f.differentiate(Var::Y);
    let fyy = fy.differentiate(Var::Y);
    let fxx = s.f.differentiate(Var::X).differentiate(Var::X);
    Ok([exact_on_axis(&fy)?, exact_on_axis(&fyy)?, exact_on_axis(&fxx)?])
}

pub fn derive_nve(s: &MongeSurface) -> Result<NVECoefficients, SurfaceError> {
    let [fy, fyy, fxx] = axis_derivatives(s)?;
    let w = (&RatFun::one() + &(&fy * &fy)).inv().expect("1 + f_y^2 has no rational zero");
    Ok(NVECoefficients {
        a: -&(&(&fy * &fyy) * &w),
        b: &(&fyy * &fxx) * &w,
    })
}

pub fn normal_form(c: &NVECoefficients) -> NormalFormODE {
    let quarter = Rat::new(1.into(), 4.into());
    let half = Rat::new(1.into(), 2.into());
    let r = &(&(&c.a * &c.a).scale(&quarter) + &c.a.derivative().scale(&half)) - &c.b;
    NormalFormODE {
        r,
        half_a: c.a.scale(&half),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdeVerdict {
    Pass,
    Fail,
    PlausiblyPass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeOutcome {
    pub verdict: PdeVerdict,
    pub mode: CheckMode,
    /// `y f_xx − f_y` on the axis, when it is rational.
    pub residual: Option<RatFun>,
    /// A sample `y` where the residual provably does not vanish.
    pub witness: Option<Rat>,
}

/// The integrability candidate test `y f_xx − f_y = 0` along `x = 0`.
pub fn pde_candidate_test(s: &MongeSurface) -> Result<PdeOutcome, SurfaceError> {
    let f = &s.f;
    let g = Expr::sum(vec![
        Expr::product(vec![Expr::var(Var::Y), f.differentiate(Var::X).differentiate(Var::X)]),
        f.differentiate(Var::Y).neg(),
    ]);
    if f.has_func() {
        let witness = sampled_witness(&g);
        return Ok(PdeOutcome {
            verdict: if witness.is_some() { PdeVerdict::Fail } else { PdeVerdict::PlausiblyPass },
            mode: CheckMode::Sampled,
            residual: None,
            witness,
        });
    }
    let res = exact_on_axis(&g)?;
    let pass = res.is_zero();
    Ok(PdeOutcome {
        verdict: if pass { PdeVerdict::Pass } else { PdeVerdict::Fail },
        mode: CheckMode::Exact,
        witness: (!pass).then(|| first_nonzero(&res)),
        residual: Some(res),
    })
}

/// Normal form for `z = f(x, y)` given as text.
pub fn normal_form_of(text: &str) -> Result<(MongeSurface, NVECoefficients, NormalFormODE), NveError> {
    let f = crate::expr::parse(text)?;
    let s = make_surface(f)?;
    let c = derive_nve(&s)?;
    let o = normal_form(&c);
    Ok((s, c, o))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NveError {
    #[error(transparent)]
    Parse(#[from] crate::expr::ParseError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::QPoly;
    use crate::expr::parse;
    use num_traits::One;

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(QPoly::from_i64s(num), QPoly::from_i64s(den))
    }

    fn surface(t: &str) -> MongeSurface {
        make_surface(parse(t).unwrap()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    /// `2n²(2n+1)(4n³−10n²−y^{4n+2}(4n+5)) / (y²(4n²+y^{4n+2})²)`.
    fn family_r(n: i64) -> RatFun {
        let k = (4 * n + 2) as usize;
        let c = 2 * n * n * (2 * n + 1);
        let mut num = vec![0i64; k + 1];
        num[0] = c * (4 * n * n * n - 10 * n * n);
        num[k] = -c * (4 * n + 5);
        let mut base = vec![0i64; k + 1];
        base[0] = 4 * n * n;
        base[k] = 1;
        let base = QPoly::from_i64s(&base);
        let den = &QPoly::monomial(Rat::one(), 2) * &(&base * &base);
        RatFun::new(QPoly::from_i64s(&num), den)
    }

    #[test]
    fn symmetry_check() {
        assert_eq!(surface("1/(x^2-y^2)").symmetry, CheckMode::Exact);
        assert_eq!(surface("x^2+y^2").symmetry, CheckMode::Exact);
        assert_eq!(surface("cos(2*x)*exp(-2*y^2)").symmetry, CheckMode::Sampled);
        let e = make_surface(parse("x+y").unwrap()).unwrap_err();
        assert!(matches!(e, SurfaceError::SymmetryViolated { .. }));
        let e = make_surface(parse("sin(x)*exp(y)").unwrap()).unwrap_err();
        assert!(matches!(e, SurfaceError::SymmetryViolated { .. }));
        assert_eq!(make_surface(parse("x*z").unwrap()).unwrap_err(), SurfaceError::DependsOnZ);
    }

    #[test]
    fn nve_coefficients() {
        let c = derive_nve(&surface("(x^2-y^2)^-1")).unwrap();
        assert_eq!(c.a, rf(&[12], &[0, 4, 0, 0, 0, 0, 0, 1]));
        assert_eq!(c.b, rf(&[12], &[0, 0, 4, 0, 0, 0, 0, 0, 1]));
        let c = derive_nve(&surface("x^2+y^2")).unwrap();
        assert_eq!(c.a, rf(&[0, -4], &[1, 0, 4]));
        assert_eq!(c.b, rf(&[4], &[1, 0, 4]));
        let c = derive_nve(&surface("0")).unwrap();
        assert!(c.a.is_zero() && c.b.is_zero());
        assert!(matches!(
            derive_nve(&surface("cos(2*x)*exp(-2*y^2)")),
            Err(SurfaceError::NotRational(_))
        ));
    }

    #[test]
    fn normal_form_matches_family() {
        for n in 1..=3 {
            let (_, _, o) = normal_form_of(&format!("(x^2-y^2)^-{n}")).unwrap();
            assert_eq!(o.r, family_r(n), "n = {n}");
        }
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        // −18(2+3y⁶)/(y²(y⁶+4)²)
        let den = &QPoly::monomial(Rat::one(), 2) * &QPoly::from_i64s(&[4, 0, 0, 0, 0, 0, 1]).pow(2);
        assert_eq!(o.r, RatFun::new(QPoly::from_i64s(&[-36, 0, 0, 0, 0, 0, -54]), den));
        let c = NVECoefficients {
            a: RatFun::zero(),
            b: rf(&[3, 1], &[0, 0, 1]),
        };
        assert_eq!(normal_form(&c).r, -&c.b);
    }

    #[test]
    fn xyz_profile() {
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        let p = singularity_profile(&o);
        assert!(p.fuchsian());
        assert_eq!(p.finite_points(), 6 + 1);
        assert_eq!(p.finite[0].factor(), Some(&QPoly::x()));
        assert_eq!(p.finite[0].beta, r(-9, 4));
        assert_eq!(tau_string(&p.finite[0].beta), "(1 ± i*sqrt(8))/2");
        assert_eq!(p.finite[0].eset, vec![2]);
        assert_eq!(p.finite[1].beta, r(5, 16));
        assert_eq!(p.finite[1].eset, vec![2, 5, -1]);
        let inf = p.infinity.as_ref().unwrap();
        assert!(inf.beta.is_zero());
        assert_eq!(inf.eset, vec![0, 2, 4]);
        assert_eq!(p.reconstruct(), o.r);
    }

    #[test]
    fn family_beta_at_origin() {
        for n in 1..=3i64 {
            let (_, _, o) = normal_form_of(&format!("(x^2-y^2)^-{n}")).unwrap();
            let p = singularity_profile(&o);
            assert!(p.fuchsian());
            assert_eq!(p.finite[0].beta, r((1 + 2 * n) * (2 * n - 5), 4));
            assert_eq!(p.finite[1].beta, r(5, 16));
            assert!(p.infinity.unwrap().beta.is_zero());
        }
    }

    #[test]
    fn trivial_profiles() {
        let zero = NormalFormODE {
            r: RatFun::zero(),
            half_a: RatFun::zero(),
        };
        let p = singularity_profile(&zero);
        assert!(p.fuchsian() && p.finite.is_empty());
        assert_eq!(p.infinity.unwrap().eset, vec![0, 2, 4]);
        let cube = NormalFormODE {
            r: rf(&[1], &[0, 0, 0, 1]),
            half_a: RatFun::zero(),
        };
        assert!(matches!(singularity_profile(&cube).status, ProfileStatus::NotFuchsian(_)));
        let slow = NormalFormODE {
            r: rf(&[1], &[0, 1]),
            half_a: RatFun::zero(),
        };
        assert!(matches!(singularity_profile(&slow).status, ProfileStatus::NotFuchsian(_)));
    }

    #[test]
    fn beta_splits_across_a_factor() {
        // the square-free part of the xyz denominator is y⁷ + 4y, which
        // carries β = −9/4 at 0 and 5/16 at the roots of y⁶ + 4
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        assert_eq!(crate::exact::squarefree_factorization(o.r.den()).len(), 1);
        let p = singularity_profile(&o);
        let factors: Vec<_> = p.finite.iter().map(|f| f.factor().unwrap().clone()).collect();
        assert_eq!(factors, vec![QPoly::x(), QPoly::from_i64s(&[4, 0, 0, 0, 0, 0, 1])]);
    }

    #[test]
    fn irrational_beta_is_unsupported() {
        // 1/(y²−2)² has β = 1/(4·2) at both roots, while 1/(y(y²−2)²)
        // has β = 1/(8√2) and −1/(8√2)
        let same = NormalFormODE {
            r: rf(&[1], &[4, 0, -4, 0, 1]),
            half_a: RatFun::zero(),
        };
        let p = singularity_profile(&same);
        assert!(p.fuchsian());
        assert_eq!(p.finite[0].beta, r(1, 8));
        let mixed = NormalFormODE {
            r: rf(&[1], &[0, 4, 0, -4, 0, 1]),
            half_a: RatFun::zero(),
        };
        assert!(matches!(singularity_profile(&mixed).status, ProfileStatus::Unsupported(_)));
    }

    #[test]
    fn pde_test() {
        let o = pde_candidate_test(&surface("x^2+y^2")).unwrap();
        assert_eq!((o.verdict, o.mode), (PdeVerdict::Pass, CheckMode::Exact));
        let o = pde_candidate_test(&surface("cos(2*x)*exp(-2*y^2)")).unwrap();
        assert_eq!((o.verdict, o.mode), (PdeVerdict::PlausiblyPass, CheckMode::Sampled));
        let o = pde_candidate_test(&surface("(x^2-y^2)^-1")).unwrap();
        assert_eq!(o.verdict, PdeVerdict::Fail);
        assert_eq!(o.residual.unwrap(), rf(&[-4], &[0, 0, 0, 1]));
        let o = pde_candidate_test(&surface("cos(x)*exp(-y^2)")).unwrap();
        assert_eq!((o.verdict, o.mode), (PdeVerdict::Fail, CheckMode::Sampled));
    }
}
