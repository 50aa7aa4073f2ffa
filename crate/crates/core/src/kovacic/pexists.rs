//! The case-II polynomial search: does a monic `P` of degree `d` solve
//!
//! `P''' + 3θP'' + (3θ² + 3θ' − 4r)P' + (θ'' + 3θθ' + θ³ − 4rθ − 2r')P = 0`
//!
//! for `θ = ½ Σ e_j/(y − a_j)`?
//!
//! With `Q` the product of all finite singular factors, `θ = T/Q` for a
//! polynomial `T`, and multiplying by `Q³` gives a polynomial identity
//! `C₃P''' + C₂P'' + C₁P' + C₀P = 0`. Coefficient matching turns it into a
//! linear system in the non-leading coefficients of `P`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::assign::Assignment;
use crate::exact::{Poly, QPoly, RatFun};
use crate::interval::CBox;
use crate::numfield::{
    isolate_roots, linear_solve, linear_solve_tracked, prefilter_escalating, refine_root, roots_of_capped,
    AlgNum, FieldCtx, LinSolveOutcome, Prefilter, SplittingError,
};
use crate::nve::SingularityProfile;
use crate::scalar::Coeff;
use crate::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact linear algebra over Q.
    Rational,
    /// Exact linear algebra over the splitting field.
    SplittingField,
    /// Interval elimination with provably nonzero pivots.
    IntervalPrefilter,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rational => "exact over Q",
            Method::SplittingField => "exact over the splitting field",
            Method::IntervalPrefilter => "interval pre-filter",
        })
    }
}

/// A solution `P`, monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoundP {
    Rational(QPoly),
    Algebraic(Poly<AlgNum>),
}

impl fmt::Display for FoundP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoundP::Rational(p) => f.write_str(&p.fmt_var("y")),
            FoundP::Algebraic(p) => {
                let modulus = p
                    .coeffs()
                    .iter()
                    .find_map(|c| c.ctx().map(|c| c.modulus().fmt_var("t")));
                let terms: Vec<String> = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| format!("({})*y^{k}", c.rep().fmt_var("t")))
                    .collect();
                write!(f, "{}", terms.join(" + "))?;
                if let Some(m) = modulus {
                    write!(f, " mod {m}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PSearch {
    Found { p: FoundP, method: Method },
    Inconsistent { method: Method },
    Undecided { reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub prefilter: bool,
    pub degree_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prefilter: true,
            degree_cap: crate::numfield::DEFAULT_DEGREE_CAP,
        }
    }
}

/// `r`-dependent data shared by all assignments.
pub struct PContext {
    factors: Vec<QPoly>,
    q: QPoly,
    /// `r Q²`, `r Q³` and `r' Q³`, all polynomials.
    rq2: QPoly,
    rq3: QPoly,
    drq3: QPoly,
    boxes: Vec<Vec<CBox>>,
    refined: Mutex<HashMap<(usize, u32), Vec<CBox>>>,
    fields: Mutex<HashMap<Vec<usize>, Result<(Arc<FieldCtx>, Vec<AlgNum>), SplittingError>>>,
    pub options: SearchOptions,
}

fn as_poly(r: &RatFun, what: &str) -> QPoly {
    assert!(r.is_polynomial(), "{what} is not a polynomial after clearing denominators");
    r.num().clone()
}

impl PContext {
    pub fn new(profile: &SingularityProfile, options: SearchOptions) -> Self {
        let factors: Vec<QPoly> = profile.finite.iter().map(|p| p.factor().unwrap().clone()).collect();
        let q = factors.iter().fold(QPoly::one(), |acc, f| &acc * f);
        let qr = RatFun::from_poly(q.clone());
        let q2 = &qr * &qr;
        let q3 = &q2 * &qr;
        let r = &profile.r;
        PContext {
            rq2: as_poly(&(r * &q2), "r Q^2"),
            rq3: as_poly(&(r * &q3), "r Q^3"),
            drq3: as_poly(&(&r.derivative() * &q3), "r' Q^3"),
            boxes: factors.iter().map(isolate_roots).collect(),
            refined: Mutex::new(HashMap::new()),
            fields: Mutex::new(HashMap::new()),
            factors,
            q,
            options,
        }
    }

    fn roots_at(&self, g: usize, prec: u32) -> Vec<CBox> {
        let mut cache = self.refined.lock().unwrap();
        cache
            .entry((g, prec))
            .or_insert_with(|| {
                self.boxes[g]
                    .iter()
                    .map(|b| refine_root(&self.factors[g], b, prec as i64).with_prec(prec))
                    .collect()
            })
            .clone()
    }

    /// Roots of each listed factor in the splitting field of their product.
    fn field_roots(&self, groups: &[usize]) -> Result<Vec<Vec<AlgNum>>, SplittingError> {
        let mut cache = self.fields.lock().unwrap();
        let entry = cache.entry(groups.to_vec()).or_insert_with(|| {
            let prod = groups.iter().fold(QPoly::one(), |acc, &g| &acc * &self.factors[g]);
            roots_of_capped(&prod, self.options.degree_cap)
        });
        let (_, roots) = entry.clone()?;
        Ok(groups
            .iter()
            .map(|&g| {
                let f = self.factors[g].map(|c| AlgNum::rational(c.clone()));
                roots.iter().filter(|a| f.eval(a).is_zero()).cloned().collect()
            })
            .collect())
    }

    /// `Q/g` for factor `g`.
    fn cofactor(&self, g: usize) -> QPoly {
        self.q.exact_div(&self.factors[g])
    }

    /// `T` over `F` given the non-uniform factors' roots.
    fn theta_numerator<F: Coeff>(&self, a: &Assignment, mixed_roots: &[(usize, Vec<F>)], lift: &impl Fn(&Rat) -> F) -> Poly<F> {
        let half = Rat::new(1.into(), 2.into());
        let mut t = Poly::<F>::zero();
        for (g, es) in a.e.iter().enumerate() {
            let co = self.cofactor(g);
            if let Some((_, roots)) = mixed_roots.iter().find(|(m, _)| *m == g) {
                let fg = self.factors[g].map(lift);
                let mut s = Poly::<F>::zero();
                for (root, &e) in roots.iter().zip(es) {
                    if e != 0 {
                        let (quot, _) = fg.div_linear(root);
                        s = &s + &quot.scale(&lift(&(Rat::from_integer(e.into()) * &half)));
                    }
                }
                t = &t + &(&co.map(lift) * &s);
            } else if es[0] != 0 {
                let e = Rat::from_integer(es[0].into()) * &half;
                let part = (&co * &self.factors[g].derivative()).scale(&e);
                t = &t + &part.map(lift);
            }
        }
        t
    }

    /// `C₃, C₂, C₁, C₀`.
    fn operator<F: Coeff>(&self, t: &Poly<F>, lift: &impl Fn(&Rat) -> F) -> [Poly<F>; 4] {
        let q = self.q.map(lift);
        let dq = self.q.derivative().map(lift);
        let ddq = self.q.derivative().derivative().map(lift);
        let dt = t.derivative();
        let ddt = dt.derivative();
        let c = |k: i64| lift(&Rat::from_integer(k.into()));
        let q2 = &q * &q;
        // W = T'Q − TQ', so θ' = W/Q²
        let w = &(&dt * &q) - &(t * &dq);
        let c3 = &q2 * &q;
        let c2 = (t * &q2).scale(&c(3));
        let c1 = &(&(&(t * t) * &q).scale(&c(3)) + &(&w * &q).scale(&c(3))) - &self.rq3.map(lift).scale(&c(4));
        let theta2 = &(&(&(&ddt * &q) - &(t * &ddq)) * &q) - &(&dq * &w).scale(&c(2));
        let c0 = &(&(&(&theta2 + &(t * &w).scale(&c(3))) + &(&(t * t) * t)) - &(t * &self.rq2.map(lift)).scale(&c(4)))
            - &self.drq3.map(lift).scale(&c(2));
        [c3, c2, c1, c0]
    }
}

/// `L(P) = C₃P''' + C₂P'' + C₁P' + C₀P` with `c = [C₃, C₂, C₁, C₀]`.
pub fn apply_operator<F: Coeff>(c: &[Poly<F>; 4], p: &Poly<F>) -> Poly<F> {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    &(&(&(&c[0] * &d3) + &(&c[1] * &d2)) + &(&c[2] * &d1)) + &(&c[3] * p)
}

/// Coefficient matching for a monic `P` of degree `d`: columns are the
/// unknown coefficients of `y^0..y^{d−1}`.
fn linear_system<F: Coeff>(c: &[Poly<F>; 4], d: usize) -> (Vec<Vec<F>>, Vec<F>) {
    let cols: Vec<Poly<F>> = (0..=d)
        .map(|k| apply_operator(c, &Poly::monomial(F::one(), k)))
        .collect();
    let rows = cols.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
    let m = (0..rows)
        .map(|i| (0..d).map(|k| cols[k].coeff(i)).collect())
        .collect();
    let v = (0..rows).map(|i| -cols[d].coeff(i)).collect();
    (m, v)
}

fn monic_from<F: Coeff>(x: Vec<F>) -> Poly<F> {
    let mut c = x;
    c.push(F::one());
    Poly::new(c)
}

impl PContext {
    fn mixed_groups(a: &Assignment) -> Vec<usize> {
        a.e.iter()
            .enumerate()
            .filter(|(_, g)| g.windows(2).any(|w| w[0] != w[1]))
            .map(|(i, _)| i)
            .collect()
    }

    fn rational_operator(&self, a: &Assignment) -> [QPoly; 4] {
        let lift = |r: &Rat| r.clone();
        let t = self.theta_numerator::<Rat>(a, &[], &lift);
        self.operator(&t, &lift)
    }

    fn algebraic_operator(&self, a: &Assignment, roots: Vec<(usize, Vec<AlgNum>)>) -> [Poly<AlgNum>; 4] {
        let lift = |r: &Rat| AlgNum::rational(r.clone());
        let t = self.theta_numerator(a, &roots, &lift);
        self.operator(&t, &lift)
    }

    fn prefilter(&self, a: &Assignment, mixed: &[usize]) -> Prefilter {
        let d = a.d as usize;
        prefilter_escalating(|prec| {
            let lift = |r: &Rat| CBox::from_rat(r, prec);
            let roots: Vec<(usize, Vec<CBox>)> = mixed.iter().map(|&g| (g, self.roots_at(g, prec))).collect();
            let t = self.theta_numerator(a, &roots, &lift);
            let c = self.operator(&t, &lift);
            linear_system(&c, d)
        })
    }
}

/// Decides whether the assignment admits a monic `P` of degree `d`.
pub fn p_exists(a: &Assignment, cx: &PContext) -> PSearch {
    let d = a.d as usize;
    let mixed = PContext::mixed_groups(a);
    if mixed.is_empty() {
        let c = cx.rational_operator(a);
        let (m, v) = linear_system(&c, d);
        return match linear_solve(&m, &v) {
            LinSolveOutcome::Solution(x) => {
                let p = monic_from(x);
                assert!(apply_operator(&c, &p).is_zero(), "P failed re-verification");
                PSearch::Found {
                    p: FoundP::Rational(p),
                    method: Method::Rational,
                }
            }
            LinSolveOutcome::Inconsistent(_) => PSearch::Inconsistent {
                method: Method::Rational,
            },
            LinSolveOutcome::Split(_) => unreachable!("Q has no zero divisors"),
        };
    }
    if cx.options.prefilter && cx.prefilter(a, &mixed) == Prefilter::Inconsistent {
        return PSearch::Inconsistent {
            method: Method::IntervalPrefilter,
        };
    }
    let roots = match cx.field_roots(&mixed) {
        Ok(r) => r,
        Err(e) => {
            return PSearch::Undecided {
                reason: format!("{e}; the interval pre-filter was inconclusive"),
            }
        }
    };
    let c = cx.algebraic_operator(a, mixed.iter().copied().zip(roots).collect());
    let (m, v) = linear_system(&c, d);
    match linear_solve_tracked(&m, &v) {
        LinSolveOutcome::Solution(x) => {
            let p = monic_from(x);
            // after a split the solution lives in a quotient of the field
            let c = match p.coeffs().iter().find_map(|x| x.ctx().cloned()) {
                Some(ctx) => c.map_all(|x| x.in_ctx(&ctx)),
                None => c,
            };
            assert!(apply_operator(&c, &p).is_zero(), "P failed re-verification");
            PSearch::Found {
                p: FoundP::Algebraic(p),
                method: Method::SplittingField,
            }
        }
        LinSolveOutcome::Inconsistent(_) => PSearch::Inconsistent {
            method: Method::SplittingField,
        },
        LinSolveOutcome::Split(_) => unreachable!("tracked solve never returns a split"),
    }
}

trait MapAll {
    fn map_all(self, f: impl Fn(&AlgNum) -> AlgNum) -> Self;
}

impl MapAll for [Poly<AlgNum>; 4] {
    fn map_all(self, f: impl Fn(&AlgNum) -> AlgNum) -> Self {
        self.map(|p| p.map(&f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kovacic::assign::{build_esets, enumerate_assignments};
    use crate::nve::{normal_form_of, singularity_profile, NormalFormODE};

    fn rf(num: &[i64], den: &[i64]) -> RatFun {
        RatFun::new(QPoly::from_i64s(num), QPoly::from_i64s(den))
    }

    fn profile(r: RatFun) -> SingularityProfile {
        singularity_profile(&NormalFormODE {
            r,
            half_a: RatFun::zero(),
        })
    }

    /// Independent oracle: substitutes θ and r into the equation as
    /// rational functions.
    fn residual(r: &RatFun, theta: &RatFun, p: &QPoly) -> RatFun {
        let p = RatFun::from_poly(p.clone());
        let (d1, d2) = (p.derivative(), p.derivative().derivative());
        let d3 = d2.derivative();
        let th1 = theta.derivative();
        let th2 = th1.derivative();
        let k = |n: i64| RatFun::constant(Rat::from_integer(n.into()));
        let c1 = &(&(&k(3) * &(theta * theta)) + &(&k(3) * &th1)) - &(&k(4) * r);
        let c0 = &(&(&(&th2 + &(&k(3) * &(theta * &th1))) + &(&(theta * theta) * theta)) - &(&k(4) * &(r * theta)))
            - &(&k(2) * &r.derivative());
        &(&(&d3 + &(&(&k(3) * theta) * &d2)) + &(&c1 * &d1)) + &(&c0 * &p)
    }

    #[test]
    fn euler_toy_has_p_equal_one() {
        let r = rf(&[5], &[0, 0, 16]);
        let p = profile(r.clone());
        let cx = PContext::new(&p, SearchOptions::default());
        let a = Assignment {
            d: 0,
            e: vec![vec![5]],
            e_inf: 5,
        };
        let theta = rf(&[5], &[0, 2]);
        assert!(residual(&r, &theta, &QPoly::one()).is_zero());
        match p_exists(&a, &cx) {
            PSearch::Found { p: FoundP::Rational(p), .. } => assert_eq!(p, QPoly::one()),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn dihedral_control() {
        // −3/(16y²) − 3/(16(y−1)²) + 1/(8y(y−1))
        let r = rf(&[-3, 4, -4], &[0, 0, 16, -32, 16]);
        let p = profile(r.clone());
        assert_eq!(p.finite.len(), 1);
        let cx = PContext::new(&p, SearchOptions::default());
        let a = Assignment {
            d: 0,
            e: vec![vec![1, 1]],
            e_inf: 2,
        };
        let theta = rf(&[-1, 2], &[0, -2, 2]);
        assert!(residual(&r, &theta, &QPoly::one()).is_zero());
        assert_eq!(
            p_exists(&a, &cx),
            PSearch::Found {
                p: FoundP::Rational(QPoly::one()),
                method: Method::Rational
            }
        );
    }

    #[test]
    fn uniform_answers_match_the_oracle() {
        // every uniform assignment for xyz: the Q-solver agrees with
        // direct substitution of the P it finds (here: none exists), and
        // the cleared operator is the oracle's residual times Q³
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        let p = singularity_profile(&o);
        let cx = PContext::new(&p, SearchOptions::default());
        for a in enumerate_assignments(&build_esets(&p)).iter().filter(|a| a.is_uniform()) {
            let theta = p
                .finite
                .iter()
                .zip(&a.e)
                .map(|(pt, es)| {
                    let q = pt.factor().unwrap();
                    RatFun::new(q.derivative(), q.clone()).scale(&Rat::new(es[0].into(), 2.into()))
                })
                .fold(RatFun::zero(), |acc, t| &acc + &t);
            let c = cx.rational_operator(a);
            let probe = QPoly::from_i64s(&[3, -1, 2]);
            let q3 = RatFun::from_poly(cx.q.pow(3));
            assert_eq!(
                RatFun::from_poly(apply_operator(&c, &probe)),
                &residual(&o.r, &theta, &probe) * &q3
            );
            assert!(matches!(p_exists(a, &cx), PSearch::Inconsistent { .. }));
        }
    }

    #[test]
    fn theta_residues_are_half_e() {
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        let p = singularity_profile(&o);
        let cx = PContext::new(&p, SearchOptions::default());
        let a = Assignment {
            d: 0,
            e: vec![vec![2], vec![2, 5, -1, -1, 2, 5]],
            e_inf: 4,
        };
        let roots = cx.field_roots(&[1]).unwrap();
        let lift = |r: &Rat| AlgNum::rational(r.clone());
        let t = cx.theta_numerator(&a, &[(1, roots[0].clone())], &lift);
        let dq = cx.q.derivative().map(lift);
        let half = |e: i64| AlgNum::rational(Rat::new(e.into(), 2.into()));
        for (root, &e) in roots[0].iter().zip(&a.e[1]) {
            assert_eq!(t.eval(root), dq.eval(root) * half(e));
        }
        assert_eq!(t.eval(&AlgNum::zero()), dq.eval(&AlgNum::zero()) * half(2));
    }

    #[test]
    fn prefilter_and_exact_agree_at_degree_zero() {
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        let p = singularity_profile(&o);
        let with = PContext::new(&p, SearchOptions::default());
        let without = PContext::new(
            &p,
            SearchOptions {
                prefilter: false,
                ..SearchOptions::default()
            },
        );
        // conjugate root subsets all fail, by either route
        for a in enumerate_assignments(&build_esets(&p)).iter().filter(|a| a.d == 0 && !a.is_uniform()).take(8) {
            assert_eq!(
                p_exists(a, &with),
                PSearch::Inconsistent {
                    method: Method::IntervalPrefilter
                }
            );
            assert_eq!(
                p_exists(a, &without),
                PSearch::Inconsistent {
                    method: Method::SplittingField
                }
            );
        }
    }
}
