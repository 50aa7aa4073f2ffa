//! Necessary conditions for the reducible (I) and finite (III) cases.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{is_perfect_square, rat_sqrt};
use crate::nve::{PointData, QuadExt, SingularityProfile};
use crate::Rat;

/// `α±` of one point, tagged by which branch of the definition applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModifiedExponent {
    /// `β ≠ 0`: the indicial exponents.
    Tau([QuadExt; 2]),
    /// `β = 0, δ ≠ 0` at a finite point.
    SimplePole,
    /// `β = δ = 0` at a finite point.
    Removable,
    /// `β_∞ = 0`.
    RegularInfinity,
}

impl ModifiedExponent {
    pub fn of(p: &PointData, infinity: bool) -> Self {
        if !p.beta.is_zero() {
            ModifiedExponent::Tau(p.tau.clone())
        } else if infinity {
            ModifiedExponent::RegularInfinity
        } else if p.delta_zero {
            ModifiedExponent::Removable
        } else {
            ModifiedExponent::SimplePole
        }
    }

    /// `[α+, α−]`.
    pub fn values(&self) -> [QuadExt; 2] {
        let q = |n: i64| QuadExt::rational(Rat::from_integer(n.into()));
        match self {
            ModifiedExponent::Tau(t) => t.clone(),
            ModifiedExponent::SimplePole => [q(1), q(1)],
            ModifiedExponent::Removable => [q(0), q(0)],
            ModifiedExponent::RegularInfinity => [q(1), q(0)],
        }
    }
}

/// A sign choice with `d = α∞ − Σ α_j ∈ N₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case1Witness {
    /// Number of roots taking `α+`, per factor.
    pub plus: Vec<usize>,
    pub infinity_plus: bool,
    pub d: u64,
}

/// Sum of rationals and square roots of distinct square-free radicands.
#[derive(Clone, Default)]
struct RadicalSum {
    rational: Rat,
    radicals: BTreeMap<BigInt, Rat>,
}

impl RadicalSum {
    fn add(&mut self, x: &QuadExt, k: i64) {
        let k = Rat::from_integer(k.into());
        self.rational += &x.rational * &k;
        if !x.coeff.is_zero() {
            *self.radicals.entry(x.radicand.clone()).or_insert_with(Rat::zero) += &x.coeff * k;
        }
    }

    /// The value as a non-negative integer, if it is one. Radicals of
    /// distinct square-free radicands are linearly independent over Q.
    fn natural(&self) -> Option<u64> {
        if self.radicals.values().any(|c| !c.is_zero()) {
            return None;
        }
        let v = &self.rational;
        (v.is_integer() && !v.is_negative()).then(|| v.to_integer().try_into().ok())?
    }
}

pub fn case1_necessary(p: &SingularityProfile) -> Vec<Case1Witness> {
    let Some(inf) = &p.infinity else {
        return Vec::new();
    };
    let alphas: Vec<[QuadExt; 2]> = p
        .finite
        .iter()
        .map(|pt| ModifiedExponent::of(pt, false).values())
        .collect();
    let a_inf = ModifiedExponent::of(inf, true).values();
    let mut out = Vec::new();
    let mut plus = vec![0usize; alphas.len()];
    loop {
        for (sign, a) in [(true, &a_inf[0]), (false, &a_inf[1])] {
            let mut s = RadicalSum::default();
            s.add(a, 1);
            for ((al, &j), pt) in alphas.iter().zip(&plus).zip(&p.finite) {
                s.add(&al[0], -(j as i64));
                s.add(&al[1], -((pt.roots() - j) as i64));
            }
            if let Some(d) = s.natural() {
                out.push(Case1Witness {
                    plus: plus.clone(),
                    infinity_plus: sign,
                    d,
                });
            }
            if a_inf[0] == a_inf[1] {
                break;
            }
        }
        let mut k = 0;
        loop {
            if k == plus.len() {
                return out;
            }
            plus[k] += 1;
            if plus[k] <= p.finite[k].roots() {
                break;
            }
            plus[k] = 0;
            k += 1;
        }
    }
}

/// Every `1 + 4β` (finite points and infinity) is a rational square.
pub fn case3_necessary(p: &SingularityProfile) -> bool {
    p.finite
        .iter()
        .chain(p.infinity.as_ref())
        .all(|pt| rat_sqrt(&(Rat::one() + Rat::from_integer(4.into()) * &pt.beta)).is_some())
}

/// `n² − 2n − 1` is not a perfect square, so `√(1+4β₀)` is irrational for
/// the `x^n y^n z = 1` family.
pub fn irrationality_check(n: u64) -> bool {
    let n = BigInt::from(n);
    let m = &n * &n - 2 * &n - 1;
    is_perfect_square(&m).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{QPoly, RatFun};
    use crate::nve::{normal_form_of, singularity_profile, NormalFormODE};

    fn profile(num: &[i64], den: &[i64]) -> SingularityProfile {
        singularity_profile(&NormalFormODE {
            r: RatFun::new(QPoly::from_i64s(num), QPoly::from_i64s(den)),
            half_a: RatFun::zero(),
        })
    }

    #[test]
    fn xyz_eliminates_cases_one_and_three() {
        let (_, _, o) = normal_form_of("1/(x^2-y^2)").unwrap();
        let p = singularity_profile(&o);
        assert!(case1_necessary(&p).is_empty());
        assert!(!case3_necessary(&p));
    }

    #[test]
    fn euler_equation_is_reducible() {
        // w'' = 2 y^-2 w: y^2 and 1/y
        let w = case1_necessary(&profile(&[2], &[0, 0, 1]));
        assert!(w.iter().any(|w| w.d == 0));
        let w = case1_necessary(&profile(&[0], &[1]));
        let ds: Vec<u64> = w.iter().map(|w| w.d).collect();
        assert_eq!(ds, vec![1, 0]);
    }

    #[test]
    fn case_three_needs_rational_roots() {
        assert!(case3_necessary(&profile(&[5], &[0, 0, 16])));
        assert!(!case3_necessary(&profile(&[1], &[0, 0, 1])));
    }

    #[test]
    fn irrationality() {
        assert!(irrationality_check(1) && irrationality_check(2) && irrationality_check(10_000));
        // n² − 2n − 1 = (n−1)² − 2, compared against a float square root
        for n in 1..2000u64 {
            let m = (n as i64 - 1).pow(2) - 2;
            let r = (m.max(0) as f64).sqrt().round() as i64;
            assert_eq!(irrationality_check(n), !(m >= 0 && r * r == m));
        }
    }
}
