//! Local data of `w'' = r w` at its singular points.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::quad::{tau_pair, QuadExt};
use super::NormalFormODE;
use crate::exact::{inverse_mod, partial_fractions, poly_gcd, rat_sqrt, trace, QPoly, RatFun};
use crate::numfield::rational_roots;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// All roots of a monic square-free factor, which share `β`.
    Finite(QPoly),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    pub location: Location,
    /// Pole order of `r` at each root; 0 at infinity.
    pub multiplicity: usize,
    pub beta: Rat,
    /// `δ` as a representative in `Q[t]/(q)`; a constant at infinity.
    pub delta: QPoly,
    pub delta_zero: bool,
    pub tau: [QuadExt; 2],
    pub eset: Vec<i64>,
}

impl PointData {
    /// Number of points this entry stands for.
    pub fn roots(&self) -> usize {
        match &self.location {
            Location::Finite(q) => q.deg0(),
            Location::Infinity => 1,
        }
    }

    pub fn delta_constant(&self) -> Option<Rat> {
        (self.delta.deg0() == 0).then(|| self.delta.coeff(0))
    }

    pub fn factor(&self) -> Option<&QPoly> {
        match &self.location {
            Location::Finite(q) => Some(q),
            Location::Infinity => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileStatus {
    Fuchsian,
    NotFuchsian(String),
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityProfile {
    pub r: RatFun,
    pub finite: Vec<PointData>,
    /// Present when `r` decays at least like `y^-2`.
    pub infinity: Option<PointData>,
    pub status: ProfileStatus,
}

impl SingularityProfile {
    pub fn fuchsian(&self) -> bool {
        self.status == ProfileStatus::Fuchsian
    }

    /// Number of finite singular points counted with their conjugates.
    pub fn finite_points(&self) -> usize {
        self.finite.iter().map(PointData::roots).sum()
    }

    /// Rebuilds `r` from the `β`/`δ` data alone.
    pub fn reconstruct(&self) -> RatFun {
        let mut acc = RatFun::zero();
        for p in &self.finite {
            let q = p.factor().unwrap();
            let (u, v) = numerators(q, &p.beta, &p.delta);
            acc = &acc + &RatFun::new(u, q.clone());
            if !v.is_zero() {
                acc = &acc + &RatFun::new(v, q * q);
            }
        }
        acc
    }
}

/// E-set of a point: `{2, 2+2s, 2−2s} ∩ Z` with `s = √(1+4β)`, and the
/// special cases for `β = 0`.
pub fn eset(beta: &Rat, delta_zero: bool, infinity: bool) -> Vec<i64> {
    if beta.is_zero() {
        return match (infinity, delta_zero) {
            (true, _) => vec![0, 2, 4],
            (false, false) => vec![4],
            (false, true) => vec![0],
        };
    }
    let mut out = vec![2];
    if let Some(s) = rat_sqrt(&(Rat::one() + Rat::from_integer(4.into()) * beta)) {
        let two_s = s * Rat::from_integer(2.into());
        if two_s.is_integer() {
            let k: i64 = two_s.to_integer().try_into().expect("exponent out of range");
            for e in [2 + k, 2 - k] {
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
    }
    out
}

fn point(q: QPoly, multiplicity: usize, beta: Rat, delta: QPoly) -> PointData {
    let delta_zero = delta.is_zero();
    PointData {
        eset: eset(&beta, delta_zero, false),
        tau: tau_pair(&beta),
        location: Location::Finite(q),
        multiplicity,
        beta,
        delta,
        delta_zero,
    }
}

/// `β` and `δ` at the roots of `q` for the principal part `u/q + v/q²`:
/// with `q = (y−a)s`, `β = v/q'²` and `δ = u/q' + (v'q' − vq'')/q'³`.
fn beta_delta(q: &QPoly, u: &QPoly, v: &QPoly) -> (QPoly, QPoly) {
    let dq = q.derivative();
    let inv = inverse_mod(&dq, q).expect("square-free factor");
    let inv2 = (&inv * &inv).rem(q);
    let inv3 = (&inv2 * &inv).rem(q);
    let beta = (v * &inv2).rem(q);
    let tail = &(&v.derivative() * &dq) - &(v * &dq.derivative());
    let delta = (&(u * &inv) + &(&tail * &inv3)).rem(q);
    (beta, delta)
}

/// Inverse of [`beta_delta`] for a constant `β`.
fn numerators(q: &QPoly, beta: &Rat, delta: &QPoly) -> (QPoly, QPoly) {
    let dq = q.derivative();
    let v = (&dq * &dq).scale(beta).rem(q);
    let inv = inverse_mod(&dq, q).expect("square-free factor");
    let inv3 = (&(&inv * &inv).rem(q) * &inv).rem(q);
    let tail = &(&v.derivative() * &dq) - &(&v * &dq.derivative());
    let u = (&(delta - &(&tail * &inv3)) * &dq).rem(q);
    (u, v)
}

/// Characteristic polynomial of multiplication by `f` in `Q[t]/(q)`, from
/// the traces of its powers by Newton's identities.
fn charpoly(f: &QPoly, q: &QPoly) -> QPoly {
    let n = q.deg0();
    let mut pw = QPoly::one();
    let mut p = vec![Rat::zero(); n + 1];
    for k in 1..=n {
        pw = (&pw * f).rem(q);
        p[k] = trace(&pw, q);
    }
    let mut e = vec![Rat::one(); n + 1];
    for k in 1..=n {
        let mut s = Rat::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        e[k] = s / Rat::from_integer(BigInt::from(k));
    }
    let coeffs = (0..=n)
        .map(|j| {
            // coefficient of z^j is (−1)^{n−j} e_{n−j}
            let c = e[n - j].clone();
            if (n - j) % 2 == 1 { -c } else { c }
        })
        .collect();
    QPoly::new(coeffs)
}

/// Splits `q` by the distinct values of `β`. `None` when some value is
/// irrational.
fn split_by_beta(q: &QPoly, beta: &QPoly) -> Option<Vec<(QPoly, Rat)>> {
    if beta.deg0() == 0 {
        return Some(vec![(q.clone(), beta.coeff(0))]);
    }
    let mut parts = Vec::new();
    let mut covered = 0;
    for c in rational_roots(&charpoly(beta, q)) {
        let g = poly_gcd(q, &(beta - &QPoly::constant(c.clone()))).monic();
        covered += g.deg0();
        parts.push((g, c));
    }
    (covered == q.deg0()).then_some(parts)
}

fn order_key(p: &PointData) -> (usize, Vec<Rat>) {
    let q = p.factor().unwrap();
    (q.deg0(), q.coeffs().to_vec())
}

/// `lim y² r(y)` at infinity, for `r` vanishing there at least to order 2.
pub fn limit_beta(r: &RatFun) -> Rat {
    match r.order_at_infinity() {
        Some(2) => r.num().leading() / r.den().leading(),
        _ => Rat::zero(),
    }
}

/// Singular points of `w'' = r w` with their local exponent data.
pub fn singularity_profile(o: &NormalFormODE) -> SingularityProfile {
    let r = o.r.clone();
    let mut status = ProfileStatus::Fuchsian;
    let mut finite = Vec::new();
    match partial_fractions(&r) {
        Err(e) => status = ProfileStatus::NotFuchsian(e.to_string()),
        Ok(pf) => {
            for t in &pf.terms {
                let q = t.factor.monic();
                let (beta, delta) = beta_delta(&q, &t.u, &t.v);
                match split_by_beta(&q, &beta) {
                    Some(parts) => {
                        for (qc, c) in parts {
                            let m = if c.is_zero() { 1 } else { 2 };
                            let d = delta.rem(&qc);
                            finite.push(point(qc, m, c, d));
                        }
                    }
                    None => {
                        status = ProfileStatus::Unsupported(format!(
                            "beta takes irrational values on the roots of {}",
                            q.fmt_var("y")
                        ));
                        finite.push(point(q.clone(), t.multiplicity, Rat::zero(), delta));
                    }
                }
            }
        }
    }
    finite.sort_by_key(order_key);
    let decay = r.order_at_infinity();
    let infinity = match decay {
        Some(k) if k < 2 => {
            if status == ProfileStatus::Fuchsian {
                status = ProfileStatus::NotFuchsian(format!("r decays only like y^{} at infinity", -k));
            }
            None
        }
        _ => {
            let (beta, dsum) = if status == ProfileStatus::Fuchsian {
                // β_∞ = Σ(β_j + δ_j a_j) over all finite roots
                let mut beta = Rat::zero();
                let mut dsum = Rat::zero();
                for p in &finite {
                    let q = p.factor().unwrap();
                    beta += &p.beta * Rat::from_integer(BigInt::from(q.deg0()));
                    beta += trace(&(&p.delta * &QPoly::x()), q);
                    dsum += trace(&p.delta, q);
                }
                (beta, dsum)
            } else {
                (limit_beta(&r), Rat::zero())
            };
            Some(PointData {
                location: Location::Infinity,
                multiplicity: 0,
                eset: eset(&beta, dsum.is_zero(), true),
                tau: tau_pair(&beta),
                delta_zero: dsum.is_zero(),
                delta: QPoly::constant(dsum),
                beta,
            })
        }
    };
    SingularityProfile {
        r,
        finite,
        infinity,
        status,
    }
}

impl fmt::Display for PointData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Location::Finite(q) => write!(f, "roots of {}", q.fmt_var("y"))?,
            Location::Infinity => write!(f, "infinity")?,
        }
        write!(f, ": beta = {}", self.beta)
    }
}
