//! Gcd, resultant and square-free machinery over Q.
//!
//! Gcd and resultant run the subresultant PRS on integer-scaled inputs so
//! intermediate coefficients stay bounded by the subresultant determinants.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use crate::Rat;

fn pow_rat(b: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(b.clone(), e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// Subresultant polynomial remainder sequence of `a` and `b`
/// (deg a >= deg b), returning the last nonzero member.
fn subresultant_last(a: &QPoly, b: &QPoly) -> QPoly {
    let mut a = a.primitive();
    let mut b = b.primitive();
    if a.deg0() < b.deg0() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_zero() {
        return a;
    }
    let mut g = Rat::one();
    let mut h = Rat::one();
    loop {
        let delta = (a.deg0() - b.deg0()) as i64;
        let r = a.prem(&b);
        if r.is_zero() {
            return b;
        }
        if r.deg0() == 0 {
            return r;
        }
        a = b;
        b = r.scale(&(g.clone() * pow_rat(&h, delta)).recip());
        g = a.leading();
        h = pow_rat(&h, 1 - delta) * pow_rat(&g, delta);
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &QPoly, q: &QPoly) -> QPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    subresultant_last(p, q).monic()
}

/// Extended Euclid: returns `(g, s, t)` with `s p + t q = g`, `g` monic.
pub fn ext_gcd(p: &QPoly, q: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (p.clone(), q.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (quo, rem) = r0.div_rem(&r1);
        let s2 = &s0 - &(&quo * &s1);
        let t2 = &t0 - &(&quo * &t1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let lc = r0.leading().recip();
    (r0.scale(&lc), s0.scale(&lc), t0.scale(&lc))
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`; otherwise the nontrivial gcd.
pub fn inverse_mod(a: &QPoly, m: &QPoly) -> Result<QPoly, QPoly> {
    let (g, s, _) = ext_gcd(&a.rem(m), m);
    if g.deg0() == 0 && !g.is_zero() {
        Ok(s.rem(m))
    } else {
        Err(g)
    }
}

/// Resultant via the subresultant PRS (Collins / Brown).
pub fn resultant(p: &QPoly, q: &QPoly) -> Rat {
    if p.is_zero() || q.is_zero() {
        return Rat::zero();
    }
    let (dp, dq) = (p.deg0(), q.deg0());
    if dp == 0 {
        return num_traits::pow(p.leading(), dq);
    }
    if dq == 0 {
        return num_traits::pow(q.leading(), dp);
    }
    // Pull out rational contents: res(c a, d b) = c^deg b d^deg a res(a, b).
    let pa = p.primitive();
    let pb = q.primitive();
    let cp = p.leading() / pa.leading();
    let cq = q.leading() / pb.leading();
    let mut t = num_traits::pow(cp, dq) * num_traits::pow(cq, dp);
    let (mut a, mut b) = (pa, pb);
    let mut s = Rat::one();
    if a.deg0() < b.deg0() {
        std::mem::swap(&mut a, &mut b);
        if a.deg0() % 2 == 1 && b.deg0() % 2 == 1 {
            s = -s;
        }
    }
    let mut g = Rat::one();
    let mut h = Rat::one();
    loop {
        let delta = (a.deg0() - b.deg0()) as i64;
        if a.deg0() % 2 == 1 && b.deg0() % 2 == 1 {
            s = -s;
        }
        let r = a.prem(&b);
        if r.is_zero() {
            return Rat::zero();
        }
        a = b;
        b = r.scale(&(g.clone() * pow_rat(&h, delta)).recip());
        g = a.leading();
        h = pow_rat(&h, 1 - delta) * pow_rat(&g, delta);
        if b.deg0() == 0 {
            let da = a.deg0() as i64;
            h = pow_rat(&h, 1 - da) * pow_rat(&b.leading(), da);
            t *= s * h;
            return t;
        }
    }
}

/// Yun's square-free factorization of a nonzero polynomial.
///
/// Returns monic, square-free, pairwise coprime factors with strictly
/// increasing multiplicities; the leading coefficient is dropped.
pub fn squarefree_factorization(p: &QPoly) -> Vec<(QPoly, usize)> {
    assert!(!p.is_zero(), "square-free factorization of zero");
    let f = p.monic();
    if f.deg0() == 0 {
        return Vec::new();
    }
    let fp = f.derivative();
    let a0 = poly_gcd(&f, &fp);
    let mut b = f.exact_div(&a0);
    let c = fp.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.deg0() > 0 {
        let a = poly_gcd(&b, &d);
        let bn = b.exact_div(&a);
        let cn = d.div_rem(&a).0;
        d = &cn - &bn.derivative();
        if a.deg0() > 0 {
            out.push((a, i));
        }
        b = bn;
        i += 1;
    }
    out
}

pub fn is_squarefree(p: &QPoly) -> bool {
    !p.is_zero() && poly_gcd(p, &p.derivative()).deg0() == 0
}

/// Square-free part (product of distinct monic factors).
pub fn squarefree_part(p: &QPoly) -> QPoly {
    squarefree_factorization(p)
        .into_iter()
        .fold(QPoly::one(), |acc, (q, _)| &acc * &q)
}

/// Power sums `p_0..=p_k` of the roots of `q` (with multiplicity) via Newton's identities.
pub fn power_sums(q: &QPoly, k: usize) -> Vec<Rat> {
    let q = q.monic();
    let n = q.deg0();
    // e-coefficients: q = y^n + c_{n-1} y^{n-1} + ... ; a_i = coefficient of y^{n-i}
    let a: Vec<Rat> = (0..=n).map(|i| q.coeff(n - i)).collect();
    let mut p = vec![Rat::from_integer(BigInt::from(n)); k + 1];
    for m in 1..=k {
        let mut s = Rat::zero();
        for i in 1..m.min(n + 1) {
            s += &a[i] * &p[m - i];
        }
        if m <= n {
            s += &a[m] * Rat::from_integer(BigInt::from(m));
        }
        p[m] = -s;
    }
    p
}

/// Sum over the roots `a` of `q` (with multiplicity) of `f(a)`, as a trace in Q[t]/(q).
pub fn trace(f: &QPoly, q: &QPoly) -> Rat {
    let f = f.rem(q);
    let ps = power_sums(q, f.deg0());
    f.coeffs()
        .iter()
        .zip(ps.iter())
        .fold(Rat::zero(), |acc, (c, p)| acc + c * p)
}

/// Exact integer square root test.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Rational square root when it exists.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let n = is_perfect_square(r.numer())?;
    let d = is_perfect_square(r.denom())?;
    Some(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        let q = p(&[4, 0, 0, 0, 0, 0, 1]);
        assert_eq!(poly_gcd(&q, &q.derivative()), p(&[1]));
        assert_ne!(resultant(&q, &q.derivative()), Rat::zero());
    }

    #[test]
    fn gcd_zero_input_is_monic() {
        let g = poly_gcd(&QPoly::zero(), &p(&[3, 6]));
        assert_eq!(g, QPoly::new(vec![Rat::new(1.into(), 2.into()), Rat::one()]));
    }

    #[test]
    fn resultant_examples() {
        // res(y^2-2, y^2-3) = 1
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), Rat::one());
        // res(y - a, q) = q(a)
        let q = p(&[7, -2, 0, 5]);
        let a = Rat::new(3.into(), 2.into());
        let lin = QPoly::new(vec![-a.clone(), Rat::one()]);
        assert_eq!(resultant(&lin, &q), q.eval(&a));
        assert_eq!(resultant(&q, &q), Rat::zero());
    }

    #[test]
    fn resultant_matches_sylvester_sign() {
        // res(q, y - a) = (-1)^{deg q} q(a) for monic linear second argument
        let q = p(&[1, 1, 1]);
        let lin = p(&[-2, 1]);
        assert_eq!(resultant(&q, &lin), q.eval(&Rat::from_integer(2.into())));
        let q3 = p(&[1, 0, 0, 1]);
        assert_eq!(resultant(&q3, &lin), -q3.eval(&Rat::from_integer(2.into())));
    }

    #[test]
    fn squarefree_examples() {
        // (y-1)^2 (y+2)
        let f = &p(&[-1, 1]).pow(2) * &p(&[2, 1]);
        assert_eq!(squarefree_factorization(&f), vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        // y^2 (y^6+4)^2 -> (y^7 + 4y, 2)
        let f = &p(&[0, 0, 1]) * &p(&[4, 0, 0, 0, 0, 0, 1]).pow(2);
        assert_eq!(squarefree_factorization(&f), vec![(p(&[0, 4, 0, 0, 0, 0, 0, 1]), 2)]);
        let f = p(&[0, -1, 0, 1]);
        assert_eq!(squarefree_factorization(&f), vec![(f.clone(), 1)]);
    }

    #[test]
    fn power_sums_of_y6_plus_4() {
        let q = p(&[4, 0, 0, 0, 0, 0, 1]);
        let ps = power_sums(&q, 12);
        assert_eq!(ps[2], Rat::zero());
        assert_eq!(ps[6], Rat::from_integer((-24).into()));
        assert_eq!(ps[12], Rat::from_integer(96.into()));
        assert_eq!(trace(&p(&[0, 0, 1]), &q), Rat::zero());
    }
}
