//! Elements `p + c·√m` of a quadratic extension of Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// `rational + coeff·√radicand` with a square-free integer radicand other
/// than 1 (negative for complex radicals). Rational values use radicand 1
/// and coefficient 0, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub rational: Rat,
    pub coeff: Rat,
    pub radicand: BigInt,
}

/// Splits `n ≠ 0` as `s²·m` with `m` square-free. Trial division runs up
/// to the cube root; what is left has at most two prime factors, so it is
/// either a square or square-free.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square-free split of zero");
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p * &p <= rest {
        let mut k = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            k += 1;
        }
        if k > 0 {
            s *= p.pow(k / 2);
            if k % 2 == 1 {
                m *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        m *= rest;
    }
    (s, sign * m)
}

impl QuadExt {
    pub fn rational(r: Rat) -> Self {
        QuadExt {
            rational: r,
            coeff: Rat::zero(),
            radicand: BigInt::one(),
        }
    }

    /// `√q` for a rational `q`.
    pub fn sqrt(q: &Rat) -> Self {
        if q.is_zero() {
            return Self::rational(Rat::zero());
        }
        // √(a/b) = √(ab)/b
        let ab = q.numer() * q.denom();
        let (s, m) = square_free_split(&ab);
        let c = Rat::new(s, q.denom().clone());
        if m.is_one() {
            Self::rational(c)
        } else {
            QuadExt {
                rational: Rat::zero(),
                coeff: c,
                radicand: m,
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::normalized(&self.rational * k, &self.coeff * k, self.radicand.clone())
    }

    fn normalized(rational: Rat, coeff: Rat, radicand: BigInt) -> Self {
        if coeff.is_zero() {
            Self::rational(rational)
        } else {
            QuadExt {
                rational,
                coeff,
                radicand,
            }
        }
    }

    fn common_radicand(&self, o: &Self) -> BigInt {
        match (self.is_rational(), o.is_rational()) {
            (true, _) => o.radicand.clone(),
            (_, true) => self.radicand.clone(),
            _ => {
                assert_eq!(self.radicand, o.radicand, "mixed quadratic extensions");
                self.radicand.clone()
            }
        }
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, o: &QuadExt) -> QuadExt {
        let m = self.common_radicand(o);
        QuadExt::normalized(&self.rational + &o.rational, &self.coeff + &o.coeff, m)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        self.scale(&-Rat::one())
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, o: &QuadExt) -> QuadExt {
        self + &(-o)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, o: &QuadExt) -> QuadExt {
        let m = self.common_radicand(o);
        let mr = Rat::from_integer(m.clone());
        QuadExt::normalized(
            &self.rational * &o.rational + &self.coeff * &o.coeff * mr,
            &self.rational * &o.coeff + &self.coeff * &o.rational,
            m,
        )
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational);
        }
        let rad = if self.radicand.is_negative() {
            format!("i*sqrt({})", -&self.radicand)
        } else {
            format!("sqrt({})", self.radicand)
        };
        let c = self.coeff.abs();
        let term = if c.is_one() { rad } else { format!("{c}*{rad}") };
        let sign = if self.coeff.is_negative() { "-" } else { "+" };
        if self.rational.is_zero() {
            let lead = if self.coeff.is_negative() { "-" } else { "" };
            write!(f, "{lead}{term}")
        } else {
            write!(f, "{} {sign} {term}", self.rational)
        }
    }
}

/// Indicial exponents `½(1 ± √(1+4β))`, the `+` root first.
pub fn tau_pair(beta: &Rat) -> [QuadExt; 2] {
    let half = Rat::new(1.into(), 2.into());
    let s = QuadExt::sqrt(&(Rat::one() + Rat::from_integer(4.into()) * beta)).scale(&half);
    let h = QuadExt::rational(half);
    [&h + &s, &h - &s]
}

/// `(1 ± sqrt(D))/2` with `D = 1+4β`, or the two rationals when `D` is a square.
pub fn tau_string(beta: &Rat) -> String {
    let d = Rat::one() + Rat::from_integer(4.into()) * beta;
    let [p, m] = tau_pair(beta);
    if p.is_rational() {
        return format!("{{{p}, {m}}}");
    }
    if d.is_negative() {
        format!("(1 ± i*sqrt({}))/2", -d)
    } else {
        format!("(1 ± sqrt({d}))/2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn square_free_parts() {
        for (n, s, m) in [(8, 2, 2), (-8, 2, -2), (72, 6, 2), (49, 7, 1), (30, 1, 30), (1, 1, 1)] {
            assert_eq!(square_free_split(&BigInt::from(n)), (BigInt::from(s), BigInt::from(m)));
        }
        // p^2 with p above the cube-root bound
        let big = BigInt::from(1_000_003i64) * BigInt::from(1_000_003i64) * 3;
        assert_eq!(square_free_split(&big), (BigInt::from(1_000_003i64), BigInt::from(3)));
    }

    #[test]
    fn sqrt_normalizes() {
        let q = QuadExt::sqrt(&r(-8, 1));
        assert_eq!((q.coeff.clone(), q.radicand.clone()), (r(2, 1), BigInt::from(-2)));
        assert_eq!(QuadExt::sqrt(&r(36, 16)), QuadExt::rational(r(3, 2)));
        let h = QuadExt::sqrt(&r(1, 2));
        assert_eq!((h.coeff.clone(), h.radicand.clone()), (r(1, 2), BigInt::from(2)));
        assert_eq!(&h * &h, QuadExt::rational(r(1, 2)));
    }

    #[test]
    fn exponents_of_the_table() {
        assert_eq!(tau_string(&r(-9, 4)), "(1 ± i*sqrt(8))/2");
        assert_eq!(tau_string(&r(5, 16)), "{5/4, -1/4}");
        let [p, m] = tau_pair(&r(-9, 4));
        assert_eq!(p.to_string(), "1/2 + i*sqrt(2)");
        assert_eq!(m.to_string(), "1/2 - i*sqrt(2)");
    }
}
