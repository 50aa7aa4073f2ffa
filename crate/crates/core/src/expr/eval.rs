use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Expr, Func, Var};
use crate::interval::{cos_cbox, exp_cbox, sin_cbox, CBox};
use crate::scalar::Real;
use crate::Rat;

pub type Bindings = BTreeMap<Var, CBox>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("denominator enclosure contains zero")]
    DivisionByZeroPossible,
    #[error("variable {0} is not bound")]
    Unbound(Var),
}

fn cbox_powi(b: &CBox, k: i64) -> Result<CBox, EvalError> {
    let base = if k < 0 {
        b.inv().ok_or(EvalError::DivisionByZeroPossible)?
    } else {
        b.clone()
    };
    let mut e = k.unsigned_abs();
    let mut acc = CBox::one();
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * sq.clone();
        }
        e >>= 1;
        if e > 0 {
            sq = sq.clone() * sq;
        }
    }
    Ok(acc)
}

/// Rigorous complex-interval enclosure at `prec` bits.
pub fn eval_interval(e: &Expr, bind: &Bindings, prec: u32) -> Result<CBox, EvalError> {
    Ok(match e {
        Expr::Num(r) => CBox::from_rat(r, prec),
        Expr::Var(v) => bind
            .get(v)
            .ok_or(EvalError::Unbound(*v))?
            .clone()
            .with_prec(prec),
        Expr::Add(ts) => {
            let mut acc = CBox::zero().with_prec(prec);
            for t in ts {
                acc = acc + eval_interval(t, bind, prec)?;
            }
            acc
        }
        Expr::Mul(fs) => {
            let mut acc = CBox::one().with_prec(prec);
            for f in fs {
                acc = acc * eval_interval(f, bind, prec)?;
            }
            acc
        }
        Expr::Pow(b, k) => cbox_powi(&eval_interval(b, bind, prec)?, *k)?,
        Expr::Func(f, a) => {
            let z = eval_interval(a, bind, prec)?;
            match f {
                Func::Sin => sin_cbox(&z, prec),
                Func::Cos => cos_cbox(&z, prec),
                Func::Exp => exp_cbox(&z, prec),
            }
        }
    })
}

/// Exact value at rational bindings; `None` at a pole, on a transcendental
/// node, or when a variable is unbound.
pub fn eval_rat(e: &Expr, bind: &BTreeMap<Var, Rat>) -> Option<Rat> {
    Some(match e {
        Expr::Num(r) => r.clone(),
        Expr::Var(v) => bind.get(v)?.clone(),
        Expr::Add(ts) => {
            let mut acc = Rat::zero();
            for t in ts {
                acc += eval_rat(t, bind)?;
            }
            acc
        }
        Expr::Mul(fs) => {
            let mut acc = Rat::one();
            for f in fs {
                acc *= eval_rat(f, bind)?;
            }
            acc
        }
        Expr::Pow(b, k) => {
            let v = eval_rat(b, bind)?;
            if v.is_zero() && *k < 0 {
                return None;
            }
            let base = if *k < 0 { v.recip() } else { v };
            num_traits::pow(base, k.unsigned_abs() as usize)
        }
        Expr::Func(..) => return None,
    })
}

/// Floating-point evaluation at `(x, y, z)`.
pub fn eval_real<T: Real>(e: &Expr, p: [T; 3]) -> T {
    match e {
        Expr::Num(r) => T::from_rat(r),
        Expr::Var(v) => p[*v as usize],
        Expr::Add(ts) => ts.iter().fold(T::zero(), |acc, t| acc + eval_real(t, p)),
        Expr::Mul(fs) => fs.iter().fold(T::one(), |acc, f| acc * eval_real(f, p)),
        Expr::Pow(b, k) => {
            let v = eval_real(b, p);
            match i32::try_from(*k) {
                Ok(k) => v.powi(k),
                Err(_) => v.powf(T::from_i64(*k).unwrap()),
            }
        }
        Expr::Func(f, a) => {
            let v = eval_real(a, p);
            match f {
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Exp => v.exp(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::interval::{Dyadic, RInt};

    fn point(v: i64) -> CBox {
        CBox::real(RInt::from_int(v))
    }

    #[test]
    fn square_is_exact() {
        let b: Bindings = [(Var::X, point(2))].into_iter().collect();
        let v = eval_interval(&parse("x^2").unwrap(), &b, 64).unwrap();
        assert_eq!(v.re.lo, Dyadic::from_int(4));
        assert_eq!(v.re.hi, Dyadic::from_int(4));
    }

    #[test]
    fn pole_is_reported() {
        let b: Bindings = [(Var::X, point(1)), (Var::Y, point(1))].into_iter().collect();
        let e = parse("1/(x^2-y^2)").unwrap();
        assert_eq!(eval_interval(&e, &b, 64), Err(EvalError::DivisionByZeroPossible));
    }

    #[test]
    fn exp_one_against_series() {
        let v = eval_interval(&parse("exp(1)").unwrap(), &Bindings::new(), 64).unwrap();
        // independent oracle: partial sums of 1/k! in exact rationals
        let mut s = Rat::zero();
        let mut term = Rat::one();
        for k in 1..30i64 {
            s += &term;
            term /= Rat::from_integer(k.into());
        }
        // e lies in [s, s + 2*term]; the enclosure must meet that range
        assert!(v.re.lo.to_rat() <= &s + &term * Rat::from_integer(2.into()));
        assert!(s <= v.re.hi.to_rat());
        assert!(v.re.width().to_f64() < 1e-15);
        assert!((v.re.to_f64() - 2.7182818284).abs() < 1e-10);
    }
}
