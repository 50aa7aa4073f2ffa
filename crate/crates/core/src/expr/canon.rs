//! Canonical-form constructors. Inputs must already be canonical.
//!
//! Sums: flattened, like terms merged by their non-numeric part, constant
//! first, then terms ordered by that non-numeric part. Products: flattened,
//! numeric coefficient first, powers of equal bases merged, bases ordered.
//! A rational coefficient times a single sum is distributed.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{Expr, Func};
use crate::Rat;

/// Largest folded numeric power, in bits of the result.
const MAX_FOLD_BITS: u64 = 1 << 20;

/// Splits a canonical term into its coefficient and non-numeric part.
fn split_coeff(t: Expr) -> (Rat, Option<Expr>) {
    match t {
        Expr::Num(c) => (c, None),
        Expr::Mul(mut fs) => {
            if let Some(Expr::Num(_)) = fs.first() {
                let c = match fs.remove(0) {
                    Expr::Num(c) => c,
                    _ => unreachable!(),
                };
                let rest = if fs.len() == 1 {
                    fs.pop().unwrap()
                } else {
                    Expr::Mul(fs)
                };
                (c, Some(rest))
            } else {
                (Rat::one(), Some(Expr::Mul(fs)))
            }
        }
        other => (Rat::one(), Some(other)),
    }
}

fn join_coeff(c: Rat, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    match rest {
        Expr::Mul(mut fs) => {
            fs.insert(0, Expr::Num(c));
            Expr::Mul(fs)
        }
        other => Expr::Mul(vec![Expr::Num(c), other]),
    }
}

pub(super) fn add(terms: Vec<Expr>) -> Expr {
    let mut constant = Rat::zero();
    let mut like: BTreeMap<Expr, Rat> = BTreeMap::new();
    let mut stack = terms;
    while let Some(t) = stack.pop() {
        match t {
            Expr::Add(inner) => stack.extend(inner),
            t => match split_coeff(t) {
                (c, None) => constant += c,
                (c, Some(rest)) => *like.entry(rest).or_insert_with(Rat::zero) += c,
            },
        }
    }
    let mut out = Vec::with_capacity(like.len() + 1);
    if !constant.is_zero() {
        out.push(Expr::Num(constant));
    }
    for (rest, c) in like {
        if !c.is_zero() {
            out.push(join_coeff(c, rest));
        }
    }
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    }
}

fn num_pow(r: &Rat, k: i64) -> Option<Rat> {
    if r.is_zero() {
        return if k > 0 { Some(Rat::zero()) } else { None };
    }
    let bits = r.numer().bits().max(r.denom().bits());
    if bits.saturating_mul(k.unsigned_abs()) > MAX_FOLD_BITS {
        return None;
    }
    let b = if k < 0 { r.recip() } else { r.clone() };
    Some(num_traits::pow(b, k.unsigned_abs() as usize))
}

pub(super) fn mul(factors: Vec<Expr>) -> Expr {
    let mut coef = Rat::one();
    let mut powers: BTreeMap<Expr, i64> = BTreeMap::new();
    let mut stack = factors;
    let mut unmerged: Vec<Expr> = Vec::new();
    while let Some(f) = stack.pop() {
        match f {
            Expr::Num(c) => coef *= c,
            Expr::Mul(inner) => stack.extend(inner),
            Expr::Pow(b, k) => {
                let cur = powers.get(&*b).copied().unwrap_or(0);
                match cur.checked_add(k) {
                    Some(s) => {
                        powers.insert(*b, s);
                    }
                    None => unmerged.push(Expr::Pow(b, k)),
                }
            }
            other => *powers.entry(other).or_insert(0) += 1,
        }
    }
    // a zero coefficient annihilates everything, including unevaluated 0^-k
    if coef.is_zero() {
        return Expr::zero();
    }
    let mut out: Vec<Expr> = Vec::new();
    let mut refold = Rat::one();
    for (b, k) in powers {
        if k == 0 {
            continue;
        }
        match pow(b, k) {
            Expr::Num(c) => refold *= c,
            Expr::Mul(fs) => {
                // (ab)^k never survives pow(), but a folded number may lead
                for f in fs {
                    match f {
                        Expr::Num(c) => refold *= c,
                        f => out.push(f),
                    }
                }
            }
            f => out.push(f),
        }
    }
    out.extend(unmerged);
    coef *= refold;
    if coef.is_zero() {
        return Expr::zero();
    }
    out.sort();
    if out.is_empty() {
        return Expr::Num(coef);
    }
    if out.len() == 1 {
        if let Expr::Add(ts) = &out[0] {
            if !coef.is_one() {
                let c = Expr::Num(coef);
                return add(ts.iter().map(|t| mul(vec![c.clone(), t.clone()])).collect());
            }
        }
        if coef.is_one() {
            return out.pop().unwrap();
        }
    }
    if !coef.is_one() {
        out.insert(0, Expr::Num(coef));
    }
    Expr::Mul(out)
}

pub(super) fn pow(b: Expr, k: i64) -> Expr {
    if k == 0 {
        return Expr::one();
    }
    if k == 1 {
        return b;
    }
    match b {
        Expr::Num(ref r) => match num_pow(r, k) {
            Some(v) => Expr::Num(v),
            None => Expr::Pow(Box::new(b), k),
        },
        Expr::Pow(inner, j) => match j.checked_mul(k) {
            Some(jk) => pow(*inner, jk),
            None => Expr::Pow(Box::new(Expr::Pow(inner, j)), k),
        },
        Expr::Mul(fs) => mul(fs.into_iter().map(|f| pow(f, k)).collect()),
        other => Expr::Pow(Box::new(other), k),
    }
}

pub(super) fn func(f: Func, a: Expr) -> Expr {
    if a.is_zero() {
        return match f {
            Func::Sin => Expr::zero(),
            Func::Cos | Func::Exp => Expr::one(),
        };
    }
    // odd/even symmetry keeps sin(-u) and sin(u) from being distinct terms
    if let (Func::Sin | Func::Cos, Expr::Mul(fs)) = (f, &a) {
        if let Some(Expr::Num(c)) = fs.first() {
            if c.is_negative() {
                let pos = mul(vec![Expr::int(-1), a.clone()]);
                let inner = Expr::Func(f, Box::new(pos));
                return if f == Func::Sin {
                    mul(vec![Expr::int(-1), inner])
                } else {
                    inner
                };
            }
        }
    }
    Expr::Func(f, Box::new(a))
}
