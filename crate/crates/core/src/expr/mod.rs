//! Symbolic expressions in `x`, `y`, `z`: parsing, canonical form,
//! differentiation and the bridge to exact rational functions.
//!
//! Every constructor here returns canonical trees, so structural equality
//! is the equality used throughout the crate.

mod canon;
mod eval;
mod parse;

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{QPoly, RatFun};
use crate::Rat;

pub use eval::{eval_interval, eval_rat, eval_real, Bindings, EvalError};
pub use parse::{parse, ParseError, ParseErrorKind, MAX_EXPONENT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }
}

/// Expression tree. Subtraction and division are encoded as a `-1`
/// coefficient and a negative power, so only sums, products and integer
/// powers appear.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(Rat),
    Var(Var),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("expression contains {0}, which is not rational")]
    NotRational(&'static str),
    #[error("expression depends on {found}, expected only {expected}")]
    WrongVariable { expected: Var, found: Var },
    #[error("division by zero")]
    DivisionByZero,
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::Num(Rat::from_integer(v.into()))
    }

    pub fn rat(r: Rat) -> Expr {
        Expr::Num(r)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(r) if r.is_zero())
    }

    pub fn as_num(&self) -> Option<&Rat> {
        match self {
            Expr::Num(r) => Some(r),
            _ => None,
        }
    }

    /// Canonical sum.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        canon::add(terms)
    }

    /// Canonical product.
    pub fn product(factors: Vec<Expr>) -> Expr {
        canon::mul(factors)
    }

    pub fn powi(self, k: i64) -> Expr {
        canon::pow(self, k)
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        canon::func(f, arg)
    }

    pub fn neg(self) -> Expr {
        canon::mul(vec![Expr::int(-1), self])
    }

    pub fn minus(self, o: Expr) -> Expr {
        canon::add(vec![self, o.neg()])
    }

    pub fn div(self, o: Expr) -> Expr {
        canon::mul(vec![self, canon::pow(o, -1)])
    }

    pub fn scale(self, c: &Rat) -> Expr {
        canon::mul(vec![Expr::Num(c.clone()), self])
    }

    /// Canonical form of an arbitrary tree. Idempotent.
    pub fn canonicalize(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Var(_) => self.clone(),
            Expr::Add(ts) => canon::add(ts.iter().map(Expr::canonicalize).collect()),
            Expr::Mul(fs) => canon::mul(fs.iter().map(Expr::canonicalize).collect()),
            Expr::Pow(b, k) => canon::pow(b.canonicalize(), *k),
            Expr::Func(f, a) => canon::func(*f, a.canonicalize()),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().any(|e| e.contains_var(v)),
            Expr::Pow(b, _) | Expr::Func(_, b) => b.contains_var(v),
        }
    }

    pub fn has_func(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().any(Expr::has_func),
            Expr::Pow(b, _) => b.has_func(),
            Expr::Func(..) => true,
        }
    }

    /// Canonical partial derivative.
    pub fn differentiate(&self, v: Var) -> Expr {
        match self {
            Expr::Num(_) => Expr::zero(),
            Expr::Var(w) => {
                if *w == v {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Add(ts) => canon::add(ts.iter().map(|t| t.differentiate(v)).collect()),
            Expr::Mul(fs) => {
                let terms = (0..fs.len())
                    .filter(|&i| fs[i].contains_var(v))
                    .map(|i| {
                        let mut g = fs.clone();
                        g[i] = fs[i].differentiate(v);
                        canon::mul(g)
                    })
                    .collect();
                canon::add(terms)
            }
            Expr::Pow(b, k) => canon::mul(vec![
                Expr::int(*k),
                canon::pow((**b).clone(), k - 1),
                b.differentiate(v),
            ]),
            Expr::Func(f, a) => {
                let da = a.differentiate(v);
                let outer = match f {
                    Func::Sin => canon::func(Func::Cos, (**a).clone()),
                    Func::Cos => canon::func(Func::Sin, (**a).clone()).neg(),
                    Func::Exp => self.clone(),
                };
                canon::mul(vec![outer, da])
            }
        }
    }

    /// Substitutes `v := by` and re-canonicalizes.
    pub fn subst(&self, v: Var, by: &Expr) -> Expr {
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Var(w) => {
                if *w == v {
                    by.clone()
                } else {
                    self.clone()
                }
            }
            Expr::Add(ts) => canon::add(ts.iter().map(|t| t.subst(v, by)).collect()),
            Expr::Mul(fs) => canon::mul(fs.iter().map(|t| t.subst(v, by)).collect()),
            Expr::Pow(b, k) => canon::pow(b.subst(v, by), *k),
            Expr::Func(f, a) => canon::func(*f, a.subst(v, by)),
        }
    }

    /// Exact conversion to a reduced rational function of `v`.
    pub fn to_ratfun(&self, v: Var) -> Result<RatFun, RatFunError> {
        match self {
            Expr::Num(r) => Ok(RatFun::constant(r.clone())),
            Expr::Var(w) => {
                if *w == v {
                    Ok(RatFun::from_poly(QPoly::x()))
                } else {
                    Err(RatFunError::WrongVariable {
                        expected: v,
                        found: *w,
                    })
                }
            }
            Expr::Add(ts) => {
                // accumulate polynomial terms separately to keep gcds small
                let mut acc = RatFun::zero();
                for t in ts {
                    acc = &acc + &t.to_ratfun(v)?;
                }
                Ok(acc)
            }
            Expr::Mul(fs) => {
                let mut acc = RatFun::one();
                for t in fs {
                    acc = &acc * &t.to_ratfun(v)?;
                }
                Ok(acc)
            }
            Expr::Pow(b, k) => b
                .to_ratfun(v)?
                .pow(*k)
                .ok_or(RatFunError::DivisionByZero),
            Expr::Func(f, _) => Err(RatFunError::NotRational(f.name())),
        }
    }

    /// Expression for a rational function in `v`.
    pub fn from_ratfun(r: &RatFun, v: Var) -> Expr {
        let poly = |p: &QPoly| {
            canon::add(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| {
                        canon::mul(vec![Expr::Num(c.clone()), canon::pow(Expr::Var(v), k as i64)])
                    })
                    .collect(),
            )
        };
        poly(r.num()).div(poly(r.den()))
    }
}

fn needs_parens_as_base(e: &Expr) -> bool {
    match e {
        Expr::Num(r) => r.is_negative() || !r.is_integer(),
        Expr::Var(_) | Expr::Func(..) => false,
        _ => true,
    }
}

fn fmt_base(e: &Expr, out: &mut String) {
    if needs_parens_as_base(e) {
        out.push('(');
        fmt_expr(e, out);
        out.push(')');
    } else {
        fmt_expr(e, out);
    }
}

/// One factor of a product, with `|k|` already applied by the caller.
fn fmt_power(base: &Expr, k: i64, out: &mut String) {
    fmt_base(base, out);
    if k != 1 {
        out.push('^');
        out.push_str(&k.to_string());
    }
}

fn fmt_factor(e: &Expr, out: &mut String) {
    match e {
        Expr::Add(_) => {
            out.push('(');
            fmt_expr(e, out);
            out.push(')');
        }
        Expr::Pow(b, k) => fmt_power(b, *k, out),
        _ => fmt_expr(e, out),
    }
}

/// Product printed as `coef*num1*num2/den1/den2^k`.
fn fmt_mul(fs: &[Expr], out: &mut String) {
    let (coef, rest) = match fs.first() {
        Some(Expr::Num(c)) => (c.clone(), &fs[1..]),
        _ => (Rat::one(), fs),
    };
    let is_den = |f: &Expr| matches!(f, Expr::Pow(b, k) if *k < 0 && !b.is_zero());
    let num: Vec<&Expr> = rest.iter().filter(|f| !is_den(f)).collect();
    let den: Vec<&Expr> = rest.iter().filter(|f| is_den(f)).collect();
    let mut parts: Vec<String> = Vec::new();
    let c_abs = coef.abs();
    if coef.is_negative() {
        out.push('-');
    }
    if !c_abs.is_one() || num.is_empty() {
        parts.push(c_abs.to_string());
    }
    for f in &num {
        let mut s = String::new();
        fmt_factor(f, &mut s);
        parts.push(s);
    }
    out.push_str(&parts.join("*"));
    for f in den {
        if let Expr::Pow(b, k) = f {
            out.push('/');
            fmt_power(b, -k, out);
        }
    }
}

fn fmt_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Num(r) => out.push_str(&r.to_string()),
        Expr::Var(v) => out.push_str(v.name()),
        Expr::Add(ts) => {
            for (i, t) in ts.iter().enumerate() {
                let mut s = String::new();
                match t {
                    Expr::Mul(fs) => fmt_mul(fs, &mut s),
                    _ => fmt_expr(t, &mut s),
                }
                if i == 0 {
                    out.push_str(&s);
                } else if let Some(stripped) = s.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(stripped);
                } else {
                    out.push_str(" + ");
                    out.push_str(&s);
                }
            }
        }
        Expr::Mul(fs) => fmt_mul(fs, out),
        Expr::Pow(b, k) => {
            if *k < 0 && !b.is_zero() {
                out.push_str("1/");
                fmt_power(b, -k, out);
            } else {
                fmt_power(b, *k, out);
            }
        }
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            fmt_expr(a, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        fmt_expr(self, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("1/(x^2-y^2)").differentiate(Var::X), p("-2*x*(x^2-y^2)^-2"));
        assert_eq!(p("y").differentiate(Var::Y), Expr::one());
        assert_eq!(p("cos(2*x)").differentiate(Var::X), p("-2*sin(2*x)"));
    }

    #[test]
    fn to_ratfun_examples() {
        let r = p("1/(y^6+4)").to_ratfun(Var::Y).unwrap();
        assert_eq!(r.num(), &QPoly::from_i64s(&[1]));
        assert_eq!(r.den(), &QPoly::from_i64s(&[4, 0, 0, 0, 0, 0, 1]));
        assert_eq!(
            p("cos(y)").to_ratfun(Var::Y),
            Err(RatFunError::NotRational("cos"))
        );
        assert!(matches!(
            p("x+y").to_ratfun(Var::Y),
            Err(RatFunError::WrongVariable { .. })
        ));
        assert_eq!(p("1/(y-y)").to_ratfun(Var::Y), Err(RatFunError::DivisionByZero));
    }

    #[test]
    fn fy_on_symmetry_line() {
        let f = p("1/(x^2-y^2)");
        let fy0 = f.differentiate(Var::Y).subst(Var::X, &Expr::zero());
        let r = fy0.to_ratfun(Var::Y).unwrap();
        for y in [2i64, 3, 5] {
            let yv = Rat::from_integer(y.into());
            let want = Rat::new(2.into(), (y * y * y).into());
            assert_eq!(r.eval(&yv), Some(want));
        }
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "1/(x^2-y^2)",
            "cos(2*x)*exp(-2*y^2)",
            "-18*(2+3*y^6)/(y^2*(y^6+4)^2)",
            "x^2+y^2",
            "3/4*x - 1/2",
            "-x^2",
            "exp(-(x+1)^3)/sin(y)^2",
            "0^-1",
        ] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} printed as {e}");
        }
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(p("-y^2"), p("-(y^2)"));
        assert_eq!(p("2/3^2"), Expr::rat(Rat::new(2.into(), 9.into())));
    }

    #[test]
    fn from_ratfun_round_trips() {
        let e = p("-18*(2+3*y^6)/(y^2*(y^6+4)^2)");
        let r = e.to_ratfun(Var::Y).unwrap();
        assert_eq!(Expr::from_ratfun(&r, Var::Y).to_ratfun(Var::Y).unwrap(), r);
    }
}
