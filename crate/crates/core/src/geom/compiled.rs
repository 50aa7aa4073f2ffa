//! Expression trees with constants converted once, for hot evaluation loops.

use crate::expr::{Expr, Func};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub enum Compiled<T> {
    Const(T),
    Var(usize),
    Add(Vec<Compiled<T>>),
    Mul(Vec<Compiled<T>>),
    Powi(Box<Compiled<T>>, i32),
    Func(Func, Box<Compiled<T>>),
}

impl<T: Real> Compiled<T> {
    pub fn new(e: &Expr) -> Self {
        match e {
            Expr::Num(r) => Compiled::Const(T::from_rat(r)),
            Expr::Var(v) => Compiled::Var(*v as usize),
            Expr::Add(ts) => Compiled::Add(ts.iter().map(Self::new).collect()),
            Expr::Mul(fs) => Compiled::Mul(fs.iter().map(Self::new).collect()),
            Expr::Pow(b, k) => Compiled::Powi(
                Box::new(Self::new(b)),
                i32::try_from(*k).expect("exponents are bounded by the grammar"),
            ),
            Expr::Func(f, a) => Compiled::Func(*f, Box::new(Self::new(a))),
        }
    }

    pub fn eval(&self, p: &[T; 3]) -> T {
        match self {
            Compiled::Const(c) => *c,
            Compiled::Var(i) => p[*i],
            Compiled::Add(ts) => ts.iter().fold(T::zero(), |acc, t| acc + t.eval(p)),
            Compiled::Mul(fs) => fs.iter().fold(T::one(), |acc, f| acc * f.eval(p)),
            Compiled::Powi(b, k) => b.eval(p).powi(*k),
            Compiled::Func(f, a) => {
                let v = a.eval(p);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                }
            }
        }
    }
}
