//! Quotient rings `Q[t]/(m)` with a tracked complex embedding, and their
//! elements under dynamic evaluation: `m` is only square-free, and a zero
//! divisor met during inversion splits the ring into two branches.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use thiserror::Error;

use super::isolate::{horner, isolate_roots, refine_root, tightness, IPoly};
use crate::exact::{inverse_mod, is_squarefree, poly_gcd, QPoly};
use crate::interval::CBox;
use crate::scalar::Coeff;
use crate::Rat;

/// Context of one (possibly reducible) number ring.
#[derive(Debug)]
pub struct FieldCtx {
    modulus: QPoly,
    roots: Vec<CBox>,
    tracked: usize,
    /// tightest known box around the tracked root
    fine: Mutex<CBox>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus must be square-free of degree at least 1")]
    BadModulus,
    #[error("no root of the modulus inside the hint box")]
    NoRootInHint,
}

/// A D5 split `m = tracked.modulus * other.modulus`. The `tracked` branch
/// keeps the embedding of the parent; `other` tracks one of its own roots.
#[derive(Debug, Clone)]
pub struct Split {
    pub tracked: Arc<FieldCtx>,
    pub other: Arc<FieldCtx>,
}

#[derive(Debug, Clone, Error)]
pub enum InvError {
    #[error("division by zero")]
    Zero,
    #[error("zero divisor splits the modulus")]
    Split(Split),
}

impl FieldCtx {
    fn build(modulus: QPoly, roots: Vec<CBox>, tracked: usize) -> Self {
        let fine = Mutex::new(roots[tracked].clone());
        FieldCtx {
            modulus,
            roots,
            tracked,
            fine,
        }
    }

    /// Context for a square-free `m`, tracking its `tracked`-th isolated root
    /// (roots ordered by real then imaginary part of their box centers).
    pub fn new(m: &QPoly, tracked: usize) -> Result<Arc<Self>, FieldError> {
        if m.deg0() == 0 || !is_squarefree(m) {
            return Err(FieldError::BadModulus);
        }
        let modulus = m.monic();
        let roots = isolate_roots(&modulus);
        if tracked >= roots.len() {
            return Err(FieldError::NoRootInHint);
        }
        Ok(Arc::new(FieldCtx::build(modulus, roots, tracked)))
    }

    /// Context tracking the unique root of `m` inside `hint`; `hint` must be
    /// certified to contain exactly one root of `m`.
    pub fn near(m: &QPoly, hint: &CBox) -> Result<Arc<Self>, FieldError> {
        if m.deg0() == 0 || !is_squarefree(m) {
            return Err(FieldError::BadModulus);
        }
        let modulus = m.monic();
        let mut roots = isolate_roots(&modulus);
        let mut bits = tightness(hint).max(0) + 8;
        loop {
            let straddling: Vec<usize> = (0..roots.len())
                .filter(|&i| roots[i].intersects(hint) && !hint.contains(&roots[i]))
                .collect();
            if straddling.is_empty() {
                let inside: Vec<usize> = (0..roots.len()).filter(|&i| hint.contains(&roots[i])).collect();
                if inside.len() != 1 {
                    return Err(FieldError::NoRootInHint);
                }
                return Ok(Arc::new(FieldCtx::build(modulus, roots, inside[0])));
            }
            if bits > 1 << 14 {
                return Err(FieldError::NoRootInHint);
            }
            for i in straddling {
                roots[i] = refine_root(&modulus, &roots[i], bits);
            }
            bits += 16;
        }
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg0()
    }

    /// Isolating boxes of every root of the modulus.
    pub fn roots(&self) -> &[CBox] {
        &self.roots
    }

    pub fn tracked_index(&self) -> usize {
        self.tracked
    }

    pub fn tracked_box(&self) -> &CBox {
        &self.roots[self.tracked]
    }

    /// Box around the tracked root of width below `2^-bits`.
    pub fn generator_box(&self, bits: i64) -> CBox {
        let mut fine = self.fine.lock().unwrap_or_else(|e| e.into_inner());
        if tightness(&fine) < bits {
            *fine = refine_root(&self.modulus, &fine, bits);
        }
        fine.clone()
    }

    pub fn generator(self: &Arc<Self>) -> AlgNum {
        self.element(QPoly::x())
    }

    pub fn element(self: &Arc<Self>, rep: QPoly) -> AlgNum {
        AlgNum {
            rep: rep.rem(&self.modulus),
            ctx: Some(self.clone()),
        }
    }

    pub fn constant(self: &Arc<Self>, c: Rat) -> AlgNum {
        self.element(QPoly::constant(c))
    }

    /// Splits off the monic factor `g` (a proper divisor of the modulus).
    pub fn split(&self, g: &QPoly) -> Split {
        let g = g.monic();
        let h = self.modulus.exact_div(&g);
        let mut gi = Vec::new();
        let mut hi = Vec::new();
        let mut tracked_in_g = false;
        for (i, b) in self.roots.iter().enumerate() {
            let in_g = root_belongs_to(&g, &h, &self.modulus, b);
            if i == self.tracked {
                tracked_in_g = in_g;
            }
            if in_g {
                gi.push(i);
            } else {
                hi.push(i);
            }
        }
        let build = |m: &QPoly, idx: &[usize], tracked: usize| {
            let roots: Vec<CBox> = idx.iter().map(|&i| self.roots[i].clone()).collect();
            let t = idx.iter().position(|&i| i == tracked).unwrap_or(0);
            Arc::new(FieldCtx::build(m.clone(), roots, t))
        };
        let cg = build(&g, &gi, self.tracked);
        let ch = build(&h, &hi, self.tracked);
        if tracked_in_g {
            Split {
                tracked: cg,
                other: ch,
            }
        } else {
            Split {
                tracked: ch,
                other: cg,
            }
        }
    }
}

/// Decides whether the root of `m = g h` isolated by `b` is a root of `g`.
fn root_belongs_to(g: &QPoly, h: &QPoly, m: &QPoly, b: &CBox) -> bool {
    let mut bits = tightness(b).max(32);
    loop {
        let r = refine_root(m, b, bits);
        let prec = (2 * bits + 64) as u32;
        let eg = horner(&lift(g, prec), &r, prec);
        if eg.excludes_zero() {
            return false;
        }
        let eh = horner(&lift(h, prec), &r, prec);
        if eh.excludes_zero() {
            return true;
        }
        bits *= 2;
    }
}

fn lift(p: &QPoly, prec: u32) -> Vec<CBox> {
    p.coeffs().iter().map(|c| CBox::from_rat(c, prec)).collect()
}

/// Element of `Q[t]/(m)`. Elements without a context are rational constants
/// and combine with any context.
#[derive(Clone)]
pub struct AlgNum {
    ctx: Option<Arc<FieldCtx>>,
    rep: QPoly,
}

impl AlgNum {
    pub fn rational(c: Rat) -> Self {
        AlgNum {
            ctx: None,
            rep: QPoly::constant(c),
        }
    }

    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn ctx(&self) -> Option<&Arc<FieldCtx>> {
        self.ctx.as_ref()
    }

    /// Rational value when the representative is constant.
    pub fn as_rational(&self) -> Option<Rat> {
        (self.rep.deg0() == 0).then(|| self.rep.coeff(0))
    }

    fn join(&self, o: &AlgNum) -> Option<Arc<FieldCtx>> {
        match (&self.ctx, &o.ctx) {
            (Some(a), Some(b)) => {
                debug_assert!(
                    Arc::ptr_eq(a, b) || a.modulus == b.modulus,
                    "mixed number-field contexts"
                );
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn reduce(ctx: Option<Arc<FieldCtx>>, rep: QPoly) -> Self {
        let rep = match &ctx {
            Some(c) if rep.deg0() >= c.degree() => rep.rem(&c.modulus),
            _ => rep,
        };
        AlgNum { ctx, rep }
    }

    /// Moves the element into a branch context (reduction modulo its modulus).
    pub fn in_ctx(&self, ctx: &Arc<FieldCtx>) -> Self {
        AlgNum::reduce(Some(ctx.clone()), self.rep.clone())
    }

    /// Inverse, or the split caused by a zero divisor.
    pub fn inv(&self) -> Result<AlgNum, InvError> {
        if self.rep.is_zero() {
            return Err(InvError::Zero);
        }
        let Some(ctx) = &self.ctx else {
            return Ok(AlgNum::rational(self.rep.coeff(0).recip()));
        };
        if self.rep.deg0() == 0 {
            return Ok(AlgNum {
                ctx: self.ctx.clone(),
                rep: QPoly::constant(self.rep.coeff(0).recip()),
            });
        }
        match inverse_mod(&self.rep, &ctx.modulus) {
            Ok(r) => Ok(AlgNum {
                ctx: self.ctx.clone(),
                rep: r,
            }),
            Err(g) => {
                debug_assert_eq!(g, poly_gcd(&self.rep, &ctx.modulus));
                Err(InvError::Split(ctx.split(&g)))
            }
        }
    }

    /// Enclosure of the tracked embedding, computed from a generator box of
    /// width below `2^-bits`.
    pub fn enclose(&self, bits: i64) -> CBox {
        let prec = (2 * bits.max(32) + 64) as u32;
        match &self.ctx {
            None => CBox::from_rat(&self.rep.coeff(0), prec),
            Some(c) => {
                let g = c.generator_box(bits);
                horner(&lift(&self.rep, prec), &g, prec)
            }
        }
    }

    /// Enclosure of the tracked embedding with width below `eps`.
    pub fn refine_box(&self, eps: &Rat) -> CBox {
        let mut bits = 32i64;
        loop {
            let b = self.enclose(bits);
            if b.width().to_rat() < *eps {
                return b;
            }
            bits *= 2;
        }
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &Self) -> bool {
        self.rep == o.rep
    }
}

impl Eq for AlgNum {}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgNum({})", self.rep.fmt_var("t"))
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rep.fmt_var("t"))
    }
}

impl Add for AlgNum {
    type Output = AlgNum;
    fn add(self, o: AlgNum) -> AlgNum {
        AlgNum {
            ctx: self.join(&o),
            rep: &self.rep + &o.rep,
        }
    }
}

impl Sub for AlgNum {
    type Output = AlgNum;
    fn sub(self, o: AlgNum) -> AlgNum {
        AlgNum {
            ctx: self.join(&o),
            rep: &self.rep - &o.rep,
        }
    }
}

impl Mul for AlgNum {
    type Output = AlgNum;
    fn mul(self, o: AlgNum) -> AlgNum {
        let ctx = self.join(&o);
        AlgNum::reduce(ctx, &self.rep * &o.rep)
    }
}

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum {
            ctx: self.ctx,
            rep: -&self.rep,
        }
    }
}

impl Zero for AlgNum {
    fn zero() -> Self {
        AlgNum::rational(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl One for AlgNum {
    fn one() -> Self {
        AlgNum::rational(Rat::one())
    }
}

impl Coeff for AlgNum {
    fn from_i64(v: i64) -> Self {
        AlgNum::rational(Rat::from_integer(v.into()))
    }
}

/// Interval certificate that `p` has exactly one root in `b`.
pub(crate) fn certify_unique_root(p: &QPoly, b: &CBox, prec: u32) -> bool {
    super::isolate::certifies(&IPoly::new(p, prec), b)
}
