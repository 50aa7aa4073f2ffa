//! Splitting fields by incremental primitive elements.
//!
//! Each stage adjoins one more root: the generator `γ = Σ k_i a_i` is formed
//! numerically, a modulus `μ` with a root next to `γ` is found by integer
//! relation search (degrees restricted to multiples of the previous field
//! degree), and every root `a_i` of `p` is written as `X_i(t)` by a second
//! relation search. Nothing numeric is trusted: `μ` must be square-free
//! with a Krawczyk-certified root in a tiny box, and each `X_i` must satisfy
//! `p(X_i) ≡ 0 mod μ` exactly with `X_i(γ)` inside the isolating box of
//! `a_i`. Those two facts make `t ↦ γ` an embedding of `Q[t]/(μ)` sending
//! `X_i` to `a_i`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::field::{certify_unique_root, AlgNum, FieldCtx};
use super::isolate::{horner, isolate_roots, refine_root};
use super::lll::integer_relation;
use crate::exact::{is_squarefree, QPoly};
use crate::interval::{CBox, RInt};
use crate::Rat;

/// Default bound on the splitting-field degree handled exactly.
pub const DEFAULT_DEGREE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplittingError {
    #[error("polynomial must be square-free of degree at least 1")]
    BadInput,
    #[error("splitting field degree exceeds the cap {cap}")]
    DegreeCapExceeded { cap: usize },
}

struct Stage {
    ctx: Arc<FieldCtx>,
    exprs: Vec<Option<QPoly>>,
}

fn lift(p: &QPoly, prec: u32) -> Vec<CBox> {
    p.coeffs().iter().map(|c| CBox::from_rat(c, prec)).collect()
}

fn powers(x: &CBox, n: usize, prec: u32) -> Vec<CBox> {
    let mut out = vec![CBox::one().with_prec(prec)];
    for _ in 1..n {
        let next = out.last().unwrap().clone() * x.clone();
        out.push(next);
    }
    out
}

fn poly_from_relation(c: &[BigInt]) -> QPoly {
    QPoly::from_ints(c)
}

/// Tries to find a modulus of degree at most `d` with a certified root
/// next to `γ = Σ combo_i a_i`.
fn find_modulus(p: &QPoly, boxes: &[CBox], combo: &[i64], d: usize, bits: u64) -> Option<Arc<FieldCtx>> {
    let fine = 2 * bits as i64 + 32;
    let prec = (2 * fine + 64) as u32;
    let mut g = CBox::zero().with_prec(prec);
    for (b, &k) in boxes.iter().zip(combo) {
        if k != 0 {
            let a = refine_root(p, b, fine).with_prec(prec);
            g = g + CBox::real(RInt::from_int(k)) * a;
        }
    }
    let rel = integer_relation(&powers(&g, d + 1, prec), bits)?;
    let mu = poly_from_relation(&rel);
    if mu.deg0() == 0 || !is_squarefree(&mu) {
        return None;
    }
    // the hint must be far smaller than the relation's own error scale
    let hint = g.inflate(1 << 20, 0);
    if !certify_unique_root(&mu, &hint, prec) {
        return None;
    }
    FieldCtx::near(&mu, &hint).ok()
}

/// `p(x) mod m` by Horner with reduction at every step.
fn compose_mod(p: &QPoly, x: &QPoly, m: &QPoly) -> QPoly {
    let mut acc = QPoly::zero();
    for c in p.coeffs().iter().rev() {
        acc = (&(&acc * x) + &QPoly::constant(c.clone())).rem(m);
    }
    acc
}

/// Writes the root isolated by `target` as a polynomial in the generator.
fn express(p: &QPoly, ctx: &Arc<FieldCtx>, target: &CBox, bits: u64) -> Option<QPoly> {
    let n = ctx.degree();
    let fine = 2 * bits as i64 + 32;
    let prec = (2 * fine + 64) as u32;
    let g = ctx.generator_box(fine).with_prec(prec);
    let a = refine_root(p, target, fine).with_prec(prec);
    let mut xs = powers(&g, n, prec);
    xs.push(a);
    let rel = integer_relation(&xs, bits)?;
    let last = rel[n].clone();
    if last.is_zero() {
        return None;
    }
    let scale = Rat::new(BigInt::from(-1), last);
    let x = poly_from_relation(&rel[..n]).scale(&scale);
    if !compose_mod(p, &x, ctx.modulus()).is_zero() {
        return None;
    }
    // identify which root this is under the tracked embedding
    let mut b = 32i64;
    loop {
        let pr = (2 * b + 64) as u32;
        let v = horner(&lift(&x, pr), &ctx.generator_box(b), pr);
        if target.contains(&v) {
            return Some(x);
        }
        if !target.intersects(&v) || b > 1 << 12 {
            return None;
        }
        b *= 2;
    }
}

/// Outcome of one stage attempt for a fixed generator.
enum Attempt {
    Done(Stage),
    /// the generator provably lies in a field of degree below `min_degree`
    Degenerate,
    Failed,
}

/// Relation precision for a relation among `n` numbers, doubled per round.
/// Exact verification makes a too-small value harmless.
fn relation_bits(n: usize, round: u32) -> u64 {
    (24 * n as u64 + 64) << round
}

fn try_stage(p: &QPoly, boxes: &[CBox], combo: &[i64], degrees: &[usize], min_degree: usize) -> Attempt {
    for round in 0..4u32 {
        for &d in degrees {
            let bits = relation_bits(d + 1, round);
            let Some(ctx) = find_modulus(p, boxes, combo, d, bits) else {
                continue;
            };
            if ctx.degree() < min_degree {
                return Attempt::Degenerate;
            }
            let exprs: Vec<Option<QPoly>> = boxes
                .iter()
                .map(|b| (0..=round + 1).find_map(|r| express(p, &ctx, b, relation_bits(ctx.degree() + 1, r))))
                .collect();
            // the adjoined roots themselves must be expressible
            let adjoined_ok = combo
                .iter()
                .zip(&exprs)
                .all(|(&k, e)| k == 0 || e.is_some());
            if adjoined_ok {
                return Attempt::Done(Stage { ctx, exprs });
            }
        }
    }
    Attempt::Failed
}

/// Splitting field of a square-free `p` with one element per root, in the
/// order of [`isolate_roots`].
pub fn roots_of(p: &QPoly) -> Result<(Arc<FieldCtx>, Vec<AlgNum>), SplittingError> {
    roots_of_capped(p, DEFAULT_DEGREE_CAP)
}

pub fn roots_of_capped(p: &QPoly, cap: usize) -> Result<(Arc<FieldCtx>, Vec<AlgNum>), SplittingError> {
    if p.deg0() == 0 || !is_squarefree(p) {
        return Err(SplittingError::BadInput);
    }
    let p = p.monic();
    let n = p.deg0();
    let boxes = isolate_roots(&p);
    if n == 1 {
        let ctx = FieldCtx::new(&p, 0).map_err(|_| SplittingError::BadInput)?;
        return Ok((ctx.clone(), vec![ctx.generator()]));
    }
    let mut combo = vec![0i64; n];
    combo[0] = 1;
    let first: Vec<usize> = (1..=n.min(cap)).collect();
    let Attempt::Done(mut stage) = try_stage(&p, &boxes, &combo, &first, 1) else {
        return Err(SplittingError::DegreeCapExceeded { cap });
    };
    loop {
        if stage.exprs.iter().all(Option::is_some) {
            let ctx = stage.ctx.clone();
            let roots = stage
                .exprs
                .into_iter()
                .map(|x| ctx.element(x.unwrap()))
                .collect();
            return Ok((ctx, roots));
        }
        let j = stage.exprs.iter().position(Option::is_none).unwrap();
        let base = stage.ctx.degree();
        let missing = stage.exprs.iter().filter(|e| e.is_none()).count();
        let degrees: Vec<usize> = (2..=missing + 1)
            .map(|m| m * base)
            .filter(|&d| d <= cap)
            .collect();
        if degrees.is_empty() {
            return Err(SplittingError::DegreeCapExceeded { cap });
        }
        let mut next = None;
        for k in 1..=4 {
            let mut c = combo.clone();
            c[j] = k;
            if let Attempt::Done(s) = try_stage(&p, &boxes, &c, &degrees, base + 1) {
                combo = c;
                next = Some(s);
                break;
            }
        }
        stage = next.ok_or(SplittingError::DegreeCapExceeded { cap })?;
    }
}

/// Σ f(a) over the roots `a` of `q`, as a trace in `Q[t]/(q)`.
pub fn sum_over_roots(f: &QPoly, q: &QPoly) -> Rat {
    crate::exact::trace(f, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    fn check_splits(q: &QPoly, expected_degree: usize) {
        let (ctx, roots) = roots_of(q).unwrap();
        assert_eq!(ctx.degree(), expected_degree);
        assert_eq!(roots.len(), q.deg0());
        // exact: q vanishes on every root element
        for r in &roots {
            assert!(q.compose(r.rep()).rem(ctx.modulus()).is_zero());
        }
        // product of (y - a_i) reproduces q exactly
        let mut prod: Vec<AlgNum> = vec![AlgNum::one()];
        for r in &roots {
            let mut next = vec![AlgNum::zero(); prod.len() + 1];
            for (i, c) in prod.iter().enumerate() {
                next[i + 1] = next[i + 1].clone() + c.clone();
                next[i] = next[i].clone() - c.clone() * r.clone();
            }
            prod = next;
        }
        let monic = q.monic();
        for (i, c) in prod.iter().enumerate() {
            assert_eq!(c.as_rational(), Some(monic.coeff(i)), "coefficient {i}");
        }
        // the embedding sends each element into its isolating box
        let boxes = isolate_roots(q);
        for (r, b) in roots.iter().zip(&boxes) {
            let e = r.enclose(80);
            assert!(b.intersects(&e));
        }
    }

    #[test]
    fn linear_and_quadratic() {
        check_splits(&p(&[-3, 1]), 1);
        check_splits(&p(&[1, 0, 1]), 2);
    }

    #[test]
    fn cubic_with_galois_group_s3() {
        check_splits(&p(&[-2, 0, 0, 1]), 6);
    }

    #[test]
    fn sextic_binomial() {
        check_splits(&p(&[4, 0, 0, 0, 0, 0, 1]), 12);
    }

    #[test]
    fn cap_is_reported() {
        assert_eq!(
            roots_of_capped(&p(&[-2, 0, 0, 1]), 3).unwrap_err(),
            SplittingError::DegreeCapExceeded { cap: 3 }
        );
    }

    #[test]
    fn sums_over_roots() {
        assert_eq!(sum_over_roots(&p(&[0, 1]), &p(&[-2, 0, 1])), Rat::zero());
        let q6 = p(&[4, 0, 0, 0, 0, 0, 1]);
        assert_eq!(sum_over_roots(&p(&[0, 0, 1]), &q6), Rat::zero());
        let c = QPoly::constant(Rat::new(5.into(), 16.into()));
        assert_eq!(sum_over_roots(&c, &q6), Rat::new(30.into(), 16.into()));
        let _ = Rat::one();
    }
}
