//! Exact linear solving over `Q` or a number ring, and an interval filter
//! that can only ever prove inconsistency.

use num_traits::Zero;

use super::field::{AlgNum, InvError, Split};
use crate::interval::CBox;
use crate::scalar::Coeff;
use crate::Rat;

/// Coefficients with exact equality and a (possibly splitting) inverse.
pub trait ExactField: Coeff + PartialEq {
    fn try_inv(&self) -> Result<Self, InvError>;
}

impl ExactField for Rat {
    fn try_inv(&self) -> Result<Self, InvError> {
        if self.is_zero() {
            Err(InvError::Zero)
        } else {
            Ok(self.recip())
        }
    }
}

impl ExactField for AlgNum {
    fn try_inv(&self) -> Result<Self, InvError> {
        self.inv()
    }
}

/// `yᵀ M = 0` while `yᵀ v = value ≠ 0`.
#[derive(Debug, Clone)]
pub struct Inconsistency<F> {
    pub y: Vec<F>,
    pub value: F,
}

#[derive(Debug, Clone)]
pub enum LinSolveOutcome<F> {
    Solution(Vec<F>),
    Inconsistent(Inconsistency<F>),
    Split(Split),
}

fn dot<F: Coeff>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Checks a certificate against the original system.
pub fn verify_inconsistency<F: ExactField>(m: &[Vec<F>], v: &[F], cert: &Inconsistency<F>) -> bool {
    let cols = m.first().map_or(0, Vec::len);
    let zero_comb = (0..cols).all(|j| {
        let col: Vec<F> = m.iter().map(|row| row[j].clone()).collect();
        dot(&cert.y, &col).is_zero()
    });
    zero_comb && !cert.value.is_zero() && dot(&cert.y, v) == cert.value
}

pub fn verify_solution<F: ExactField>(m: &[Vec<F>], v: &[F], x: &[F]) -> bool {
    m.iter().zip(v).all(|(row, b)| dot(row, x) == *b)
}

/// Solves `M x = v` (rows are equations) by reduced row echelon form,
/// carrying the row transform so that inconsistency comes with a checked
/// certificate. Free unknowns are set to zero.
pub fn linear_solve<F: ExactField>(m: &[Vec<F>], v: &[F]) -> LinSolveOutcome<F> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    // augmented: [M | v | I]
    let mut a: Vec<Vec<F>> = (0..rows)
        .map(|i| {
            let mut r = m[i].clone();
            r.push(v[i].clone());
            r.extend((0..rows).map(|k| if k == i { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = match a[rank][col].try_inv() {
            Ok(i) => i,
            Err(InvError::Split(s)) => return LinSolveOutcome::Split(s),
            Err(InvError::Zero) => unreachable!("nonzero pivot"),
        };
        for x in a[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let prow = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x = x.clone() - f.clone() * p.clone();
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for row in &a[rank..] {
        if !row[cols].is_zero() {
            let cert = Inconsistency {
                y: row[cols + 1..].to_vec(),
                value: row[cols].clone(),
            };
            assert!(verify_inconsistency(m, v, &cert), "inconsistency certificate failed");
            return LinSolveOutcome::Inconsistent(cert);
        }
    }
    let mut x = vec![F::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][cols].clone();
    }
    assert!(verify_solution(m, v, &x), "solution failed verification");
    LinSolveOutcome::Solution(x)
}

/// Solves over a number ring, following the branch that keeps the tracked
/// embedding whenever a zero divisor splits the modulus. Solvability does
/// not depend on the branch, so the answer is that of the original system
/// over the field generated by the tracked root.
pub fn linear_solve_tracked(m: &[Vec<AlgNum>], v: &[AlgNum]) -> LinSolveOutcome<AlgNum> {
    let mut m = m.to_vec();
    let mut v = v.to_vec();
    loop {
        match linear_solve(&m, &v) {
            LinSolveOutcome::Split(s) => {
                let ctx = s.tracked;
                m = m
                    .iter()
                    .map(|row| row.iter().map(|x| x.in_ctx(&ctx)).collect())
                    .collect();
                v = v.iter().map(|x| x.in_ctx(&ctx)).collect();
            }
            done => return done,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefilter {
    /// Every system inside the boxes is inconsistent.
    Inconsistent,
    Inconclusive,
}

/// Gaussian elimination on enclosures with pivots that provably do not
/// vanish. If every column gets such a pivot and some leftover right-hand
/// side excludes zero, the exact system (which performs the same steps
/// with exactly zero eliminated entries) is inconsistent.
pub fn interval_prefilter(m: &[Vec<CBox>], v: &[CBox]) -> Prefilter {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows <= cols {
        return Prefilter::Inconclusive;
    }
    let mut a: Vec<Vec<CBox>> = (0..rows)
        .map(|i| {
            let mut r = m[i].clone();
            r.push(v[i].clone());
            r
        })
        .collect();
    for col in 0..cols {
        let best = (col..rows)
            .filter(|&r| a[r][col].excludes_zero())
            .max_by(|&x, &y| a[x][col].mig().cmp(&a[y][col].mig()));
        let Some(p) = best else {
            return Prefilter::Inconclusive;
        };
        a.swap(col, p);
        let Some(inv) = a[col][col].inv() else {
            return Prefilter::Inconclusive;
        };
        let prow = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            let f = row[col].clone() * inv.clone();
            row[col] = CBox::zero();
            for k in col + 1..=cols {
                row[k] = row[k].clone() - f.clone() * prow[k].clone();
            }
        }
    }
    if a[cols..].iter().any(|row| row[cols].excludes_zero()) {
        Prefilter::Inconsistent
    } else {
        Prefilter::Inconclusive
    }
}

/// Runs [`interval_prefilter`] on systems enclosed at 128, 256 and 512 bits.
pub fn prefilter_escalating(build: impl Fn(u32) -> (Vec<Vec<CBox>>, Vec<CBox>)) -> Prefilter {
    for prec in [128, 256, 512] {
        let (m, v) = build(prec);
        if interval_prefilter(&m, &v) == Prefilter::Inconsistent {
            return Prefilter::Inconsistent;
        }
    }
    Prefilter::Inconclusive
}
