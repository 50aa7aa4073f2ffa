//! Integral LLL reduction (all arithmetic in exact integers) and integer
//! relation search built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::interval::CBox;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `n / d` for `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * two))
}

/// LLL-reduces the rows of `basis` in place with δ = 3/4.
/// Returns `false` if the rows are linearly dependent.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) -> bool {
    let n = basis.len();
    if n == 0 {
        return true;
    }
    // d[i] holds Cohen's d_i (1-based), with d[0] = 1
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::from(1);
    d[1] = dot(&basis[0], &basis[0]);
    if d[1].is_zero() {
        return false;
    }
    let mut k = 1usize; // 0-based index of Cohen's k = 2
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&basis[k], &basis[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return false;
                    }
                    d[k + 1] = u;
                }
            }
        }
        red(basis, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            swap(basis, &mut lam, &mut d, k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(basis, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    true
}

fn red(basis: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let two_lam = BigInt::from(2) * &lam[k][l];
    if two_lam.abs() <= d[l + 1] {
        return;
    }
    let q = round_div(&lam[k][l], &d[l + 1]);
    let bl = basis[l].clone();
    for (x, y) in basis[k].iter_mut().zip(&bl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * &d[l + 1];
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap(basis: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    basis.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let t = std::mem::take(&mut lam[k][j]);
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = b;
}

/// Small integer vector `c` with `Σ c_i x_i ≈ 0`, found by reducing the
/// lattice `[e_i | round(2^bits Re x_i) | round(2^bits Im x_i)]`.
/// Returns the first reduced row; the caller must verify it.
pub fn integer_relation(xs: &[CBox], bits: u64) -> Option<Vec<BigInt>> {
    let n = xs.len();
    let scale = |v: &crate::interval::Dyadic| -> BigInt {
        let e = v.exponent() + bits as i64;
        if e >= 0 {
            v.mantissa() << e as u64
        } else {
            let den = BigInt::from(1) << (-e) as u64;
            round_div(v.mantissa(), &den)
        }
    };
    let mut basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n + 2];
            row[i] = BigInt::from(1);
            row[n] = scale(&xs[i].re.mid());
            row[n + 1] = scale(&xs[i].im.mid());
            row
        })
        .collect();
    if !lll_reduce(&mut basis) {
        return None;
    }
    Some(basis[0][..n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::RInt;
    use crate::numfield::isolate::{isolate_roots, refine_root};
    use crate::QPoly;

    #[test]
    fn reduces_textbook_basis() {
        let mut b: Vec<Vec<BigInt>> = [[1, 1, 1], [-1, 0, 2], [3, 5, 6]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert!(lll_reduce(&mut b));
        let norms: Vec<BigInt> = b.iter().map(|r| dot(r, r)).collect();
        // the reduced first vector is (0, 1, 0)
        assert_eq!(norms[0], BigInt::from(1));
    }

    #[test]
    fn finds_minimal_polynomial_of_sqrt2_plus_sqrt3() {
        // x = sqrt2 + sqrt3 has minimal polynomial t^4 - 10 t^2 + 1
        let s2 = refine_root(&QPoly::from_i64s(&[-2, 0, 1]), &isolate_roots(&QPoly::from_i64s(&[-2, 0, 1]))[1], 300);
        let s3 = refine_root(&QPoly::from_i64s(&[-3, 0, 1]), &isolate_roots(&QPoly::from_i64s(&[-3, 0, 1]))[1], 300);
        let x = (s2 + s3).with_prec(400);
        let mut pw = vec![CBox::real(RInt::from_int(1)).with_prec(400)];
        for _ in 0..4 {
            let next = pw.last().unwrap().clone() * x.clone();
            pw.push(next);
        }
        let c = integer_relation(&pw, 200).unwrap();
        let sign = if c[4].is_negative() { -1 } else { 1 };
        let c: Vec<i64> = c.iter().map(|v| sign * i64::try_from(v).unwrap()).collect();
        assert_eq!(c, vec![1, 0, -10, 0, 1]);
    }
}
