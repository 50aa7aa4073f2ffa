use super::gcd::{inverse_mod, squarefree_factorization};
use super::poly::QPoly;
use super::ratfun::RatFun;
use super::ExactError;

/// One square-free denominator factor with its numerators.
///
/// Contributes `u/q + v/q^2` with `deg u, deg v < deg q`; `v` is zero when the
/// multiplicity is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionTerm {
    pub factor: QPoly,
    pub multiplicity: usize,
    pub u: QPoly,
    pub v: QPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub polynomial: QPoly,
    pub terms: Vec<FractionTerm>,
}

impl PartialFractions {
    pub fn reassemble(&self) -> RatFun {
        let mut acc = RatFun::from_poly(self.polynomial.clone());
        for t in &self.terms {
            acc = &acc + &RatFun::new(t.u.clone(), t.factor.clone());
            if !t.v.is_zero() {
                acc = &acc + &RatFun::new(t.v.clone(), &t.factor * &t.factor);
            }
        }
        acc
    }
}

/// Partial fractions of `r` grouped by the square-free factors of its denominator.
pub fn partial_fractions(r: &RatFun) -> Result<PartialFractions, ExactError> {
    let factors = if r.den().deg0() == 0 {
        Vec::new()
    } else {
        squarefree_factorization(r.den())
    };
    partial_fractions_over(r, &factors)
}

/// Partial fractions against an explicit list of pairwise coprime monic factors
/// whose product (with multiplicities) is the denominator of `r`.
pub fn partial_fractions_over(
    r: &RatFun,
    factors: &[(QPoly, usize)],
) -> Result<PartialFractions, ExactError> {
    if let Some((q, m)) = factors.iter().find(|(_, m)| *m > 2) {
        return Err(ExactError::PoleOrderTooHigh {
            factor: q.to_string(),
            multiplicity: *m,
        });
    }
    let (polynomial, rem) = r.num().div_rem(r.den());
    let mut terms = Vec::with_capacity(factors.len());
    for (i, (q, m)) in factors.iter().enumerate() {
        let qm = q.pow(*m as u32);
        let cofactor = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(QPoly::one(), |acc, (_, (f, k))| &acc * &f.pow(*k as u32));
        let inv = inverse_mod(&cofactor, &qm).map_err(|_| ExactError::FactorsNotCoprime)?;
        let n = (&rem * &inv).rem(&qm);
        let (u, v) = if *m == 2 {
            n.div_rem(q)
        } else {
            (n, QPoly::zero())
        };
        terms.push(FractionTerm {
            factor: q.clone(),
            multiplicity: *m,
            u,
            v,
        });
    }
    Ok(PartialFractions { polynomial, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn simple_poles() {
        let r = RatFun::new(p(&[1]), p(&[0, 1, 1]));
        let pf = partial_fractions(&r).unwrap();
        assert_eq!(pf.terms.len(), 1);
        assert_eq!(pf.reassemble(), r);
        let pf = partial_fractions_over(&r, &[(p(&[0, 1]), 1), (p(&[1, 1]), 1)]).unwrap();
        assert_eq!(pf.terms[0].u, p(&[1]));
        assert_eq!(pf.terms[1].u, p(&[-1]));
    }

    #[test]
    fn xyz_normal_form_coefficients_at_origin() {
        // r = -18(2+3y^6)/(y^2 (y^6+4)^2)
        let num = p(&[-36, 0, 0, 0, 0, 0, -54]);
        let q6 = p(&[4, 0, 0, 0, 0, 0, 1]);
        let den = &p(&[0, 0, 1]) * &q6.pow(2);
        let r = RatFun::new(num, den);
        let pf = partial_fractions_over(&r, &[(p(&[0, 1]), 2), (q6, 2)]).unwrap();
        assert_eq!(pf.terms[0].v, QPoly::constant(Rat::new((-9).into(), 4.into())));
        assert!(pf.terms[0].u.is_zero());
        assert_eq!(pf.reassemble(), r);
    }

    #[test]
    fn pole_order_three_rejected() {
        let r = RatFun::new(p(&[1]), p(&[0, 0, 0, 1]));
        assert!(matches!(
            partial_fractions(&r),
            Err(ExactError::PoleOrderTooHigh { multiplicity: 3, .. })
        ));
    }
}
