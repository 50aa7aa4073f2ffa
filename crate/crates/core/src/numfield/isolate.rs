//! Certified complex root isolation for square-free rational polynomials.
//!
//! Boxes are discarded when the interval value of `p` excludes zero and
//! certified by the complex Krawczyk operator `K(B) = c - Y p(c) + (1 - Y p'(B))(B - c)`:
//! `K(B) ⊂ int B` gives a root in `B` (Brouwer, via the mean-value form over
//! the convex box `p'(B)`), and `0 ∉ p'(B)` makes it unique, since two roots
//! would force a zero average of `p'` along the segment joining them.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::QPoly;
use crate::interval::{CBox, Dyadic, RInt};
use crate::Rat;

/// Interval images of a polynomial and its derivative at a fixed precision.
pub(crate) struct IPoly {
    p: Vec<CBox>,
    pub prec: u32,
}

impl IPoly {
    pub fn new(q: &QPoly, prec: u32) -> Self {
        let lift = |c: &Rat| CBox::from_rat(c, prec);
        IPoly {
            p: q.coeffs().iter().map(lift).collect(),
            prec,
        }
    }

    /// Coefficients of `p(c + h)` in `h`.
    fn taylor(&self, c: &CBox) -> Vec<CBox> {
        let c = c.clone().with_prec(self.prec);
        let mut t: Vec<CBox> = self.p.clone();
        let n = t.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                t[j] = t[j].clone() + c.clone() * t[j + 1].clone();
            }
        }
        t
    }

    /// True when `p` has no zero on `b`, by the Taylor form at the center:
    /// `|p(c)| > Σ_{k≥1} |t_k| r^k` with `r` bounding `|z - c|`.
    pub fn excludes(&self, b: &CBox) -> bool {
        let t = self.taylor(&b.center());
        let r = half_diag(b);
        let mut bound = Dyadic::zero();
        let mut rk = Dyadic::from_int(1);
        for coef in &t[1..] {
            rk = rk.mul(&r).round_up(self.prec);
            bound = bound.add(&coef.mag().mul(&rk)).round_up(self.prec);
        }
        t[0].mig() > bound
    }
}

fn half_diag(b: &CBox) -> Dyadic {
    b.re.radius().add(&b.im.radius())
}

/// `t_1` widened by `Σ_{k≥2} k |t_k| r^(k-1)`: an enclosure of `p'` on the
/// disc of radius `r` around the expansion point.
fn deriv_enclosure(t: &[CBox], r: &Dyadic, prec: u32) -> CBox {
    let Some(t1) = t.get(1) else {
        return CBox::zero();
    };
    let mut bound = Dyadic::zero();
    let mut rk = Dyadic::from_int(1);
    for (k, coef) in t.iter().enumerate().skip(2) {
        rk = rk.mul(r).round_up(prec);
        bound = bound
            .add(&coef.mag().mul(&rk).mul(&Dyadic::from_int(k as i64)))
            .round_up(prec);
    }
    let widen = |x: &RInt| RInt::new(x.lo.sub(&bound), x.hi.add(&bound), prec);
    CBox::new(widen(&t1.re), widen(&t1.im))
}

pub(crate) fn horner(c: &[CBox], z: &CBox, prec: u32) -> CBox {
    let z = z.clone().with_prec(prec);
    let mut acc = CBox::zero().with_prec(prec);
    for a in c.iter().rev() {
        acc = acc * z.clone() + a.clone();
    }
    acc
}

/// `-log2(width)`, clamped; larger is tighter.
pub(crate) fn tightness(b: &CBox) -> i64 {
    let w = b.width();
    if w.is_zero() {
        i64::MAX / 4
    } else {
        -w.magnitude_exp()
    }
}

/// Krawczyk image of `b`, or `None` when `p'` may vanish on `b`.
pub(crate) fn krawczyk(ip: &IPoly, b: &CBox) -> Option<CBox> {
    let prec = ip.prec;
    let b = b.clone().with_prec(prec);
    let c = b.center();
    let t = ip.taylor(&c);
    let dpb = deriv_enclosure(&t, &half_diag(&b), prec);
    if dpb.contains_zero() {
        return None;
    }
    let y = t[1].inv()?.center().with_prec(prec);
    let one = CBox::one().with_prec(prec);
    Some(c.clone() - y.clone() * t[0].clone() + (one - y * dpb) * (b - c))
}

/// True when `b` is certified to hold exactly one root.
pub(crate) fn certifies(ip: &IPoly, b: &CBox) -> bool {
    matches!(krawczyk(ip, b), Some(k) if b.interior_contains(&k))
}

/// Power-of-two bound on the moduli of all roots (Fujiwara):
/// `2 max_k |a_{n-k}/a_n|^(1/k)`, rounded up to `2^e`.
fn root_radius(p: &QPoly) -> Dyadic {
    let n = p.deg0();
    let lc = p.leading();
    let ratios: Vec<Rat> = (1..=n).map(|k| (p.coeff(n - k) / &lc).abs()).collect();
    let two = Rat::from_integer(2.into());
    // smallest e with |a_{n-k}/a_n| <= 2^((e-1) k) for all k
    let mut e: i64 = -8;
    loop {
        let base = if e >= 1 {
            Rat::from_integer(BigInt::from(1) << (e - 1) as u64)
        } else {
            Rat::new(1.into(), BigInt::from(1) << (1 - e) as u64)
        };
        let mut pw = Rat::one();
        let ok = ratios.iter().all(|r| {
            pw = &pw * &base;
            *r <= pw
        });
        if ok {
            return Dyadic::new(1.into(), e.max(0));
        }
        e += 1;
        let _ = &two;
    }
}

/// One isolated root: `region` is certified to contain it as the only root,
/// `bx` is a small box inside `region` that also contains it.
#[derive(Clone, Debug)]
struct Found {
    region: CBox,
    bx: CBox,
}

fn contract(ip: &IPoly, b: &CBox, rounds: usize) -> CBox {
    let mut cur = b.clone();
    for _ in 0..rounds {
        match krawczyk(ip, &cur).and_then(|k| k.intersect(&cur)) {
            Some(n) if tightness(&n) > tightness(&cur) => cur = n,
            _ => break,
        }
    }
    cur
}

fn try_isolate(p: &QPoly, prec: u32) -> Option<Vec<CBox>> {

    let n = p.deg0();
    let ip = IPoly::new(p, prec);
    let r = root_radius(p);
    let start = CBox::new(
        RInt::new(r.neg(), r.clone(), prec),
        RInt::new(r.neg(), r.clone(), prec),
    );
    let floor = (prec / 3) as i64;
    let mut found: Vec<Found> = Vec::new();
    let mut stack = vec![start];
    while let Some(b) = stack.pop() {
        if ip.excludes(&b) {
            continue;
        }
        let region = b.inflate(3, 1);
        if certifies(&ip, &region) {
            let bx = contract(&ip, &region, 8);
            let mut dup = false;
            for f in &found {
                if f.region.contains(&bx) || region.contains(&f.bx) {
                    dup = true;
                    break;
                }
                if f.region.intersects(&bx) || region.intersects(&f.bx) {
                    // undecided: shrink further and recheck
                    let tb = contract(&ip, &bx, 64);
                    if f.region.contains(&tb) {
                        dup = true;
                        break;
                    }
                    if f.region.intersects(&tb) {
                        return None;
                    }
                }
            }
            if !dup {
                found.push(Found { region, bx });
            }
            continue;
        }
        if tightness(&b) > floor {
            return None;
        }
        stack.extend(b.quadrisect());
    }
    if found.len() != n {
        return None;
    }
    let boxes: Vec<CBox> = found.into_iter().map(|f| f.bx).collect();
    make_disjoint(&ip, boxes)
}

/// Tightens certified boxes until pairwise disjoint.
fn make_disjoint(ip: &IPoly, mut boxes: Vec<CBox>) -> Option<Vec<CBox>> {
    let n = boxes.len();
    for _ in 0..8 {
        let clash = (0..n).any(|i| (i + 1..n).any(|j| boxes[i].intersects(&boxes[j])));
        if !clash {
            return Some(boxes);
        }
        boxes = boxes.iter().map(|b| contract(ip, b, 64)).collect();
    }
    None
}

/// Aberth iteration in `f64`, returning approximations of all roots, or
/// `None` if the coefficients do not fit or the iteration stalls.
fn aberth(p: &QPoly) -> Option<Vec<Complex64>> {
    let n = p.deg0();
    let c: Vec<f64> = p.monic().coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let rad = root_radius(p).to_f64() * 0.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(rad, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            return Some(z);
        }
    }
    None
}

/// Fast path: certify small boxes around Aberth approximations. Degree-many
/// pairwise disjoint certified boxes account for every root.
fn isolate_near_approximations(p: &QPoly, prec: u32) -> Option<Vec<CBox>> {
    let n = p.deg0();
    let z = aberth(p)?;
    let ip = IPoly::new(p, prec);
    let mut boxes = Vec::with_capacity(n);
    for (i, zi) in z.iter().enumerate() {
        let sep = (0..n)
            .filter(|&j| j != i)
            .map(|j| (zi - z[j]).norm())
            .fold(f64::INFINITY, f64::min);
        let cap = if sep.is_finite() { sep / 4.0 } else { 1.0 };
        let mut rho = 1e-12 * (1.0 + zi.norm());
        let center = (Dyadic::from_f64(zi.re), Dyadic::from_f64(zi.im));
        let certified = loop {
            if rho > cap {
                break None;
            }
            let r = Dyadic::from_f64(rho);
            let b = CBox::new(RInt::ball(&center.0, &r, prec), RInt::ball(&center.1, &r, prec));
            if certifies(&ip, &b) {
                break Some(b);
            }
            rho *= 16.0;
        };
        boxes.push(certified?);
    }
    make_disjoint(&ip, boxes)
}

/// Isolating boxes for all complex roots of a square-free `p` (deg ≥ 1),
/// pairwise disjoint, in increasing (real, imaginary) order of their centers.
pub fn isolate_roots(p: &QPoly) -> Vec<CBox> {
    assert!(p.deg0() >= 1, "root isolation of a constant");
    let boxes = isolate_near_approximations(p, 128).unwrap_or_else(|| {
        let mut prec = 64;
        loop {
            if let Some(b) = try_isolate(p, prec) {
                break b;
            }
            prec *= 2;
            assert!(prec <= 1 << 16, "root isolation did not converge; input not square-free?");
        }
    });
    // order by centers, with real parts snapped to a 2^-32 grid so that
    // roots sharing a real part are ordered by imaginary part
    let mut keyed: Vec<((BigInt, Dyadic), CBox)> = boxes
        .into_iter()
        .map(|b| {
            let fine = refine_root(p, &b, 48);
            let re = fine.re.mid().mul_pow2(32).to_rat().round().to_integer();
            ((re, fine.im.mid()), fine)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, b)| b).collect()
}

/// Shrinks an isolating box of a root of `p` until its width is below
/// `2^-bits`. The result is contained in the input box.
pub fn refine_root(p: &QPoly, b: &CBox, bits: i64) -> CBox {
    let mut cur = b.clone();
    let mut extra = 64u32;
    loop {
        let t = tightness(&cur);
        if t >= bits {
            return cur;
        }
        let prec = 2 * t.max(bits).max(0) as u32 + extra;
        let ip = IPoly::new(p, prec);
        let next = krawczyk(&ip, &cur)
            .and_then(|k| k.intersect(&cur))
            .filter(|n| tightness(n) > t)
            .or_else(|| Some(bisect_keep(&ip, &cur)).filter(|n| tightness(n) > t));
        match next {
            Some(n) => cur = n,
            None => {
                extra *= 2;
                assert!(extra < 1 << 20, "root refinement stalled");
            }
        }
    }
}

/// Distinct rational roots of a nonzero `p`, increasing. A rational root
/// `c` of the primitive integer form has `c·lead` integral, so a box of
/// width below `1/(2|lead|)` pins the only candidate, which is then tested
/// exactly.
pub fn rational_roots(p: &QPoly) -> Vec<Rat> {
    if p.deg0() == 0 {
        return Vec::new();
    }
    let sf = crate::exact::squarefree_part(p);
    let ints = sf.primitive_int();
    let lead = ints.last().unwrap().clone();
    let bits = lead.bits() as i64 + 4;
    let mut out: Vec<Rat> = isolate_roots(&sf)
        .iter()
        .filter(|b| b.im.contains_zero())
        .filter_map(|b| {
            let f = refine_root(&sf, b, bits);
            let m = (f.re.mid().to_rat() * Rat::from_integer(lead.clone())).round();
            let c = m / Rat::from_integer(lead.clone());
            sf.eval_rat(&c).is_zero().then_some(c)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Fallback halving step: hull of the quadrants that may hold the root.
fn bisect_keep(ip: &IPoly, b: &CBox) -> CBox {
    let keep: Vec<CBox> = b
        .quadrisect()
        .into_iter()
        .filter(|q| !ip.excludes(q))
        .collect();
    keep.iter()
        .skip(1)
        .fold(keep.first().cloned().unwrap_or_else(|| b.clone()), |a, q| a.hull(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (3y - 2)(y + 5)(y^2 + 1)
        let q = &(&p(&[-2, 3]) * &p(&[5, 1])) * &p(&[1, 0, 1]);
        let r = |n: i64, d: i64| Rat::new(n.into(), d.into());
        assert_eq!(rational_roots(&q), vec![r(-5, 1), r(2, 3)]);
        assert!(rational_roots(&p(&[-2, 0, 1])).is_empty());
        assert_eq!(rational_roots(&(&p(&[0, 1]) * &p(&[0, 1]))), vec![r(0, 1)]);
    }

    #[test]
    fn linear_and_quadratic() {
        let b = isolate_roots(&p(&[-3, 1]));
        assert_eq!(b.len(), 1);
        assert!(b[0].re.contains_point(&Dyadic::from_int(3)));
        let b = isolate_roots(&p(&[1, 0, 1]));
        assert_eq!(b.len(), 2);
        assert!(b[0].im.hi.is_negative() && b[1].im.lo > Dyadic::zero());
    }

    #[test]
    fn sextic_roots_on_circle() {
        let q = p(&[4, 0, 0, 0, 0, 0, 1]);
        let boxes = isolate_roots(&q);
        assert_eq!(boxes.len(), 6);
        for b in &boxes {
            let r = refine_root(&q, b, 60);
            assert!(b.contains(&r));
            // |z|^6 = 4: enclose (|z|^2)^3
            let m = r.norm_sqr();
            let m3 = m.clone() * m.clone() * m;
            let eps = Rat::new(1.into(), 1_000_000_000i64.into());
            assert!(m3.lo.to_rat() > Rat::from_integer(4.into()) - &eps);
            assert!(m3.hi.to_rat() < Rat::from_integer(4.into()) + &eps);
        }
    }

    #[test]
    fn refinement_halves_width() {
        let q = p(&[4, 0, 0, 0, 0, 0, 1]);
        let b = isolate_roots(&q)[0].clone();
        let t0 = tightness(&b);
        let mut cur = b;
        for k in 1..=100 {
            let next = refine_root(&q, &cur, t0 + k);
            assert!(cur.contains(&next));
            assert!(tightness(&next) >= t0 + k);
            cur = next;
        }
    }

    #[test]
    fn clustered_roots() {
        // (y - 1)(y - 1 - 1/1000)(y^2 + 1)
        let a = &p(&[-1, 1]) * &QPoly::new(vec![Rat::new((-1001).into(), 1000.into()), Rat::one()]);
        let q = &a * &p(&[1, 0, 1]);
        assert_eq!(isolate_roots(&q).len(), 4);
    }
}
