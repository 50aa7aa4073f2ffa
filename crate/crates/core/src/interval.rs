//! Rigorous interval arithmetic with dyadic-rational endpoints.
//!
//! Every operation rounds outward to a working precision (significant bits),
//! so an interval result always encloses the exact real or complex value.
//! A precision of 0 means "exact": no rounding is applied, which keeps
//! integer constants and their sums/products exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Coeff;
use crate::Rat;

/// `man * 2^exp`, normalized so that `man` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    m.div_floor(&pow2(s))
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic { man, exp: 0 };
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        Dyadic {
            man: man >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v.into(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Position of the leading bit: `floor(log2 |x|)`, or `i64::MIN` for zero.
    pub fn magnitude_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64 - 1
        }
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.man << self.exp as u64)
        } else {
            Rat::new(self.man.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.man.bits() as i64;
        let shift = (b - 60).max(0);
        let m = (&self.man >> shift as u64).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let (m, e) = frexp(x);
        let man = (m * (1u64 << 53) as f64) as i64;
        Self::new(BigInt::from(man), e as i64 - 53)
    }

    fn align(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        (
            &a.man << (a.exp - e) as u64,
            &b.man << (b.exp - e) as u64,
            e,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::align(self, o);
        Self::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    /// Exact halving.
    pub fn half(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp - 1,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    /// Rounds toward -inf keeping at most `prec` significant bits.
    pub fn round_down(&self, prec: u32) -> Self {
        let b = self.man.bits();
        if prec == 0 || b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        Self::new(floor_shr(&self.man, s), self.exp + s as i64)
    }

    pub fn round_up(&self, prec: u32) -> Self {
        self.neg().round_down(prec).neg()
    }

    /// Rational rounded toward -inf to about `prec` significant bits.
    pub fn from_rat_down(r: &Rat, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let (n, d) = (r.numer(), r.denom());
        if d.is_one() {
            return Self::from_int(n.clone()).round_down(prec);
        }
        if d.magnitude().count_ones() == 1 {
            let e = d.trailing_zeros().unwrap() as i64;
            return Self::new(n.clone(), -e).round_down(prec);
        }
        let s = prec as i64 + d.bits() as i64 - n.bits() as i64 + 2;
        let q = if s >= 0 {
            (n << s as u64).div_floor(d)
        } else {
            n.div_floor(&(d << (-s) as u64))
        };
        Self::new(q, -s)
    }

    pub fn from_rat_up(r: &Rat, prec: u32) -> Self {
        Self::from_rat_down(&-r, prec).neg()
    }

    /// `floor(a / b)` at about `prec` significant bits; `b` nonzero.
    pub fn div_down(a: &Self, b: &Self, prec: u32) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Self::zero();
        }
        let s = prec as i64 + b.man.bits() as i64 - a.man.bits() as i64 + 2;
        let q = if s >= 0 {
            (&a.man << s as u64).div_floor(&b.man)
        } else {
            a.man.div_floor(&(&b.man << (-s) as u64))
        };
        Self::new(q, a.exp - b.exp - s)
    }

    pub fn div_up(a: &Self, b: &Self, prec: u32) -> Self {
        Self::div_down(&a.neg(), b, prec).neg()
    }

    pub fn min(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

fn frexp(x: f64) -> (f64, i32) {
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x / 2f64.powi(e);
    // guard against log2 rounding at exact powers of two
    if m.abs() >= 1.0 {
        (m / 2.0, e + 1)
    } else if m.abs() < 0.5 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b, _) = Self::align(self, o);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RInt {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub prec: u32,
}

impl RInt {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RInt { lo, hi, prec }
    }

    pub fn point(d: Dyadic) -> Self {
        RInt {
            lo: d.clone(),
            hi: d,
            prec: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(Dyadic::from_int(v))
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        let p = prec.max(1);
        RInt {
            lo: Dyadic::from_rat_down(r, p),
            hi: Dyadic::from_rat_up(r, p),
            prec,
        }
    }

    /// Enclosure `[x - r, x + r]` of a rational ball.
    pub fn ball(center: &Dyadic, radius: &Dyadic, prec: u32) -> Self {
        RInt {
            lo: center.sub(radius).round_down(prec),
            hi: center.add(radius).round_up(prec),
            prec,
        }
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    fn out(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        if prec == 0 {
            RInt { lo, hi, prec }
        } else {
            RInt {
                lo: lo.round_down(prec),
                hi: hi.round_up(prec),
                prec,
            }
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive_d() && !self.hi.is_negative()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).half()
    }

    pub fn radius(&self) -> Dyadic {
        self.width().half()
    }

    /// Upper bound on `|x|`.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    /// Lower bound on `|x|`.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            Dyadic::min(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn contains(&self, o: &RInt) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn contains_point(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn interior_contains(&self, o: &RInt) -> bool {
        self.lo < o.lo && o.hi < self.hi
    }

    pub fn intersect(&self, o: &RInt) -> Option<RInt> {
        let lo = Dyadic::max(&self.lo, &o.lo);
        let hi = Dyadic::min(&self.hi, &o.hi);
        (lo <= hi).then(|| RInt {
            lo,
            hi,
            prec: self.prec.max(o.prec),
        })
    }

    pub fn hull(&self, o: &RInt) -> RInt {
        RInt {
            lo: Dyadic::min(&self.lo, &o.lo),
            hi: Dyadic::max(&self.hi, &o.hi),
            prec: self.prec.max(o.prec),
        }
    }

    pub fn sqr(&self) -> RInt {
        let p = self.prec;
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        if self.contains_zero() {
            Self::out(Dyadic::zero(), Dyadic::max(&a, &b), p)
        } else {
            Self::out(Dyadic::min(&a, &b), Dyadic::max(&a, &b), p)
        }
    }

    pub fn inv(&self) -> Option<RInt> {
        if self.contains_zero() {
            return None;
        }
        let p = if self.prec == 0 { 64 } else { self.prec };
        let one = Dyadic::from_int(1);
        Some(RInt {
            lo: Dyadic::div_down(&one, &self.hi, p),
            hi: Dyadic::div_up(&one, &self.lo, p),
            prec: p,
        })
    }

    pub fn scale_int(&self, k: i64) -> RInt {
        self.clone() * RInt::from_int(k)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

trait DyadicSign {
    fn is_positive_d(&self) -> bool;
}

impl DyadicSign for Dyadic {
    fn is_positive_d(&self) -> bool {
        self.man.is_positive()
    }
}

impl Add for RInt {
    type Output = RInt;
    fn add(self, o: RInt) -> RInt {
        let p = self.prec.max(o.prec);
        RInt::out(self.lo.add(&o.lo), self.hi.add(&o.hi), p)
    }
}

impl Sub for RInt {
    type Output = RInt;
    fn sub(self, o: RInt) -> RInt {
        let p = self.prec.max(o.prec);
        RInt::out(self.lo.sub(&o.hi), self.hi.sub(&o.lo), p)
    }
}

impl Mul for RInt {
    type Output = RInt;
    fn mul(self, o: RInt) -> RInt {
        let p = self.prec.max(o.prec);
        if self.is_point() && o.is_point() {
            let v = self.lo.mul(&o.lo);
            return RInt::out(v.clone(), v, p);
        }
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RInt::out(lo, hi, p)
    }
}

impl Neg for RInt {
    type Output = RInt;
    fn neg(self) -> RInt {
        RInt {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Zero for RInt {
    fn zero() -> Self {
        RInt::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for RInt {
    fn one() -> Self {
        RInt::from_int(1)
    }
}

impl fmt::Display for RInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Rectangular complex interval `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CBox {
    pub re: RInt,
    pub im: RInt,
}

impl CBox {
    pub fn new(re: RInt, im: RInt) -> Self {
        CBox { re, im }
    }

    pub fn real(re: RInt) -> Self {
        let p = re.prec;
        CBox {
            re,
            im: RInt::from_int(0).with_prec(p),
        }
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        Self::real(RInt::from_rat(r, prec))
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        CBox {
            re: RInt::point(re),
            im: RInt::point(im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn with_prec(self, prec: u32) -> Self {
        CBox {
            re: self.re.with_prec(prec),
            im: self.im.with_prec(prec),
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// Maximum of the two side lengths.
    pub fn width(&self) -> Dyadic {
        Dyadic::max(&self.re.width(), &self.im.width())
    }

    pub fn center(&self) -> CBox {
        CBox::point(self.re.mid(), self.im.mid())
    }

    /// Lower bound on `|z|`.
    pub fn mig(&self) -> Dyadic {
        Dyadic::max(&self.re.mig(), &self.im.mig())
    }

    /// Upper bound on `|z|` (L1 norm of the corner magnitudes).
    pub fn mag(&self) -> Dyadic {
        self.re.mag().add(&self.im.mag())
    }

    pub fn contains(&self, o: &CBox) -> bool {
        self.re.contains(&o.re) && self.im.contains(&o.im)
    }

    pub fn interior_contains(&self, o: &CBox) -> bool {
        self.re.interior_contains(&o.re) && self.im.interior_contains(&o.im)
    }

    pub fn intersect(&self, o: &CBox) -> Option<CBox> {
        Some(CBox {
            re: self.re.intersect(&o.re)?,
            im: self.im.intersect(&o.im)?,
        })
    }

    pub fn intersects(&self, o: &CBox) -> bool {
        self.intersect(o).is_some()
    }

    pub fn hull(&self, o: &CBox) -> CBox {
        CBox {
            re: self.re.hull(&o.re),
            im: self.im.hull(&o.im),
        }
    }

    /// Same center, half-widths multiplied by `factor`.
    pub fn inflate(&self, num: i64, den_log2: i64) -> CBox {
        let f = |r: &RInt| {
            let c = r.mid();
            let rad = r.radius().mul(&Dyadic::from_int(num)).mul_pow2(-den_log2);
            RInt {
                lo: c.sub(&rad),
                hi: c.add(&rad),
                prec: r.prec,
            }
        };
        CBox {
            re: f(&self.re),
            im: f(&self.im),
        }
    }

    /// Splits into four closed quadrants.
    pub fn quadrisect(&self) -> [CBox; 4] {
        let (rm, im) = (self.re.mid(), self.im.mid());
        let p = self.prec();
        let rl = RInt::new(self.re.lo.clone(), rm.clone(), p);
        let rh = RInt::new(rm, self.re.hi.clone(), p);
        let il = RInt::new(self.im.lo.clone(), im.clone(), p);
        let ih = RInt::new(im, self.im.hi.clone(), p);
        [
            CBox::new(rl.clone(), il.clone()),
            CBox::new(rh.clone(), il),
            CBox::new(rl, ih.clone()),
            CBox::new(rh, ih),
        ]
    }

    pub fn inv(&self) -> Option<CBox> {
        if self.contains_zero() {
            return None;
        }
        let d = (self.re.sqr() + self.im.sqr()).inv()?;
        Some(CBox {
            re: self.re.clone() * d.clone(),
            im: -(self.im.clone() * d),
        })
    }

    pub fn conj(&self) -> CBox {
        CBox {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus enclosure.
    pub fn norm_sqr(&self) -> RInt {
        self.re.sqr() + self.im.sqr()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Lexicographic key on the center, for deterministic root ordering.
    pub fn order_key(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }
}

impl Add for CBox {
    type Output = CBox;
    fn add(self, o: CBox) -> CBox {
        CBox {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for CBox {
    type Output = CBox;
    fn sub(self, o: CBox) -> CBox {
        CBox {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for CBox {
    type Output = CBox;
    fn mul(self, o: CBox) -> CBox {
        if o.im.is_zero() {
            return CBox {
                re: self.re * o.re.clone(),
                im: self.im * o.re,
            };
        }
        if self.im.is_zero() {
            return CBox {
                re: o.re * self.re.clone(),
                im: o.im * self.re,
            };
        }
        CBox {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Neg for CBox {
    type Output = CBox;
    fn neg(self) -> CBox {
        CBox {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Zero for CBox {
    fn zero() -> Self {
        CBox::real(RInt::from_int(0))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CBox {
    fn one() -> Self {
        CBox::real(RInt::from_int(1))
    }
}

impl Coeff for CBox {
    fn from_i64(v: i64) -> Self {
        CBox::real(RInt::from_int(v))
    }
}

impl fmt::Display for CBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

/// Enclosure of `exp(x)` for a dyadic point.
fn exp_point(x: &Dyadic, prec: u32) -> RInt {
    if x.is_zero() {
        return RInt::from_int(1);
    }
    // scale so that |t| <= 1/2
    let k = (x.magnitude_exp() + 2).max(0) as u64;
    let wp = prec + k as u32 + 24;
    let t = RInt::point(x.mul_pow2(-(k as i64))).with_prec(wp);
    let mut sum = RInt::from_int(1).with_prec(wp);
    let mut term = RInt::from_int(1).with_prec(wp);
    let mut n: i64 = 0;
    let tol = Dyadic::new(BigInt::one(), -(wp as i64) - 4);
    loop {
        n += 1;
        term = (term * t.clone()) * RInt::from_int(n).inv().unwrap().with_prec(wp);
        sum = sum + term.clone();
        if term.mag() < tol && n > 2 {
            break;
        }
    }
    // |remainder| <= 2 |next term| since |t| <= 1/2
    let r = term.mag().mul(&Dyadic::from_int(2));
    let mut v = sum + RInt::new(r.neg(), r, wp);
    for _ in 0..k {
        v = v.sqr();
    }
    v.with_prec(prec)
}

/// Enclosure of `exp` on an interval (monotone).
pub fn exp_rint(x: &RInt, prec: u32) -> RInt {
    let p = prec.max(16);
    let lo = exp_point(&x.lo, p).lo;
    let hi = exp_point(&x.hi, p).hi;
    RInt::new(lo, hi, p)
}

/// Taylor enclosure of sin or cos at a dyadic point.
fn sincos_point(x: &Dyadic, prec: u32, cosine: bool) -> RInt {
    let mag = x.magnitude_exp().max(0) as u32;
    let wp = prec + 2 * (1 << mag.min(8)) + 32;
    let t = RInt::point(x.clone()).with_prec(wp);
    let t2 = t.clone() * t.clone();
    let (mut term, mut n) = if cosine {
        (RInt::from_int(1).with_prec(wp), 0i64)
    } else {
        (t.clone(), 1i64)
    };
    let mut sum = term.clone();
    let tol = Dyadic::new(BigInt::one(), -(wp as i64) - 4);
    loop {
        let d = RInt::from_int((n + 1) * (n + 2)).inv().unwrap().with_prec(wp);
        term = -(term * t2.clone() * d);
        n += 2;
        sum = sum + term.clone();
        // alternating series with decreasing terms once n > |x|
        if term.mag() < tol && (n as f64) > x.to_f64().abs() + 2.0 {
            break;
        }
    }
    let r = term.mag();
    (sum + RInt::new(r.neg(), r, wp)).with_prec(prec)
}

fn unit_clamp(v: RInt) -> RInt {
    let one = Dyadic::from_int(1);
    let lo = Dyadic::max(&v.lo, &one.neg());
    let hi = Dyadic::min(&v.hi, &one);
    RInt::new(lo, hi, v.prec)
}

/// Enclosure of `sin` on an interval using the 1-Lipschitz bound around the midpoint.
pub fn sin_rint(x: &RInt, prec: u32) -> RInt {
    let p = prec.max(16);
    let m = x.mid();
    let c = sincos_point(&m, p, false);
    let r = x.radius();
    unit_clamp(c + RInt::new(r.neg(), r, p))
}

pub fn cos_rint(x: &RInt, prec: u32) -> RInt {
    let p = prec.max(16);
    let m = x.mid();
    let c = sincos_point(&m, p, true);
    let r = x.radius();
    unit_clamp(c + RInt::new(r.neg(), r, p))
}

pub fn exp_cbox(z: &CBox, prec: u32) -> CBox {
    let e = exp_rint(&z.re, prec);
    if z.im.is_zero() {
        return CBox::real(e);
    }
    let c = cos_rint(&z.im, prec);
    let s = sin_rint(&z.im, prec);
    CBox::new(e.clone() * c, e * s)
}

/// sin(a + ib) = sin a cosh b + i cos a sinh b
pub fn sin_cbox(z: &CBox, prec: u32) -> CBox {
    if z.im.is_zero() {
        return CBox::real(sin_rint(&z.re, prec));
    }
    let (ch, sh) = cosh_sinh(&z.im, prec);
    CBox::new(sin_rint(&z.re, prec) * ch, cos_rint(&z.re, prec) * sh)
}

/// cos(a + ib) = cos a cosh b - i sin a sinh b
pub fn cos_cbox(z: &CBox, prec: u32) -> CBox {
    if z.im.is_zero() {
        return CBox::real(cos_rint(&z.re, prec));
    }
    let (ch, sh) = cosh_sinh(&z.im, prec);
    CBox::new(cos_rint(&z.re, prec) * ch, -(sin_rint(&z.re, prec) * sh))
}

fn cosh_sinh(b: &RInt, prec: u32) -> (RInt, RInt) {
    let ep = exp_rint(b, prec);
    let em = exp_rint(&-b.clone(), prec);
    let half = RInt::point(Dyadic::new(BigInt::one(), -1));
    (
        (ep.clone() + em.clone()) * half.clone(),
        (ep - em) * half,
    )
}
