//! Numerical witness for the variational equation: the Jacobi equation
//! `ξ̈ + K ξ = 0` in arc length against `ξ'' + a ξ' + b ξ = 0` in `y`.

use super::{gauss_curvature, Compiled, GeomError, ImplicitSurface};
use crate::exact::{QPoly, RatFun};
use crate::expr::{Expr, Var};
use crate::nve::{derive_nve, normal_form, MongeSurface};
use crate::scalar::Real;

fn poly_real<T: Real>(p: &QPoly, y: T) -> T {
    p.coeffs().iter().rev().fold(T::zero(), |acc, c| acc * y + T::from_rat(c))
}

fn ratfun_real<T: Real>(r: &RatFun, y: T) -> T {
    poly_real(r.num(), y) / poly_real(r.den(), y)
}

fn axis(e: &Expr) -> Expr {
    e.subst(Var::X, &Expr::zero())
}

fn c<T: Real>(v: f64) -> T {
    T::from_f64(v).unwrap()
}

/// Generic fixed-step RK4 for `u' = f(t, u)`, recording every step.
fn rk4<T: Real, const N: usize>(
    f: impl Fn(T, &[T; N]) -> [T; N],
    t0: T,
    u0: [T; N],
    h: T,
    steps: usize,
) -> Vec<(T, [T; N])> {
    let mut out = Vec::with_capacity(steps + 1);
    let (mut t, mut u) = (t0, u0);
    out.push((t, u));
    let half = h / c(2.0);
    for k in 1..=steps {
        let k1 = f(t, &u);
        let k2 = f(t + half, &std::array::from_fn(|i| u[i] + half * k1[i]));
        let k3 = f(t + half, &std::array::from_fn(|i| u[i] + half * k2[i]));
        let k4 = f(t + h, &std::array::from_fn(|i| u[i] + h * k3[i]));
        u = std::array::from_fn(|i| u[i] + h / c(6.0) * (k1[i] + c::<T>(2.0) * k2[i] + c::<T>(2.0) * k3[i] + k4[i]));
        t = t0 + h * T::from_usize(k).unwrap();
        out.push((t, u));
    }
    out
}

/// `ỹ(s)` on the planar geodesic `x = 0`, from `dỹ/ds = (1 + f_y(0, ỹ)²)^{-1/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileTable<T: Real> {
    pub s: Vec<T>,
    pub y: Vec<T>,
}

pub fn planar_geodesic_profile<T: Real>(
    surf: &MongeSurface,
    y0: T,
    smax: T,
    steps: usize,
) -> Result<ProfileTable<T>, GeomError> {
    let fy = Compiled::<T>::new(&axis(&surf.f.differentiate(Var::Y)));
    let rate = |y: T| {
        let d = fy.eval(&[T::zero(), y, T::zero()]);
        T::one() / (T::one() + d * d).sqrt()
    };
    let h = smax / T::from_usize(steps).unwrap();
    let table = rk4(|_, u: &[T; 1]| [rate(u[0])], T::zero(), [y0], h, steps);
    if let Some((_, u)) = table.iter().find(|(_, u)| !rate(u[0]).is_finite() || !u[0].is_finite()) {
        return Err(GeomError::WindowHitsSingularity(u[0].to_string()));
    }
    Ok(ProfileTable {
        s: table.iter().map(|(s, _)| *s).collect(),
        y: table.iter().map(|(_, u)| u[0]).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheckResult<T: Real> {
    /// `max |ξ_s(s(y)) − ξ_y(y)| / max |ξ_y|` over the window.
    pub deviation: T,
    /// Same measure for `w = ξ·exp(½∫a)` against `w'' = r w`.
    pub transform_deviation: T,
    /// `(s, K)` along the arc-length integration.
    pub curvature: Vec<(T, T)>,
}

/// Cubic Hermite interpolation of `(t, value, derivative)` samples at `t`.
fn hermite<T: Real>(ts: &[T], v: &[T], dv: &[T], t: T) -> T {
    let i = match ts.iter().position(|&x| x > t) {
        Some(0) => 0,
        Some(i) => i - 1,
        None => ts.len() - 2,
    };
    let h = ts[i + 1] - ts[i];
    let u = (t - ts[i]) / h;
    let (u2, u3) = (u * u, u * u * u);
    let two = c::<T>(2.0);
    let three = c::<T>(3.0);
    let h00 = two * u3 - three * u2 + T::one();
    let h10 = u3 - two * u2 + u;
    let h01 = -two * u3 + three * u2;
    let h11 = u3 - u2;
    h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1]
}

/// Integrates the variational equation both ways over `[y1, y2]` with
/// `ξ(y1) = 1`, `ξ'(y1) = 1/2` and compares after reparameterization.
pub fn cross_validate_nve<T: Real>(
    surf: &MongeSurface,
    window: [T; 2],
    steps: usize,
) -> Result<CrossCheckResult<T>, GeomError> {
    let coeffs = derive_nve(surf).map_err(|e| GeomError::Surface(e.to_string()))?;
    let o = normal_form(&coeffs);
    let (a, b, r) = (&coeffs.a, &coeffs.b, &o.r);
    let [y1, y2] = window;
    let fy = Compiled::<T>::new(&axis(&surf.f.differentiate(Var::Y)));
    let speed = |y: T| {
        let d = fy.eval(&[T::zero(), y, T::zero()]);
        (T::one() + d * d).sqrt()
    };
    // y-parameter system: ξ, ξ', w, w', s(y), ½∫a
    let (xi0, dxi0) = (T::one(), c::<T>(0.5));
    let half = c::<T>(0.5);
    let w0 = [xi0, dxi0, xi0, dxi0 + half * ratfun_real(a, y1) * xi0, T::zero(), T::zero()];
    let hy = (y2 - y1) / T::from_usize(steps).unwrap();
    let ytab = rk4(
        |y, u: &[T; 6]| {
            let (av, bv, rv) = (ratfun_real(a, y), ratfun_real(b, y), ratfun_real(r, y));
            [u[1], -av * u[1] - bv * u[0], u[3], rv * u[2], speed(y), half * av]
        },
        y1,
        w0,
        hy,
        steps,
    );
    if ytab.iter().any(|(_, u)| u.iter().any(|v| !v.is_finite())) {
        return Err(GeomError::WindowHitsSingularity(format!("{y1}..{y2}")));
    }
    let total = ytab.last().unwrap().1[4];
    // arc-length system: ỹ, ξ, ξ̇, with K from the implicit surface z − f = 0
    let graph = ImplicitSurface::<T>::graph(&surf.f);
    let f_axis = Compiled::<T>::new(&axis(&surf.f));
    let kappa = |y: T| -> Result<T, GeomError> {
        let p = [T::zero(), y, f_axis.eval(&[T::zero(), y, T::zero()])];
        gauss_curvature(&graph, &p)
    };
    kappa(y1)?;
    let hs = total / T::from_usize(2 * steps).unwrap();
    let stab = rk4(
        |_, u: &[T; 3]| {
            let k = kappa(u[0]).unwrap_or_else(|_| T::nan());
            [T::one() / speed(u[0]), u[2], -k * u[1]]
        },
        T::zero(),
        [y1, xi0, dxi0 / speed(y1)],
        hs,
        2 * steps,
    );
    if stab.iter().any(|(_, u)| u.iter().any(|v| !v.is_finite())) {
        return Err(GeomError::WindowHitsSingularity(format!("{y1}..{y2}")));
    }
    let ss: Vec<T> = stab.iter().map(|(s, _)| *s).collect();
    let xs: Vec<T> = stab.iter().map(|(_, u)| u[1]).collect();
    let dxs: Vec<T> = stab.iter().map(|(_, u)| u[2]).collect();
    let mut dev = T::zero();
    let mut tdev = T::zero();
    let mut xmax = T::zero();
    let mut wmax = T::zero();
    for (_, u) in &ytab {
        let xi_s = hermite(&ss, &xs, &dxs, u[4]);
        dev = dev.max((xi_s - u[0]).abs());
        xmax = xmax.max(u[0].abs());
        let w_pred = u[0] * u[5].exp();
        tdev = tdev.max((w_pred - u[2]).abs());
        wmax = wmax.max(u[2].abs());
    }
    let curvature = stab
        .iter()
        .map(|(s, u)| (*s, kappa(u[0]).unwrap_or_else(|_| T::nan())))
        .collect();
    Ok(CrossCheckResult {
        deviation: dev / xmax,
        transform_deviation: tdev / wmax,
        curvature,
    })
}
