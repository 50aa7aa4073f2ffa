//! Differential geometry of implicit surfaces `F(x, y, z) = c` in floating
//! point: Gauss curvature, geodesics by fixed-step RK4, and a numerical
//! cross-check of the variational equation along the planar geodesic.

mod compiled;
mod nvecheck;

use std::fmt::Write as _;

use thiserror::Error;

use crate::expr::{Expr, Var};
use crate::scalar::Real;
use crate::Rat;

pub use compiled::Compiled;
pub use nvecheck::{cross_validate_nve, planar_geodesic_profile, CrossCheckResult, ProfileTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("gradient vanishes at ({0})")]
    SingularGradient(String),
    #[error("state is not a unit tangent vector: {0}")]
    BadState(String),
    #[error("integration window meets a singularity near y = {0}")]
    WindowHitsSingularity(String),
    #[error("{0}")]
    Surface(String),
}

const VARS: [Var; 3] = [Var::X, Var::Y, Var::Z];

/// `F = c` with symbolic first and second derivatives.
#[derive(Clone, Debug)]
pub struct ImplicitSurface<T: Real> {
    pub f: Expr,
    pub c: Rat,
    value: Compiled<T>,
    grad: [Compiled<T>; 3],
    hess: [[Compiled<T>; 3]; 3],
    level: T,
}

pub type Vec3<T> = [T; 3];

fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn fmt_point<T: Real>(p: &Vec3<T>) -> String {
    format!("{}, {}, {}", p[0], p[1], p[2])
}

impl<T: Real> ImplicitSurface<T> {
    pub fn new(f: Expr, c: Rat) -> Self {
        let g: Vec<Expr> = VARS.iter().map(|&v| f.differentiate(v)).collect();
        let h = |i: usize, j: usize| Compiled::new(&g[i].differentiate(VARS[j]));
        ImplicitSurface {
            value: Compiled::new(&f),
            grad: [0, 1, 2].map(|i| Compiled::new(&g[i])),
            hess: [0, 1, 2].map(|i| [0, 1, 2].map(|j| h(i, j))),
            level: T::from_rat(&c),
            f,
            c,
        }
    }

    /// The graph `z = f(x, y)` as `z − f = 0`.
    pub fn graph(f: &Expr) -> Self {
        Self::new(Expr::var(Var::Z).minus(f.clone()), Rat::from_integer(0.into()))
    }

    pub fn level(&self) -> T {
        self.level
    }

    pub fn value(&self, p: &Vec3<T>) -> T {
        self.value.eval(p)
    }

    pub fn gradient(&self, p: &Vec3<T>) -> Vec3<T> {
        [0, 1, 2].map(|i| self.grad[i].eval(p))
    }

    pub fn hessian(&self, p: &Vec3<T>) -> [Vec3<T>; 3] {
        [0, 1, 2].map(|i| [0, 1, 2].map(|j| self.hess[i][j].eval(p)))
    }

    fn checked_gradient(&self, p: &Vec3<T>) -> Result<(Vec3<T>, T), GeomError> {
        let g = self.gradient(p);
        let n2 = dot(&g, &g);
        if !(n2 > T::zero()) || !n2.is_finite() {
            return Err(GeomError::SingularGradient(fmt_point(p)));
        }
        Ok((g, n2))
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det<T: Real, const N: usize>(mut m: [[T; N]; N]) -> T {
    let mut acc = T::one();
    for col in 0..N {
        let p = (col..N)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap();
        if m[p][col] == T::zero() {
            return T::zero();
        }
        if p != col {
            m.swap(p, col);
            acc = -acc;
        }
        acc = acc * m[col][col];
        for r in col + 1..N {
            let f = m[r][col] / m[col][col];
            for c in col..N {
                m[r][c] = m[r][c] - f * m[col][c];
            }
        }
    }
    acc
}

/// `K = −det [[H, ∇F], [∇Fᵀ, 0]] / |∇F|⁴`.
pub fn gauss_curvature<T: Real>(s: &ImplicitSurface<T>, p: &Vec3<T>) -> Result<T, GeomError> {
    let (g, n2) = s.checked_gradient(p)?;
    let h = s.hessian(p);
    let mut m = [[T::zero(); 4]; 4];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&h[i]);
        m[i][3] = g[i];
        m[3][i] = g[i];
    }
    Ok(-det(m) / (n2 * n2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicState<T: Real> {
    pub pos: Vec3<T>,
    pub vel: Vec3<T>,
}

impl<T: Real> GeodesicState<T> {
    /// Checks `|ṙ| = 1` and `∇F·ṙ = 0` to within `tol`.
    pub fn new(s: &ImplicitSurface<T>, pos: Vec3<T>, vel: Vec3<T>, tol: T) -> Result<Self, GeomError> {
        let (g, n2) = s.checked_gradient(&pos)?;
        let speed = dot(&vel, &vel).sqrt();
        if (speed - T::one()).abs() > tol || (dot(&g, &vel) / n2.sqrt()).abs() > tol {
            return Err(GeomError::BadState(format!("speed {speed}, normal component {}", dot(&g, &vel))));
        }
        Ok(GeodesicState { pos, vel })
    }

    /// Unit tangent obtained by projecting `dir` onto the tangent plane.
    pub fn from_direction(s: &ImplicitSurface<T>, pos: Vec3<T>, dir: Vec3<T>) -> Result<Self, GeomError> {
        let (g, n2) = s.checked_gradient(&pos)?;
        let k = dot(&g, &dir) / n2;
        let t = [0, 1, 2].map(|i| dir[i] - k * g[i]);
        let n = dot(&t, &t).sqrt();
        if !(n > T::epsilon()) {
            return Err(GeomError::BadState("direction is normal to the surface".into()));
        }
        Ok(GeodesicState {
            pos,
            vel: t.map(|v| v / n),
        })
    }
}

/// `r̈ = λ∇F` with `λ = −(ṙᵀ H ṙ)/|∇F|²`.
pub fn geodesic_rhs<T: Real>(s: &ImplicitSurface<T>, st: &GeodesicState<T>) -> Result<Vec3<T>, GeomError> {
    let (g, n2) = s.checked_gradient(&st.pos)?;
    let h = s.hessian(&st.pos);
    let hv = [0, 1, 2].map(|i| dot(&h[i], &st.vel));
    let lambda = -dot(&hv, &st.vel) / n2;
    Ok(g.map(|gi| lambda * gi))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T: Real> {
    pub s: T,
    pub state: GeodesicState<T>,
    pub f_drift: T,
    pub speed_drift: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T: Real> {
    pub samples: Vec<Sample<T>>,
    pub max_f_drift: T,
    pub max_speed_drift: T,
    /// Set when the integration stopped early.
    pub fault: Option<GeomError>,
}

fn axpy<T: Real>(a: T, x: &Vec3<T>, y: &Vec3<T>) -> Vec3<T> {
    [0, 1, 2].map(|i| y[i] + a * x[i])
}

fn rk4_step<T: Real>(s: &ImplicitSurface<T>, st: &GeodesicState<T>, h: T) -> Result<GeodesicState<T>, GeomError> {
    let half = h / T::from_f64(2.0).unwrap();
    let k1v = geodesic_rhs(s, st)?;
    let k1x = st.vel;
    let s2 = GeodesicState {
        pos: axpy(half, &k1x, &st.pos),
        vel: axpy(half, &k1v, &st.vel),
    };
    let k2v = geodesic_rhs(s, &s2)?;
    let k2x = s2.vel;
    let s3 = GeodesicState {
        pos: axpy(half, &k2x, &st.pos),
        vel: axpy(half, &k2v, &st.vel),
    };
    let k3v = geodesic_rhs(s, &s3)?;
    let k3x = s3.vel;
    let s4 = GeodesicState {
        pos: axpy(h, &k3x, &st.pos),
        vel: axpy(h, &k3v, &st.vel),
    };
    let k4v = geodesic_rhs(s, &s4)?;
    let k4x = s4.vel;
    let two = T::from_f64(2.0).unwrap();
    let w = h / T::from_f64(6.0).unwrap();
    let comb = |a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>, d: &Vec3<T>, y: &Vec3<T>| {
        [0, 1, 2].map(|i| y[i] + w * (a[i] + two * b[i] + two * c[i] + d[i]))
    };
    Ok(GeodesicState {
        pos: comb(&k1x, &k2x, &k3x, &k4x, &st.pos),
        vel: comb(&k1v, &k2v, &k3v, &k4v, &st.vel),
    })
}

fn sample<T: Real>(surf: &ImplicitSurface<T>, s: T, state: GeodesicState<T>) -> Sample<T> {
    Sample {
        s,
        f_drift: (surf.value(&state.pos) - surf.level()).abs(),
        speed_drift: (dot(&state.vel, &state.vel).sqrt() - T::one()).abs(),
        state,
    }
}

/// Classical RK4 with the step adjusted down so that it divides `length`.
/// Constraints are never projected back: the drift is the health metric.
pub fn integrate_geodesic<T: Real>(
    s: &ImplicitSurface<T>,
    ic: GeodesicState<T>,
    length: T,
    step: T,
) -> Trajectory<T> {
    assert!(step > T::zero() && length > T::zero(), "step and length must be positive");
    let n = (length / step).ceil().to_usize().unwrap_or(1).max(1);
    let h = length / T::from_usize(n).unwrap();
    let mut samples = vec![sample(s, T::zero(), ic)];
    let mut cur = ic;
    let mut fault = None;
    for k in 1..=n {
        match rk4_step(s, &cur, h) {
            Ok(next) => {
                cur = next;
                samples.push(sample(s, h * T::from_usize(k).unwrap(), cur));
            }
            Err(e) => {
                fault = Some(e);
                break;
            }
        }
    }
    let max = |f: fn(&Sample<T>) -> T| samples.iter().map(f).fold(T::zero(), T::max);
    Trajectory {
        max_f_drift: max(|x| x.f_drift),
        max_speed_drift: max(|x| x.speed_drift),
        samples,
        fault,
    }
}

impl<T: Real> Trajectory<T> {
    /// `s,x,y,z,vx,vy,vz,F_drift,speed_drift` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,x,y,z,vx,vy,vz,F_drift,speed_drift\n");
        for smp in &self.samples {
            let p = &smp.state.pos;
            let v = &smp.state.vel;
            let vals = [smp.s, p[0], p[1], p[2], v[0], v[1], v[2], smp.f_drift, smp.speed_drift];
            let row: Vec<String> = vals
                .iter()
                .map(|x| format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN)))
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}
