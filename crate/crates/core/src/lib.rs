//! Exact and numerical machinery for deciding non-integrability of
//! geodesic flows on symmetric surfaces via the variational equation along
//! a planar geodesic and Kovacic's algorithm.

pub mod exact;
pub mod expr;
pub mod geom;
pub mod interval;
pub mod kovacic;
pub mod numfield;
pub mod nve;
pub mod scalar;

/// Arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
pub use exact::{QPoly, RatFun};
pub use interval::{CBox, Dyadic, RInt};

pub type Surface = geom::ImplicitSurface<f64>;
pub type State = geom::GeodesicState<f64>;
pub type Trajectory = geom::Trajectory<f64>;
pub type CrossCheck = geom::CrossCheckResult<f64>;
pub type Surface32 = geom::ImplicitSurface<f32>;
