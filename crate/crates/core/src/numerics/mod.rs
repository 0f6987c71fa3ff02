//! Numerical substrate: special functions, adaptive quadrature, finite
//! differences and a guarded summation engine for asymptotic series.

mod diff;
mod quadrature;
mod series;
mod special;

pub use diff::{default_step, finite_diff, finite_diff_mixed, StencilDomain};
pub use quadrature::{
    integrate_interval, integrate_quadrant, integrate_ray, integrate_rect, integrate_tail,
    QuadValue, QuadratureSpec,
};
pub(crate) use series::diagonal as series_diagonal;
pub use series::{sum_guarded, SeriesResult, SummationMode, DEFAULT_SERIES_CAP};
pub use special::{erfc, erfcx, gauss_linexp_integral};
