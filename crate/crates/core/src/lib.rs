//! The Farlie–Gumbel–Morgenstern bivariate law with linear exponential
//! marginals: distribution functions, reliability measures, extremes,
//! dependence diagnostics and two-dimensional failure processes.
//!
//! Every closed form is paired with an independent numerical route
//! (quadrature, finite differences or simulation) so the two can be checked
//! against each other.

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dependence;
pub mod error;
pub mod extremes;
pub mod failure_process;
pub mod joint;
pub mod marginal;
pub mod moments;
pub mod numerics;

pub use error::{Error, Result};
pub use joint::{conditional_copula_quantile, BleFgmParams};
pub use marginal::LinExpParams;
