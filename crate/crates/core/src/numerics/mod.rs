//! Quadrature and special functions shared by the observable modules.

pub mod quad;
pub mod special;

pub use quad::{
    integrate_finite, integrate_finite_split, integrate_semi_infinite,
    integrate_semi_infinite_split, QuadratureResult, QuadratureSettings,
};
pub use special::{
    coth_half, exp_e1, exp_integral_i, li2_neg_exp, polylog, polylog_neg_exp, sigmoid, softplus,
};
