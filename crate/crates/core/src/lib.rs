//! Deep Fourier residual networks that approximate piecewise-smooth functions
//! on `[-1, 1]` without Gibbs oscillations.
//!
//! A width-one sign network built from a fixed-point iteration absorbs the
//! jump. A trigonometric Hermite polynomial then matches the one-sided
//! derivatives at the breakpoint, and the remaining smooth residual is
//! handled by a Fourier series.

pub mod error;
pub mod hermite;
pub mod jets;
pub mod jump;
pub mod metrics;
pub mod network;
pub mod piecewise;
pub mod quadrature;
pub mod sign;
pub mod smooth;
pub mod targets;

pub use error::{Error, Result};
pub use hermite::{hermite_endpoint, mode_frequency, TrigPoly};
pub use jets::{Jet, MAX_JET_ORDER};
pub use jump::{build_jump_h, chain_rule_matrix, q_derivs_at, z_profile, ChainRuleMatrix, ZProfile};
pub use metrics::{fit_rate, gibbs_support_width, lp_error, max_overshoot, RateFit};
pub use network::{Branch, FourierResNet, Layer};
pub use piecewise::{build_piecewise_net, component_views, BuildSpec, Components, ErrorSplit};
pub use quadrature::{QuadratureConfig, QuadratureRule};
pub use sign::{build_sign_net, phi, sign_error_bound, truncated_sign_series};
pub use smooth::{build_smooth_branch, fourier_coeffs, SmoothApprox};
pub use targets::{registered_targets, PiecewiseTarget, Side, TARGET_NAMES};
