//! Spatial secrecy outage analysis for exposure-region beamforming with a
//! uniform linear array over Rician fading, with eavesdroppers drawn from a
//! homogeneous Poisson point process.
//!
//! Angles are radians throughout this crate.

pub mod analytics;
pub mod array;
pub mod channel;
mod error;
pub mod exposure;
pub mod mc;
pub mod special;

pub use analytics::{
    evaluate, prob_m_eves, ssop_instant, ssop_mean, ssop_upper, ssop_upper_approx,
    tightness_ratio, SsopResult,
};
pub use array::{
    array_factor_mag, pattern_area_approx, pattern_area_exact, pattern_area_numeric,
    pattern_area_term, q_series, steering_vector, ArrayConfig,
};
pub use channel::{
    c0, capacity_at, equiv_gain_sq, sample_fading, snr_at, FadingDraw, RicianK, SystemParams,
};
pub use error::{Error, Result};
pub use exposure::{er_area, er_contains, er_radius, max_radius_bound, reliability_radius, PolarPoint};
pub use mc::{
    estimate_ssop_fixed_fading, estimate_ssop_mean, estimate_ssop_mean_with, sample_ppp, McConfig,
    McEstimate, Method,
};
pub use special::{bessel_j0, gauss_hermite_2d, integrate_periodic, GaussHermite, QuadratureSpec};
