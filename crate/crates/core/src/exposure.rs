//! Exposure region: the set of points where an eavesdropper's capacity
//! exceeds `R_B - R_s`. In polar form it is `{(d, θ) : d < D(θ)}` with
//! `D(θ) = (c₀ |h̃(θ)|²)^{1/β}`.

use std::f64::consts::TAU;

use crate::array::{array_factor_mag, ArrayConfig};
use crate::channel::{c0, gain_sq, FadingDraw, RicianK, SystemParams};
use crate::error::{Error, Result};
use crate::special::QuadratureSpec;

/// A user location relative to the access point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    /// Distance in meters.
    pub d: f64,
    /// Angle in radians, `[0, 2π)`.
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(d: f64, theta: f64) -> Result<Self> {
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::argument("d", format!("must be finite and >= 0, got {d}")));
        }
        if !theta.is_finite() {
            return Err(Error::argument("theta", "must be finite"));
        }
        Ok(PolarPoint {
            d,
            theta: theta.rem_euclid(TAU) % TAU,
        })
    }
}

/// `x^{2/β}`, with the integer exponents `β = 2, 3, 4` on faster paths.
#[inline]
pub(crate) fn pow_two_over(x: f64, beta: f64) -> f64 {
    if beta == 2.0 {
        x
    } else if beta == 4.0 {
        x.sqrt()
    } else if beta == 3.0 {
        let r = x.cbrt();
        r * r
    } else {
        x.powf(2.0 / beta)
    }
}

/// `|G(θ, θ_B)|` sampled on a uniform angular grid.
///
/// Shared by every routine that integrates over the eavesdropper angle so the
/// array factor is evaluated once per configuration.
#[derive(Debug, Clone)]
pub struct AngularGrid {
    gains: Vec<f64>,
    step: f64,
}

impl AngularGrid {
    pub fn new(cfg: &ArrayConfig, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.angular_nodes;
        let step = TAU / n as f64;
        let gains = (0..n)
            .map(|k| array_factor_mag(k as f64 * step, cfg))
            .collect();
        Ok(AngularGrid { gains, step })
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `∫₀^{2π} (|h̃(θ)|²)^{2/β} dθ` for one fading draw.
    pub fn integrate_gain_power(&self, k: RicianK, beta: f64, draw: FadingDraw) -> f64 {
        let sum: f64 = self
            .gains
            .iter()
            .map(|&g| pow_two_over(gain_sq(k, g, draw), beta))
            .sum();
        sum * self.step
    }

    /// Exposure-region area for one fading draw.
    pub fn area(&self, params: &SystemParams, draw: FadingDraw) -> Result<f64> {
        let c0 = c0(params)?;
        let beta = params.pathloss_exp;
        let integral = self.integrate_gain_power(params.rician_k, beta, draw);
        let area = 0.5 * pow_two_over(c0, beta) * integral;
        if !area.is_finite() {
            return Err(Error::numerical("er_area", format!("area = {area}")));
        }
        Ok(area)
    }
}

fn radius_from_gain(h2: f64, params: &SystemParams) -> Result<f64> {
    if h2 == 0.0 {
        return Ok(0.0);
    }
    Ok((c0(params)? * h2).powf(1.0 / params.pathloss_exp))
}

/// Contour `D(θ)` of the exposure region for one fading draw.
pub fn er_radius(
    theta: f64,
    cfg: &ArrayConfig,
    params: &SystemParams,
    draw: FadingDraw,
) -> Result<f64> {
    let h2 = gain_sq(params.rician_k, array_factor_mag(theta, cfg), draw);
    radius_from_gain(h2, params)
}

/// Strict membership `z.d < D(z.θ)`.
pub fn er_contains(
    z: PolarPoint,
    cfg: &ArrayConfig,
    params: &SystemParams,
    draw: FadingDraw,
) -> Result<bool> {
    Ok(z.d < er_radius(z.theta, cfg, params, draw)?)
}

/// Area `A = ½ c₀^{2/β} ∫₀^{2π} (|h̃(θ)|²)^{2/β} dθ` with the draw held fixed.
pub fn er_area(
    cfg: &ArrayConfig,
    params: &SystemParams,
    draw: FadingDraw,
    spec: &QuadratureSpec,
) -> Result<f64> {
    AngularGrid::new(cfg, spec)?.area(params, draw)
}

/// Largest distance at which Bob still decodes at rate `R_B`.
pub fn reliability_radius(
    cfg: &ArrayConfig,
    params: &SystemParams,
    draw: FadingDraw,
) -> Result<f64> {
    let g = array_factor_mag(cfg.doe_angle(), cfg);
    let h2 = gain_sq(params.rician_k, g, draw);
    if h2 == 0.0 {
        return Ok(0.0);
    }
    let threshold = params.rate_codeword.exp2() - 1.0;
    Ok((params.snr_linear() * h2 / threshold).powf(1.0 / params.pathloss_exp))
}

/// Upper bound on `max_θ D(θ)` for one draw.
///
/// `|G|` ranges over `[0, √N]` and `|h̃|²` is convex in `|G|`, so the larger of
/// the two endpoint values bounds the whole contour.
pub fn max_radius_bound(
    cfg: &ArrayConfig,
    params: &SystemParams,
    draw: FadingDraw,
) -> Result<f64> {
    let k = params.rician_k;
    let peak = (cfg.n_elements() as f64).sqrt();
    let h2 = gain_sq(k, peak, draw).max(gain_sq(k, 0.0, draw));
    radius_from_gain(h2, params)
}
