//! Spatial secrecy outage probability: instantaneous, averaged over fading,
//! the closed-form Jensen upper bound and its truncated approximations.

use std::f64::consts::PI;

use crate::array::{pattern_area_approx, pattern_area_exact, ArrayConfig};
use crate::channel::{c0, FadingDraw, RicianK, SystemParams};
use crate::error::{Error, Result};
use crate::exposure::{pow_two_over, AngularGrid};
use crate::special::{integrate_half_line, GaussHermite, QuadratureSpec};

/// Quadrature overshoot outside `[0, 1]` that is silently clamped.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Averaged SSOP, its upper bound and their ratio for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsopResult {
    pub p_mean: f64,
    pub p_upper: f64,
    /// `p_upper / p_mean`; `None` when `p_mean` is zero.
    pub eta: Option<f64>,
    pub a0: f64,
    pub quadrature_used: QuadratureSpec,
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::argument(name, format!("must be finite and >= 0, got {v}")))
    }
}

fn clamp_probability(context: &'static str, p: f64) -> Result<f64> {
    if !p.is_finite() || p < -CLAMP_TOLERANCE || p > 1.0 + CLAMP_TOLERANCE {
        return Err(Error::numerical(context, format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Poisson probability that exactly `m` eavesdroppers fall in a region of
/// area `area`.
pub fn prob_m_eves(m: u32, area: f64, eve_density: f64) -> Result<f64> {
    check_nonneg("area", area)?;
    check_nonneg("eve_density", eve_density)?;
    let mu = eve_density * area;
    if mu == 0.0 {
        return Ok(if m == 0 { 1.0 } else { 0.0 });
    }
    let ln_fact: f64 = (2..=m).map(|i| (i as f64).ln()).sum();
    Ok((m as f64 * mu.ln() - mu - ln_fact).exp())
}

/// SSOP for a fixed region: `1 - e^{-λ_e A}`.
pub fn ssop_instant(area: f64, eve_density: f64) -> Result<f64> {
    check_nonneg("area", area)?;
    check_nonneg("eve_density", eve_density)?;
    Ok(-(-eve_density * area).exp_m1())
}

/// SSOP averaged over the Rician fading.
pub fn ssop_mean(cfg: &ArrayConfig, params: &SystemParams, spec: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    spec.validate()?;
    let grid = AngularGrid::new(cfg, spec)?;
    ssop_mean_on_grid(&grid, params, spec)
}

pub(crate) fn ssop_mean_on_grid(
    grid: &AngularGrid,
    params: &SystemParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let lambda = params.eve_density;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let beta = params.pathloss_exp;
    let c0_pow = pow_two_over(c0(params)?, beta);
    let scale = 0.5 * lambda * c0_pow;
    let p = match params.rician_k {
        RicianK::Infinite => {
            let integral = grid.integrate_gain_power(RicianK::Infinite, beta, FadingDraw::ZERO);
            -(-scale * integral).exp_m1()
        }
        k if k.is_rayleigh() => {
            // |g|² ~ Exp(1) and the region is a disk of area π c₀^{2/β} t^{2/β}.
            let a = lambda * PI * c0_pow;
            integrate_half_line(|t| -(-a * pow_two_over(t, beta)).exp_m1() * (-t).exp())?
        }
        k => {
            let rule = GaussHermite::new(spec.hermite_nodes)?;
            let nodes = rule.nodes();
            let weights = rule.weights();
            let n = rule.len();
            // The integrand depends on y only through y², so fold the
            // symmetric half of the y-nodes.
            let half = n / 2;
            let mut total = 0.0;
            for (&x, &wx) in nodes.iter().zip(weights) {
                let mut row = 0.0;
                for j in half..n {
                    let y = nodes[j];
                    let wy = if n % 2 == 1 && j == half {
                        weights[j]
                    } else {
                        2.0 * weights[j]
                    };
                    let integral = grid.integrate_gain_power(k, beta, FadingDraw::new(x, y));
                    let v = -(-scale * integral).exp_m1();
                    if !v.is_finite() {
                        return Err(Error::numerical(
                            "ssop_mean",
                            format!("integrand is {v} at node ({x}, {y})"),
                        ));
                    }
                    row += wy * v;
                }
                total += wx * row;
            }
            total
        }
    };
    clamp_probability("ssop_mean", p)
}

/// Closed-form upper bound on the averaged SSOP.
pub fn ssop_upper(cfg: &ArrayConfig, params: &SystemParams) -> Result<f64> {
    params.validate()?;
    ssop_upper_with_area(pattern_area_exact(cfg), params)
}

fn ssop_upper_with_area(a0: f64, params: &SystemParams) -> Result<f64> {
    let lambda = params.eve_density;
    let beta = params.pathloss_exp;
    let c0 = c0(params)?;
    let mean_gain = match params.rician_k {
        RicianK::Infinite => a0 / (2.0 * PI),
        RicianK::Finite(k) => k * a0 / (2.0 * PI * (k + 1.0)) + 1.0 / (k + 1.0),
    };
    let exponent = lambda * PI * pow_two_over(c0 * mean_gain, beta);
    clamp_probability("ssop_upper", -(-exponent).exp_m1())
}

/// Upper bound with `A₀` truncated to its first `n_terms` series terms.
///
/// Only defined for the deterministic channel with `β = 2`, where the bound
/// is exact.
pub fn ssop_upper_approx(cfg: &ArrayConfig, params: &SystemParams, n_terms: usize) -> Result<f64> {
    params.validate()?;
    if params.rician_k != RicianK::Infinite {
        return Err(Error::UnsupportedRegime {
            op: "ssop_upper_approx",
            detail: format!("requires K = inf, got K = {}", params.rician_k),
        });
    }
    if params.pathloss_exp != 2.0 {
        return Err(Error::UnsupportedRegime {
            op: "ssop_upper_approx",
            detail: format!("requires beta = 2, got {}", params.pathloss_exp),
        });
    }
    let a0 = pattern_area_approx(cfg, n_terms)?;
    let exponent = 0.5 * params.eve_density * c0(params)? * a0;
    clamp_probability("ssop_upper_approx", -(-exponent).exp_m1())
}

/// Tightness ratio `η = p̄_up / p̄`.
pub fn tightness_ratio(
    cfg: &ArrayConfig,
    params: &SystemParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mean = ssop_mean(cfg, params, spec)?;
    if mean == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(ssop_upper(cfg, params)? / mean)
}

/// Evaluates `A₀`, the averaged SSOP, the bound and `η` in one pass.
pub fn evaluate(cfg: &ArrayConfig, params: &SystemParams, spec: &QuadratureSpec) -> Result<SsopResult> {
    let p_mean = ssop_mean(cfg, params, spec)?;
    let p_upper = ssop_upper(cfg, params)?;
    let eta = (p_mean > 0.0).then(|| p_upper / p_mean);
    Ok(SsopResult {
        p_mean,
        p_upper,
        eta,
        a0: pattern_area_exact(cfg),
        quadrature_used: *spec,
    })
}
