//! Uniform linear array: steering vectors, array-factor magnitude and the
//! pattern area `A₀ = ∫₀^{2π} |G(θ, θ_B)|² dθ`.
//!
//! The closed form of `A₀` is a Bessel-weighted cosine series,
//!
//! ```text
//! A₀ = 2π + 4π Σ_{n=1}^{N-1} (N-n)/N · J₀(k Δd n) · cos(k Δd n sin θ_B)
//! ```
//!
//! with `k Δd = 2π · spacing_wavelengths`. The numeric route integrates `|G|²`
//! directly and serves as the cross-check.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{integrate_periodic, j0, QuadratureSpec};

/// Geometry of a beamformed ULA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    n_elements: usize,
    spacing_wavelengths: f64,
    doe_angle: f64,
}

impl ArrayConfig {
    /// `doe_angle` is in radians and is normalized to `[0, 2π)`.
    pub fn new(n_elements: usize, spacing_wavelengths: f64, doe_angle: f64) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::argument("n_elements", "must be >= 1"));
        }
        if !(spacing_wavelengths > 0.0) || !spacing_wavelengths.is_finite() {
            return Err(Error::argument(
                "spacing_wavelengths",
                format!("must be finite and > 0, got {spacing_wavelengths}"),
            ));
        }
        if !doe_angle.is_finite() {
            return Err(Error::argument("doe_angle", "must be finite"));
        }
        let mut doe = doe_angle.rem_euclid(TAU);
        if doe >= TAU {
            doe = 0.0;
        }
        Ok(ArrayConfig {
            n_elements,
            spacing_wavelengths,
            doe_angle: doe,
        })
    }

    pub fn from_degrees(n_elements: usize, spacing_wavelengths: f64, doe_deg: f64) -> Result<Self> {
        Self::new(n_elements, spacing_wavelengths, doe_deg.to_radians())
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing_wavelengths(&self) -> f64 {
        self.spacing_wavelengths
    }

    /// Direction of emission, radians in `[0, 2π)`.
    pub fn doe_angle(&self) -> f64 {
        self.doe_angle
    }

    /// `k·Δd`, the inter-element phase scale.
    pub fn k_spacing(&self) -> f64 {
        TAU * self.spacing_wavelengths
    }

    pub fn with_n_elements(&self, n: usize) -> Result<Self> {
        Self::new(n, self.spacing_wavelengths, self.doe_angle)
    }

    pub fn with_doe_angle(&self, doe_angle: f64) -> Result<Self> {
        Self::new(self.n_elements, self.spacing_wavelengths, doe_angle)
    }
}

impl Default for ArrayConfig {
    fn default() -> Self {
        ArrayConfig {
            n_elements: 8,
            spacing_wavelengths: 0.5,
            doe_angle: 0.0,
        }
    }
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::argument(name, format!("must be finite, got {v}")))
    }
}

/// Steering vector `s(θ)`: element `i` (0-based) is `exp(-j k Δd sin θ · i)`.
pub fn steering_vector(theta: f64, cfg: &ArrayConfig) -> Result<Vec<Complex64>> {
    check_finite("theta", theta)?;
    let step = -cfg.k_spacing() * theta.sin();
    Ok((0..cfg.n_elements)
        .map(|i| Complex64::from_polar(1.0, step * i as f64))
        .collect())
}

/// `|G(θ, θ_B)|`, in `[0, √N]`.
pub fn array_factor_mag(theta: f64, cfg: &ArrayConfig) -> f64 {
    let n = cfg.n_elements as f64;
    let psi = cfg.k_spacing() * (cfg.doe_angle.sin() - theta.sin());
    let half = 0.5 * psi;
    let denom = half.sin();
    // sin(ψ/2) vanishes at ψ ≡ 0 (mod 2π): main lobe and grating lobes.
    if denom.abs() < 1e-9 {
        let sum: Complex64 = (0..cfg.n_elements)
            .map(|i| Complex64::from_polar(1.0, psi * i as f64))
            .sum();
        return (sum.norm() / n.sqrt()).min(n.sqrt());
    }
    ((n * half).sin() / denom).abs() / n.sqrt()
}

/// `q_n = J₀(k Δd n) · cos(k Δd n sin θ_B)`.
pub fn q_series(n: usize, cfg: &ArrayConfig) -> Result<f64> {
    if n == 0 {
        return Err(Error::argument("n", "must be >= 1"));
    }
    Ok(q_term(n, cfg))
}

fn q_term(n: usize, cfg: &ArrayConfig) -> f64 {
    let arg = cfg.k_spacing() * n as f64;
    j0(arg) * (arg * cfg.doe_angle.sin()).cos()
}

fn term(n: usize, cfg: &ArrayConfig) -> f64 {
    let big_n = cfg.n_elements as f64;
    4.0 * PI * (big_n - n as f64) / big_n * q_term(n, cfg)
}

/// Summation term `A₀,ₙ` for `1 ≤ n ≤ N-1`.
pub fn pattern_area_term(n: usize, cfg: &ArrayConfig) -> Result<f64> {
    if n == 0 || n >= cfg.n_elements {
        return Err(Error::argument(
            "n",
            format!("must lie in [1, {}], got {n}", cfg.n_elements.saturating_sub(1)),
        ));
    }
    Ok(term(n, cfg))
}

/// Closed-form pattern area.
pub fn pattern_area_exact(cfg: &ArrayConfig) -> f64 {
    TAU + (1..cfg.n_elements).map(|n| term(n, cfg)).sum::<f64>()
}

/// Pattern area truncated to the first `n_terms` summation terms.
pub fn pattern_area_approx(cfg: &ArrayConfig, n_terms: usize) -> Result<f64> {
    if n_terms == 0 {
        return Err(Error::argument("n_terms", "must be >= 1"));
    }
    let upper = n_terms.min(cfg.n_elements.saturating_sub(1));
    Ok(TAU + (1..=upper).map(|n| term(n, cfg)).sum::<f64>())
}

/// Smallest `n` with `|q_n| < 1e-3`, capped at `N - 1`; the default
/// truncation for [`pattern_area_approx`].
pub fn default_term_count(cfg: &ArrayConfig) -> usize {
    let last = cfg.n_elements.saturating_sub(1).max(1);
    (1..last)
        .find(|&n| q_term(n, cfg).abs() < 1e-3)
        .unwrap_or(last)
}

/// Pattern area by direct angular quadrature of `|G|²`.
pub fn pattern_area_numeric(cfg: &ArrayConfig, spec: &QuadratureSpec) -> Result<f64> {
    integrate_periodic(|t| array_factor_mag(t, cfg).powi(2), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn cfg(n: usize, spacing: f64, deg: f64) -> ArrayConfig {
        ArrayConfig::from_degrees(n, spacing, deg).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn steering_broadside_is_all_ones() {
        let s = steering_vector(0.0, &cfg(4, 0.5, 0.0)).unwrap();
        assert!(s.iter().all(|&v| close(v, Complex64::new(1.0, 0.0))));
    }

    #[test]
    fn steering_endfire_alternates() {
        let s = steering_vector(FRAC_PI_2, &cfg(2, 0.5, 0.0)).unwrap();
        assert!(close(s[0], Complex64::new(1.0, 0.0)));
        assert!(close(s[1], Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn steering_thirty_degrees_quarter_turns() {
        let s = steering_vector(PI / 6.0, &cfg(3, 0.5, 0.0)).unwrap();
        assert!(close(s[0], Complex64::new(1.0, 0.0)));
        assert!(close(s[1], Complex64::new(0.0, -1.0)));
        assert!(close(s[2], Complex64::new(-1.0, 0.0)));
        assert!(s.iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn steering_rejects_nan() {
        assert!(steering_vector(f64::NAN, &ArrayConfig::default()).is_err());
    }

    #[test]
    fn array_factor_peak_is_sqrt_n() {
        for n in [1, 2, 5, 8, 33] {
            let c = cfg(n, 0.5, 37.0);
            let g = array_factor_mag(c.doe_angle(), &c);
            assert!((g - (n as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn array_factor_endfire_null() {
        assert!(array_factor_mag(FRAC_PI_2, &cfg(8, 0.5, 0.0)) < 1e-12);
    }

    #[test]
    fn array_factor_two_elements() {
        let g = array_factor_mag(PI / 6.0, &cfg(2, 0.5, 0.0));
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn array_factor_matches_steering_sum() {
        let c = cfg(7, 0.8, 20.0);
        let wb = steering_vector(c.doe_angle(), &c).unwrap();
        for k in 0..50 {
            let theta = k as f64 * 0.127;
            let s = steering_vector(theta, &c).unwrap();
            let g: Complex64 = s.iter().zip(&wb).map(|(a, b)| a * b.conj()).sum();
            let want = g.norm() / 7f64.sqrt();
            assert!((array_factor_mag(theta, &c) - want).abs() < 1e-10);
        }
    }

    #[test]
    fn pattern_area_single_element() {
        assert_eq!(pattern_area_exact(&cfg(1, 0.5, 17.0)), TAU);
        let n = pattern_area_numeric(&cfg(1, 0.5, 17.0), &QuadratureSpec::default()).unwrap();
        assert!((n - TAU).abs() < 1e-12);
    }

    #[test]
    fn pattern_area_reported_values() {
        assert!((pattern_area_exact(&cfg(8, 0.5, 0.0)) - 4.1326).abs() <= 5e-4);
        assert!((pattern_area_exact(&cfg(8, 0.5, 90.0)) - 15.3761).abs() <= 5e-4);
        assert!((pattern_area_exact(&cfg(8, 0.5, 48.35)) - TAU).abs() <= 1e-2);
    }

    #[test]
    fn pattern_area_numeric_cross_check() {
        let spec = QuadratureSpec::default();
        let c = cfg(8, 0.5, 0.0);
        assert!((pattern_area_numeric(&c, &spec).unwrap() - 4.1326).abs() <= 1e-3);
        let c = cfg(4, 0.5, 30.0);
        let d = pattern_area_numeric(&c, &spec).unwrap() - pattern_area_exact(&c);
        assert!(d.abs() < 1e-6);
    }

    #[test]
    fn term_values() {
        // 4π·7/8·J0(π), J0(π) from mpmath.
        let t1 = pattern_area_term(1, &cfg(8, 0.5, 0.0)).unwrap();
        assert!((t1 - 3.5 * PI * -0.304_242_177_644_093_9).abs() < 1e-12);
        assert!((t1 - -3.346).abs() < 1e-3);
        // π/2·J0(7π), J0(7π) from mpmath.
        let t7 = pattern_area_term(7, &cfg(8, 0.5, 0.0)).unwrap();
        assert!((t7 - 0.5 * PI * -0.119_609_363_155_864).abs() < 1e-12, "{t7}");
        assert!((t7 - -0.189).abs() < 2e-3);
    }

    #[test]
    fn term_sign_at_endfire() {
        let c = cfg(8, 0.5, 90.0);
        for n in 1..8 {
            let t = pattern_area_term(n, &c).unwrap();
            let j = j0(PI * n as f64);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((t - sign * j.signum() * t.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn term_range_checked() {
        let c = cfg(8, 0.5, 0.0);
        assert!(pattern_area_term(0, &c).is_err());
        assert!(pattern_area_term(8, &c).is_err());
    }

    #[test]
    fn approx_truncation() {
        let c = cfg(8, 0.5, 0.0);
        let exact = pattern_area_exact(&c);
        assert!((pattern_area_approx(&c, 7).unwrap() - exact).abs() < 1e-14);
        assert_eq!(
            pattern_area_approx(&c, 7).unwrap(),
            pattern_area_approx(&c, 50).unwrap()
        );
        let one = pattern_area_approx(&c, 1).unwrap();
        assert!((one - 2.937).abs() < 1e-3, "{one}");
        assert!(pattern_area_approx(&c, 0).is_err());
    }

    #[test]
    fn q_series_cases() {
        for n in 1..20 {
            let q0 = q_series(n, &cfg(64, 0.5, 0.0)).unwrap();
            assert!((q0 - j0(PI * n as f64)).abs() < 1e-15);
            if n % 2 == 1 {
                assert!(q_series(n, &cfg(64, 0.5, 30.0)).unwrap().abs() < 1e-12);
            }
        }
        let q = q_series(1, &cfg(8, 0.5, 60.0)).unwrap();
        let want = j0(PI) * (3f64.sqrt() * PI / 2.0).cos();
        assert!((q - want).abs() < 1e-12);
        assert!(q_series(0, &cfg(8, 0.5, 0.0)).is_err());
    }

    #[test]
    fn term_identity_with_q() {
        let c = cfg(12, 0.7, 25.0);
        for n in 1..12 {
            let lhs = pattern_area_term(n, &c).unwrap();
            let rhs = 4.0 * PI * (12 - n) as f64 / 12.0 * q_series(n, &c).unwrap();
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn default_term_count_is_first_small_q() {
        // J₀(πn) stays well above 1e-3 for small n, so the full sum is used.
        let c = cfg(8, 0.5, 0.0);
        assert_eq!(default_term_count(&c), 7);
        // Half-wavelength spacing at 30° puts cos(πn/2) = 0 at n = 1.
        let c = cfg(8, 0.5, 30.0);
        assert_eq!(default_term_count(&c), 1);
        for (n, deg) in [(16, 10.0), (40, 47.0), (64, 75.0)] {
            let c = cfg(n, 0.5, deg);
            let m = default_term_count(&c);
            assert!(m <= n - 1);
            assert!((1..m).all(|j| q_series(j, &c).unwrap().abs() >= 1e-3));
        }
    }

    #[test]
    fn config_validation() {
        assert!(ArrayConfig::new(0, 0.5, 0.0).is_err());
        assert!(ArrayConfig::new(4, 0.0, 0.0).is_err());
        assert!(ArrayConfig::new(4, 0.5, f64::NAN).is_err());
        let c = ArrayConfig::new(4, 0.5, -FRAC_PI_2).unwrap();
        assert!((c.doe_angle() - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn dip_between_nine_and_twelve_degrees() {
        // A₀ for N = 8 is not monotone at 1° resolution: it dips slightly
        // between 9° and 12° before resuming its rise.
        let a = |d: f64| pattern_area_exact(&cfg(8, 0.5, d));
        assert!(a(10.0) < a(9.0));
        assert!(a(12.0) < a(11.0));
        assert!(a(13.0) > a(12.0));
        assert!(a(90.0) > a(0.0));
    }

    #[test]
    fn doubling_n_settles_the_pattern_area() {
        let a = |n: usize, d: f64| pattern_area_exact(&cfg(n, 0.5, d));
        for deg in [0.0, 30.0] {
            for n in [64, 128, 256] {
                assert!((a(n, deg) - a(2 * n, deg)).abs() <= 0.05, "{deg} {n}");
            }
        }
        // Off broadside the tail converges more slowly: the 60° gap is
        // 0.073 at N = 64 and only drops under 0.05 from N = 256.
        let gaps: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| (a(n, 60.0) - a(2 * n, 60.0)).abs()).collect();
        assert!((gaps[0] - 0.0734729).abs() < 1e-6, "{gaps:?}");
        assert!(gaps[1] > 0.05 && gaps[2] <= 0.05 && gaps[3] <= 0.05, "{gaps:?}");
    }
}
