//! Rician equivalent channel, received SNR and capacity.
//!
//! The N-vector channel is never materialized. Beamforming towards `θ_B`
//! projects the scattered component onto a single `CN(0, 1)` scalar, so one
//! [`FadingDraw`] describes a realization for every eavesdropper angle.

use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Rician K-factor. `Finite(0.0)` is Rayleigh fading; `Infinite` is a
/// deterministic line-of-sight channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RicianK {
    Finite(f64),
    Infinite,
}

impl RicianK {
    pub fn new(k: f64) -> Result<Self> {
        if k == f64::INFINITY {
            Ok(RicianK::Infinite)
        } else if k.is_finite() && k >= 0.0 {
            Ok(RicianK::Finite(k))
        } else {
            Err(Error::argument(
                "rician_k",
                format!("must be >= 0 or +inf, got {k}"),
            ))
        }
    }

    pub fn is_rayleigh(&self) -> bool {
        matches!(self, RicianK::Finite(k) if *k == 0.0)
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            RicianK::Finite(k) => k,
            RicianK::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for RicianK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RicianK::Finite(k) => write!(f, "{k}"),
            RicianK::Infinite => f.write_str("inf"),
        }
    }
}

/// Link budget and secrecy parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// `P_t / σ_n²` in dB.
    pub snr_budget_db: f64,
    /// Codeword rate `R_B`, bits/s/Hz.
    pub rate_codeword: f64,
    /// Confidential rate `R_s`, bits/s/Hz.
    pub rate_secrecy: f64,
    /// Eavesdropper density per m².
    pub eve_density: f64,
    /// Path-loss exponent β in `[2, 6]`.
    pub pathloss_exp: f64,
    pub rician_k: RicianK,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            snr_budget_db: 15.0,
            rate_codeword: 3.4594,
            rate_secrecy: 1.0,
            eve_density: 1e-4,
            pathloss_exp: 2.0,
            rician_k: RicianK::Infinite,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if !self.snr_budget_db.is_finite() {
            return Err(Error::argument("snr_budget_db", "must be finite"));
        }
        if !(self.rate_secrecy > 0.0) || !self.rate_secrecy.is_finite() {
            return Err(Error::argument("rate_secrecy", "must be finite and > 0"));
        }
        if !(self.rate_codeword > self.rate_secrecy) || !self.rate_codeword.is_finite() {
            return Err(Error::argument(
                "rate_codeword",
                format!(
                    "must exceed rate_secrecy ({} <= {})",
                    self.rate_codeword, self.rate_secrecy
                ),
            ));
        }
        if !(self.eve_density >= 0.0) || !self.eve_density.is_finite() {
            return Err(Error::argument("eve_density", "must be finite and >= 0"));
        }
        if !(2.0..=6.0).contains(&self.pathloss_exp) {
            return Err(Error::argument(
                "pathloss_exp",
                format!("must lie in [2, 6], got {}", self.pathloss_exp),
            ));
        }
        if let RicianK::Finite(k) = self.rician_k {
            RicianK::new(k)?;
        }
        let c0 = self.c0_unchecked();
        if !(c0 > 0.0) || !c0.is_finite() {
            return Err(Error::argument(
                "snr_budget_db",
                format!("derived c0 = {c0} is not finite and positive"),
            ));
        }
        Ok(())
    }

    /// `P_t / σ_n²` as a linear ratio.
    pub fn snr_linear(&self) -> f64 {
        10f64.powf(self.snr_budget_db / 10.0)
    }

    fn c0_unchecked(&self) -> f64 {
        self.snr_linear() / ((self.rate_codeword - self.rate_secrecy).exp2() - 1.0)
    }

    pub fn with_k(&self, k: RicianK) -> Self {
        SystemParams {
            rician_k: k,
            ..*self
        }
    }

    pub fn with_pathloss(&self, beta: f64) -> Self {
        SystemParams {
            pathloss_exp: beta,
            ..*self
        }
    }
}

/// `c₀ = (P_t/σ_n²) / (2^{R_B - R_s} - 1)`.
pub fn c0(params: &SystemParams) -> Result<f64> {
    if !(params.rate_codeword > params.rate_secrecy) {
        return Err(Error::argument(
            "rate_codeword",
            "must exceed rate_secrecy for c0 to be defined",
        ));
    }
    let v = params.c0_unchecked();
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::numerical("c0", format!("c0 = {v}")));
    }
    Ok(v)
}

/// One realization of the projected scattered component `g = g_re + j g_im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    pub g_re: f64,
    pub g_im: f64,
}

impl FadingDraw {
    pub const ZERO: FadingDraw = FadingDraw { g_re: 0.0, g_im: 0.0 };

    pub fn new(g_re: f64, g_im: f64) -> Self {
        FadingDraw { g_re, g_im }
    }
}

/// Draws `g_re, g_im ~ N(0, 1/2)` independently.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> FadingDraw {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    FadingDraw {
        g_re: re * std::f64::consts::FRAC_1_SQRT_2,
        g_im: im * std::f64::consts::FRAC_1_SQRT_2,
    }
}

/// `|h̃|²` without argument checks, in sum-of-squares form so it is never
/// negative.
#[inline]
pub(crate) fn gain_sq(k: RicianK, g_mag: f64, draw: FadingDraw) -> f64 {
    match k {
        RicianK::Infinite => g_mag * g_mag,
        RicianK::Finite(k) if k == 0.0 => draw.g_re * draw.g_re + draw.g_im * draw.g_im,
        RicianK::Finite(k) => {
            let inv = 1.0 / (k + 1.0);
            let re = (k * inv).sqrt() * g_mag + inv.sqrt() * draw.g_re;
            re * re + draw.g_im * draw.g_im * inv
        }
    }
}

/// Squared magnitude of the equivalent channel factor for array gain
/// `g_mag = |G(θ, θ_B)|`.
pub fn equiv_gain_sq(g_mag: f64, params: &SystemParams, draw: FadingDraw) -> Result<f64> {
    if !(g_mag >= 0.0) || !g_mag.is_finite() {
        return Err(Error::argument(
            "g_mag",
            format!("must be finite and >= 0, got {g_mag}"),
        ));
    }
    if let RicianK::Finite(k) = params.rician_k {
        RicianK::new(k)?;
    }
    if !draw.g_re.is_finite() || !draw.g_im.is_finite() {
        return Err(Error::argument("draw", "fading components must be finite"));
    }
    Ok(gain_sq(params.rician_k, g_mag, draw))
}

/// Received SNR `(P_t/σ_n²) d^{-β} |h̃|²` at distance `d`.
pub fn snr_at(d: f64, g_mag: f64, params: &SystemParams, draw: FadingDraw) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::argument("d", format!("must be finite and > 0, got {d}")));
    }
    let h2 = equiv_gain_sq(g_mag, params, draw)?;
    Ok(params.snr_linear() * d.powf(-params.pathloss_exp) * h2)
}

/// Channel capacity `log₂(1 + γ)` in bits/s/Hz.
pub fn capacity_at(d: f64, g_mag: f64, params: &SystemParams, draw: FadingDraw) -> Result<f64> {
    Ok(snr_at(d, g_mag, params, draw)?.ln_1p() / std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(k: RicianK) -> SystemParams {
        SystemParams::default().with_k(k)
    }

    fn unit(k: RicianK) -> SystemParams {
        SystemParams {
            snr_budget_db: 0.0,
            rate_codeword: 2.0,
            rate_secrecy: 1.0,
            ..params(k)
        }
    }

    #[test]
    fn c0_default_set() {
        let v = c0(&SystemParams::default()).unwrap();
        // 10^1.5 / (2^2.4594 - 1)
        let want = 10f64.powf(1.5) / (2f64.powf(2.4594) - 1.0);
        assert_eq!(v, want);
        assert!((v - 7.027).abs() < 1e-3);
    }

    #[test]
    fn c0_unit() {
        assert!((c0(&unit(RicianK::Infinite)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn c0_rejects_inverted_rates() {
        let p = SystemParams {
            rate_codeword: 1.0,
            rate_secrecy: 1.0,
            ..SystemParams::default()
        };
        assert!(c0(&p).is_err());
        assert!(p.validate().is_err());
    }

    #[test]
    fn gain_rayleigh() {
        let v = equiv_gain_sq(3.0, &params(RicianK::Finite(0.0)), FadingDraw::new(0.3, -0.4));
        assert!((v.unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn gain_deterministic() {
        let v = equiv_gain_sq(8f64.sqrt(), &params(RicianK::Infinite), FadingDraw::new(1.0, 1.0));
        assert!((v.unwrap() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn gain_unit_k() {
        let v = equiv_gain_sq(1.0, &params(RicianK::Finite(1.0)), FadingDraw::new(0.5, -0.5));
        assert!((v.unwrap() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn gain_matches_expanded_form() {
        let k = 3.7;
        let g = 1.3;
        let d = FadingDraw::new(-0.8, 0.45);
        let expanded = k * g * g / (k + 1.0)
            + (d.g_re * d.g_re + d.g_im * d.g_im) / (k + 1.0)
            + 2.0 * k.sqrt() * g * d.g_re / (k + 1.0);
        let v = equiv_gain_sq(g, &params(RicianK::Finite(k)), d).unwrap();
        assert!((v - expanded).abs() < 1e-14);
    }

    #[test]
    fn gain_rejects_negative() {
        assert!(equiv_gain_sq(-1.0, &params(RicianK::Infinite), FadingDraw::ZERO).is_err());
        assert!(equiv_gain_sq(1.0, &params(RicianK::Finite(-1.0)), FadingDraw::ZERO).is_err());
    }

    #[test]
    fn large_k_approaches_deterministic() {
        let d = FadingDraw::new(0.7, -1.1);
        // The cross term is O(|g|/(√K·g_mag)), so K = 1e6 is within 1e-3 only
        // once g_mag is large relative to the scattered draw.
        for g in [1.5, 2.0, 2.8] {
            let big = equiv_gain_sq(g, &params(RicianK::Finite(1e6)), d).unwrap();
            let inf = equiv_gain_sq(g, &params(RicianK::Infinite), d).unwrap();
            assert!((big - inf).abs() / inf < 1e-3);
        }
        for g in [0.1, 0.5, 1.0, 2.8] {
            let big = equiv_gain_sq(g, &params(RicianK::Finite(1e9)), d).unwrap();
            let inf = equiv_gain_sq(g, &params(RicianK::Infinite), d).unwrap();
            assert!((big - inf).abs() / inf < 1e-3);
        }
    }

    #[test]
    fn sampling_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let draws: Vec<_> = (0..n).map(|_| sample_fading(&mut rng)).collect();
        let sigma = 0.5f64.sqrt();
        for part in [|d: &FadingDraw| d.g_re, |d: &FadingDraw| d.g_im] {
            let mean = draws.iter().map(part).sum::<f64>() / n as f64;
            let var = draws.iter().map(|d| (part(d) - mean).powi(2)).sum::<f64>() / n as f64;
            assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt());
            assert!((var - 0.5).abs() < 0.025);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a: Vec<_> = {
            let mut r = ChaCha8Rng::seed_from_u64(99);
            (0..16).map(|_| sample_fading(&mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = ChaCha8Rng::seed_from_u64(99);
            (0..16).map(|_| sample_fading(&mut r)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn mean_gain_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws: Vec<_> = (0..100_000).map(|_| sample_fading(&mut rng)).collect();
        for k in [0.0, 1.0, 10.0] {
            for g in [0.0, 1.0, 8f64.sqrt()] {
                let p = params(RicianK::Finite(k));
                let mean = draws
                    .iter()
                    .map(|&d| equiv_gain_sq(g, &p, d).unwrap())
                    .sum::<f64>()
                    / draws.len() as f64;
                let want = (k * g * g + 1.0) / (k + 1.0);
                assert!((mean - want).abs() / want < 0.02, "K={k} g={g}: {mean} vs {want}");
            }
        }
    }

    #[test]
    fn snr_cases() {
        let p = unit(RicianK::Infinite);
        assert!((snr_at(1.0, 1.0, &p, FadingDraw::ZERO).unwrap() - 1.0).abs() < 1e-15);
        assert!((snr_at(2.0, 1.0, &p, FadingDraw::ZERO).unwrap() - 0.25).abs() < 1e-15);
        let g = snr_at(1.0, 8f64.sqrt(), &SystemParams::default(), FadingDraw::ZERO).unwrap();
        assert!((g - 252.98).abs() < 0.01);
        assert!(snr_at(0.0, 1.0, &p, FadingDraw::ZERO).is_err());
        assert!(snr_at(-1.0, 1.0, &p, FadingDraw::ZERO).is_err());
    }

    #[test]
    fn capacity_cases() {
        let p = unit(RicianK::Infinite);
        assert_eq!(capacity_at(1.0, 0.0, &p, FadingDraw::ZERO).unwrap(), 0.0);
        assert!((capacity_at(1.0, 1.0, &p, FadingDraw::ZERO).unwrap() - 1.0).abs() < 1e-15);
        let c = capacity_at(1.0, 8f64.sqrt(), &SystemParams::default(), FadingDraw::ZERO).unwrap();
        assert!((c - 7.989).abs() < 1e-3);
    }

    #[test]
    fn capacity_monotone() {
        let p = params(RicianK::Finite(2.0));
        let d = FadingDraw::new(0.2, 0.1);
        let mut last = f64::INFINITY;
        for i in 1..50 {
            let c = capacity_at(i as f64 * 0.5, 1.0, &p, d).unwrap();
            assert!(c < last);
            last = c;
        }
        let mut last = -1.0;
        for i in 0..50 {
            let c = capacity_at(3.0, i as f64 * 0.05, &p, d).unwrap();
            assert!(c > last);
            last = c;
        }
    }

    #[test]
    fn params_validation() {
        assert!(SystemParams::default().validate().is_ok());
        assert!(SystemParams::default().with_pathloss(1.5).validate().is_err());
        assert!(SystemParams::default().with_pathloss(6.5).validate().is_err());
        let p = SystemParams {
            eve_density: -1.0,
            ..SystemParams::default()
        };
        assert!(p.validate().is_err());
        assert!(RicianK::new(f64::NAN).is_err());
        assert_eq!(RicianK::new(f64::INFINITY).unwrap(), RicianK::Infinite);
    }
}
