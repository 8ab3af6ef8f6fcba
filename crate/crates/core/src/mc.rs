//! Monte-Carlo estimates of the SSOP from sampled fading and eavesdropper
//! fields.
//!
//! Work is split into fixed-size chunks. Chunk `i` draws from a ChaCha8
//! stream `i` keyed by the root seed, and the per-chunk statistics are
//! merged in chunk order, so results do not depend on the thread count.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::array::{array_factor_mag, ArrayConfig};
use crate::channel::{c0, gain_sq, sample_fading, FadingDraw, SystemParams};
use crate::error::{Error, Result};
use crate::exposure::{max_radius_bound, AngularGrid, PolarPoint};
use crate::special::QuadratureSpec;

/// Samples per independently seeded chunk.
pub const CHUNK_SIZE: u64 = 1000;

/// Below this many successes the binomial CI switches to Wilson's interval.
const WILSON_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_fading_draws: u64,
    pub n_ppp_trials_per_draw: u64,
    pub root_seed: u64,
    /// Two-sided confidence level of the reported interval.
    pub confidence: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_fading_draws: 10_000,
            n_ppp_trials_per_draw: 1,
            root_seed: 0,
            confidence: 0.99,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_fading_draws == 0 {
            return Err(Error::argument("n_fading_draws", "must be >= 1"));
        }
        if self.n_ppp_trials_per_draw == 0 {
            return Err(Error::argument("n_ppp_trials_per_draw", "must be >= 1"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::argument(
                "confidence",
                format!("must lie in (0, 1), got {}", self.confidence),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_samples: u64,
}

impl McEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Which estimator `estimate_ssop_mean_with` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Averages the exact conditional SSOP `1 - e^{-λ_e A}` over fading draws.
    #[default]
    RaoBlackwell,
    /// Samples an eavesdropper field for every fading draw and counts hits.
    TwoLevel,
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    successes: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return Moments {
                successes: self.successes + other.successes,
                ..other
            };
        }
        if other.n == 0 {
            return Moments {
                successes: self.successes + other.successes,
                ..self
            };
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb, nf) = (self.n as f64, other.n as f64, n as f64);
        Moments {
            n,
            mean: self.mean + delta * nb / nf,
            m2: self.m2 + other.m2 + delta * delta * na * nb / nf,
            successes: self.successes + other.successes,
        }
    }

    fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        }
    }
}

fn z_score(confidence: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(0.5 + 0.5 * confidence)
}

fn chunk_rng(root_seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `n` samples split into chunks and merges them in chunk order.
fn run_chunked<F>(n: u64, root_seed: u64, sample: F) -> Result<Moments>
where
    F: Fn(&mut ChaCha8Rng, &mut Moments) -> Result<()> + Sync,
{
    let chunks = n.div_ceil(CHUNK_SIZE);
    let parts: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(root_seed, c);
            let len = CHUNK_SIZE.min(n - c * CHUNK_SIZE);
            let mut m = Moments::default();
            for _ in 0..len {
                sample(&mut rng, &mut m)?;
            }
            Ok(m)
        })
        .collect();
    parts
        .into_iter()
        .try_fold(Moments::default(), |acc, m| Ok(acc.merge(m?)))
}

fn normal_interval(m: &Moments, z: f64) -> McEstimate {
    let p = m.mean.clamp(0.0, 1.0);
    let half = z * (m.variance() / m.n as f64).sqrt();
    McEstimate {
        p_hat: p,
        ci_low: (p - half).max(0.0).min(p),
        ci_high: (p + half).min(1.0).max(p),
        n_samples: m.n,
    }
}

fn wilson_interval(p: f64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// Interval for a proportion estimated from `trials` Bernoulli outcomes,
/// possibly grouped: normal from the sample variance of the group means,
/// Wilson when fewer than ten successes were seen.
fn binomial_estimate(m: &Moments, trials: u64, z: f64) -> McEstimate {
    if (m.successes as f64) < WILSON_THRESHOLD {
        let p = m.mean.clamp(0.0, 1.0);
        let (lo, hi) = wilson_interval(p, trials, z);
        McEstimate {
            p_hat: p,
            ci_low: lo,
            ci_high: hi,
            n_samples: m.n,
        }
    } else {
        normal_interval(m, z)
    }
}

/// Homogeneous PPP of intensity `eve_density` restricted to the disk of the
/// given radius.
pub fn sample_ppp<R: Rng + ?Sized>(
    eve_density: f64,
    radius: f64,
    rng: &mut R,
) -> Result<Vec<PolarPoint>> {
    if !(eve_density >= 0.0) || !eve_density.is_finite() {
        return Err(Error::argument("eve_density", format!("must be finite and >= 0, got {eve_density}")));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::argument("radius", format!("must be finite and >= 0, got {radius}")));
    }
    let mean = eve_density * PI * radius * radius;
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let poisson = Poisson::new(mean)
        .map_err(|e| Error::numerical("sample_ppp", format!("Poisson mean {mean}: {e}")))?;
    let count = poisson.sample(rng) as usize;
    Ok((0..count)
        .map(|_| {
            let u: f64 = rng.random();
            let theta: f64 = rng.random::<f64>() * TAU;
            PolarPoint {
                d: radius * u.sqrt(),
                theta,
            }
        })
        .collect())
}

/// Evaluates `D(θ)` for one fading draw without repeating the setup work.
struct Contour<'a> {
    cfg: &'a ArrayConfig,
    params: &'a SystemParams,
    c0: f64,
    inv_beta: f64,
    draw: FadingDraw,
    radius: f64,
}

impl<'a> Contour<'a> {
    fn new(cfg: &'a ArrayConfig, params: &'a SystemParams, draw: FadingDraw) -> Result<Self> {
        Ok(Contour {
            cfg,
            params,
            c0: c0(params)?,
            inv_beta: 1.0 / params.pathloss_exp,
            draw,
            radius: max_radius_bound(cfg, params, draw)?,
        })
    }

    fn contains(&self, z: &PolarPoint) -> bool {
        let h2 = gain_sq(self.params.rician_k, array_factor_mag(z.theta, self.cfg), self.draw);
        h2 > 0.0 && z.d < (self.c0 * h2).powf(self.inv_beta)
    }

    /// One eavesdropper field: `true` if any point lands in the region.
    fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<bool> {
        let points = sample_ppp(self.params.eve_density, self.radius, rng)?;
        Ok(points.iter().any(|z| self.contains(z)))
    }
}

/// Fraction of sampled eavesdropper fields that put at least one point in
/// the exposure region of a fixed fading draw. Uses
/// `mc.n_ppp_trials_per_draw` fields.
pub fn estimate_ssop_fixed_fading(
    draw: FadingDraw,
    cfg: &ArrayConfig,
    params: &SystemParams,
    mc: &McConfig,
) -> Result<McEstimate> {
    params.validate()?;
    mc.validate()?;
    let contour = Contour::new(cfg, params, draw)?;
    let trials = mc.n_ppp_trials_per_draw;
    let m = run_chunked(trials, mc.root_seed, |rng, m| {
        let hit = contour.trial(rng)?;
        m.successes += hit as u64;
        m.push(if hit { 1.0 } else { 0.0 });
        Ok(())
    })?;
    Ok(binomial_estimate(&m, trials, z_score(mc.confidence)))
}

/// Averaged SSOP by the default Rao–Blackwellized estimator.
pub fn estimate_ssop_mean(
    cfg: &ArrayConfig,
    params: &SystemParams,
    mc: &McConfig,
) -> Result<McEstimate> {
    estimate_ssop_mean_with(cfg, params, mc, &QuadratureSpec::default(), Method::RaoBlackwell)
}

pub fn estimate_ssop_mean_with(
    cfg: &ArrayConfig,
    params: &SystemParams,
    mc: &McConfig,
    spec: &QuadratureSpec,
    method: Method,
) -> Result<McEstimate> {
    params.validate()?;
    mc.validate()?;
    let z = z_score(mc.confidence);
    let lambda = params.eve_density;
    match method {
        Method::RaoBlackwell => {
            let grid = AngularGrid::new(cfg, spec)?;
            let m = run_chunked(mc.n_fading_draws, mc.root_seed, |rng, m| {
                let draw = sample_fading(rng);
                let area = grid.area(params, draw)?;
                m.push(-(-lambda * area).exp_m1());
                Ok(())
            })?;
            Ok(normal_interval(&m, z))
        }
        Method::TwoLevel => {
            let inner = mc.n_ppp_trials_per_draw;
            let m = run_chunked(mc.n_fading_draws, mc.root_seed, |rng, m| {
                let contour = Contour::new(cfg, params, sample_fading(rng))?;
                let mut hits = 0u64;
                for _ in 0..inner {
                    hits += contour.trial(rng)? as u64;
                }
                m.successes += hits;
                m.push(hits as f64 / inner as f64);
                Ok(())
            })?;
            Ok(binomial_estimate(&m, mc.n_fading_draws * inner, z))
        }
    }
}
