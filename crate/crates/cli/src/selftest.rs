//! Built-in oracle and invariant checks, grouped by library module.
//!
//! Every check is deterministic, so two runs print identical reports.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssop_core::{
    array_factor_mag, bessel_j0, c0, capacity_at, er_area, er_contains, estimate_ssop_fixed_fading,
    estimate_ssop_mean, gauss_hermite_2d, integrate_periodic, pattern_area_exact,
    pattern_area_numeric, ssop_instant, ssop_mean, ssop_upper, ArrayConfig, FadingDraw,
    GaussHermite, McConfig, PolarPoint, QuadratureSpec, RicianK, SystemParams,
};

use crate::format::fmt_float;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {}::{} observed={} expected={} tol={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.module,
                c.name,
                fmt_float(c.observed),
                fmt_float(c.expected),
                fmt_float(c.tolerance),
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            s,
            "{} of {} checks passed",
            self.checks.len() - failed,
            self.checks.len()
        );
        s
    }
}

struct Checks(Vec<Check>);

impl Checks {
    /// Passes when `|observed - expected| <= tolerance`.
    fn close(&mut self, module: &'static str, name: &'static str, observed: f64, expected: f64, tolerance: f64) {
        let passed = (observed - expected).abs() <= tolerance;
        self.0.push(Check { module, name, observed, expected, tolerance, passed });
    }

    /// Passes when the condition holds; observed/expected are informational.
    fn holds(&mut self, module: &'static str, name: &'static str, observed: f64, expected: f64, ok: bool) {
        self.0.push(Check { module, name, observed, expected, tolerance: 0.0, passed: ok });
    }

    /// Records a library error as a failed check.
    fn failed(&mut self, module: &'static str, name: &'static str) {
        self.0.push(Check {
            module,
            name,
            observed: f64::NAN,
            expected: f64::NAN,
            tolerance: 0.0,
            passed: false,
        });
    }
}

/// Runs every check with the library's own J₀.
pub fn run_selftest() -> Report {
    run_selftest_with(&|x| bessel_j0(x).unwrap_or(f64::NAN))
}

/// Runs every check, taking the J₀ implementation under test as a parameter.
pub fn run_selftest_with(j0: &dyn Fn(f64) -> f64) -> Report {
    let mut c = Checks(Vec::new());
    special_functions(&mut c, j0);
    macro_rules! guarded {
        ($module:literal, $f:expr) => {
            if $f(&mut c).is_err() {
                c.failed($module, "library_error");
            }
        };
    }
    guarded!("array_geometry", array_geometry);
    guarded!("channel_model", channel_model);
    guarded!("exposure_region", exposure_region);
    guarded!("ssop_analytics", ssop_analytics);
    guarded!("mc_sim", mc_sim);
    Report { checks: c.0 }
}

/// Running maximum that lets NaN win, so a broken value cannot hide.
fn nan_max(acc: f64, x: f64) -> f64 {
    if x.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

/// `(1/π) ∫₀^π cos(x sin τ) dτ` by composite Simpson.
fn j0_integral(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let f = |t: f64| (x * t.sin()).cos();
    let mut s = f(0.0) + f(PI);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
    }
    s * h / 3.0 / PI
}

fn special_functions(c: &mut Checks, j0: &dyn Fn(f64) -> f64) {
    const M: &str = "special_functions";
    // mpmath reference values.
    let table = [
        (0.0, 1.0),
        (1.0, 0.765_197_686_557_966_6),
        (PI, -0.304_242_177_644_093_9),
        (2.404_825_557_695_773, 0.0),
        (8.0, 0.171_650_807_137_553_906),
        (12.5, 0.146_884_054_700_421_102),
        (25.0, 0.096_266_783_275_958_116_2),
        (200.0, -0.015_437_439_930_565_091_6),
    ];
    let worst = table.iter().map(|&(x, v)| (j0(x) - v).abs()).fold(0.0, nan_max);
    c.close(M, "j0_reference_values", worst, 0.0, 1e-10);

    let worst = (0..=200)
        .map(|i| {
            let x = 0.15 * i as f64;
            (j0(x) - j0_integral(x)).abs()
        })
        .fold(0.0, nan_max);
    c.close(M, "j0_integral_representation", worst, 0.0, 1e-8);

    let rule = GaussHermite::new(8).expect("eight nodes");
    let worst = (0..=15)
        .map(|deg| {
            let got: f64 = rule.nodes().iter().zip(rule.weights()).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 {
                0.0
            } else {
                (1..=deg / 2).map(|j| (2 * j - 1) as f64 / 2.0).product()
            };
            (got - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, nan_max);
    c.close(M, "hermite_polynomial_exactness", worst, 0.0, 1e-10);

    let spec = QuadratureSpec::new(16, 8, 1e-9).expect("static spec");
    match integrate_periodic(|t| (3.0 * t).cos().powi(2), &spec) {
        Ok(v) => c.close(M, "periodic_rule_exactness", v, PI, 1e-13),
        Err(_) => c.failed(M, "periodic_rule_exactness"),
    }
}

fn array_geometry(c: &mut Checks) -> ssop_core::Result<()> {
    const M: &str = "array_geometry";
    let cfg = |deg| ArrayConfig::from_degrees(8, 0.5, deg);
    c.close(M, "pattern_area_broadside", pattern_area_exact(&cfg(0.0)?), 4.1326, 5e-4);
    c.close(M, "pattern_area_endfire", pattern_area_exact(&cfg(90.0)?), 15.3761, 5e-4);
    c.close(M, "pattern_area_isotropic_angle", pattern_area_exact(&cfg(48.35)?), TAU, 1e-2);

    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for n in 1..=16 {
        for deg in (0..=90).step_by(15) {
            for spacing in [0.25, 0.5, 1.0] {
                let a = ArrayConfig::from_degrees(n, spacing, deg as f64)?;
                worst = nan_max(worst, (pattern_area_numeric(&a, &spec)? - pattern_area_exact(&a)).abs());
            }
        }
    }
    c.close(M, "series_matches_quadrature", worst, 0.0, 1e-6);

    let a = ArrayConfig::from_degrees(12, 0.4, 37.0)?;
    c.close(M, "peak_gain", array_factor_mag(a.doe_angle(), &a), 12f64.sqrt(), 1e-12);
    Ok(())
}

fn channel_model(c: &mut Checks) -> ssop_core::Result<()> {
    const M: &str = "channel_model";
    let p = SystemParams::default();
    let want = 10f64.powf(1.5) / (2f64.powf(3.4594 - 1.0) - 1.0);
    c.close(M, "c0_default_parameters", c0(&p)?, want, 1e-12 * want);

    let (k, g) = (3.0, 1.7);
    let params = p.with_k(RicianK::Finite(k));
    let spec = QuadratureSpec::new(16, 16, 1e-9)?;
    let mean = gauss_hermite_2d(
        |x, y| ssop_core::equiv_gain_sq(g, &params, FadingDraw::new(x, y)).unwrap_or(f64::NAN),
        &spec,
    )?;
    c.close(M, "mean_gain_identity", mean, (k * g * g + 1.0) / (k + 1.0), 1e-12);
    Ok(())
}

fn exposure_region(c: &mut Checks) -> ssop_core::Result<()> {
    const M: &str = "exposure_region";
    let cfg = ArrayConfig::from_degrees(8, 0.5, 20.0)?;
    let p = SystemParams::default();
    let area = er_area(&cfg, &p, FadingDraw::ZERO, &QuadratureSpec::default())?;
    let want = 0.5 * c0(&p)? * pattern_area_exact(&cfg);
    c.close(M, "area_deterministic_square_law", area, want, 1e-9 * want);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let params = p.with_k(RicianK::Finite(2.0)).with_pathloss(3.0);
    let threshold = params.rate_codeword - params.rate_secrecy;
    let mut mismatches = 0u32;
    for _ in 0..2000 {
        let draw = ssop_core::sample_fading(&mut rng);
        let z = PolarPoint::new(rng.random::<f64>() * 8.0, rng.random::<f64>() * TAU)?;
        if z.d == 0.0 {
            continue;
        }
        let cap = capacity_at(z.d, array_factor_mag(z.theta, &cfg), &params, draw)?;
        if (cap - threshold).abs() > 1e-9 && er_contains(z, &cfg, &params, draw)? != (cap > threshold) {
            mismatches += 1;
        }
    }
    c.close(M, "membership_matches_capacity", mismatches as f64, 0.0, 0.0);
    Ok(())
}

fn ssop_analytics(c: &mut Checks) -> ssop_core::Result<()> {
    const M: &str = "ssop_analytics";
    let spec = QuadratureSpec::default();
    let ray = SystemParams::default().with_k(RicianK::Finite(0.0));
    let x = ray.eve_density * PI * c0(&ray)?;
    let want = 1.0 - 1.0 / (1.0 + x);
    let got = ssop_mean(&ArrayConfig::default(), &ray, &spec)?;
    c.close(M, "rayleigh_closed_form", got, want, 1e-6 * want);

    let det = SystemParams::default();
    let mut worst = 0.0f64;
    let mut spread = (f64::INFINITY, f64::NEG_INFINITY);
    for n in [1, 2, 4, 8, 16] {
        for deg in [0.0, 30.0, 60.0, 90.0] {
            let cfg = ArrayConfig::from_degrees(n, 0.5, deg)?;
            worst = nan_max(worst, (ssop_upper(&cfg, &det)? - ssop_mean(&cfg, &det, &spec)?).abs());
            let r = ssop_mean(&cfg, &ray.with_pathloss(3.0), &spec)?;
            spread = (spread.0.min(r), spread.1.max(r));
        }
    }
    c.close(M, "jensen_collapse", worst, 0.0, 1e-9);
    c.close(M, "rayleigh_ignores_array", spread.1 - spread.0, 0.0, 0.0);

    let coarse = QuadratureSpec::new(512, 32, 1e-9)?;
    let mut slack = f64::INFINITY;
    for k in [RicianK::Finite(0.0), RicianK::Finite(1.0), RicianK::Finite(10.0), RicianK::Infinite] {
        for beta in [2.0, 3.0, 4.0, 6.0] {
            for (n, deg) in [(2, 0.0), (8, 60.0)] {
                let cfg = ArrayConfig::from_degrees(n, 0.5, deg)?;
                let p = SystemParams::default().with_k(k).with_pathloss(beta);
                slack = slack.min(ssop_upper(&cfg, &p)? - ssop_mean(&cfg, &p, &coarse)?);
            }
        }
    }
    c.holds(M, "bound_dominates_mean", slack, 0.0, slack >= -1e-9);
    Ok(())
}

fn mc_sim(c: &mut Checks) -> ssop_core::Result<()> {
    const M: &str = "mc_sim";
    let cfg = ArrayConfig::default();
    let ray = SystemParams::default().with_k(RicianK::Finite(0.0));
    let x = ray.eve_density * PI * c0(&ray)?;
    let want = 1.0 - 1.0 / (1.0 + x);
    let mc = McConfig {
        n_fading_draws: 20_000,
        root_seed: 1,
        ..McConfig::default()
    };
    let est = estimate_ssop_mean(&cfg, &ray, &mc)?;
    c.holds(M, "rao_blackwell_covers_rayleigh", est.p_hat, want, est.contains(want));
    c.holds(M, "reproducible", est.p_hat, est.p_hat, estimate_ssop_mean(&cfg, &ray, &mc)? == est);

    let det = SystemParams::default();
    let area = er_area(&cfg, &det, FadingDraw::ZERO, &QuadratureSpec::default())?;
    let want = ssop_instant(area, det.eve_density)?;
    let mc = McConfig {
        n_fading_draws: 1,
        n_ppp_trials_per_draw: 100_000,
        root_seed: 1,
        ..McConfig::default()
    };
    let est = estimate_ssop_fixed_fading(FadingDraw::ZERO, &cfg, &det, &mc)?;
    c.holds(M, "ppp_covers_void_probability", est.p_hat, want, est.contains(want));
    Ok(())
}
