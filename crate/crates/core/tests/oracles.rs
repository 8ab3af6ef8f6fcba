//! Independent reference computations checked against the library.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use ssop_core::{
    bessel_j0, gauss_hermite_2d, pattern_area_exact, pattern_area_numeric, ArrayConfig,
    GaussHermite, QuadratureSpec,
};

const FRAC_BITS: u32 = 320;

/// `J₀(p/q)` from the power series in exact fixed-point arithmetic.
fn j0_series_fixed(p: u64, q: u64) -> f64 {
    let one = BigInt::from(1) << FRAC_BITS;
    // term_k = term_{k-1} · (x²/4) / k², x²/4 = p² / (4 q²)
    let num = BigInt::from(p) * BigInt::from(p);
    let den = BigInt::from(4) * BigInt::from(q) * BigInt::from(q);
    let mut term = one.clone();
    let mut sum = one;
    let mut k: u64 = 0;
    loop {
        k += 1;
        term = -(term * &num) / (&den * BigInt::from(k * k));
        if term.is_zero() {
            break;
        }
        sum += &term;
        if term.abs() < BigInt::from(1) << 8 && k > 10 {
            break;
        }
    }
    let shifted: BigInt = sum >> (FRAC_BITS - 62);
    shifted.to_f64().unwrap() / 2f64.powi(62)
}

#[test]
fn j0_matches_exact_series_on_grid() {
    // x_i = 30 i / 2000 = 3 i / 200
    let mut worst = 0.0f64;
    for i in 0..=2000u64 {
        let x = 3.0 * i as f64 / 200.0;
        let want = j0_series_fixed(3 * i, 200);
        let got = bessel_j0(x).unwrap();
        worst = worst.max((got - want).abs());
    }
    assert!(worst <= 1e-8, "max error {worst:e}");
}

#[test]
fn series_oracle_sanity() {
    assert_eq!(j0_series_fixed(0, 1), 1.0);
    // J₀(1) = 0.765197686557966551...
    assert!((j0_series_fixed(1, 1) - 0.765_197_686_557_966_6).abs() < 1e-15);
}

/// `J₀(x) = (1/π) ∫₀^π cos(x sin τ) dτ` by composite Simpson.
fn j0_integral(x: f64) -> f64 {
    let n = 20_000;
    let h = PI / n as f64;
    let f = |t: f64| (x * t.sin()).cos();
    let mut s = f(0.0) + f(PI);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(k as f64 * h);
    }
    s * h / 3.0 / PI
}

#[test]
fn j0_matches_integral_representation() {
    for x in [0.5, PI, 7.3, 2.0 * PI * 5.0, 41.0] {
        let got = bessel_j0(x).unwrap();
        let want = j0_integral(x);
        assert!((got - want).abs() < 1e-6, "x={x}: {got} vs {want}");
    }
}

#[test]
fn hermite_eight_nodes_exact_through_degree_fifteen() {
    let rule = GaussHermite::new(8).unwrap();
    // E[X^{2m}] for X ~ N(0, 1/2) is (2m-1)!! / 2^m.
    for deg in 0..=15 {
        let got: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(x, w)| w * x.powi(deg))
            .sum();
        let want = if deg % 2 == 1 {
            0.0
        } else {
            let m = deg / 2;
            let dfact: f64 = (1..=m).map(|j| (2 * j - 1) as f64).product();
            dfact / 2f64.powi(m)
        };
        let scale = want.abs().max(1.0);
        assert!((got - want).abs() / scale < 1e-10, "degree {deg}: {got} vs {want}");
    }
}

#[test]
fn hermite_2d_polynomial_moments() {
    let spec = QuadratureSpec::new(16, 8, 1e-9).unwrap();
    let v = gauss_hermite_2d(|x, y| x * x * y * y + 3.0 * x.powi(4) - y, &spec).unwrap();
    // 1/4 + 3·3/4
    assert!((v - 2.5).abs() < 1e-12);
}

#[test]
fn pattern_area_numeric_agrees_with_series() {
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for n in 1..=16 {
        for deg in (0..=90).step_by(15) {
            for spacing in [0.25, 0.5, 1.0] {
                let cfg = ArrayConfig::from_degrees(n, spacing, deg as f64).unwrap();
                let d = pattern_area_numeric(&cfg, &spec).unwrap() - pattern_area_exact(&cfg);
                worst = worst.max(d.abs());
            }
        }
    }
    assert!(worst <= 1e-6, "max deviation {worst:e}");
}

#[test]
fn pattern_area_direct_sum_oracle() {
    // |G|² = (1/N) Σ_m Σ_l cos((m - l) ψ); integrate each cosine exactly:
    // ∫ cos(n k Δd (sin θ_B - sin θ)) dθ = 2π J₀(n k Δd) cos(n k Δd sin θ_B).
    for (n, spacing, deg) in [(5usize, 0.3, 20.0), (8, 0.5, 48.35), (11, 0.9, 71.0)] {
        let cfg = ArrayConfig::from_degrees(n, spacing, deg).unwrap();
        let kd = 2.0 * PI * spacing;
        let sb = deg.to_radians().sin();
        let mut total = 0.0;
        for m in 0..n {
            for l in 0..n {
                let d = m as f64 - l as f64;
                total += 2.0 * PI * j0_integral(d * kd) * (d * kd * sb).cos();
            }
        }
        total /= n as f64;
        assert!((pattern_area_exact(&cfg) - total).abs() < 1e-6);
    }
}
