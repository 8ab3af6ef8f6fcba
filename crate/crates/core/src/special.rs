//! Bessel J0 and the quadrature rules behind every analytic formula.
//!
//! Three rules are provided:
//!
//! * a uniform periodic (trapezoid) rule for integrands over `[0, 2π)`,
//! * a tensor-product Gauss–Hermite rule for expectations over two
//!   independent `N(0, 1/2)` variables,
//! * a double-exponential rule for expectations over `Exp(1)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};

/// Node counts and tolerance for the angular and Gaussian integrations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Uniform samples on `[0, 2π)`.
    pub angular_nodes: usize,
    /// Gauss–Hermite nodes per Gaussian axis.
    pub hermite_nodes: usize,
    /// Target absolute error for refinement checks.
    pub abs_tol: f64,
}

impl QuadratureSpec {
    pub const DEFAULT_ANGULAR_NODES: usize = 2048;
    pub const DEFAULT_HERMITE_NODES: usize = 64;
    pub const DEFAULT_ABS_TOL: f64 = 1e-9;

    pub fn new(angular_nodes: usize, hermite_nodes: usize, abs_tol: f64) -> Result<Self> {
        let spec = QuadratureSpec {
            angular_nodes,
            hermite_nodes,
            abs_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.angular_nodes < 16 || self.angular_nodes % 2 != 0 {
            return Err(Error::argument(
                "angular_nodes",
                format!("must be even and >= 16, got {}", self.angular_nodes),
            ));
        }
        if self.hermite_nodes < 8 {
            return Err(Error::argument(
                "hermite_nodes",
                format!("must be >= 8, got {}", self.hermite_nodes),
            ));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::argument(
                "abs_tol",
                format!("must be finite and >= 0, got {}", self.abs_tol),
            ));
        }
        Ok(())
    }

    /// The same spec with twice as many angular nodes.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            angular_nodes: self.angular_nodes * 2,
            ..*self
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            angular_nodes: Self::DEFAULT_ANGULAR_NODES,
            hermite_nodes: Self::DEFAULT_HERMITE_NODES,
            abs_tol: Self::DEFAULT_ABS_TOL,
        }
    }
}

// Below SERIES_LIMIT the power series loses at most two digits to
// cancellation. Past HANKEL_LIMIT the optimally truncated Hankel expansion is
// accurate to about e^{-2x}. Between them, Miller's backward recurrence.
const SERIES_LIMIT: f64 = 8.0;
const HANKEL_LIMIT: f64 = 25.0;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            func: "bessel_j0",
            detail: format!("non-finite argument {x}"),
        });
    }
    Ok(j0(x))
}

/// Unchecked J0 for internal callers whose arguments are finite by construction.
pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        j0_series(ax)
    } else if ax < HANKEL_LIMIT {
        j0_miller(ax)
    } else {
        j0_hankel(ax)
    }
}

// Recur J_{k-1} = (2k/x) J_k - J_{k+1} downward from an arbitrary seed and
// normalize with J_0 + 2 Σ J_{2k} = 1.
fn j0_miller(x: f64) -> f64 {
    let start = 2 * ((x + 20.0 + 4.0 * x.sqrt()) as usize / 2 + 1);
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds the unnormalized J_{k-1}.
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    cur / (norm + cur)
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..64 {
        let m = m as f64;
        term *= q / (m * m);
        sum += term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    sum
}

fn j0_hankel(x: f64) -> f64 {
    // a_k = prod_{j<=k} -(2j-1)^2 / (8 j x); P takes the even terms with
    // alternating sign, Q the odd ones. Stop before the terms start growing.
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 0..64usize {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= -(odd * odd) / (8.0 * k as f64 * x);
        }
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Uniform-grid rule for `∫₀^{2π} f(θ) dθ`.
///
/// Exact for trigonometric polynomials of degree below `angular_nodes / 2`.
pub fn integrate_periodic<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    spec.validate()?;
    let n = spec.angular_nodes;
    let h = TAU / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let theta = k as f64 * h;
        let v = f(theta);
        if !v.is_finite() {
            return Err(Error::numerical(
                "integrate_periodic",
                format!("integrand is {v} at theta = {theta}"),
            ));
        }
        sum += v;
    }
    Ok(sum * h)
}

/// Gauss–Hermite nodes and weights for the weight `e^{-x²}/√π`.
///
/// Weights sum to one, so the rule computes expectations over `N(0, 1/2)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("hermite_nodes", "must be positive"));
        }
        let (nodes, weights) = hermite_rule(n);
        Ok(GaussHermite { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Orthonormal Hermite recurrence at `z`: returns `(p_n(z), p_n'(z))`.
fn hermite_eval(n: usize, z: f64) -> (f64, f64) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    let mut p1 = PIM4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

// Newton iteration on the orthonormal Hermite recurrence, starting from the
// usual asymptotic guesses. Roots already found are deflated out so a poor
// guess cannot fall back onto a previous root.
fn hermite_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let weight = |dp: f64| 2.0 / (dp * dp) / PI.sqrt();
    let odd = n % 2 == 1;
    let mut z = 0.0_f64;
    for i in 0..n / 2 {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        for _ in 0..200 {
            let (p, dp) = hermite_eval(n, z);
            // Roots come in ± pairs, plus a root at zero for odd n.
            let mut shift: f64 = x[..i].iter().map(|&r| 1.0 / (z - r) + 1.0 / (z + r)).sum();
            if odd {
                shift += 1.0 / z;
            }
            let z1 = z;
            z = z1 - p / (dp - p * shift);
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        let wi = weight(hermite_eval(n, z).1);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if odd {
        x[n / 2] = 0.0;
        w[n / 2] = weight(hermite_eval(n, 0.0).1);
    }
    // Deflation can return roots out of order; sort ascending and remove
    // residual normalisation drift.
    let mut pairs: Vec<(f64, f64)> = x.into_iter().zip(w).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(x, w)| (x, w / total)).unzip()
}

/// Tensor-product Gauss–Hermite estimate of `∬ g(x, y) e^{-(x²+y²)}/π dx dy`.
pub fn gauss_hermite_2d<G>(mut g: G, spec: &QuadratureSpec) -> Result<f64>
where
    G: FnMut(f64, f64) -> f64,
{
    spec.validate()?;
    let rule = GaussHermite::new(spec.hermite_nodes)?;
    let mut sum = 0.0;
    for (&x, &wx) in rule.nodes().iter().zip(rule.weights()) {
        let mut row = 0.0;
        for (&y, &wy) in rule.nodes().iter().zip(rule.weights()) {
            let v = g(x, y);
            if !v.is_finite() {
                return Err(Error::numerical(
                    "gauss_hermite_2d",
                    format!("integrand is {v} at node ({x}, {y})"),
                ));
            }
            row += wy * v;
        }
        sum += wx * row;
    }
    Ok(sum)
}

/// Double-exponential (exp-sinh) rule for `∫₀^∞ f(t) dt`.
///
/// Tolerates integrable algebraic behaviour at `t = 0`, such as `t^{1/3}`.
/// The integrand must decay at infinity; non-finite values are reported.
pub fn integrate_half_line<F>(mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    const STEP: f64 = 1.0 / 64.0;
    const HALF_WIDTH: usize = 288; // s in [-4.5, 4.5]
    let mut sum = 0.0;
    for k in 0..=2 * HALF_WIDTH {
        let s = (k as f64 - HALF_WIDTH as f64) * STEP;
        let t = (FRAC_PI_2 * s.sinh()).exp();
        let jacobian = FRAC_PI_2 * s.cosh() * t;
        if t == 0.0 || !jacobian.is_finite() {
            continue;
        }
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::numerical(
                "integrate_half_line",
                format!("integrand is {v} at t = {t}"),
            ));
        }
        if v != 0.0 {
            sum += v * jacobian;
        }
    }
    Ok(sum * STEP)
}
